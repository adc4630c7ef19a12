#include "symphonic/zoo.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "symphonic/errors.hpp"

namespace symphonic::zoo {

namespace {

using Args = std::vector<double>;

/// Round-trip decimal text for a literal, parenthesised when negative.
std::string num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  return v < 0 ? "(" + s + ")" : s;
}

std::string arg_text(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string var(std::size_t k) { return "x" + std::to_string(k + 1); }

ManifoldPtr chart(std::string name, Box domain, const std::vector<std::vector<std::string>>& metric,
                  std::optional<Box> sampling = std::nullopt) {
  const std::size_t n = domain.dim();
  std::vector<std::vector<expr::Expression>> g(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) g[a].push_back(expr::parse(metric[a][b], n));
  return std::make_shared<const ChartManifold>(std::move(name), std::move(domain), std::move(g),
                                               std::move(sampling));
}

/// Conformally flat metric factor * identity.
std::vector<std::vector<std::string>> conformal_metric(std::size_t n, const std::string& factor) {
  std::vector<std::vector<std::string>> g(n, std::vector<std::string>(n, "0"));
  for (std::size_t a = 0; a < n; ++a) g[a][a] = factor;
  return g;
}

std::string squared_norm(std::size_t n) {
  std::string s;
  for (std::size_t k = 0; k < n; ++k) s += (k ? "+" : "") + var(k) + "^2";
  return s;
}

ManifoldPtr euclidean(std::size_t n, std::optional<Box> sampling = std::nullopt,
                      std::string name = {}) {
  if (n < 1 || n > 12) throw ArgumentError("euclidean dimension must be in 1..12");
  return std::make_shared<const ChartManifold>(
      ChartManifold::euclidean(n, name.empty() ? "euclidean:" + std::to_string(n) : std::move(name),
                               std::nullopt, std::move(sampling)));
}

const ManifoldPtr& real_line() {
  static const ManifoldPtr line = euclidean(1, std::nullopt, "R");
  return line;
}

/// Euclidean source whose samples land in (0.25, 1.25)^n after scaling by lambda.
ManifoldPtr scaled_source(std::size_t n, double lambda) {
  return euclidean(n, Box::cube(n, 0.25 / lambda, 1.25 / lambda));
}

const ManifoldPtr& sphere_north() {
  static const ManifoldPtr m =
      chart("sphere_north", Box({{0.05, std::numbers::pi - 0.05}, {-std::numbers::pi, std::numbers::pi}}),
            {{"1", "0"}, {"0", "sin(x1)^2"}}, Box({{0.4, 2.7}, {-3.0, 3.0}}));
  return m;
}

const ManifoldPtr& sphere_east() {
  static const ManifoldPtr m =
      chart("sphere_east", Box({{0.05, std::numbers::pi - 0.05}, {-std::numbers::pi, std::numbers::pi}}),
            {{"1", "0"}, {"0", "sin(x1)^2"}}, Box({{0.5, 1.2}, {0.3, 1.2}}));
  return m;
}

const ManifoldPtr& sphere_north_overlap() {
  static const ManifoldPtr m = std::make_shared<const ChartManifold>(
      sphere_north()->restricted(Box::cube(2, 0.3, 1.2), "sphere_north_overlap"));
  return m;
}

const ManifoldPtr& sphere_east_overlap() {
  static const ManifoldPtr m = std::make_shared<const ChartManifold>(
      sphere_east()->restricted(Box({{0.5, 1.2}, {0.3, 1.2}}), "sphere_east_overlap"));
  return m;
}

const ManifoldPtr& s3_stereo() {
  static const ManifoldPtr m = chart("s3_stereo", Box::unbounded(3),
                                     conformal_metric(3, "4/(1+" + squared_norm(3) + ")^2"),
                                     Box::cube(3, 0.1, 0.6));
  return m;
}

const ManifoldPtr& s2_stereo() {
  static const ManifoldPtr m = chart("s2_stereo", Box::unbounded(2),
                                     conformal_metric(2, "4/(1+" + squared_norm(2) + ")^2"));
  return m;
}

const ManifoldPtr& poincare_disk() {
  static const ManifoldPtr m = chart("poincare_disk", Box::cube(2, -0.7, 0.7),
                                     conformal_metric(2, "4/(1-" + squared_norm(2) + ")^2"));
  return m;
}

const ManifoldPtr& s1() {
  static const ManifoldPtr m = chart("s1", Box({{-3.0, 3.0}}), {{"1"}});
  return m;
}

Tag tg() { return {TagKind::totally_geodesic, std::nullopt}; }
Tag not_tg() { return {TagKind::not_totally_geodesic, std::nullopt}; }
Tag hc(std::optional<double> l = std::nullopt) { return {TagKind::horizontally_conformal, l}; }
Tag conf(std::optional<double> l = std::nullopt) { return {TagKind::conformal, l}; }
Tag iso() { return {TagKind::isometry, std::nullopt}; }
Tag psym(double p) { return {TagKind::p_symphonic, p}; }
Tag not_psym(double p) { return {TagKind::not_p_symphonic, p}; }

ZooEntry map_entry(std::string id, std::string description, MapPtr map, std::vector<Tag> tags,
                   EntryKind kind = EntryKind::map) {
  return {std::move(id), kind, std::move(description), std::move(tags), nullptr, std::move(map)};
}

ZooEntry manifold_entry(std::string id, std::string description, ManifoldPtr m) {
  return {std::move(id), EntryKind::manifold, std::move(description), {}, std::move(m), nullptr};
}

// --- builders ----------------------------------------------------------------

std::size_t dim_arg(const Args& a, std::size_t i, std::size_t fallback) {
  if (a.size() <= i) return fallback;
  const double v = a[i];
  if (v != std::floor(v) || v < 1 || v > 12) throw ArgumentError("dimension argument must be an integer in 1..12");
  return static_cast<std::size_t>(v);
}

double positive(double v, const char* what) {
  if (!(v > 0.0)) throw ArgumentError(std::string(what) + " must be positive");
  return v;
}

ZooEntry build_dilation(const Args& a) {
  const double lambda = positive(a.at(0), "dilation factor");
  const std::size_t n = dim_arg(a, 1, 2);
  std::vector<std::string> comps;
  for (std::size_t k = 0; k < n; ++k) comps.push_back(num(lambda) + "*" + var(k));
  const std::string id = "dilation:" + arg_text(lambda) + (n != 2 ? "," + std::to_string(n) : "");
  auto m = make_map(id, scaled_source(n, lambda), euclidean(n), comps);
  std::vector<Tag> tags{tg(), hc(lambda), conf(lambda)};
  if (lambda == 1.0) tags.push_back(iso());
  return map_entry(id, "x -> lambda x on R^n", m, tags);
}

ZooEntry build_identity(const Args& a) {
  const std::size_t n = dim_arg(a, 0, 2);
  std::vector<std::string> comps;
  for (std::size_t k = 0; k < n; ++k) comps.push_back(var(k));
  const std::string id = "identity:" + std::to_string(n);
  return map_entry(id, "identity of R^n", make_map(id, euclidean(n), euclidean(n), comps),
                   {tg(), hc(1.0), conf(1.0), iso()});
}

ZooEntry build_scaled_projection(const Args& a) {
  const double c = positive(a.empty() ? 1.5 : a[0], "projection scale");
  const std::string id = "scaled_projection:" + arg_text(c);
  auto m = make_map(id, scaled_source(3, c), euclidean(2), {num(c) + "*x1", num(c) + "*x2"});
  return map_entry(id, "(x1, x2, x3) -> c (x1, x2)", m, {tg(), hc(c)});
}

ZooEntry build_rotation(const Args& a) {
  const double t = a.empty() ? 0.7 : a[0];
  const double c = std::cos(t), s = std::sin(t);
  const std::string id = "rotation:" + arg_text(t);
  auto m = make_map(id, euclidean(2), euclidean(2),
                    {num(c) + "*x1-" + num(s) + "*x2", num(s) + "*x1+" + num(c) + "*x2"});
  return map_entry(id, "rotation of R^2 by theta", m, {tg(), hc(1.0), conf(1.0), iso()});
}

ZooEntry build_scaled_rotation(const Args& a) {
  const double k = positive(a.empty() ? 1.3 : a[0], "rotation scale");
  const double t = a.size() > 1 ? a[1] : 0.7;
  const double c = k * std::cos(t), s = k * std::sin(t);
  const std::string id = "scaled_rotation:" + arg_text(k) + (a.size() > 1 ? "," + arg_text(t) : "");
  auto m = make_map(id, scaled_source(2, k), euclidean(2),
                    {num(c) + "*x1-" + num(s) + "*x2", num(s) + "*x1+" + num(c) + "*x2"});
  return map_entry(id, "c times a rotation of R^2", m, {tg(), hc(k), conf(k)});
}

ZooEntry build_hopf(const Args&) {
  const std::string s = "(x1^2+x2^2+x3^2-1)";
  const std::string d = "(4*x3^2+" + s + "^2)";
  auto m = make_map("hopf", s3_stereo(), s2_stereo(),
                    {"(4*x1*x3+2*x2*" + s + ")/" + d, "(4*x2*x3-2*x1*" + s + ")/" + d});
  return map_entry("hopf", "Hopf fibration S^3 -> S^2 in stereographic charts", m,
                   {hc(2.0), not_tg()});
}

ZooEntry build_stereographic(const Args&) {
  auto m = make_map("stereographic", sphere_north(), euclidean(2),
                    {"sin(x1)/(1-cos(x1))*cos(x2)", "sin(x1)/(1-cos(x1))*sin(x2)"});
  return map_entry("stereographic", "stereographic projection of the sphere chart to R^2", m,
                   {hc(), conf(), not_tg()});
}

ZooEntry build_equator(const Args&) {
  auto m = make_map("equator", s1(), sphere_north(), {"pi/2", "x1"});
  return map_entry("equator", "great circle S^1 -> S^2", m, {tg()});
}

ZooEntry build_cubic_warp(const Args&) {
  auto m = make_map("cubic_warp", euclidean(2), euclidean(2), {"x1", "x2^3"});
  return map_entry("cubic_warp", "(x1, x2) -> (x1, x2^3)", m,
                   {not_tg(), {TagKind::not_horizontally_conformal, std::nullopt}});
}

ZooEntry build_sphere_transition(const Args&) {
  auto m = make_map("sphere_transition", sphere_north_overlap(), sphere_east(),
                    {"atan2(sqrt((sin(x1)*sin(x2))^2+cos(x1)^2), sin(x1)*cos(x2))",
                     "atan2(cos(x1), sin(x1)*sin(x2))"});
  return map_entry("sphere_transition", "change of chart north -> east on the sphere", m,
                   {tg(), hc(1.0), conf(1.0), iso()});
}

ZooEntry build_sphere_transition_inverse(const Args&) {
  auto m = make_map("sphere_transition_inverse", sphere_east_overlap(), sphere_north(),
                    {"atan2(sqrt(cos(x1)^2+(sin(x1)*cos(x2))^2), sin(x1)*sin(x2))",
                     "atan2(sin(x1)*cos(x2), cos(x1))"});
  return map_entry("sphere_transition_inverse", "change of chart east -> north on the sphere", m,
                   {tg(), hc(1.0), conf(1.0), iso()});
}

ZooEntry test_map(const std::string& id, const std::string& description, std::vector<std::string> comps,
                  std::vector<Tag> tags = {}) {
  return map_entry(id, description, make_map(id, euclidean(2), euclidean(2), comps), std::move(tags));
}

ZooEntry build_linear(const Args& a) {
  const std::size_t n = dim_arg(a, 0, 2);
  std::string e;
  for (std::size_t k = 0; k < n; ++k) e += (k ? "+" : "") + std::to_string(k + 1) + "*" + var(k);
  const std::string id = "linear:" + std::to_string(n);
  return map_entry(id, "sum_k k x_k", make_map(id, euclidean(n), real_line(), {e}),
                   {tg(), psym(2.0), psym(3.0)}, EntryKind::field);
}

ZooEntry build_coordinate(const Args& a) {
  const std::size_t k = dim_arg(a, 0, 1);
  const std::size_t n = dim_arg(a, 1, std::max<std::size_t>(k, 2));
  if (k > n) throw ArgumentError("coordinate index exceeds dimension");
  const std::string id = "coordinate:" + std::to_string(k) + "," + std::to_string(n);
  return map_entry(id, "x_k on R^n", make_map(id, euclidean(n), real_line(), {var(k - 1)}),
                   {tg(), psym(2.0), psym(3.0)}, EntryKind::field);
}

ZooEntry build_radial(const Args& a) {
  const double p = a.empty() ? 2.0 : a[0];
  if (!(p >= 1.0)) throw ArgumentError("radial_power: p must be >= 1");
  const std::size_t n = dim_arg(a, 1, 3);
  const double exponent = (2.0 * p - static_cast<double>(n)) / (2.0 * p - 1.0);
  const std::string id = "radial_power:" + arg_text(p) + "," + std::to_string(n);
  auto source = std::make_shared<const ChartManifold>(
      ChartManifold::euclidean(n, "R" + std::to_string(n) + "_off_origin", Box::cube(n, 0.2, 1.2)));
  auto m = make_map(id, source, real_line(), {"(" + squared_norm(n) + ")^(" + num(exponent / 2.0) + ")"});
  return map_entry(id, "|x|^a with a = (2p-n)/(2p-1), away from the origin", m, {psym(p)},
                   EntryKind::field);
}

ZooEntry build_quadratic(const Args& a) {
  const std::size_t n = dim_arg(a, 0, 2);
  const std::string id = "quadratic:" + std::to_string(n);
  return map_entry(id, "convex quadratic x1^2", make_map(id, euclidean(n), real_line(), {"x1^2"}),
                   {not_tg(), not_psym(2.0)}, EntryKind::field);
}

using Builder = std::function<ZooEntry(const Args&)>;

const std::map<std::string, Builder>& map_builders() {
  static const std::map<std::string, Builder> b{
      {"dilation", build_dilation},
      {"identity", build_identity},
      {"scaled_projection", build_scaled_projection},
      {"rotation", build_rotation},
      {"scaled_rotation", build_scaled_rotation},
      {"hopf", build_hopf},
      {"stereographic", build_stereographic},
      {"equator", build_equator},
      {"cubic_warp", build_cubic_warp},
      {"sphere_transition", build_sphere_transition},
      {"sphere_transition_inverse", build_sphere_transition_inverse},
      {"f_quad", [](const Args&) { return test_map("f_quad", "(y1^2, y1 y2)", {"x1^2", "x1*x2"}); }},
      {"f_trig", [](const Args&) {
         return test_map("f_trig", "(sin y1 + y2, y1 cos y2)", {"sin(x1)+x2", "x1*cos(x2)"});
       }},
      {"f_cubic", [](const Args&) {
         return test_map("f_cubic", "(0.3 y1^3 - y2, 0.5 y1 y2^2)", {"0.3*x1^3-x2", "0.5*x1*x2^2"});
       }},
      {"f_exp", [](const Args&) {
         return test_map("f_exp", "exp(z/2) in real coordinates",
                         {"exp(x1/2)*cos(x2/2)", "exp(x1/2)*sin(x2/2)"}, {conf()});
       }},
      {"f_mixed", [](const Args&) {
         return test_map("f_mixed", "(y1 y2 + sin y2, y1^2 - y2^2/2 + y1)",
                         {"x1*x2+sin(x2)", "x1^2-0.5*x2^2+x1"});
       }},
      {"linear", build_linear},
      {"coordinate", build_coordinate},
      {"radial_power", build_radial},
      {"radial_2p_harmonic", build_radial},
      {"quadratic", build_quadratic},
  };
  return b;
}

std::pair<std::string, Args> split_id(const std::string& id) {
  const auto colon = id.find(':');
  std::string name = id.substr(0, colon);
  Args args;
  if (colon != std::string::npos) {
    const std::string rest = id.substr(colon + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      const auto comma = std::min(rest.find(',', pos), rest.size());
      const std::string tok = rest.substr(pos, comma - pos);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
        throw ArgumentError("zoo id '" + id + "': malformed argument '" + tok + "'");
      args.push_back(v);
      pos = comma + 1;
    }
  }
  return {name, args};
}

std::optional<ZooEntry> manifold_by_name(const std::string& name, const Args& args) {
  if (name == "euclidean") {
    const std::size_t n = dim_arg(args, 0, 2);
    return manifold_entry("euclidean:" + std::to_string(n), "flat R^n", euclidean(n));
  }
  static const std::map<std::string, std::pair<std::string, std::function<const ManifoldPtr&()>>> fixed{
      {"sphere_north", {"unit sphere, polar chart (theta, phi)", sphere_north}},
      {"sphere_east", {"unit sphere, chart with pole on the x axis", sphere_east}},
      {"sphere_north_overlap", {"polar chart restricted to the chart overlap", sphere_north_overlap}},
      {"sphere_east_overlap", {"second chart restricted to the chart overlap", sphere_east_overlap}},
      {"s3_stereo", {"unit S^3, stereographic chart", s3_stereo}},
      {"s2_stereo", {"unit S^2, stereographic chart", s2_stereo}},
      {"poincare_disk", {"hyperbolic plane, Poincare disk (box inside the disk)", poincare_disk}},
      {"s1", {"unit circle, angle chart", s1}},
  };
  auto it = fixed.find(name);
  if (it == fixed.end()) return std::nullopt;
  if (!args.empty()) throw ArgumentError("manifold '" + name + "' takes no arguments");
  return manifold_entry(name, it->second.first, it->second.second());
}

} // namespace

std::string Tag::to_string() const {
  static const std::map<TagKind, std::string> names{
      {TagKind::totally_geodesic, "totally_geodesic"},
      {TagKind::not_totally_geodesic, "not_totally_geodesic"},
      {TagKind::horizontally_conformal, "horizontally_conformal"},
      {TagKind::not_horizontally_conformal, "not_horizontally_conformal"},
      {TagKind::conformal, "conformal"},
      {TagKind::isometry, "isometry"},
      {TagKind::p_symphonic, "p_symphonic"},
      {TagKind::not_p_symphonic, "not_p_symphonic"},
  };
  std::string s = names.at(kind);
  if (value) s += "(" + arg_text(*value) + ")";
  else if (kind == TagKind::horizontally_conformal || kind == TagKind::conformal) s += "(pointwise)";
  return s;
}

const char* entry_kind_name(EntryKind kind) {
  switch (kind) {
  case EntryKind::manifold: return "manifold";
  case EntryKind::map: return "map";
  case EntryKind::field: return "field";
  }
  return "?";
}

namespace {

std::size_t max_args(const std::string& name) {
  static const std::map<std::string, std::size_t> counts{
      {"dilation", 2},     {"identity", 1},   {"scaled_projection", 1}, {"rotation", 1},
      {"scaled_rotation", 2}, {"linear", 1},  {"coordinate", 2},        {"radial_power", 2},
      {"radial_2p_harmonic", 2}, {"quadratic", 1},
  };
  auto it = counts.find(name);
  return it == counts.end() ? 0 : it->second;
}

ZooEntry resolve(const std::string& id) {
  const auto [name, args] = split_id(id);
  if (auto m = manifold_by_name(name, args)) return *m;
  const auto& builders = map_builders();
  auto it = builders.find(name);
  if (it == builders.end()) throw ArgumentError("unknown zoo id '" + id + "'");
  if (args.size() > max_args(name)) {
    throw ArgumentError("zoo id '" + id + "': '" + name + "' takes at most " +
                        std::to_string(max_args(name)) + " argument(s)");
  }
  try {
    return it->second(args);
  } catch (const std::out_of_range&) {
    throw ArgumentError("zoo id '" + id + "' is missing an argument");
  }
}

} // namespace

ZooEntry entry(const std::string& id) {
  try {
    return resolve(id);
  } catch (const ArgumentError& e) {
    if (std::string(e.what()).find("'" + id + "'") != std::string::npos) throw;
    throw ArgumentError("zoo id '" + id + "': " + e.what());
  }
}

ManifoldPtr manifold(const std::string& id) {
  auto e = entry(id);
  if (!e.manifold) throw ArgumentError("zoo id '" + id + "' is not a manifold");
  return e.manifold;
}

MapPtr map(const std::string& id) {
  auto e = entry(id);
  if (!e.map) throw ArgumentError("zoo id '" + id + "' is not a map or field");
  return e.map;
}

MapFamily family(const std::string& id) {
  const auto [name, args] = split_id(id);
  if (name == "dilation") {
    const std::size_t n = dim_arg(args, 0, 2);
    return [n](double l) { return build_dilation({l, static_cast<double>(n)}).map; };
  }
  if (name == "scaled_projection") {
    if (!args.empty()) throw ArgumentError("family 'scaled_projection' takes no arguments");
    return [](double l) { return build_scaled_projection({l}).map; };
  }
  if (name == "scaled_rotation") {
    const double t = args.empty() ? 0.7 : args[0];
    return [t](double l) { return build_scaled_rotation({l, t}).map; };
  }
  throw ArgumentError("unknown map family '" + id + "' (expected dilation, scaled_projection or scaled_rotation)");
}

std::vector<std::string> test_map_ids() { return {"f_quad", "f_trig", "f_cubic", "f_exp", "f_mixed"}; }

std::vector<ZooEntry> catalog() {
  const std::vector<std::string> ids{
      "euclidean:1", "euclidean:2", "euclidean:3", "euclidean:4", "sphere_north", "sphere_east",
      "sphere_north_overlap", "sphere_east_overlap", "s3_stereo", "s2_stereo", "poincare_disk", "s1",
      "dilation:1", "dilation:1.5", "dilation:2", "dilation:3", "dilation:2,3", "dilation:2,4",
      "identity:2", "identity:4", "scaled_projection:1.5", "rotation:0.7", "scaled_rotation:1.3",
      "hopf", "stereographic", "equator", "cubic_warp", "sphere_transition",
      "sphere_transition_inverse", "f_quad", "f_trig", "f_cubic", "f_exp", "f_mixed", "linear:2",
      "linear:3", "coordinate:1,3", "radial_power:2,3", "radial_power:3,3", "quadratic:2"};
  std::vector<ZooEntry> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(entry(id));
  return out;
}

} // namespace symphonic::zoo
