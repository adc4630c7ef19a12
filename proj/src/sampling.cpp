#include "symphonic/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>

#include "symphonic/errors.hpp"

namespace symphonic {

namespace {

constexpr unsigned primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double radical_inverse(std::size_t index, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

} // namespace

PointSet sample_box(const Box& box, std::size_t count, std::uint64_t seed, double margin) {
  const std::size_t dim = box.dim();
  if (dim > std::size(primes)) throw ArgumentError("sampling supports at most 12 dimensions");
  if (!(margin >= 0.0 && margin < 0.5)) throw ArgumentError("sampling margin must lie in [0, 0.5)");
  for (std::size_t k = 0; k < dim; ++k)
    if (!box[k].bounded()) throw ArgumentError("cannot sample an unbounded box " + box.describe());

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shift(dim);
  for (auto& s : shift) s = unit(rng);

  PointSet points(count, std::vector<double>(dim));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t k = 0; k < dim; ++k) {
      double t = radical_inverse(i + 1, primes[k]) + shift[k];
      t -= std::floor(t);
      const double lo = box[k].lo, hi = box[k].hi;
      points[i][k] = lo + (margin + (1.0 - 2.0 * margin) * t) * (hi - lo);
    }
  return points;
}

std::size_t worker_count() {
  if (const char* env = std::getenv("SYMPHONIC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(std::min(v, 256L));
  }
  return 1;
}

namespace detail {

void run_parallel(std::size_t n, void (*call)(void*, std::size_t), void* ctx) {
  std::vector<std::exception_ptr> errors(n);
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        call(ctx, i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            call(ctx, i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

} // namespace detail

} // namespace symphonic
