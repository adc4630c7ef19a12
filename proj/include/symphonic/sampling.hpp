#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <type_traits>
#include <vector>

#include "symphonic/box.hpp"

namespace symphonic {

using PointSet = std::vector<std::vector<double>>;

inline constexpr double default_margin = 0.1;
inline constexpr std::size_t default_sample_count = 100;

/// `count` points of a Halton sequence with a seeded Cranley-Patterson shift,
/// scaled into `box` shrunk by `margin` (a fraction of each side) at both ends.
/// The box must be bounded.
PointSet sample_box(const Box& box, std::size_t count, std::uint64_t seed,
                    double margin = default_margin);

/// Worker count: SYMPHONIC_THREADS when set to a positive integer, else 1.
std::size_t worker_count();

/// Runs fn(0..n-1) on worker_count() threads. Results must be written by
/// index; if any call throws, the exception of the lowest index is rethrown
/// after all workers finish.
template <class F>
void parallel_for(std::size_t n, F&& fn);

namespace detail {
void run_parallel(std::size_t n, void (*call)(void*, std::size_t), void* ctx);
}

template <class F>
void parallel_for(std::size_t n, F&& fn) {
  auto trampoline = [](void* ctx, std::size_t i) { (*static_cast<std::remove_reference_t<F>*>(ctx))(i); };
  detail::run_parallel(n, trampoline, static_cast<void*>(&fn));
}

} // namespace symphonic
