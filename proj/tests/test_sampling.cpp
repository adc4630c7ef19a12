#include <cmath>
#include <gtest/gtest.h>

#include <cstdlib>

#include "symphonic/errors.hpp"
#include "symphonic/sampling.hpp"

using namespace symphonic;

TEST(Sampling, DeterministicAndInsideMargin) {
  const Box box({{0.0, 1.0}, {-2.0, 2.0}, {5.0, 6.0}});
  const auto a = sample_box(box, 100, 42);
  const auto b = sample_box(box, 100, 42);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), 100u);
  for (const auto& x : a) {
    ASSERT_EQ(x.size(), 3u);
    EXPECT_GE(x[0], 0.1);
    EXPECT_LE(x[0], 0.9);
    EXPECT_GE(x[1], -1.6);
    EXPECT_LE(x[1], 1.6);
    EXPECT_GE(x[2], 5.1);
    EXPECT_LE(x[2], 5.9);
  }
  EXPECT_NE(sample_box(box, 100, 43), a);
}

TEST(Sampling, LowDiscrepancyCoversTheBox) {
  const auto pts = sample_box(Box::cube(2, 0.0, 1.0), 256, 1);
  int counts[4] = {0, 0, 0, 0};
  for (const auto& x : pts) counts[(x[0] > 0.5 ? 1 : 0) + (x[1] > 0.5 ? 2 : 0)]++;
  for (int c : counts) EXPECT_NEAR(c, 64, 12);
}

TEST(Sampling, Errors) {
  EXPECT_THROW(sample_box(Box::unbounded(2), 10, 0), ArgumentError);
  EXPECT_THROW(sample_box(Box::cube(13, 0.0, 1.0), 10, 0), ArgumentError);
}

TEST(Parallel, ResultsIndependentOfWorkerCount) {
  std::vector<double> serial(1000), threaded(1000);
  ::setenv("SYMPHONIC_THREADS", "1", 1);
  parallel_for(serial.size(), [&](std::size_t i) { serial[i] = std::sin(double(i)); });
  ::setenv("SYMPHONIC_THREADS", "4", 1);
  EXPECT_EQ(worker_count(), 4u);
  parallel_for(threaded.size(), [&](std::size_t i) { threaded[i] = std::sin(double(i)); });
  ::unsetenv("SYMPHONIC_THREADS");
  EXPECT_EQ(serial, threaded);
}

TEST(Parallel, LowestIndexErrorWins) {
  ::setenv("SYMPHONIC_THREADS", "4", 1);
  try {
    parallel_for(100, [](std::size_t i) {
      if (i == 17 || i == 63) throw ArgumentError("bad " + std::to_string(i));
    });
    FAIL() << "expected an error";
  } catch (const ArgumentError& e) {
    EXPECT_STREQ(e.what(), "bad 17");
  }
  ::unsetenv("SYMPHONIC_THREADS");
}
