#include <doctest.h>

#include <cmath>
#include <vector>

#include "pcrl/rng.hpp"

using namespace pcrl;

TEST_CASE("same seed reproduces the same sequence") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(42), d(43);
  bool differs = false;
  for (int i = 0; i < 10; ++i) differs = differs || (c.next_u64() != d.next_u64());
  CHECK(differs);
}

TEST_CASE("substreams are independent of each other") {
  Rng a = Rng::substream(7, Stream::Perturbation);
  Rng b = Rng::substream(7, Stream::RolloutPlus);
  CHECK(a.next_u64() != b.next_u64());

  // Same (master, stream, instance) always lands on the same state.
  Rng c = Rng::substream(7, Stream::Perturbation);
  Rng d = Rng::substream(7, Stream::Perturbation);
  for (int i = 0; i < 10; ++i) CHECK(c.next_u64() == d.next_u64());

  Rng e = Rng::substream(7, Stream::Perturbation, 1);
  Rng f = Rng::substream(7, Stream::Perturbation, 2);
  CHECK(e.next_u64() != f.next_u64());
}

TEST_CASE("uniform stays in [0,1) and has the right mean") {
  Rng rng(1);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  const double se = std::sqrt(1.0 / 12.0 / n);
  CHECK(std::abs(sum / n - 0.5) < 3 * se);
}

TEST_CASE("normal has unit variance and zero mean") {
  Rng rng(2);
  const int n = 100000;
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sumsq += x * x;
  }
  CHECK(std::abs(sum / n) < 3.0 / std::sqrt(double(n)));
  // var(x^2) = 2 for a standard normal
  CHECK(std::abs(sumsq / n - 1.0) < 3.0 * std::sqrt(2.0 / n));
}
