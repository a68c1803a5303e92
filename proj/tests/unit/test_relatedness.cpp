#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "doctest.h"
#include "oracle.hpp"
#include "sere/errors.hpp"
#include "sere/relatedness.hpp"

namespace {
#include "frozen_values.inc"

// Random valid tuple: 1 <= a, b < total, 0 <= both <= min(a, b).
struct TupleGen {
  explicit TupleGen(unsigned seed) : rng(seed) {}
  sere::HitCounts next(bool allow_zero_both = true) {
    std::uniform_int_distribution<int> exponent(1, 9);
    const std::uint64_t total = 2 + static_cast<std::uint64_t>(std::pow(10.0, exponent(rng)));
    std::uniform_int_distribution<std::uint64_t> count(1, total - 1);
    const auto a = count(rng);
    const auto b = count(rng);
    std::uniform_int_distribution<std::uint64_t> co(allow_zero_both ? 0 : 1, std::min(a, b));
    return {a, b, co(rng), total};
  }
  std::mt19937_64 rng;
};

}  // namespace

using namespace sere;

TEST_CASE("distance examples") {
  CHECK(wnd_distance(HitCounts(5, 5, 5, 100)) == 0.0);
  CHECK(std::isinf(wnd_distance(HitCounts(1000, 100, 0, 1000000))));
  const double d = wnd_distance(HitCounts(1000, 100, 50, 1000000));
  CHECK(d == doctest::Approx((3.0 - std::log10(50.0)) / 4.0).epsilon(1e-15));
  CHECK(std::abs(d - 0.325257) < 5e-7);
}

TEST_CASE("distance agrees with the frozen arbitrary-precision values") {
  for (const auto& c : kWndCases) {
    CAPTURE(c.a);
    CAPTURE(c.b);
    CAPTURE(c.both);
    CAPTURE(c.total);
    const double d = wnd_distance(HitCounts(c.a, c.b, c.both, c.total));
    if (c.distance == 0.0) {
      CHECK(d == 0.0);
    } else {
      CHECK(std::abs(d - c.distance) <= 1e-12 * std::abs(c.distance));
    }
  }
}

TEST_CASE("distance domain errors") {
  CHECK_THROWS_AS(wnd_distance(HitCounts(0, 5, 0, 100)), DomainError);
  CHECK_THROWS_AS(wnd_distance(HitCounts(5, 0, 0, 100)), DomainError);
  CHECK_THROWS_AS(wnd_distance(HitCounts(100, 100, 50, 100)), DomainError);
}

TEST_CASE("relatedness mapping examples") {
  CHECK(to_relatedness(0.0) == 1.0);
  CHECK(to_relatedness(std::numeric_limits<double>::infinity()) == 0.0);
  CHECK(to_relatedness(0.325257) == doctest::Approx(0.674743).epsilon(1e-12));
  CHECK(to_relatedness(1.0) == 0.0);
  CHECK(to_relatedness(7.5) == 0.0);
}

TEST_CASE("score examples") {
  const auto self = score(HitCounts(5, 5, 5, 100));
  CHECK(self.distance == 0.0);
  CHECK(self.relatedness == 1.0);
  CHECK(self.cooccurring);

  const auto none = score(HitCounts(10, 10, 0, 100));
  CHECK(none.infinite());
  CHECK(none.relatedness == 0.0);
  CHECK_FALSE(none.cooccurring);

  const auto mid = score(HitCounts(1000, 100, 50, 1000000));
  CHECK(std::abs(mid.distance - 0.325257) < 5e-7);
  CHECK(std::abs(mid.relatedness - 0.674743) < 5e-7);
  CHECK(mid.cooccurring);
}

TEST_CASE("distance agrees with the direct multiprecision formula on random tuples") {
  TupleGen gen(11);
  for (int i = 0; i < 1000; ++i) {
    const auto c = gen.next(false);
    const double mine = wnd_distance(c);
    const double ref = oracle::wnd_direct(c.a(), c.b(), c.both(), c.total());
    if (ref == 0.0) {
      CHECK(std::abs(mine) < 1e-15);
    } else {
      CHECK(std::abs(mine - ref) <= 1e-12 * std::abs(ref));
    }
  }
}

TEST_CASE("zero co-occurrence always scores zero") {
  TupleGen gen(12);
  for (int i = 0; i < 1000; ++i) {
    const auto c = gen.next();
    const HitCounts zero(c.a(), c.b(), 0, c.total());
    const auto s = score(zero);
    CHECK(s.relatedness == 0.0);
    CHECK_FALSE(s.cooccurring);
    CHECK(s.infinite());
  }
}

TEST_CASE("symmetry, bounds and the zero rule") {
  TupleGen gen(13);
  for (int i = 0; i < 10000; ++i) {
    const auto c = gen.next();
    const HitCounts swapped(c.b(), c.a(), c.both(), c.total());
    const auto s = score(c);
    const auto t = score(swapped);
    CHECK(s == t);
    CHECK(s.relatedness >= 0.0);
    CHECK(s.relatedness <= 1.0);
    CHECK((s.relatedness == 0.0) == (c.both() == 0 || s.distance >= 1.0));
  }
}

TEST_CASE("distance strictly decreases as co-occurrence grows") {
  TupleGen gen(14);
  for (int i = 0; i < 300; ++i) {
    const auto c = gen.next();
    const auto lo = std::min(c.a(), c.b());
    std::set<std::uint64_t> points{1, lo};
    std::uniform_int_distribution<std::uint64_t> pick(1, lo);
    while (points.size() < std::min<std::uint64_t>(lo, 40)) points.insert(pick(gen.rng));
    double previous = std::numeric_limits<double>::infinity();
    for (const auto both : points) {
      const double d = wnd_distance(HitCounts(c.a(), c.b(), both, c.total()));
      CHECK(d < previous);
      previous = d;
    }
  }
}

TEST_CASE("a term is at distance zero from itself") {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 1000; ++i) {
    std::uniform_int_distribution<std::uint64_t> total_dist(2, 10'000'000);
    const auto total = total_dist(rng);
    std::uniform_int_distribution<std::uint64_t> a_dist(1, total - 1);
    const auto a = a_dist(rng);
    const auto s = score(HitCounts(a, a, a, total));
    CHECK(s.distance == 0.0);
    CHECK(s.relatedness == 1.0);
  }
}
