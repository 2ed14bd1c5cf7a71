#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "ordersheaf/error.hpp"
#include "ordersheaf/mallows.hpp"
#include "ordersheaf/order.hpp"
#include "ordersheaf/rng.hpp"
#include "support/generators.hpp"

using namespace ordersheaf;
using ordersheaf::testing::code_of;

namespace {

const TotalOrder kRef({0, 1, 2});

double tv_distance(const std::map<TotalOrder, double>& pmf,
                   const std::map<TotalOrder, std::int64_t>& counts, int n) {
  double tv = 0.0;
  for (const auto& [order, p] : pmf) {
    auto it = counts.find(order);
    const double empirical = it == counts.end() ? 0.0 : static_cast<double>(it->second) / n;
    tv += std::abs(p - empirical);
  }
  return tv / 2.0;
}

}  // namespace

TEST_CASE("dispersion must lie in (0, 1]") {
  CHECK(code_of([] { mallows_pmf({kRef, 0.0}); }) == ErrorCode::Validation);
  CHECK(code_of([] { mallows_pmf({kRef, -0.3}); }) == ErrorCode::Validation);
  CHECK(code_of([] { mallows_pmf({kRef, 1.5}); }) == ErrorCode::Validation);
  CHECK(code_of([] { mallows_pmf({kRef, 1.0}); }) == std::nullopt);
}

TEST_CASE("pmf normalizes to one across dispersions") {
  for (double phi : {0.05, 0.1, 0.3, 0.5, 0.8, 1.0}) {
    std::map<TotalOrder, double> pmf = mallows_pmf({kRef, phi});
    CHECK(pmf.size() == 6);
    double total = 0.0;
    for (const auto& [order, p] : pmf) total += p;
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
}

TEST_CASE("dispersion one is exactly uniform") {
  std::map<TotalOrder, double> pmf = mallows_pmf({kRef, 1.0});
  for (const auto& [order, p] : pmf) {
    CHECK(p == 1.0 / 6.0);  // exact: all weights are phi^d = 1
  }
}

TEST_CASE("pmf is proportional to dispersion to the distance") {
  for (double phi : {0.1, 0.5, 0.9}) {
    std::map<TotalOrder, double> pmf = mallows_pmf({kRef, phi});
    const double p_ref = pmf.at(kRef);
    for (const auto& [order, p] : pmf) {
      const double expected = p_ref * std::pow(phi, kendall_tau(order, kRef));
      CHECK(std::abs(p - expected) < 1e-12);
    }
  }
}

TEST_CASE("pmf golden values at dispersion one half") {
  // Weights by distance: 1, .5, .5, .25, .25, .125; normalizer 2.625.
  std::map<TotalOrder, double> pmf = mallows_pmf({kRef, 0.5});
  const double z = 2.625;
  CHECK(std::abs(pmf.at(TotalOrder({0, 1, 2})) - 1.0 / z) < 1e-12);
  CHECK(std::abs(pmf.at(TotalOrder({0, 2, 1})) - 0.5 / z) < 1e-12);
  CHECK(std::abs(pmf.at(TotalOrder({1, 0, 2})) - 0.5 / z) < 1e-12);
  CHECK(std::abs(pmf.at(TotalOrder({1, 2, 0})) - 0.25 / z) < 1e-12);
  CHECK(std::abs(pmf.at(TotalOrder({2, 0, 1})) - 0.25 / z) < 1e-12);
  CHECK(std::abs(pmf.at(TotalOrder({2, 1, 0})) - 0.125 / z) < 1e-12);
}

TEST_CASE("sampler matches the pmf in total variation") {
  const int n = 60000;
  for (double phi : {0.3, 0.5, 0.8, 1.0}) {
    std::map<TotalOrder, double> pmf = mallows_pmf({kRef, phi});
    std::mt19937_64 rng = make_stream(2024, 0, static_cast<std::uint64_t>(phi * 1000));
    std::map<TotalOrder, std::int64_t> counts;
    for (int i = 0; i < n; ++i) ++counts[sample_mallows({kRef, phi}, rng)];
    CHECK(tv_distance(pmf, counts, n) < 0.02);
  }
}

TEST_CASE("sampler handles larger references and singletons") {
  std::mt19937_64 rng = make_stream(9, 1, 2);
  const TotalOrder singleton({5});
  CHECK(sample_mallows({singleton, 0.5}, rng) == singleton);

  const TotalOrder five({4, 2, 0, 3, 1});
  for (int i = 0; i < 50; ++i) {
    TotalOrder sample = sample_mallows({five, 0.4}, rng);
    CHECK(sample.domain() == five.domain());
  }
}

TEST_CASE("sampling at tiny dispersion concentrates on the reference") {
  std::mt19937_64 rng = make_stream(77, 0, 0);
  int hits = 0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    if (sample_mallows({kRef, 0.01}, rng) == kRef) ++hits;
  }
  // P(reference) = 1/Z with Z ≈ 1.0203; expect ≈ 98% hits.
  CHECK(hits > n * 95 / 100);
}

TEST_CASE("interpolation schedule flips references at the configured switches") {
  InterpolationSchedule schedule;
  CHECK(schedule.dispersion_at(0.0) == doctest::Approx(0.8));
  CHECK(schedule.dispersion_at(1.0) == doctest::Approx(0.1));

  auto refs0 = schedule.references_at(0.0);
  CHECK(refs0[0] == TotalOrder({0, 1, 2}));
  CHECK(refs0[1] == TotalOrder({1, 2, 0}));
  CHECK(refs0[2] == TotalOrder({2, 0, 1}));

  auto refs_mid = schedule.references_at(0.5);  // switch is inclusive
  CHECK(refs_mid[1] == TotalOrder({0, 1, 2}));
  CHECK(refs_mid[2] == TotalOrder({2, 0, 1}));

  auto refs_late = schedule.references_at(0.75);
  CHECK(refs_late[1] == TotalOrder({0, 1, 2}));
  CHECK(refs_late[2] == TotalOrder({0, 1, 2}));

  auto refs_end = schedule.references_at(1.0);
  for (const TotalOrder& ref : refs_end) CHECK(ref == TotalOrder({0, 1, 2}));
}

TEST_CASE("uniform_grid spans the unit interval") {
  std::vector<double> grid = uniform_grid(5);
  REQUIRE(grid.size() == 5);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == 1.0);
  CHECK(grid[2] == 0.5);
  CHECK(code_of([] { uniform_grid(1); }) == ErrorCode::Validation);

  // The standard 301-point grid hits the family switch points exactly.
  std::vector<double> fine = uniform_grid(301);
  CHECK(fine[100] == 1.0 / 3.0);
  CHECK(fine[200] == 2.0 / 3.0);
}

TEST_CASE("deterministic family steps three two zero") {
  std::vector<double> grid = uniform_grid(301);
  std::vector<FamilyPoint> curve = run_deterministic_family(grid);
  REQUIRE(curve.size() == 301);
  for (const FamilyPoint& point : curve) {
    const int expected = point.t < 1.0 / 3.0 ? 3 : point.t < 2.0 / 3.0 ? 2 : 0;
    CHECK(point.incompatibility_index == expected);
  }
  CHECK(curve[99].incompatibility_index == 3);
  CHECK(curve[100].incompatibility_index == 2);   // switch lands exactly on the grid
  CHECK(curve[199].incompatibility_index == 2);
  CHECK(curve[200].incompatibility_index == 0);
}

TEST_CASE("interpolation run is reproducible and well-formed") {
  InterpolationSchedule schedule;
  std::vector<double> grid = uniform_grid(5);
  std::vector<InterpolationPoint> a = run_interpolation(schedule, grid, 300, 42);
  std::vector<InterpolationPoint> b = run_interpolation(schedule, grid, 300, 42);
  REQUIRE(a.size() == 5);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].t == b[i].t);
    CHECK(a[i].stats.mean_index == b[i].stats.mean_index);
    CHECK(a[i].stats.consistency_rate == b[i].stats.consistency_rate);
    CHECK(a[i].stats.histogram == b[i].stats.histogram);

    std::int64_t total = 0;
    for (std::int64_t count : a[i].stats.histogram) total += count;
    CHECK(total == 300);
    REQUIRE(a[i].stats.histogram.size() == 4);
    // On a triangle, two agreeing edges force the third: count one is impossible.
    CHECK(a[i].stats.histogram[1] == 0);
  }
  std::vector<InterpolationPoint> c = run_interpolation(schedule, grid, 300, 43);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].stats.mean_index != c[i].stats.mean_index) any_difference = true;
  }
  CHECK(any_difference);
}

TEST_CASE("uniform experiment on the triangle matches the independence law") {
  TrialStats stats = run_uniform_experiment(catalog_topology(TopologyName::K3), 30000, 11);
  // Independent uniform orders agree on an edge with probability 1/6; the
  // profile is consistent iff all voters drew the same order: (1/6)^2.
  CHECK(stats.consistency_rate > 0.0228);
  CHECK(stats.consistency_rate < 0.0328);
  CHECK(stats.mean_index == doctest::Approx(2.5).epsilon(0.02));
  REQUIRE(stats.histogram.size() == 4);
  CHECK(stats.histogram[1] == 0);

  TrialStats path = run_uniform_experiment(catalog_topology(TopologyName::P4), 60000, 12);
  // A path of three edges: consistency means three independent agreements.
  const double expected = 1.0 / (6.0 * 6.0 * 6.0);
  CHECK(path.consistency_rate > expected * 0.6);
  CHECK(path.consistency_rate < expected * 1.6);
}

TEST_CASE("uniform experiment is seed-reproducible") {
  TrialStats a = run_uniform_experiment(catalog_topology(TopologyName::C4), 2000, 5);
  TrialStats b = run_uniform_experiment(catalog_topology(TopologyName::C4), 2000, 5);
  CHECK(a.mean_index == b.mean_index);
  CHECK(a.histogram == b.histogram);
}
