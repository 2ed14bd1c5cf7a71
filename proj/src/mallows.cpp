#include "ordersheaf/mallows.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ordersheaf/obstruction.hpp"
#include "ordersheaf/rng.hpp"

namespace ordersheaf {

namespace {

void require_dispersion(double phi) {
  if (!(phi > 0.0) || phi > 1.0) {
    throw Error(ErrorCode::Validation,
                "dispersion must lie in (0, 1], got " + std::to_string(phi));
  }
}

DiscreteOrderSheaf full_visibility_sheaf(InteractionGraph graph, int alternatives) {
  std::vector<AltId> all(static_cast<std::size_t>(alternatives));
  for (int a = 0; a < alternatives; ++a) all[static_cast<std::size_t>(a)] = a;
  std::vector<std::vector<AltId>> visibility(
      static_cast<std::size_t>(graph.vertex_count()), all);
  return DiscreteOrderSheaf(std::move(graph), std::move(visibility), alternatives);
}

/// Accumulates index observations and finishes into TrialStats.
struct StatsAccumulator {
  explicit StatsAccumulator(int max_index)
      : histogram(static_cast<std::size_t>(max_index) + 1, 0) {}

  void add(int index, bool consistent) {
    sum += index;
    sum_sq += static_cast<double>(index) * index;
    consistent_count += consistent ? 1 : 0;
    ++histogram[static_cast<std::size_t>(index)];
    ++count;
  }

  TrialStats finish(std::uint64_t seed) const {
    TrialStats stats;
    stats.n_trials = count;
    stats.seed = seed;
    stats.histogram = histogram;
    if (count > 0) {
      stats.mean_index = sum / count;
      stats.consistency_rate = static_cast<double>(consistent_count) / count;
    }
    if (count > 1) {
      double variance = (sum_sq - sum * sum / count) / (count - 1);
      stats.std_index = std::sqrt(std::max(0.0, variance));
    }
    return stats;
  }

  double sum = 0.0;
  double sum_sq = 0.0;
  int consistent_count = 0;
  int count = 0;
  std::vector<std::int64_t> histogram;
};

}  // namespace

std::map<TotalOrder, double> mallows_pmf(const MallowsParams& params) {
  require_dispersion(params.dispersion);
  const std::vector<AltId> domain = params.reference.domain();
  std::map<TotalOrder, double> pmf;
  double total = 0.0;
  for (TotalOrder& order : all_total_orders(domain)) {
    double weight = std::pow(params.dispersion, kendall_tau(order, params.reference));
    total += weight;
    pmf.emplace(std::move(order), weight);
  }
  for (auto& [order, probability] : pmf) probability /= total;
  return pmf;
}

TotalOrder sample_mallows(const MallowsParams& params, std::mt19937_64& rng) {
  require_dispersion(params.dispersion);
  const auto& reference = params.reference.ranking();
  std::vector<AltId> partial;
  partial.reserve(reference.size());
  std::vector<double> cumulative;
  cumulative.reserve(reference.size());
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (std::size_t i = 0; i < reference.size(); ++i) {
    // Offsets from the bottom j = 0..i carry weight dispersion^j.
    cumulative.clear();
    double total = 0.0;
    double weight = 1.0;
    for (std::size_t j = 0; j <= i; ++j) {
      total += weight;
      cumulative.push_back(total);
      weight *= params.dispersion;
    }
    double draw = unit(rng) * total;
    std::size_t offset =
        static_cast<std::size_t>(std::lower_bound(cumulative.begin(), cumulative.end(), draw) -
                                 cumulative.begin());
    offset = std::min(offset, i);  // guard the draw == total edge case
    partial.insert(partial.end() - static_cast<std::ptrdiff_t>(offset), reference[i]);
  }
  return TotalOrder(std::move(partial));
}

std::array<TotalOrder, 3> InterpolationSchedule::references_at(double t) const {
  constexpr AltId A = 0, B = 1, C = 2;
  TotalOrder consensus({A, B, C});
  TotalOrder second = t >= v2_switch ? consensus : TotalOrder({B, C, A});
  TotalOrder third = t >= v3_switch ? consensus : TotalOrder({C, A, B});
  return {std::move(consensus), std::move(second), std::move(third)};
}

std::vector<double> uniform_grid(int points) {
  if (points < 2) {
    throw Error(ErrorCode::Validation, "grid needs at least two points");
  }
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / (points - 1);
  }
  return grid;
}

std::vector<InterpolationPoint> run_interpolation(const InterpolationSchedule& schedule,
                                                  std::span<const double> grid, int n_trials,
                                                  std::uint64_t seed) {
  if (n_trials < 1) {
    throw Error(ErrorCode::Validation, "need at least one trial per grid point");
  }
  DiscreteOrderSheaf sheaf = full_visibility_sheaf(catalog_topology(TopologyName::K3), 3);
  const int edge_count = sheaf.graph().edge_count();

  std::vector<InterpolationPoint> curve;
  curve.reserve(grid.size());
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const double t = grid[gi];
    const double phi = schedule.dispersion_at(t);
    require_dispersion(phi);
    const std::array<TotalOrder, 3> references = schedule.references_at(t);

    StatsAccumulator acc(edge_count);
    for (int trial = 0; trial < n_trials; ++trial) {
      std::mt19937_64 rng = make_stream(seed, gi, static_cast<std::uint64_t>(trial));
      std::vector<TotalOrder> orders;
      orders.reserve(3);
      for (const TotalOrder& reference : references) {
        orders.push_back(sample_mallows({reference, phi}, rng));
      }
      ObstructionReport report = compute_obstruction(sheaf, PreferenceProfile(sheaf, orders));
      acc.add(report.incompatibility_index, report.h0_exists);
    }
    curve.push_back({t, acc.finish(seed)});
  }
  return curve;
}

std::vector<FamilyPoint> run_deterministic_family(std::span<const double> grid) {
  std::vector<FamilyPoint> curve;
  curve.reserve(grid.size());
  for (double t : grid) {
    CatalogInstance instance = catalog_example(ExampleName::DeterministicFamily, t);
    ObstructionReport report = compute_obstruction(instance.sheaf, instance.profile);
    curve.push_back({t, report.incompatibility_index});
  }
  return curve;
}

TrialStats run_uniform_experiment(const InteractionGraph& topology, int n_trials,
                                  std::uint64_t seed) {
  if (n_trials < 1) {
    throw Error(ErrorCode::Validation, "need at least one trial");
  }
  DiscreteOrderSheaf sheaf = full_visibility_sheaf(topology, 3);
  const std::vector<AltId> domain{0, 1, 2};
  const std::vector<TotalOrder> orders = all_total_orders(domain);
  const int vertices = sheaf.graph().vertex_count();

  StatsAccumulator acc(sheaf.graph().edge_count());
  for (int trial = 0; trial < n_trials; ++trial) {
    std::mt19937_64 rng = make_stream(seed, 0, static_cast<std::uint64_t>(trial));
    std::uniform_int_distribution<std::size_t> pick(0, orders.size() - 1);
    std::vector<TotalOrder> assignment;
    assignment.reserve(static_cast<std::size_t>(vertices));
    for (int v = 0; v < vertices; ++v) assignment.push_back(orders[pick(rng)]);
    ObstructionReport report = compute_obstruction(sheaf, PreferenceProfile(sheaf, assignment));
    acc.add(report.incompatibility_index, report.h0_exists);
  }
  return acc.finish(seed);
}

}  // namespace ordersheaf
