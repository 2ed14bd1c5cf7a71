#include "ordersheaf/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "ordersheaf/obstruction.hpp"
#include "ordersheaf/rng.hpp"

namespace ordersheaf {

namespace {

using Clock = std::chrono::steady_clock;

/// Milliseconds for one execution of `op`, batching repetitions until the
/// measured span is long enough for the clock to resolve it cleanly.
template <typename Op>
double time_one_ms(Op&& op) {
  constexpr double kMinSpanMs = 0.5;
  int reps = 1;
  for (;;) {
    auto start = Clock::now();
    for (int r = 0; r < reps; ++r) op();
    double span_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    if (span_ms >= kMinSpanMs || reps >= (1 << 20)) return span_ms / reps;
    reps = span_ms <= 0.0 ? reps * 8 : std::max(reps * 2, static_cast<int>(reps * kMinSpanMs / span_ms) + 1);
  }
}

DurationStats summarize(std::vector<double> samples_ms) {
  DurationStats stats;
  stats.trials = static_cast<int>(samples_ms.size());
  if (samples_ms.empty()) return stats;
  std::sort(samples_ms.begin(), samples_ms.end());
  stats.min_ms = samples_ms.front();
  stats.max_ms = samples_ms.back();
  std::size_t mid = samples_ms.size() / 2;
  stats.median_ms = samples_ms.size() % 2 == 1
                        ? samples_ms[mid]
                        : 0.5 * (samples_ms[mid - 1] + samples_ms[mid]);
  double sum = 0.0;
  for (double s : samples_ms) sum += s;
  stats.mean_ms = sum / static_cast<double>(samples_ms.size());
  return stats;
}

std::vector<AltId> dense_alternatives(int count) {
  std::vector<AltId> ids(static_cast<std::size_t>(count));
  for (int a = 0; a < count; ++a) ids[static_cast<std::size_t>(a)] = a;
  return ids;
}

std::vector<TotalOrder> random_full_orders(int voters, const std::vector<AltId>& alphabet,
                                           std::mt19937_64& rng, BenchProfile profile_kind) {
  std::vector<TotalOrder> orders;
  orders.reserve(static_cast<std::size_t>(voters));
  std::vector<AltId> scratch = alphabet;
  std::shuffle(scratch.begin(), scratch.end(), rng);
  for (int k = 0; k < voters; ++k) {
    if (profile_kind == BenchProfile::UniformRandom && k > 0) {
      std::shuffle(scratch.begin(), scratch.end(), rng);
    }
    orders.emplace_back(scratch);
  }
  return orders;
}

double factorial_ratio(int hi, int lo) {
  double ratio = 1.0;
  for (int n = lo + 1; n <= hi; ++n) ratio *= n;
  return ratio;
}

BenchResult sweep_point(int parameter, int alternative_count, int voters, int trials,
                        std::uint64_t seed, std::uint64_t stream_tag,
                        BenchProfile profile_kind) {
  const std::vector<AltId> alphabet = dense_alternatives(alternative_count);
  const bool naive_measurable = alternative_count <= kNaiveMeasurableLimit;

  std::vector<double> dag_samples, naive_samples;
  std::vector<std::size_t> byte_samples;
  int conflicts = 0;
  for (int trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng = make_stream(seed, stream_tag, static_cast<std::uint64_t>(trial));
    const std::vector<TotalOrder> orders = random_full_orders(voters, alphabet, rng, profile_kind);

    bool cyclic = false;
    dag_samples.push_back(time_one_ms([&] {
      ConstraintDag dag = build_constraint_dag(orders);
      cyclic = detect_cycle(dag).has_value();
    }));
    ConstraintDag dag = build_constraint_dag(orders);
    byte_samples.push_back(dag.estimated_bytes());
    if (cyclic) ++conflicts;

    if (naive_measurable) {
      naive_samples.push_back(time_one_ms([&] { naive_stalk_oracle(orders, alphabet); }));
    }
  }

  BenchResult result;
  result.parameter = parameter;
  result.dag_time = summarize(std::move(dag_samples));
  result.conflict_rate = trials > 0 ? static_cast<double>(conflicts) / trials : 0.0;
  std::sort(byte_samples.begin(), byte_samples.end());
  if (!byte_samples.empty()) result.dag_bytes_median = byte_samples[byte_samples.size() / 2];
  if (naive_measurable) {
    result.naive_ms = summarize(std::move(naive_samples)).median_ms;
    result.naive_extrapolated = false;
  }
  if (result.dag_time.median_ms > 0.0 && result.naive_ms > 0.0) {
    result.speedup = result.naive_ms / result.dag_time.median_ms;
  }
  return result;
}

/// Fill in the factorial extrapolation for sizes past the measurable limit,
/// anchored at the largest measured size.
void extrapolate_naive(std::vector<BenchResult>& results,
                       const std::vector<int>& alternative_counts) {
  double anchor_ms = 0.0;
  int anchor_size = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (alternative_counts[i] <= kNaiveMeasurableLimit && alternative_counts[i] > anchor_size) {
      anchor_size = alternative_counts[i];
      anchor_ms = results[i].naive_ms;
    }
  }
  if (anchor_size == 0) return;  // nothing measured, nothing to extrapolate from
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (alternative_counts[i] <= kNaiveMeasurableLimit) continue;
    results[i].naive_ms = anchor_ms * factorial_ratio(alternative_counts[i], anchor_size);
    results[i].naive_extrapolated = true;
    if (results[i].dag_time.median_ms > 0.0) {
      results[i].speedup = results[i].naive_ms / results[i].dag_time.median_ms;
    }
  }
}

}  // namespace

std::vector<BenchResult> bench_alternatives(std::span<const int> sizes, int voters_per_merge,
                                            int trials, std::uint64_t seed,
                                            BenchProfile profile_kind) {
  if (voters_per_merge < 1 || trials < 1) {
    throw Error(ErrorCode::Validation, "need at least one voter and one trial");
  }
  std::vector<BenchResult> results;
  std::vector<int> counts;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 2) {
      throw Error(ErrorCode::Validation, "alternative counts below 2 are not meaningful");
    }
    results.push_back(sweep_point(sizes[i], sizes[i], voters_per_merge, trials, seed, i,
                                  profile_kind));
    counts.push_back(sizes[i]);
  }
  extrapolate_naive(results, counts);
  return results;
}

std::vector<BenchResult> bench_merge_size(std::span<const int> merge_sizes, int alternative_count,
                                          int trials, std::uint64_t seed,
                                          BenchProfile profile_kind) {
  if (alternative_count < 2 || trials < 1) {
    throw Error(ErrorCode::Validation, "need at least two alternatives and one trial");
  }
  std::vector<BenchResult> results;
  std::vector<int> counts;
  for (std::size_t i = 0; i < merge_sizes.size(); ++i) {
    if (merge_sizes[i] < 1) {
      throw Error(ErrorCode::Validation, "merge sizes must be positive");
    }
    results.push_back(sweep_point(merge_sizes[i], alternative_count, merge_sizes[i], trials,
                                  seed, i, profile_kind));
    counts.push_back(alternative_count);
  }
  extrapolate_naive(results, counts);
  return results;
}

InteractionGraph erdos_renyi(int vertex_count, double edge_probability, std::mt19937_64& rng) {
  if (vertex_count < 1) {
    throw Error(ErrorCode::Validation, "graph needs at least one vertex");
  }
  if (edge_probability < 0.0 || edge_probability > 1.0) {
    throw Error(ErrorCode::Validation, "edge probability must lie in [0, 1]");
  }
  std::bernoulli_distribution keep(edge_probability);
  std::vector<Edge> edges;
  for (VertexId u = 0; u < vertex_count; ++u) {
    for (VertexId v = u + 1; v < vertex_count; ++v) {
      if (keep(rng)) edges.push_back(Edge{u, v});
    }
  }
  return InteractionGraph(vertex_count, std::move(edges));
}

CommitteeReport committee_scenario(const CommitteeParams& params, std::uint64_t seed) {
  if (params.merge_size < 1 || params.merge_size > params.voters) {
    throw Error(ErrorCode::Validation, "merge size must lie in [1, voters]");
  }
  // Distinct stream tag so committee runs never share draws with the sweeps.
  constexpr std::uint64_t kCommitteeTag = 0x10ad;
  std::mt19937_64 rng = make_stream(seed, kCommitteeTag, 0);

  CommitteeReport report;
  report.params = params;
  report.seed = seed;

  InteractionGraph graph = erdos_renyi(params.voters, params.edge_probability, rng);
  report.edge_count = graph.edge_count();

  const std::vector<AltId> alphabet = dense_alternatives(params.alternatives);
  std::vector<std::vector<AltId>> visibility(static_cast<std::size_t>(params.voters), alphabet);
  DiscreteOrderSheaf sheaf(graph, std::move(visibility), params.alternatives);

  std::vector<TotalOrder> orders;
  orders.reserve(static_cast<std::size_t>(params.voters));
  std::vector<AltId> scratch = alphabet;
  for (int v = 0; v < params.voters; ++v) {
    std::shuffle(scratch.begin(), scratch.end(), rng);
    orders.emplace_back(scratch);
  }
  PreferenceProfile profile(sheaf, std::move(orders));

  ObstructionReport obstruction;
  report.obstruction_ms = time_one_ms([&] { obstruction = compute_obstruction(sheaf, profile); });
  report.obstructed_count = obstruction.incompatibility_index;
  report.incompatibility_rate =
      report.edge_count > 0
          ? static_cast<double>(report.obstructed_count) / report.edge_count
          : 0.0;

  // Sample the merge block without replacement.
  std::vector<VertexId> pool(static_cast<std::size_t>(params.voters));
  for (int v = 0; v < params.voters; ++v) pool[static_cast<std::size_t>(v)] = v;
  std::shuffle(pool.begin(), pool.end(), rng);
  report.merged.assign(pool.begin(), pool.begin() + params.merge_size);
  std::sort(report.merged.begin(), report.merged.end());

  QuotientMap quotient = QuotientMap::merge_block(graph, report.merged);
  VertexId target = quotient.image_of(report.merged.front());
  report.merge_ms = time_one_ms([&] {
    StalkComputation detailed = compute_stalk_detailed(quotient, sheaf, profile, target);
    report.merged_stalk = std::move(detailed.stalk);
    report.merged_dag.emplace(std::move(detailed.dag));
  });
  return report;
}

}  // namespace ordersheaf
