#ifndef ORDERSHEAF_BENCH_HPP
#define ORDERSHEAF_BENCH_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "ordersheaf/pushforward.hpp"

namespace ordersheaf {

/// Largest alternative count the brute-force timing actually runs at; larger
/// sizes are extrapolated with the factorial cost model
/// naive(n) = naive(limit) * n!/limit!.
inline constexpr int kNaiveMeasurableLimit = 8;

struct DurationStats {
  double median_ms = 0.0;
  double mean_ms = 0.0;
  double min_ms = 0.0;
  double max_ms = 0.0;
  int trials = 0;
};

struct BenchResult {
  int parameter = 0;  // alternative count or merge size, depending on the sweep
  DurationStats dag_time;
  double naive_ms = 0.0;  // median; measured up to kNaiveMeasurableLimit
  bool naive_extrapolated = false;
  double speedup = 0.0;  // naive_ms / dag_time.median_ms
  double conflict_rate = 0.0;  // fraction of trials whose merged stalk is empty
  std::size_t dag_bytes_median = 0;
};

/// Profile generator used by the sweeps. IdenticalVoters exists as a test
/// hook: identical orders can never produce a constraint cycle, so the
/// conflict rate must come out 0.
enum class BenchProfile { UniformRandom, IdenticalVoters };

/// Merge `voters_per_merge` full-visibility voters over |A| = size alternatives
/// and time (a) constraint-dag build + cycle detection and (b) the brute-force
/// stalk scan, the latter only up to kNaiveMeasurableLimit. One fresh random
/// profile per trial; medians over `trials`. Single-threaded.
std::vector<BenchResult> bench_alternatives(std::span<const int> sizes, int voters_per_merge,
                                            int trials, std::uint64_t seed,
                                            BenchProfile profile_kind = BenchProfile::UniformRandom);

/// Same shape, sweeping the number of merged voters at fixed alternative
/// count. The brute-force column is measured when the alternative count allows
/// it (it does not depend on merge size asymptotically, but is reported for
/// context).
std::vector<BenchResult> bench_merge_size(std::span<const int> merge_sizes, int alternative_count,
                                          int trials, std::uint64_t seed,
                                          BenchProfile profile_kind = BenchProfile::UniformRandom);

/// G(n, p): every unordered pair becomes an edge independently with
/// probability p.
InteractionGraph erdos_renyi(int vertex_count, double edge_probability, std::mt19937_64& rng);

struct CommitteeParams {
  int voters = 50;
  int alternatives = 8;
  double edge_probability = 0.15;
  int merge_size = 5;
};

/** One end-to-end committee run: a random interaction graph with uniform
 * full-visibility preferences, the per-edge obstruction scan (timed), and a
 * merge of `merge_size` randomly chosen voters (timed, with stalk outcome).
 */
struct CommitteeReport {
  CommitteeParams params;
  std::uint64_t seed = 0;
  int edge_count = 0;
  int obstructed_count = 0;
  double incompatibility_rate = 0.0;
  double obstruction_ms = 0.0;
  std::vector<VertexId> merged;  // the sampled block, ascending
  PushforwardStalk merged_stalk;
  std::optional<ConstraintDag> merged_dag;  // lets callers re-verify the cycle witness
  double merge_ms = 0.0;
};

CommitteeReport committee_scenario(const CommitteeParams& params, std::uint64_t seed);

}  // namespace ordersheaf

#endif  // ORDERSHEAF_BENCH_HPP
