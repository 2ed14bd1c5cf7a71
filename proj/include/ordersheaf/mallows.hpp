#ifndef ORDERSHEAF_MALLOWS_HPP
#define ORDERSHEAF_MALLOWS_HPP

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "ordersheaf/sheaf.hpp"

namespace ordersheaf {

/** Mallows distribution over total orders: P(pi) proportional to
 * dispersion^kendall_tau(pi, reference). dispersion = 1 is uniform; smaller
 * values concentrate mass near the reference.
 */
struct MallowsParams {
  TotalOrder reference;
  double dispersion = 1.0;  // in (0, 1]
};

/// Exact probabilities for every order on the reference's domain (enumerates,
/// so the all_total_orders cap applies). Values sum to 1 up to rounding.
std::map<TotalOrder, double> mallows_pmf(const MallowsParams& params);

/// Exact sampler by repeated insertion: reference items are inserted one at a
/// time, offset j from the bottom of the partial ranking with weight
/// dispersion^j. Each insertion above j earlier items creates exactly j new
/// discordant pairs, which reproduces the model weights without enumeration.
TotalOrder sample_mallows(const MallowsParams& params, std::mt19937_64& rng);

/** Three Mallows voters on a full-visibility triangle, driven from consensus
 * by a parameter t in [0, 1].
 *
 * Voter 1 keeps reference A>B>C throughout; voter 2 starts at B>C>A and adopts
 * the consensus reference at t >= v2_switch; voter 3 starts at C>A>B and
 * switches at t >= v3_switch (both inclusive). Dispersion ramps linearly from
 * phi_start to phi_end. The defaults start the study in a high-dispersion
 * cyclic regime (mean incompatibility index ~2.5) and end concentrated enough
 * that all three voters agree in ~55% of trials, which requires an endpoint
 * dispersion of 0.1.
 */
struct InterpolationSchedule {
  double phi_start = 0.8;
  double phi_end = 0.1;
  double v2_switch = 0.5;
  double v3_switch = 0.75;

  double dispersion_at(double t) const { return phi_start + (phi_end - phi_start) * t; }
  std::array<TotalOrder, 3> references_at(double t) const;
};

/** Aggregates of one Monte Carlo sweep at fixed parameters. */
struct TrialStats {
  int n_trials = 0;
  double mean_index = 0.0;
  double std_index = 0.0;        // sample standard deviation
  double consistency_rate = 0.0; // fraction of trials with a global section
  std::vector<std::int64_t> histogram;  // histogram[k] = trials with index k
  std::uint64_t seed = 0;
};

struct InterpolationPoint {
  double t = 0.0;
  TrialStats stats;
};

/// Evenly spaced values 0 = t_0 < ... < t_{points-1} = 1. Requires points >= 2.
std::vector<double> uniform_grid(int points);

/// For each grid value: draw the three voters n_trials times, measure the
/// incompatibility index on the triangle, and aggregate. Each trial uses an
/// independent stream derived from (seed, grid index, trial index).
std::vector<InterpolationPoint> run_interpolation(const InterpolationSchedule& schedule,
                                                  std::span<const double> grid, int n_trials,
                                                  std::uint64_t seed);

struct FamilyPoint {
  double t = 0.0;
  int incompatibility_index = 0;
};

/// The noise-free counterpart: the deterministic catalog family evaluated
/// pointwise. Steps 3 -> 2 -> 0 at t = 1/3 and 2/3.
std::vector<FamilyPoint> run_deterministic_family(std::span<const double> grid);

/// Independent uniform orders over three alternatives at every vertex of
/// `topology` (full visibility), n_trials times. On a triangle the chance that
/// all three voters agree is (1/6)^2.
TrialStats run_uniform_experiment(const InteractionGraph& topology, int n_trials,
                                  std::uint64_t seed);

}  // namespace ordersheaf

#endif  // ORDERSHEAF_MALLOWS_HPP
