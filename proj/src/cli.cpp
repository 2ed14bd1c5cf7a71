#include "ordersheaf/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ordersheaf/bench.hpp"
#include "ordersheaf/error.hpp"
#include "ordersheaf/mallows.hpp"
#include "ordersheaf/obstruction.hpp"
#include "ordersheaf/profile_io.hpp"
#include "ordersheaf/pushforward.hpp"
#include "ordersheaf/sheaf.hpp"

namespace ordersheaf {
namespace {

std::string read_document(const std::string& path, std::istream& in) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::Io, "failed reading standard input");
    return buffer.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::Io, "cannot open \"" + path + "\"");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  if (file.bad()) throw Error(ErrorCode::Io, "failed reading \"" + path + "\"");
  return buffer.str();
}

int verdict_exit(bool h0_exists, bool any_empty_stalk) {
  if (h0_exists) return kExitOk;
  if (any_empty_stalk) return kExitEmptyStalk;
  return kExitObstructed;
}

std::string default_merged_name(const NamedInstance& instance,
                                const std::vector<std::string>& merge_names) {
  (void)instance;
  std::string joined;
  for (std::size_t i = 0; i < merge_names.size(); ++i) {
    if (i > 0) joined += '+';
    joined += merge_names[i];
  }
  return joined;
}

BenchProfile orders_profile(const std::string& text) {
  return text == "identical" ? BenchProfile::IdenticalVoters : BenchProfile::UniformRandom;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Conflict localization for preferences on interaction graphs"};
  app.name("ordersheaf");
  app.require_subcommand(1);

  // analyze
  std::string analyze_file;
  bool analyze_csv = false;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Per-edge compatibility report for a profile document");
  analyze->add_option("file", analyze_file, "document path, or - for stdin")->required();
  analyze->add_flag("--csv", analyze_csv, "emit the per-edge table as CSV instead of JSON");

  // pushforward
  std::string push_file;
  std::vector<std::string> push_merge;
  std::string push_merged_name;
  CLI::App* pushforward = app.add_subcommand(
      "pushforward", "Quotient analysis: merged stalks, cycle witnesses, quotient conflicts");
  pushforward->add_option("file", push_file, "document path, or - for stdin")->required();
  pushforward
      ->add_option("--merge", push_merge,
                   "voters to merge into one vertex (overrides any document quotient)")
      ->delimiter(',');
  pushforward->add_option("--merged-name", push_merged_name,
                          "name for the merged vertex (default: members joined with +)");

  // example
  std::string example_name;
  double example_t = 0.0;
  std::vector<std::string> example_merge;
  std::string example_merged_name;
  CLI::App* example =
      app.add_subcommand("example", "Emit a catalog configuration as a profile document");
  example
      ->add_option("name", example_name,
                   "one of: condorcet_triangle, transitive_triangle, partial_visibility, "
                   "complete_k4, deterministic_family")
      ->required()
      ->check(CLI::IsMember({"condorcet_triangle", "transitive_triangle", "partial_visibility",
                             "complete_k4", "deterministic_family"}));
  example->add_option("--t", example_t, "family parameter in [0,1] (deterministic_family only)")
      ->check(CLI::Range(0.0, 1.0));
  example->add_option("--merge", example_merge, "attach a quotient merging these voters")
      ->delimiter(',');
  example->add_option("--merged-name", example_merged_name,
                      "name for the merged vertex (default: members joined with +)");

  // interpolate
  int interp_trials = 2000;
  std::uint64_t interp_seed = 12345;
  int interp_grid = 21;
  InterpolationSchedule schedule;
  CLI::App* interpolate = app.add_subcommand(
      "interpolate", "Dispersion-interpolation experiment on the three-voter triangle");
  interpolate->add_option("--trials", interp_trials, "trials per grid point")
      ->check(CLI::PositiveNumber);
  interpolate->add_option("--seed", interp_seed, "RNG seed");
  interpolate->add_option("--grid", interp_grid, "number of grid points over [0,1]")
      ->check(CLI::Range(2, 100000));
  interpolate->add_option("--phi-start", schedule.phi_start, "dispersion at t=0")
      ->check(CLI::Range(1e-9, 1.0));
  interpolate->add_option("--phi-end", schedule.phi_end, "dispersion at t=1")
      ->check(CLI::Range(1e-9, 1.0));
  interpolate->add_option("--v2-switch", schedule.v2_switch,
                          "t at which voter 2's reference flips to consensus");
  interpolate->add_option("--v3-switch", schedule.v3_switch,
                          "t at which voter 3's reference flips to consensus");

  // family
  int family_grid = 301;
  CLI::App* family = app.add_subcommand(
      "family", "Deterministic interpolation family (exact conflict counts, no sampling)");
  family->add_option("--grid", family_grid, "number of grid points over [0,1]")
      ->check(CLI::Range(2, 100000));

  // uniform
  std::string uniform_topology = "k3";
  int uniform_trials = 10000;
  std::uint64_t uniform_seed = 12345;
  CLI::App* uniform = app.add_subcommand(
      "uniform", "Uniform-random profiles on a catalog topology, three alternatives");
  uniform->add_option("--topology", uniform_topology, "one of: c3, c4, c5, k3, k4, p4, s4")
      ->check(CLI::IsMember({"c3", "c4", "c5", "k3", "k4", "p4", "s4"}));
  uniform->add_option("--trials", uniform_trials, "number of sampled profiles")
      ->check(CLI::PositiveNumber);
  uniform->add_option("--seed", uniform_seed, "RNG seed");

  // bench
  CLI::App* bench = app.add_subcommand("bench", "Scaling measurements");
  bench->require_subcommand(1);

  std::vector<int> bench_alt_sizes{6, 8, 10, 12};
  int bench_alt_voters = 3;
  int bench_trials = 20;
  std::uint64_t bench_seed = 1;
  std::string bench_orders = "uniform";
  CLI::App* bench_alt = bench->add_subcommand(
      "alternatives", "Merged-stalk cost vs. alternative count: constraint graph vs. naive scan");
  bench_alt->add_option("--sizes", bench_alt_sizes, "alternative counts to sweep")
      ->delimiter(',');
  bench_alt->add_option("--voters", bench_alt_voters, "orders per merged vertex")
      ->check(CLI::PositiveNumber);
  bench_alt->add_option("--trials", bench_trials, "trials per sweep point")
      ->check(CLI::PositiveNumber);
  bench_alt->add_option("--seed", bench_seed, "RNG seed");
  bench_alt->add_option("--orders", bench_orders, "voter order distribution")
      ->check(CLI::IsMember({"uniform", "identical"}));

  std::vector<int> bench_merge_sizes{2, 3, 5, 8};
  int bench_merge_alternatives = 6;
  CLI::App* bench_merge = bench->add_subcommand(
      "merge", "Merged-stalk cost vs. number of merged voters at a fixed alternative count");
  bench_merge->add_option("--sizes", bench_merge_sizes, "merge sizes to sweep")->delimiter(',');
  bench_merge
      ->add_option("--alternatives", bench_merge_alternatives, "alternative count for every point")
      ->check(CLI::PositiveNumber);
  bench_merge->add_option("--trials", bench_trials, "trials per sweep point")
      ->check(CLI::PositiveNumber);
  bench_merge->add_option("--seed", bench_seed, "RNG seed");
  bench_merge->add_option("--orders", bench_orders, "voter order distribution")
      ->check(CLI::IsMember({"uniform", "identical"}));

  CommitteeParams committee_params;
  std::uint64_t committee_seed = 1;
  int committee_repeat = 1;
  CLI::App* bench_committee = bench->add_subcommand(
      "committee", "Random committee: sparse graph, uniform preferences, one block merge");
  bench_committee->add_option("--voters", committee_params.voters, "committee size")
      ->check(CLI::PositiveNumber);
  bench_committee
      ->add_option("--alternatives", committee_params.alternatives, "alternatives per voter")
      ->check(CLI::PositiveNumber);
  bench_committee
      ->add_option("--edge-prob", committee_params.edge_probability,
                   "independent edge probability")
      ->check(CLI::Range(0.0, 1.0));
  bench_committee->add_option("--merge-size", committee_params.merge_size, "merged block size")
      ->check(CLI::PositiveNumber);
  bench_committee->add_option("--seed", committee_seed, "RNG seed of the first run");
  bench_committee->add_option("--repeat", committee_repeat, "runs on consecutive seeds")
      ->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("ordersheaf");
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (analyze->parsed()) {
      NamedInstance instance = parse_profile(read_document(analyze_file, in));
      ObstructionReport report = compute_obstruction(instance.sheaf, instance.profile);
      out << (analyze_csv ? obstruction_report_csv(report, instance)
                          : obstruction_report_json(report, instance));
      err << "incompatibility_index=" << report.incompatibility_index
          << " h0_exists=" << (report.h0_exists ? "true" : "false") << "\n";
      return verdict_exit(report.h0_exists, !report.empty_stalk_vertices.empty());
    }

    if (pushforward->parsed()) {
      NamedInstance instance = parse_profile(read_document(push_file, in));
      if (!push_merge.empty()) {
        const std::string merged_name = push_merged_name.empty()
                                            ? default_merged_name(instance, push_merge)
                                            : push_merged_name;
        instance.quotient.reset();
        instance = with_merge(std::move(instance), push_merge, merged_name);
      }
      if (!instance.quotient.has_value()) {
        throw Error(ErrorCode::InvalidQuotient,
                    "document carries no quotient; pass --merge to choose one");
      }
      PushforwardReport report =
          pushforward_report(*instance.quotient, instance.sheaf, instance.profile);
      out << pushforward_report_json(report, instance);
      err << "quotient_incompatibility_index=" << report.incompatibility_index
          << " empty_stalks=" << report.empty_stalk_vertices.size()
          << " h0_exists=" << (report.h0_exists ? "true" : "false") << "\n";
      return verdict_exit(report.h0_exists, !report.empty_stalk_vertices.empty());
    }

    if (example->parsed()) {
      NamedInstance instance =
          named_catalog_example(*example_from_string(example_name), example_t);
      if (!example_merge.empty()) {
        const std::string merged_name = example_merged_name.empty()
                                            ? default_merged_name(instance, example_merge)
                                            : example_merged_name;
        instance = with_merge(std::move(instance), example_merge, merged_name);
      }
      out << emit_profile(instance);
      return kExitOk;
    }

    if (interpolate->parsed()) {
      std::vector<double> grid = uniform_grid(interp_grid);
      std::vector<InterpolationPoint> curve =
          run_interpolation(schedule, grid, interp_trials, interp_seed);
      out << interpolation_csv(curve);
      err << "seed=" << interp_seed << " trials_per_point=" << interp_trials << "\n";
      return kExitOk;
    }

    if (family->parsed()) {
      std::vector<double> grid = uniform_grid(family_grid);
      out << family_csv(run_deterministic_family(grid));
      return kExitOk;
    }

    if (uniform->parsed()) {
      TopologyName topology = *topology_from_string(uniform_topology);
      TrialStats stats =
          run_uniform_experiment(catalog_topology(topology), uniform_trials, uniform_seed);
      out << uniform_csv(stats, topology);
      err << "seed=" << uniform_seed << "\n";
      return kExitOk;
    }

    if (bench_alt->parsed()) {
      std::vector<BenchResult> results = bench_alternatives(
          bench_alt_sizes, bench_alt_voters, bench_trials, bench_seed,
          orders_profile(bench_orders));
      out << bench_csv(results);
      err << "seed=" << bench_seed << " trials_per_point=" << bench_trials << "\n";
      return kExitOk;
    }

    if (bench_merge->parsed()) {
      std::vector<BenchResult> results =
          bench_merge_size(bench_merge_sizes, bench_merge_alternatives, bench_trials, bench_seed,
                           orders_profile(bench_orders));
      out << bench_csv(results);
      err << "seed=" << bench_seed << " trials_per_point=" << bench_trials << "\n";
      return kExitOk;
    }

    if (bench_committee->parsed()) {
      std::vector<CommitteeReport> reports;
      reports.reserve(static_cast<std::size_t>(committee_repeat));
      for (int i = 0; i < committee_repeat; ++i) {
        reports.push_back(
            committee_scenario(committee_params, committee_seed + static_cast<std::uint64_t>(i)));
      }
      out << committee_csv(reports);
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::Io ? kExitIo : kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }

  err << "error: no subcommand dispatched\n";
  return kExitUsage;
}

}  // namespace ordersheaf
