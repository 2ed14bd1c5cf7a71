#ifndef ORDERSHEAF_PROFILE_IO_HPP
#define ORDERSHEAF_PROFILE_IO_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ordersheaf/bench.hpp"
#include "ordersheaf/mallows.hpp"
#include "ordersheaf/obstruction.hpp"
#include "ordersheaf/pushforward.hpp"
#include "ordersheaf/sheaf.hpp"

namespace ordersheaf {

/** A sheaf + profile bundled with the human-readable names used at the IO
 * boundary. Core computation never touches the names; serializers resolve ids
 * through them on the way out.
 */
struct NamedInstance {
  DiscreteOrderSheaf sheaf;
  PreferenceProfile profile;
  std::vector<std::string> alternative_labels;  // by AltId
  std::vector<std::string> voter_names;         // by VertexId
  std::optional<QuotientMap> quotient;          // present when the document carries one
  std::vector<std::string> target_names;        // by target id, parallel to quotient
};

/** Document format (JSON):
 *
 *   {
 *     "alternatives": ["A", "B", "C"],
 *     "voters": [
 *       {"name": "V1", "visibility": ["A","B","C"], "order": ["A","B","C"]},
 *       ...
 *     ],
 *     "edges": [["V1","V2"], ...],
 *     "quotient": {"V1": "V12", "V2": "V12", "V3": "V3"}   // optional
 *   }
 *
 * Every order must be a permutation of its visibility set; edges must name
 * declared voters; a quotient must map every voter. Errors carry a distinct
 * ErrorCode per failure mode plus the offending path/label in the message.
 */
NamedInstance parse_profile(const std::string& json_text);

/// Canonical emission: alternatives in id order, voters in id order with
/// sorted visibility, edges canonical ascending. parse(emit(x)) round-trips.
std::string emit_profile(const NamedInstance& instance);

/// Catalog instance under the default naming scheme (alternatives "A", "B",
/// ...; voters "V1".."Vn").
NamedInstance named_catalog_example(ExampleName name, double t = 0.0);

/// Attach a quotient that merges the named voters into `merged_name`, leaving
/// every other voter alone. Target names must stay unique.
NamedInstance with_merge(NamedInstance instance, std::span<const std::string> merge_names,
                         const std::string& merged_name);

std::string obstruction_report_json(const ObstructionReport& report,
                                    const NamedInstance& instance);
std::string obstruction_report_csv(const ObstructionReport& report,
                                   const NamedInstance& instance);
std::string pushforward_report_json(const PushforwardReport& report,
                                    const NamedInstance& instance);

/// CSV writers for the experiment drivers. Schemas are fixed per writer;
/// floating-point cells use 6 significant digits.
std::string interpolation_csv(std::span<const InterpolationPoint> curve);
std::string family_csv(std::span<const FamilyPoint> curve);
std::string uniform_csv(const TrialStats& stats, TopologyName topology);
std::string bench_csv(std::span<const BenchResult> results);
std::string committee_csv(std::span<const CommitteeReport> reports);

/// "%.6g" formatting used by every CSV cell holding a double.
std::string format_significant(double value);

/// Default label for alternative id i: "A".."Z", then "a<i>" beyond 26.
std::string default_alternative_label(AltId id);

}  // namespace ordersheaf

#endif  // ORDERSHEAF_PROFILE_IO_HPP
