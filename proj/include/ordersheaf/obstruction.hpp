#ifndef ORDERSHEAF_OBSTRUCTION_HPP
#define ORDERSHEAF_OBSTRUCTION_HPP

#include <optional>
#include <vector>

#include "ordersheaf/sheaf.hpp"

namespace ordersheaf {

/// Everything the per-edge compatibility check saw, kept for reporting.
/// Restrictions are absent exactly when the overlap is empty; `vacuous` marks
/// edges whose overlap has fewer than two alternatives, where compatibility
/// holds by definition rather than by comparison.
struct EdgeDiagnostic {
  Edge edge;
  std::vector<AltId> overlap;
  std::optional<TotalOrder> restriction_u;
  std::optional<TotalOrder> restriction_v;
  bool compatible = true;
  bool vacuous = false;
};

/** Which edges witness disagreement, and whether a global section exists.
 *
 * An edge {u,v} is obstructed when both restrictions to the overlap exist
 * (|overlap| >= 2) and differ. The incompatibility index is the number of
 * obstructed edges; a global section exists iff no edge is obstructed and no
 * stalk is empty. Vertex stalks of a plain profile are never empty, so
 * `empty_stalk_vertices` only fills in quotient analyses, which reuse this
 * shape.
 */
struct ObstructionReport {
  std::vector<EdgeDiagnostic> per_edge;    // one entry per edge, ascending
  std::vector<Edge> obstructed_edges;      // ascending
  int incompatibility_index = 0;
  std::vector<VertexId> empty_stalk_vertices;
  bool h0_exists = false;
};

/// Scans every edge once; O(|E| * max |A_v|).
ObstructionReport compute_obstruction(const DiscreteOrderSheaf& sheaf,
                                      const PreferenceProfile& profile);

/// True iff the profile agrees on every edge overlap (and, trivially here,
/// every stalk is nonempty).
bool global_section_exists(const DiscreteOrderSheaf& sheaf, const PreferenceProfile& profile);

/// Exhaustive search over all assignments of one order per vertex, keeping
/// those that agree on every edge overlap. Test oracle: a profile is in this
/// set iff it has no obstructed edge. Throws Capacity when the assignment
/// space exceeds kMaxGlobalSectionAssignments.
std::vector<std::vector<TotalOrder>> enumerate_global_sections(const DiscreteOrderSheaf& sheaf);

inline constexpr long long kMaxGlobalSectionAssignments = 1'000'000;

/// |E| - |V| + (number of connected components): the number of independent
/// cycles, i.e. how many edges survive deleting a spanning forest.
int cycle_rank(const InteractionGraph& graph);

}  // namespace ordersheaf

#endif  // ORDERSHEAF_OBSTRUCTION_HPP
