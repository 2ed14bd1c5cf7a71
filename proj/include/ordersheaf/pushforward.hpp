#ifndef ORDERSHEAF_PUSHFORWARD_HPP
#define ORDERSHEAF_PUSHFORWARD_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ordersheaf/obstruction.hpp"
#include "ordersheaf/sheaf.hpp"

namespace ordersheaf {

/** Surjective vertex map onto a smaller graph, with the derived target graph.
 *
 * Target ids must be dense (0..m-1). Source edges whose endpoints collapse
 * become nothing (self-loops are dropped); the remaining images are
 * deduplicated into the target edge set.
 */
class QuotientMap {
 public:
  QuotientMap(InteractionGraph source, std::vector<VertexId> vertex_map);

  static QuotientMap identity(const InteractionGraph& graph);

  /// Collapse `block` into a single target vertex, keeping every other vertex
  /// separate. Target ids follow first appearance in source order.
  static QuotientMap merge_block(const InteractionGraph& graph, std::span<const VertexId> block);

  const InteractionGraph& source() const noexcept { return source_; }
  const InteractionGraph& target() const noexcept { return target_; }
  const std::vector<VertexId>& vertex_map() const noexcept { return map_; }
  VertexId image_of(VertexId source_vertex) const;
  std::vector<VertexId> preimage_of(VertexId target_vertex) const;

 private:
  InteractionGraph source_;
  std::vector<VertexId> map_;
  InteractionGraph target_;
};

/// Directed precedence constraint: `from` must be ranked above `to`.
struct Arc {
  AltId from = 0;
  AltId to = 0;
  friend bool operator==(const Arc&, const Arc&) = default;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

/** Union of the voters' precedence constraints as a directed graph.
 *
 * Built from consecutive ranking pairs only — reachability recovers the full
 * transitive order, so arcs stay O(|A| * |voters|) instead of quadratic per
 * voter. Every arc remembers which voters contributed it.
 */
class ConstraintDag {
 public:
  ConstraintDag(std::vector<AltId> nodes, std::vector<Arc> arcs,
                std::vector<std::vector<VertexId>> provenance);

  const std::vector<AltId>& nodes() const noexcept { return nodes_; }
  const std::vector<Arc>& arcs() const noexcept { return arcs_; }
  bool has_arc(Arc arc) const noexcept;
  /// Voters whose consecutive pair produced arcs()[arc_index], ascending.
  std::span<const VertexId> provenance(std::size_t arc_index) const;
  /// Arc targets reachable in one step from `a`, ascending.
  std::span<const Arc> arcs_from(AltId a) const noexcept;
  /// Rough allocation footprint, for growth-trend measurements.
  std::size_t estimated_bytes() const noexcept;

 private:
  std::vector<AltId> nodes_;                      // sorted, unique
  std::vector<Arc> arcs_;                         // sorted, unique
  std::vector<std::vector<VertexId>> provenance_; // parallel to arcs_
};

/// Nodes are the union of the orders' domains; one arc per consecutive pair of
/// each order, deduplicated with merged provenance. `voters` names the order
/// at each index (defaults to 0..k-1) and must match `orders` in length.
ConstraintDag build_constraint_dag(std::span<const TotalOrder> orders,
                                   std::span<const VertexId> voters = {});

/// Work counters for the cycle search, used to sanity-check its linearity.
struct CycleSearchStats {
  std::size_t nodes_visited = 0;
  std::size_t arcs_scanned = 0;
};

/// Depth-first search over nodes in ascending id order (neighbors likewise).
/// Returns the first cycle closed by a back arc, as node ids a0, a1, ..., ak
/// with every consecutive arc (and ak -> a0) present in the dag; nullopt when
/// acyclic. Deterministic. O(|nodes| + |arcs|).
std::optional<std::vector<AltId>> detect_cycle(const ConstraintDag& dag,
                                               CycleSearchStats* stats = nullptr);

/// Largest node count for which stalks are fully enumerated (8! = 40320).
inline constexpr int kStalkEnumerationThreshold = 8;

/// Number of total orders consistent with every arc. Subset dynamic program,
/// O(2^n * n). Throws Validation on cyclic input and Capacity above the
/// enumeration threshold.
std::uint64_t count_linear_extensions(const ConstraintDag& dag);

/// The extensions themselves, lexicographically by id sequence. Same
/// preconditions and caps as count_linear_extensions.
std::vector<TotalOrder> enumerate_linear_extensions(const ConstraintDag& dag);

/// Lexicographically smallest linear extension (min-id-first topological
/// order). Works at any size; throws Validation on cyclic input.
TotalOrder topological_witness(const ConstraintDag& dag);

/** Stalk of the pushed-forward sheaf at one target vertex.
 *
 * Empty stalks carry a cycle witness over the merged constraint dag; nonempty
 * stalks always carry a witness order, plus the full enumeration and exact
 * count when the merged alternative set is small enough to enumerate.
 */
struct PushforwardStalk {
  enum class Status { Empty, NonEmpty };

  Status status = Status::Empty;
  std::vector<AltId> alternatives;                     // union of member visibilities
  std::vector<AltId> cycle_witness;                    // nonempty iff Empty (when dag-derived)
  std::optional<TotalOrder> witness;                   // present iff NonEmpty
  std::optional<std::vector<TotalOrder>> enumeration;  // |alternatives| <= threshold
  std::optional<std::uint64_t> extension_count;        // same presence rule
};

/// compute_stalk plus the merged constraint dag and preimage it worked on.
struct StalkComputation {
  PushforwardStalk stalk;
  ConstraintDag dag;
  std::vector<VertexId> preimage;
};

StalkComputation compute_stalk_detailed(const QuotientMap& quotient,
                                        const DiscreteOrderSheaf& sheaf,
                                        const PreferenceProfile& profile,
                                        VertexId target_vertex);

PushforwardStalk compute_stalk(const QuotientMap& quotient, const DiscreteOrderSheaf& sheaf,
                               const PreferenceProfile& profile, VertexId target_vertex);

/// Brute-force reference: filter all |alphabet|! orders by restriction
/// equality against every given order. Independent of the dag machinery, so
/// the two can cross-check each other. Empty results carry no cycle witness.
/// Throws Capacity when |alphabet| > kStalkEnumerationThreshold.
PushforwardStalk naive_stalk_oracle(std::span<const TotalOrder> preimage_orders,
                                    std::span<const AltId> alphabet);

/// Per-target-edge compatibility evidence. `full_edge_stalk_size` is |overlap|!
/// (the size of the unconstrained edge stalk) when it fits in 64 bits;
/// `common_restrictions` is filled when both endpoint stalks were enumerated.
struct QuotientEdgeDiagnostic {
  Edge edge;
  std::vector<AltId> overlap;
  bool compatible = true;
  bool vacuous = false;  // empty-stalk endpoint or |overlap| < 2
  std::optional<std::uint64_t> full_edge_stalk_size;
  std::optional<std::vector<TotalOrder>> common_restrictions;
};

/** Full analysis of the pushed-forward sheaf.
 *
 * A target edge is obstructed when both endpoint stalks are nonempty, the
 * overlap has at least two alternatives, and no pair of stalk elements agrees
 * on the overlap. h0_exists iff no stalk is empty and no edge is obstructed.
 */
struct PushforwardReport {
  std::vector<PushforwardStalk> stalks;          // by target vertex id
  std::vector<std::vector<VertexId>> preimages;  // by target vertex id
  std::vector<QuotientEdgeDiagnostic> per_edge;  // ascending target edges
  std::vector<Edge> obstructed_edges;
  int incompatibility_index = 0;
  std::vector<VertexId> empty_stalk_vertices;
  bool h0_exists = false;
};

PushforwardReport pushforward_report(const QuotientMap& quotient, const DiscreteOrderSheaf& sheaf,
                                     const PreferenceProfile& profile);

}  // namespace ordersheaf

#endif  // ORDERSHEAF_PUSHFORWARD_HPP
