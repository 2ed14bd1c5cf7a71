#ifndef ORDERSHEAF_SHEAF_HPP
#define ORDERSHEAF_SHEAF_HPP

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ordersheaf/order.hpp"

namespace ordersheaf {

/// Undirected edge in canonical form (u < v). Build via make_edge.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Canonicalizes endpoints; throws Validation on self-loops or negative ids.
Edge make_edge(VertexId a, VertexId b);

/** Finite simple undirected graph over dense vertex ids 0..n-1.
 *
 * Edges are stored canonically (u < v) in ascending order, so iteration order
 * — and everything derived from it — is deterministic.
 */
class InteractionGraph {
 public:
  InteractionGraph(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const noexcept { return vertex_count_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  bool has_edge(Edge e) const noexcept;
  const std::vector<VertexId>& neighbors(VertexId v) const;
  int component_count() const;

 private:
  int vertex_count_;
  std::vector<Edge> edges_;
  std::vector<std::vector<VertexId>> adjacency_;
};

/** Assigns every vertex the set of alternatives it can rank.
 *
 * The vertex stalk at v is (conceptually) the set of total orders on the
 * visibility set A_v; the edge stalk on {u,v} lives on A_u ∩ A_v. This class
 * stores the combinatorial data; orders live in PreferenceProfile.
 */
class DiscreteOrderSheaf {
 public:
  /// `visibility[v]` lists the alternatives vertex v ranks; each must be a
  /// nonempty subset of {0, ..., alternative_count-1}.
  DiscreteOrderSheaf(InteractionGraph graph, std::vector<std::vector<AltId>> visibility,
                     int alternative_count);

  const InteractionGraph& graph() const noexcept { return graph_; }
  int alternative_count() const noexcept { return alternative_count_; }
  std::span<const AltId> visibility(VertexId v) const;

  /// Sorted A_u ∩ A_v. Throws Validation when e is not a graph edge.
  std::vector<AltId> edge_overlap(Edge e) const;

  friend bool operator==(const DiscreteOrderSheaf&, const DiscreteOrderSheaf&);

 private:
  InteractionGraph graph_;
  std::vector<std::vector<AltId>> visibility_;  // sorted, unique per vertex
  int alternative_count_;
};

/** One total order per vertex, each over exactly that vertex's visibility set. */
class PreferenceProfile {
 public:
  PreferenceProfile(const DiscreteOrderSheaf& sheaf, std::vector<TotalOrder> orders);

  const TotalOrder& order_of(VertexId v) const;
  const std::vector<TotalOrder>& orders() const noexcept { return orders_; }
  int size() const noexcept { return static_cast<int>(orders_.size()); }

  friend bool operator==(const PreferenceProfile&, const PreferenceProfile&) = default;

 private:
  std::vector<TotalOrder> orders_;
};

/// Diagnostic self-check of the two sheaf laws on one edge: restriction is a
/// single-valued map into orders on the overlap (locality), and any two vertex
/// orders agreeing on the overlap restrict to one and the same edge-stalk
/// element (gluing). Enumerates the two vertex stalks, so visibility sets must
/// stay within the all_total_orders cap. Empty overlaps pass vacuously.
struct SheafAxiomCheck {
  bool locality_ok = false;
  bool gluing_ok = false;
};
SheafAxiomCheck check_sheaf_axioms(const DiscreteOrderSheaf& sheaf, Edge e);

/// Ready-made configurations used across tests, docs, and experiments.
/// DeterministicFamily takes the family parameter t in [0,1]; the others
/// ignore it.
enum class ExampleName {
  CondorcetTriangle,    // K3, full visibility, cyclically rotated A>B>C
  TransitiveTriangle,   // K3, full visibility, unanimous A>B>C
  PartialVisibility,    // C3 with 3-of-4 visibility; exactly one edge conflicts
  CompleteK4,           // K4, full visibility, one compatible edge
  DeterministicFamily,  // K3; voters 2 and 3 switch to consensus at t=1/3, 2/3
};

struct CatalogInstance {
  DiscreteOrderSheaf sheaf;
  PreferenceProfile profile;
};

CatalogInstance catalog_example(ExampleName name, double t = 0.0);

/// Small named topologies (3 alternatives, full visibility experiments).
enum class TopologyName { C3, C4, C5, K3, K4, P4, S4 };

InteractionGraph catalog_topology(TopologyName name);

const char* to_string(ExampleName name) noexcept;
const char* to_string(TopologyName name) noexcept;
std::optional<ExampleName> example_from_string(std::string_view text) noexcept;
std::optional<TopologyName> topology_from_string(std::string_view text) noexcept;

}  // namespace ordersheaf

#endif  // ORDERSHEAF_SHEAF_HPP
