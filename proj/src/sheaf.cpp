#include "ordersheaf/sheaf.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace ordersheaf {

Edge make_edge(VertexId a, VertexId b) {
  if (a == b) {
    throw Error(ErrorCode::Validation, "self-loop at vertex " + std::to_string(a));
  }
  if (a < 0 || b < 0) {
    throw Error(ErrorCode::Validation, "vertex ids must be non-negative");
  }
  return a < b ? Edge{a, b} : Edge{b, a};
}

InteractionGraph::InteractionGraph(int vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  if (vertex_count_ <= 0) {
    throw Error(ErrorCode::Validation, "graph needs at least one vertex");
  }
  for (Edge& e : edges_) {
    e = make_edge(e.u, e.v);
    if (e.v >= vertex_count_) {
      throw Error(ErrorCode::Validation,
                  "edge endpoint " + std::to_string(e.v) + " outside vertex range");
    }
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw Error(ErrorCode::Validation, "duplicate edge");
  }
  adjacency_.assign(static_cast<std::size_t>(vertex_count_), {});
  for (const Edge& e : edges_) {
    adjacency_[static_cast<std::size_t>(e.u)].push_back(e.v);
    adjacency_[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

bool InteractionGraph::has_edge(Edge e) const noexcept {
  if (e.u > e.v) std::swap(e.u, e.v);
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

const std::vector<VertexId>& InteractionGraph::neighbors(VertexId v) const {
  if (v < 0 || v >= vertex_count_) {
    throw Error(ErrorCode::Lookup, "vertex " + std::to_string(v) + " outside vertex range");
  }
  return adjacency_[static_cast<std::size_t>(v)];
}

int InteractionGraph::component_count() const {
  std::vector<bool> seen(static_cast<std::size_t>(vertex_count_), false);
  std::vector<VertexId> stack;
  int components = 0;
  for (VertexId root = 0; root < vertex_count_; ++root) {
    if (seen[static_cast<std::size_t>(root)]) continue;
    ++components;
    stack.push_back(root);
    seen[static_cast<std::size_t>(root)] = true;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (VertexId w : adjacency_[static_cast<std::size_t>(v)]) {
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = true;
          stack.push_back(w);
        }
      }
    }
  }
  return components;
}

DiscreteOrderSheaf::DiscreteOrderSheaf(InteractionGraph graph,
                                       std::vector<std::vector<AltId>> visibility,
                                       int alternative_count)
    : graph_(std::move(graph)),
      visibility_(std::move(visibility)),
      alternative_count_(alternative_count) {
  if (alternative_count_ <= 0) {
    throw Error(ErrorCode::Validation, "sheaf needs at least one alternative");
  }
  if (static_cast<int>(visibility_.size()) != graph_.vertex_count()) {
    throw Error(ErrorCode::Validation, "visibility must cover every vertex exactly once");
  }
  for (std::size_t v = 0; v < visibility_.size(); ++v) {
    auto& vis = visibility_[v];
    if (vis.empty()) {
      throw Error(ErrorCode::Validation, "vertex " + std::to_string(v) + " has empty visibility");
    }
    std::sort(vis.begin(), vis.end());
    if (std::adjacent_find(vis.begin(), vis.end()) != vis.end()) {
      throw Error(ErrorCode::Validation,
                  "vertex " + std::to_string(v) + " lists an alternative twice");
    }
    if (vis.front() < 0 || vis.back() >= alternative_count_) {
      throw Error(ErrorCode::Validation,
                  "vertex " + std::to_string(v) + " sees an alternative outside the global set");
    }
  }
}

std::span<const AltId> DiscreteOrderSheaf::visibility(VertexId v) const {
  if (v < 0 || v >= graph_.vertex_count()) {
    throw Error(ErrorCode::Lookup, "vertex " + std::to_string(v) + " outside vertex range");
  }
  return visibility_[static_cast<std::size_t>(v)];
}

std::vector<AltId> DiscreteOrderSheaf::edge_overlap(Edge e) const {
  e = make_edge(e.u, e.v);
  if (!graph_.has_edge(e)) {
    throw Error(ErrorCode::Validation,
                "no edge {" + std::to_string(e.u) + "," + std::to_string(e.v) + "} in the graph");
  }
  return id_intersection(visibility(e.u), visibility(e.v));
}

bool operator==(const DiscreteOrderSheaf& a, const DiscreteOrderSheaf& b) {
  return a.alternative_count_ == b.alternative_count_ && a.visibility_ == b.visibility_ &&
         a.graph_.vertex_count() == b.graph_.vertex_count() &&
         a.graph_.edges() == b.graph_.edges();
}

PreferenceProfile::PreferenceProfile(const DiscreteOrderSheaf& sheaf,
                                     std::vector<TotalOrder> orders)
    : orders_(std::move(orders)) {
  if (static_cast<int>(orders_.size()) != sheaf.graph().vertex_count()) {
    throw Error(ErrorCode::Validation, "profile must rank exactly one order per vertex");
  }
  for (std::size_t v = 0; v < orders_.size(); ++v) {
    auto vis = sheaf.visibility(static_cast<VertexId>(v));
    if (orders_[v].domain() != std::vector<AltId>(vis.begin(), vis.end())) {
      throw Error(ErrorCode::Validation,
                  "order at vertex " + std::to_string(v) + " does not rank its visibility set");
    }
  }
}

const TotalOrder& PreferenceProfile::order_of(VertexId v) const {
  if (v < 0 || v >= static_cast<VertexId>(orders_.size())) {
    throw Error(ErrorCode::Lookup, "vertex " + std::to_string(v) + " outside vertex range");
  }
  return orders_[static_cast<std::size_t>(v)];
}

SheafAxiomCheck check_sheaf_axioms(const DiscreteOrderSheaf& sheaf, Edge e) {
  const std::vector<AltId> overlap = sheaf.edge_overlap(e);
  if (overlap.empty()) return {true, true};  // nothing to restrict; both laws hold vacuously

  // Locality: restriction must be a deterministic single-valued map whose image
  // is an order on exactly the overlap.
  bool locality = true;
  const auto stalk_u = all_total_orders(sheaf.visibility(e.u));
  const auto stalk_v = all_total_orders(sheaf.visibility(e.v));
  for (const auto& sigma : stalk_u) {
    TotalOrder once = sigma.restricted_to(overlap);
    TotalOrder twice = sigma.restricted_to(overlap);
    if (once != twice || once.domain() != overlap) locality = false;
  }

  // Gluing: bucket both stalks by their restriction; every bucket key must be
  // a valid edge-stalk element, i.e. exactly an order on the overlap. Doing it
  // by buckets keeps this O(|stalk_u| + |stalk_v|) instead of the product.
  bool gluing = true;
  std::map<TotalOrder, int> buckets;
  for (const auto& sigma : stalk_u) buckets[sigma.restricted_to(overlap)] |= 1;
  for (const auto& sigma : stalk_v) buckets[sigma.restricted_to(overlap)] |= 2;
  for (const auto& [restriction, mask] : buckets) {
    if (mask != 3) continue;  // no pair of vertex orders meets on this element
    if (restriction.domain() != overlap) gluing = false;
  }
  return {locality, gluing};
}

namespace {

std::vector<std::vector<AltId>> full_visibility(int vertices, int alternatives) {
  std::vector<AltId> all(static_cast<std::size_t>(alternatives));
  for (int a = 0; a < alternatives; ++a) all[static_cast<std::size_t>(a)] = a;
  return std::vector<std::vector<AltId>>(static_cast<std::size_t>(vertices), all);
}

InteractionGraph cycle_graph(int n) {
  std::vector<Edge> edges;
  for (VertexId v = 0; v < n; ++v) edges.push_back(make_edge(v, (v + 1) % n));
  return InteractionGraph(n, std::move(edges));
}

InteractionGraph complete_graph(int n) {
  std::vector<Edge> edges;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v) edges.push_back(Edge{u, v});
  return InteractionGraph(n, std::move(edges));
}

}  // namespace

CatalogInstance catalog_example(ExampleName name, double t) {
  constexpr AltId A = 0, B = 1, C = 2, D = 3;
  switch (name) {
    case ExampleName::CondorcetTriangle: {
      DiscreteOrderSheaf sheaf(cycle_graph(3), full_visibility(3, 3), 3);
      PreferenceProfile profile(sheaf, {TotalOrder({A, B, C}), TotalOrder({B, C, A}),
                                        TotalOrder({C, A, B})});
      return {std::move(sheaf), std::move(profile)};
    }
    case ExampleName::TransitiveTriangle: {
      DiscreteOrderSheaf sheaf(cycle_graph(3), full_visibility(3, 3), 3);
      PreferenceProfile profile(sheaf, {TotalOrder({A, B, C}), TotalOrder({A, B, C}),
                                        TotalOrder({A, B, C})});
      return {std::move(sheaf), std::move(profile)};
    }
    case ExampleName::PartialVisibility: {
      DiscreteOrderSheaf sheaf(cycle_graph(3),
                               {{A, B, C}, {B, C, D}, {A, C, D}}, 4);
      PreferenceProfile profile(sheaf, {TotalOrder({A, B, C}), TotalOrder({B, C, D}),
                                        TotalOrder({C, D, A})});
      return {std::move(sheaf), std::move(profile)};
    }
    case ExampleName::CompleteK4: {
      DiscreteOrderSheaf sheaf(complete_graph(4), full_visibility(4, 3), 3);
      PreferenceProfile profile(sheaf, {TotalOrder({A, B, C}), TotalOrder({B, C, A}),
                                        TotalOrder({C, A, B}), TotalOrder({A, B, C})});
      return {std::move(sheaf), std::move(profile)};
    }
    case ExampleName::DeterministicFamily: {
      // One-parameter family on K3: starts as the Condorcet cycle, voters 2
      // and 3 adopt the consensus order A>B>C at t >= 1/3 and t >= 2/3, so the
      // incompatibility index steps 3 -> 2 -> 0.
      if (!(t >= 0.0 && t <= 1.0)) {
        throw Error(ErrorCode::DomainViolation, "family parameter t must lie in [0, 1]");
      }
      DiscreteOrderSheaf sheaf(cycle_graph(3), full_visibility(3, 3), 3);
      TotalOrder consensus({A, B, C});
      TotalOrder second = t >= 1.0 / 3.0 ? consensus : TotalOrder({B, C, A});
      TotalOrder third = t >= 2.0 / 3.0 ? consensus : TotalOrder({C, A, B});
      PreferenceProfile profile(sheaf, {consensus, second, third});
      return {std::move(sheaf), std::move(profile)};
    }
  }
  throw Error(ErrorCode::Lookup, "unknown catalog example");
}

InteractionGraph catalog_topology(TopologyName name) {
  switch (name) {
    case TopologyName::C3: return cycle_graph(3);
    case TopologyName::C4: return cycle_graph(4);
    case TopologyName::C5: return cycle_graph(5);
    case TopologyName::K3: return complete_graph(3);
    case TopologyName::K4: return complete_graph(4);
    case TopologyName::P4:
      return InteractionGraph(4, {Edge{0, 1}, Edge{1, 2}, Edge{2, 3}});
    case TopologyName::S4:
      return InteractionGraph(4, {Edge{0, 1}, Edge{0, 2}, Edge{0, 3}});
  }
  throw Error(ErrorCode::Lookup, "unknown catalog topology");
}

const char* to_string(ExampleName name) noexcept {
  switch (name) {
    case ExampleName::CondorcetTriangle: return "condorcet_triangle";
    case ExampleName::TransitiveTriangle: return "transitive_triangle";
    case ExampleName::PartialVisibility: return "partial_visibility";
    case ExampleName::CompleteK4: return "complete_k4";
    case ExampleName::DeterministicFamily: return "deterministic_family";
  }
  return "unknown";
}

const char* to_string(TopologyName name) noexcept {
  switch (name) {
    case TopologyName::C3: return "c3";
    case TopologyName::C4: return "c4";
    case TopologyName::C5: return "c5";
    case TopologyName::K3: return "k3";
    case TopologyName::K4: return "k4";
    case TopologyName::P4: return "p4";
    case TopologyName::S4: return "s4";
  }
  return "unknown";
}

std::optional<ExampleName> example_from_string(std::string_view text) noexcept {
  for (ExampleName name : {ExampleName::CondorcetTriangle, ExampleName::TransitiveTriangle,
                           ExampleName::PartialVisibility, ExampleName::CompleteK4,
                           ExampleName::DeterministicFamily}) {
    if (text == to_string(name)) return name;
  }
  return std::nullopt;
}

std::optional<TopologyName> topology_from_string(std::string_view text) noexcept {
  for (TopologyName name : {TopologyName::C3, TopologyName::C4, TopologyName::C5,
                            TopologyName::K3, TopologyName::K4, TopologyName::P4,
                            TopologyName::S4}) {
    if (text == to_string(name)) return name;
  }
  return std::nullopt;
}

}  // namespace ordersheaf
