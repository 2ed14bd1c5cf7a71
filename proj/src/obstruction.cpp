#include "ordersheaf/obstruction.hpp"

#include <string>

namespace ordersheaf {

ObstructionReport compute_obstruction(const DiscreteOrderSheaf& sheaf,
                                      const PreferenceProfile& profile) {
  ObstructionReport report;
  report.per_edge.reserve(sheaf.graph().edges().size());
  for (const Edge& e : sheaf.graph().edges()) {
    EdgeDiagnostic diag;
    diag.edge = e;
    diag.overlap = sheaf.edge_overlap(e);
    if (!diag.overlap.empty()) {
      diag.restriction_u = profile.order_of(e.u).restricted_to(diag.overlap);
      diag.restriction_v = profile.order_of(e.v).restricted_to(diag.overlap);
    }
    if (diag.overlap.size() < 2) {
      // Too small to disagree on: a single shared alternative (or none) admits
      // exactly one arrangement.
      diag.vacuous = true;
      diag.compatible = true;
    } else {
      diag.compatible = *diag.restriction_u == *diag.restriction_v;
    }
    if (!diag.compatible) report.obstructed_edges.push_back(e);
    report.per_edge.push_back(std::move(diag));
  }
  report.incompatibility_index = static_cast<int>(report.obstructed_edges.size());
  report.h0_exists = report.incompatibility_index == 0;  // plain stalks are never empty
  return report;
}

bool global_section_exists(const DiscreteOrderSheaf& sheaf, const PreferenceProfile& profile) {
  for (const Edge& e : sheaf.graph().edges()) {
    const std::vector<AltId> overlap = sheaf.edge_overlap(e);
    if (overlap.size() < 2) continue;
    if (profile.order_of(e.u).restricted_to(overlap) !=
        profile.order_of(e.v).restricted_to(overlap)) {
      return false;
    }
  }
  return true;
}

std::vector<std::vector<TotalOrder>> enumerate_global_sections(const DiscreteOrderSheaf& sheaf) {
  const int n = sheaf.graph().vertex_count();

  // Materialize each vertex stalk, bounding the full product up front.
  std::vector<std::vector<TotalOrder>> stalks;
  stalks.reserve(static_cast<std::size_t>(n));
  long long assignments = 1;
  for (VertexId v = 0; v < n; ++v) {
    stalks.push_back(all_total_orders(sheaf.visibility(v)));
    assignments *= static_cast<long long>(stalks.back().size());
    if (assignments > kMaxGlobalSectionAssignments) {
      throw Error(ErrorCode::Capacity,
                  "assignment space exceeds " + std::to_string(kMaxGlobalSectionAssignments));
    }
  }

  // Depth-first product walk, pruning on the first incompatible edge touching
  // the vertex just assigned.
  std::vector<std::vector<AltId>> overlaps;
  std::vector<Edge> edges = sheaf.graph().edges();
  overlaps.reserve(edges.size());
  for (const Edge& e : edges) overlaps.push_back(sheaf.edge_overlap(e));

  std::vector<std::vector<TotalOrder>> sections;
  std::vector<const TotalOrder*> chosen(static_cast<std::size_t>(n), nullptr);
  auto extend = [&](auto&& self, VertexId v) -> void {
    if (v == n) {
      std::vector<TotalOrder> section;
      section.reserve(static_cast<std::size_t>(n));
      for (const TotalOrder* order : chosen) section.push_back(*order);
      sections.push_back(std::move(section));
      return;
    }
    for (const TotalOrder& candidate : stalks[static_cast<std::size_t>(v)]) {
      chosen[static_cast<std::size_t>(v)] = &candidate;
      bool ok = true;
      for (std::size_t i = 0; i < edges.size() && ok; ++i) {
        const Edge& e = edges[i];
        if (e.v != v || e.u > v || overlaps[i].size() < 2) continue;
        ok = chosen[static_cast<std::size_t>(e.u)]->restricted_to(overlaps[i]) ==
             candidate.restricted_to(overlaps[i]);
      }
      if (ok) self(self, v + 1);
    }
    chosen[static_cast<std::size_t>(v)] = nullptr;
  };
  extend(extend, 0);
  return sections;
}

int cycle_rank(const InteractionGraph& graph) {
  return graph.edge_count() - graph.vertex_count() + graph.component_count();
}

}  // namespace ordersheaf
