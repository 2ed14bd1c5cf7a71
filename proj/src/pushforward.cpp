#include "ordersheaf/pushforward.hpp"

#include <algorithm>
#include <string>

namespace ordersheaf {

namespace {

std::vector<Edge> derived_target_edges(const InteractionGraph& source,
                                       const std::vector<VertexId>& map) {
  std::vector<Edge> images;
  for (const Edge& e : source.edges()) {
    VertexId iu = map[static_cast<std::size_t>(e.u)];
    VertexId iv = map[static_cast<std::size_t>(e.v)];
    if (iu == iv) continue;  // collapsed edges disappear
    images.push_back(make_edge(iu, iv));
  }
  std::sort(images.begin(), images.end());
  images.erase(std::unique(images.begin(), images.end()), images.end());
  return images;
}

int validated_target_count(const InteractionGraph& source, const std::vector<VertexId>& map) {
  if (map.size() != static_cast<std::size_t>(source.vertex_count())) {
    throw Error(ErrorCode::Validation, "vertex map must cover every source vertex");
  }
  VertexId max_id = -1;
  for (VertexId id : map) {
    if (id < 0) throw Error(ErrorCode::Validation, "target vertex ids must be non-negative");
    max_id = std::max(max_id, id);
  }
  std::vector<bool> hit(static_cast<std::size_t>(max_id) + 1, false);
  for (VertexId id : map) hit[static_cast<std::size_t>(id)] = true;
  for (std::size_t id = 0; id < hit.size(); ++id) {
    if (!hit[id]) {
      throw Error(ErrorCode::Validation,
                  "target vertex ids must be dense: " + std::to_string(id) + " unused");
    }
  }
  return static_cast<int>(max_id) + 1;
}

}  // namespace

QuotientMap::QuotientMap(InteractionGraph source, std::vector<VertexId> vertex_map)
    : source_(std::move(source)),
      map_(std::move(vertex_map)),
      target_(validated_target_count(source_, map_), derived_target_edges(source_, map_)) {}

QuotientMap QuotientMap::identity(const InteractionGraph& graph) {
  std::vector<VertexId> map(static_cast<std::size_t>(graph.vertex_count()));
  for (std::size_t v = 0; v < map.size(); ++v) map[v] = static_cast<VertexId>(v);
  return QuotientMap(graph, std::move(map));
}

QuotientMap QuotientMap::merge_block(const InteractionGraph& graph,
                                     std::span<const VertexId> block) {
  if (block.empty()) {
    throw Error(ErrorCode::Validation, "merge block must name at least one vertex");
  }
  std::vector<bool> in_block(static_cast<std::size_t>(graph.vertex_count()), false);
  for (VertexId v : block) {
    if (v < 0 || v >= graph.vertex_count()) {
      throw Error(ErrorCode::Validation, "merge block names vertex " + std::to_string(v) +
                                             " outside the graph");
    }
    if (in_block[static_cast<std::size_t>(v)]) {
      throw Error(ErrorCode::Validation, "merge block names vertex " + std::to_string(v) + " twice");
    }
    in_block[static_cast<std::size_t>(v)] = true;
  }
  std::vector<VertexId> map(static_cast<std::size_t>(graph.vertex_count()), -1);
  VertexId next = 0;
  VertexId block_id = -1;
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    if (in_block[static_cast<std::size_t>(v)]) {
      if (block_id < 0) block_id = next++;
      map[static_cast<std::size_t>(v)] = block_id;
    } else {
      map[static_cast<std::size_t>(v)] = next++;
    }
  }
  return QuotientMap(graph, std::move(map));
}

VertexId QuotientMap::image_of(VertexId source_vertex) const {
  if (source_vertex < 0 || source_vertex >= source_.vertex_count()) {
    throw Error(ErrorCode::Lookup, "vertex " + std::to_string(source_vertex) + " outside source");
  }
  return map_[static_cast<std::size_t>(source_vertex)];
}

std::vector<VertexId> QuotientMap::preimage_of(VertexId target_vertex) const {
  if (target_vertex < 0 || target_vertex >= target_.vertex_count()) {
    throw Error(ErrorCode::Lookup, "vertex " + std::to_string(target_vertex) + " outside target");
  }
  std::vector<VertexId> members;
  for (std::size_t v = 0; v < map_.size(); ++v) {
    if (map_[v] == target_vertex) members.push_back(static_cast<VertexId>(v));
  }
  return members;
}

ConstraintDag::ConstraintDag(std::vector<AltId> nodes, std::vector<Arc> arcs,
                             std::vector<std::vector<VertexId>> provenance)
    : nodes_(std::move(nodes)), arcs_(std::move(arcs)), provenance_(std::move(provenance)) {
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  if (provenance_.size() != arcs_.size()) {
    throw Error(ErrorCode::Validation, "provenance must annotate every arc");
  }
  if (!std::is_sorted(arcs_.begin(), arcs_.end()) ||
      std::adjacent_find(arcs_.begin(), arcs_.end()) != arcs_.end()) {
    throw Error(ErrorCode::Validation, "arcs must be sorted and unique");
  }
  for (const Arc& arc : arcs_) {
    if (arc.from == arc.to) {
      throw Error(ErrorCode::Validation, "self-arc at alternative " + std::to_string(arc.from));
    }
    if (!std::binary_search(nodes_.begin(), nodes_.end(), arc.from) ||
        !std::binary_search(nodes_.begin(), nodes_.end(), arc.to)) {
      throw Error(ErrorCode::Validation, "arc endpoint outside the node set");
    }
  }
  for (auto& voters : provenance_) std::sort(voters.begin(), voters.end());
}

bool ConstraintDag::has_arc(Arc arc) const noexcept {
  return std::binary_search(arcs_.begin(), arcs_.end(), arc);
}

std::span<const VertexId> ConstraintDag::provenance(std::size_t arc_index) const {
  if (arc_index >= arcs_.size()) {
    throw Error(ErrorCode::Lookup, "arc index " + std::to_string(arc_index) + " out of range");
  }
  return provenance_[arc_index];
}

std::span<const Arc> ConstraintDag::arcs_from(AltId a) const noexcept {
  auto by_from = [](const Arc& x, const Arc& y) { return x.from < y.from; };
  auto lo = std::lower_bound(arcs_.begin(), arcs_.end(), Arc{a, 0}, by_from);
  auto hi = std::upper_bound(lo, arcs_.end(), Arc{a, 0}, by_from);
  return {arcs_.data() + (lo - arcs_.begin()), static_cast<std::size_t>(hi - lo)};
}

std::size_t ConstraintDag::estimated_bytes() const noexcept {
  std::size_t bytes = nodes_.capacity() * sizeof(AltId) + arcs_.capacity() * sizeof(Arc) +
                      provenance_.capacity() * sizeof(std::vector<VertexId>);
  for (const auto& voters : provenance_) bytes += voters.capacity() * sizeof(VertexId);
  return bytes;
}

ConstraintDag build_constraint_dag(std::span<const TotalOrder> orders,
                                   std::span<const VertexId> voters) {
  if (!voters.empty() && voters.size() != orders.size()) {
    throw Error(ErrorCode::Validation, "voter ids must match orders one-to-one");
  }
  std::vector<AltId> nodes;
  std::vector<std::pair<Arc, VertexId>> contributions;
  for (std::size_t k = 0; k < orders.size(); ++k) {
    const auto& ranking = orders[k].ranking();
    VertexId voter = voters.empty() ? static_cast<VertexId>(k) : voters[k];
    nodes.insert(nodes.end(), ranking.begin(), ranking.end());
    for (std::size_t i = 0; i + 1 < ranking.size(); ++i) {
      contributions.push_back({Arc{ranking[i], ranking[i + 1]}, voter});
    }
  }
  std::sort(contributions.begin(), contributions.end());
  std::vector<Arc> arcs;
  std::vector<std::vector<VertexId>> provenance;
  for (const auto& [arc, voter] : contributions) {
    if (arcs.empty() || !(arcs.back() == arc)) {
      arcs.push_back(arc);
      provenance.push_back({voter});
    } else if (provenance.back().back() != voter) {
      provenance.back().push_back(voter);
    }
  }
  return ConstraintDag(std::move(nodes), std::move(arcs), std::move(provenance));
}

std::optional<std::vector<AltId>> detect_cycle(const ConstraintDag& dag, CycleSearchStats* stats) {
  enum class Color : unsigned char { White, Gray, Black };
  const auto& nodes = dag.nodes();
  std::vector<Color> color(nodes.size(), Color::White);
  std::vector<AltId> path;

  auto index_of = [&nodes](AltId a) {
    return static_cast<std::size_t>(
        std::lower_bound(nodes.begin(), nodes.end(), a) - nodes.begin());
  };

  // Classic three-color DFS; the gray path is kept explicitly so the cycle can
  // be cut out of it when a back arc appears.
  std::optional<std::vector<AltId>> found;
  auto visit = [&](auto&& self, AltId a) -> void {
    if (found) return;
    std::size_t ai = index_of(a);
    color[ai] = Color::Gray;
    path.push_back(a);
    if (stats) ++stats->nodes_visited;
    for (const Arc& arc : dag.arcs_from(a)) {
      if (found) return;
      if (stats) ++stats->arcs_scanned;
      std::size_t ti = index_of(arc.to);
      if (color[ti] == Color::Gray) {
        auto start = std::find(path.begin(), path.end(), arc.to);
        found = std::vector<AltId>(start, path.end());
        return;
      }
      if (color[ti] == Color::White) self(self, arc.to);
    }
    if (!found) {
      path.pop_back();
      color[ai] = Color::Black;
    }
  };

  for (AltId root : nodes) {
    if (found) break;
    if (color[index_of(root)] == Color::White) visit(visit, root);
  }
  return found;
}

namespace {

/// Shared guts of count/enumerate: node indexing plus per-node predecessor
/// bitmasks, with the cap and acyclicity checks applied.
struct ExtensionProblem {
  std::vector<AltId> nodes;
  std::vector<unsigned> pred_mask;

  explicit ExtensionProblem(const ConstraintDag& dag) : nodes(dag.nodes()) {
    if (static_cast<int>(nodes.size()) > kStalkEnumerationThreshold) {
      throw Error(ErrorCode::Capacity,
                  "refusing to enumerate extensions over " + std::to_string(nodes.size()) +
                      " alternatives (cap is " + std::to_string(kStalkEnumerationThreshold) + ")");
    }
    if (detect_cycle(dag)) {
      throw Error(ErrorCode::Validation, "constraint graph is cyclic; no linear extensions");
    }
    pred_mask.assign(nodes.size(), 0u);
    for (const Arc& arc : dag.arcs()) {
      std::size_t from = index_of(arc.from);
      std::size_t to = index_of(arc.to);
      pred_mask[to] |= 1u << from;
    }
  }

  std::size_t index_of(AltId a) const {
    return static_cast<std::size_t>(
        std::lower_bound(nodes.begin(), nodes.end(), a) - nodes.begin());
  }
};

}  // namespace

std::uint64_t count_linear_extensions(const ConstraintDag& dag) {
  ExtensionProblem problem(dag);
  const std::size_t n = problem.nodes.size();
  const unsigned full = n == 0 ? 0u : (1u << n) - 1u;
  // ways[placed] = number of orderings of the `placed` set respecting all arcs.
  std::vector<std::uint64_t> ways(static_cast<std::size_t>(full) + 1, 0);
  ways[0] = 1;
  for (unsigned placed = 0; placed <= full; ++placed) {
    if (ways[placed] == 0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      unsigned bit = 1u << i;
      if ((placed & bit) || (problem.pred_mask[i] & ~placed)) continue;
      ways[placed | bit] += ways[placed];
    }
    if (placed == full) break;  // avoid wrap when full == UINT_MAX pattern
  }
  return ways[full];
}

std::vector<TotalOrder> enumerate_linear_extensions(const ConstraintDag& dag) {
  ExtensionProblem problem(dag);
  const std::size_t n = problem.nodes.size();
  std::vector<TotalOrder> out;
  std::vector<AltId> prefix;
  prefix.reserve(n);
  unsigned placed = 0;
  // Candidates are tried in ascending node order, so the output is sorted
  // lexicographically by id sequence.
  auto grow = [&](auto&& self) -> void {
    if (prefix.size() == n) {
      out.emplace_back(prefix);
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      unsigned bit = 1u << i;
      if ((placed & bit) || (problem.pred_mask[i] & ~placed)) continue;
      placed |= bit;
      prefix.push_back(problem.nodes[i]);
      self(self);
      prefix.pop_back();
      placed &= ~bit;
    }
  };
  grow(grow);
  return out;
}

TotalOrder topological_witness(const ConstraintDag& dag) {
  const auto& nodes = dag.nodes();
  const std::size_t n = nodes.size();
  auto index_of = [&nodes](AltId a) {
    return static_cast<std::size_t>(
        std::lower_bound(nodes.begin(), nodes.end(), a) - nodes.begin());
  };
  std::vector<int> indegree(n, 0);
  for (const Arc& arc : dag.arcs()) ++indegree[index_of(arc.to)];
  std::vector<bool> placed(n, false);
  std::vector<AltId> ranking;
  ranking.reserve(n);
  // Kahn's algorithm taking the smallest available id each round; O(n^2 + m)
  // which is fine at stalk sizes.
  for (std::size_t round = 0; round < n; ++round) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!placed[i] && indegree[i] == 0) {
        pick = i;
        break;
      }
    }
    if (pick == n) {
      throw Error(ErrorCode::Validation, "constraint graph is cyclic; no linear extensions");
    }
    placed[pick] = true;
    ranking.push_back(nodes[pick]);
    for (const Arc& arc : dag.arcs_from(nodes[pick])) --indegree[index_of(arc.to)];
  }
  return TotalOrder(std::move(ranking));
}

StalkComputation compute_stalk_detailed(const QuotientMap& quotient,
                                        const DiscreteOrderSheaf& sheaf,
                                        const PreferenceProfile& profile,
                                        VertexId target_vertex) {
  if (sheaf.graph().vertex_count() != quotient.source().vertex_count()) {
    throw Error(ErrorCode::Validation, "quotient source and sheaf graph disagree");
  }
  std::vector<VertexId> preimage = quotient.preimage_of(target_vertex);
  std::vector<TotalOrder> orders;
  orders.reserve(preimage.size());
  std::vector<AltId> alternatives;
  for (VertexId v : preimage) {
    orders.push_back(profile.order_of(v));
    alternatives = id_union(alternatives, sheaf.visibility(v));
  }
  ConstraintDag dag = build_constraint_dag(orders, preimage);

  PushforwardStalk stalk;
  stalk.alternatives = alternatives;
  if (auto cycle = detect_cycle(dag)) {
    stalk.status = PushforwardStalk::Status::Empty;
    stalk.cycle_witness = std::move(*cycle);
  } else {
    stalk.status = PushforwardStalk::Status::NonEmpty;
    stalk.witness = topological_witness(dag);
    if (static_cast<int>(alternatives.size()) <= kStalkEnumerationThreshold) {
      stalk.enumeration = enumerate_linear_extensions(dag);
      stalk.extension_count = count_linear_extensions(dag);
    }
  }
  return {std::move(stalk), std::move(dag), std::move(preimage)};
}

PushforwardStalk compute_stalk(const QuotientMap& quotient, const DiscreteOrderSheaf& sheaf,
                               const PreferenceProfile& profile, VertexId target_vertex) {
  return compute_stalk_detailed(quotient, sheaf, profile, target_vertex).stalk;
}

PushforwardStalk naive_stalk_oracle(std::span<const TotalOrder> preimage_orders,
                                    std::span<const AltId> alphabet) {
  std::vector<AltId> ids(alphabet.begin(), alphabet.end());
  std::sort(ids.begin(), ids.end());
  if (ids.empty() || std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw Error(ErrorCode::DomainViolation, "oracle alphabet must be a nonempty set");
  }
  if (static_cast<int>(ids.size()) > kStalkEnumerationThreshold) {
    throw Error(ErrorCode::Capacity,
                "oracle refuses " + std::to_string(ids.size()) + "! permutations (cap is " +
                    std::to_string(kStalkEnumerationThreshold) + ")");
  }
  for (const TotalOrder& order : preimage_orders) {
    for (AltId a : order.ranking()) {
      if (!std::binary_search(ids.begin(), ids.end(), a)) {
        throw Error(ErrorCode::DomainViolation,
                    "order ranks alternative " + std::to_string(a) + " outside the alphabet");
      }
    }
  }

  // Walk a candidate permutation once per order: the members of the order's
  // domain must show up in exactly the order's sequence.
  auto keeps = [](const std::vector<AltId>& perm, const TotalOrder& order) {
    const auto& want = order.ranking();
    std::size_t next = 0;
    for (AltId a : perm) {
      if (!order.contains(a)) continue;
      if (next >= want.size() || want[next] != a) return false;
      ++next;
    }
    return next == want.size();
  };

  PushforwardStalk stalk;
  stalk.alternatives = ids;
  std::vector<TotalOrder> kept;
  std::vector<AltId> perm = ids;
  do {
    bool ok = true;
    for (const TotalOrder& order : preimage_orders) {
      if (!keeps(perm, order)) {
        ok = false;
        break;
      }
    }
    if (ok) kept.emplace_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  if (kept.empty()) {
    stalk.status = PushforwardStalk::Status::Empty;
  } else {
    stalk.status = PushforwardStalk::Status::NonEmpty;
    stalk.witness = kept.front();
    stalk.extension_count = static_cast<std::uint64_t>(kept.size());
    stalk.enumeration = std::move(kept);
  }
  return stalk;
}

namespace {

std::uint64_t factorial_or_zero(std::size_t n) {
  if (n > 20) return 0;  // would not fit in 64 bits
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Restrictions of a stalk's extensions to `overlap` are exactly the linear
/// extensions of the dag's reachability order restricted to `overlap`. Two
/// stalks share a restriction iff the union of those two partial orders is
/// acyclic, so collect reachable overlap pairs from both dags and cycle-check.
bool common_restriction_exists(const ConstraintDag& dag_u, const ConstraintDag& dag_v,
                               const std::vector<AltId>& overlap) {
  const std::size_t m = overlap.size();
  std::vector<std::vector<bool>> before(m, std::vector<bool>(m, false));

  auto absorb_reachability = [&](const ConstraintDag& dag) {
    for (std::size_t s = 0; s < m; ++s) {
      // Forward search from overlap[s] through the whole dag.
      std::vector<AltId> stack{overlap[s]};
      std::vector<AltId> seen{overlap[s]};
      while (!stack.empty()) {
        AltId a = stack.back();
        stack.pop_back();
        for (const Arc& arc : dag.arcs_from(a)) {
          if (std::find(seen.begin(), seen.end(), arc.to) != seen.end()) continue;
          seen.push_back(arc.to);
          stack.push_back(arc.to);
        }
      }
      for (std::size_t t = 0; t < m; ++t) {
        if (t != s && std::find(seen.begin(), seen.end(), overlap[t]) != seen.end()) {
          before[s][t] = true;
        }
      }
    }
  };
  absorb_reachability(dag_u);
  absorb_reachability(dag_v);

  // Cycle check on the union relation (three-color DFS over m nodes).
  std::vector<int> color(m, 0);
  auto has_cycle = [&](auto&& self, std::size_t s) -> bool {
    color[s] = 1;
    for (std::size_t t = 0; t < m; ++t) {
      if (!before[s][t]) continue;
      if (color[t] == 1) return true;
      if (color[t] == 0 && self(self, t)) return true;
    }
    color[s] = 2;
    return false;
  };
  for (std::size_t s = 0; s < m; ++s) {
    if (color[s] == 0 && has_cycle(has_cycle, s)) return false;
  }
  return true;
}

}  // namespace

PushforwardReport pushforward_report(const QuotientMap& quotient, const DiscreteOrderSheaf& sheaf,
                                     const PreferenceProfile& profile) {
  PushforwardReport report;
  const int targets = quotient.target().vertex_count();
  std::vector<ConstraintDag> dags;
  dags.reserve(static_cast<std::size_t>(targets));
  for (VertexId t = 0; t < targets; ++t) {
    StalkComputation result = compute_stalk_detailed(quotient, sheaf, profile, t);
    if (result.stalk.status == PushforwardStalk::Status::Empty) {
      report.empty_stalk_vertices.push_back(t);
    }
    report.stalks.push_back(std::move(result.stalk));
    report.preimages.push_back(std::move(result.preimage));
    dags.push_back(std::move(result.dag));
  }

  for (const Edge& e : quotient.target().edges()) {
    const PushforwardStalk& su = report.stalks[static_cast<std::size_t>(e.u)];
    const PushforwardStalk& sv = report.stalks[static_cast<std::size_t>(e.v)];
    QuotientEdgeDiagnostic diag;
    diag.edge = e;
    diag.overlap = id_intersection(su.alternatives, sv.alternatives);
    if (std::uint64_t size = factorial_or_zero(diag.overlap.size())) {
      diag.full_edge_stalk_size = size;
    }
    bool empty_endpoint = su.status == PushforwardStalk::Status::Empty ||
                          sv.status == PushforwardStalk::Status::Empty;
    if (empty_endpoint || diag.overlap.size() < 2) {
      diag.vacuous = true;
      diag.compatible = true;
    } else {
      diag.compatible = common_restriction_exists(dags[static_cast<std::size_t>(e.u)],
                                                  dags[static_cast<std::size_t>(e.v)],
                                                  diag.overlap);
    }
    if (!empty_endpoint && !diag.overlap.empty() && su.enumeration && sv.enumeration) {
      // Both sides fully enumerated: expose the shared restrictions themselves.
      std::vector<TotalOrder> ru, rv;
      for (const TotalOrder& tau : *su.enumeration) ru.push_back(tau.restricted_to(diag.overlap));
      for (const TotalOrder& tau : *sv.enumeration) rv.push_back(tau.restricted_to(diag.overlap));
      std::sort(ru.begin(), ru.end());
      ru.erase(std::unique(ru.begin(), ru.end()), ru.end());
      std::sort(rv.begin(), rv.end());
      rv.erase(std::unique(rv.begin(), rv.end()), rv.end());
      std::vector<TotalOrder> common;
      std::set_intersection(ru.begin(), ru.end(), rv.begin(), rv.end(),
                            std::back_inserter(common));
      diag.common_restrictions = std::move(common);
    }
    if (!diag.compatible) report.obstructed_edges.push_back(e);
    report.per_edge.push_back(std::move(diag));
  }

  report.incompatibility_index = static_cast<int>(report.obstructed_edges.size());
  report.h0_exists = report.empty_stalk_vertices.empty() && report.incompatibility_index == 0;
  return report;
}

}  // namespace ordersheaf
