#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "ordersheaf/error.hpp"
#include "ordersheaf/obstruction.hpp"
#include "ordersheaf/pushforward.hpp"
#include "ordersheaf/sheaf.hpp"
#include "support/generators.hpp"

using namespace ordersheaf;
using ordersheaf::testing::code_of;

TEST_CASE("QuotientMap validates density and surjectivity") {
  InteractionGraph graph(3, {make_edge(0, 1), make_edge(1, 2)});
  CHECK(code_of([&] { QuotientMap(graph, {0, 1}); }) == ErrorCode::Validation);
  CHECK(code_of([&] { QuotientMap(graph, {0, 2, 2}); }) == ErrorCode::Validation);
  CHECK(code_of([&] { QuotientMap(graph, {0, -1, 1}); }) == ErrorCode::Validation);

  QuotientMap identity = QuotientMap::identity(graph);
  CHECK(identity.target().vertex_count() == 3);
  CHECK(identity.target().edges() == graph.edges());

  QuotientMap merged(graph, {0, 0, 1});
  CHECK(merged.target().vertex_count() == 2);
  CHECK(merged.target().edges() == std::vector<Edge>{{0, 1}});  // self-loop dropped, dedup
  CHECK(merged.image_of(2) == 1);
  CHECK(merged.preimage_of(0) == std::vector<VertexId>{0, 1});
}

TEST_CASE("merge_block assigns target ids by first appearance") {
  InteractionGraph graph(4, {make_edge(0, 1), make_edge(1, 2), make_edge(2, 3)});
  std::vector<VertexId> block{1, 3};
  QuotientMap quotient = QuotientMap::merge_block(graph, block);
  CHECK(quotient.vertex_map() == std::vector<VertexId>{0, 1, 2, 1});
  CHECK(quotient.target().vertex_count() == 3);
  CHECK(code_of([&] { QuotientMap::merge_block(graph, std::vector<VertexId>{}); }) ==
        ErrorCode::Validation);
  CHECK(code_of([&] { QuotientMap::merge_block(graph, std::vector<VertexId>{0, 4}); }) ==
        ErrorCode::Validation);
}

TEST_CASE("constraint graph from the merged Condorcet pair") {
  const TotalOrder orders[] = {TotalOrder({0, 1, 2}), TotalOrder({1, 2, 0})};
  ConstraintDag dag = build_constraint_dag(orders);
  CHECK(dag.nodes() == std::vector<AltId>{0, 1, 2});
  REQUIRE(dag.arcs() == std::vector<Arc>{{0, 1}, {1, 2}, {2, 0}});
  CHECK(std::vector<VertexId>(dag.provenance(0).begin(), dag.provenance(0).end()) ==
        std::vector<VertexId>{0});
  CHECK(std::vector<VertexId>(dag.provenance(1).begin(), dag.provenance(1).end()) ==
        std::vector<VertexId>{0, 1});
  CHECK(std::vector<VertexId>(dag.provenance(2).begin(), dag.provenance(2).end()) ==
        std::vector<VertexId>{1});
  CHECK(dag.has_arc({2, 0}));
  CHECK(!dag.has_arc({0, 2}));
  CHECK(dag.estimated_bytes() > 0);
}

TEST_CASE("arcs_from slices are correct even for sinks") {
  const TotalOrder orders[] = {TotalOrder({0, 1, 2})};
  ConstraintDag dag = build_constraint_dag(orders);
  CHECK(dag.arcs_from(0).size() == 1);
  CHECK(dag.arcs_from(2).empty());  // sink
  CHECK(dag.arcs_from(99).empty());
}

TEST_CASE("detect_cycle finds the Condorcet cycle and verifies it") {
  const TotalOrder orders[] = {TotalOrder({0, 1, 2}), TotalOrder({1, 2, 0})};
  ConstraintDag dag = build_constraint_dag(orders);
  auto cycle = detect_cycle(dag);
  REQUIRE(cycle.has_value());
  CHECK(*cycle == std::vector<AltId>{0, 1, 2});
  CHECK(ordersheaf::testing::verify_cycle(dag, *cycle));
}

TEST_CASE("detect_cycle is silent on compatible orders") {
  const TotalOrder orders[] = {TotalOrder({0, 1, 2, 3}), TotalOrder({0, 2, 3})};
  ConstraintDag dag = build_constraint_dag(orders);
  CHECK(!detect_cycle(dag).has_value());
}

TEST_CASE("reported cycles on random conflicting inputs always verify") {
  std::mt19937_64 rng(101);
  int cycles_seen = 0;
  for (int trial = 0; trial < 300; ++trial) {
    ordersheaf::testing::MergeCase mc = ordersheaf::testing::random_merge_case(6, 4, rng);
    ConstraintDag dag = build_constraint_dag(mc.orders);
    auto cycle = detect_cycle(dag);
    if (cycle.has_value()) {
      ++cycles_seen;
      CHECK(ordersheaf::testing::verify_cycle(dag, *cycle));
    }
  }
  CHECK(cycles_seen > 50);  // the sweep genuinely exercises the cyclic branch
}

TEST_CASE("cycle search work grows linearly along chains") {
  // A single order of length n yields n nodes and n-1 arcs; the search must
  // touch each once.
  for (int n : {4, 8}) {
    std::vector<AltId> ranking(static_cast<std::size_t>(n));
    std::iota(ranking.begin(), ranking.end(), 0);
    const TotalOrder orders[] = {TotalOrder(ranking)};
    ConstraintDag dag = build_constraint_dag(orders);
    CycleSearchStats stats;
    CHECK(!detect_cycle(dag, &stats).has_value());
    CHECK(stats.nodes_visited == static_cast<std::size_t>(n));
    CHECK(stats.arcs_scanned == static_cast<std::size_t>(n - 1));
  }
}

TEST_CASE("linear extension counting identities") {
  // No arcs: every permutation extends.
  ConstraintDag free_dag({0, 1, 2, 3}, {}, {});
  CHECK(count_linear_extensions(free_dag) == 24);

  // A chain forces a single extension.
  const TotalOrder chain[] = {TotalOrder({3, 1, 0, 2})};
  ConstraintDag chain_dag = build_constraint_dag(chain);
  CHECK(count_linear_extensions(chain_dag) == 1);
  CHECK(enumerate_linear_extensions(chain_dag) == std::vector<TotalOrder>{TotalOrder({3, 1, 0, 2})});

  // Two disjoint forced pairs on four alternatives: 4!/(2*2) = 6.
  ConstraintDag pairs({0, 1, 2, 3}, {{0, 1}, {2, 3}}, {{0}, {1}});
  CHECK(count_linear_extensions(pairs) == 6);

  // Cyclic input is rejected.
  ConstraintDag cyclic({0, 1}, {{0, 1}, {1, 0}}, {{0}, {1}});
  CHECK(code_of([&] { count_linear_extensions(cyclic); }) == ErrorCode::Validation);
  CHECK(code_of([&] { enumerate_linear_extensions(cyclic); }) == ErrorCode::Validation);
  CHECK(code_of([&] { topological_witness(cyclic); }) == ErrorCode::Validation);

  // Capacity guard beyond the enumeration threshold.
  std::vector<AltId> big(static_cast<std::size_t>(kStalkEnumerationThreshold) + 1);
  std::iota(big.begin(), big.end(), 0);
  ConstraintDag big_dag(big, {}, {});
  CHECK(code_of([&] { count_linear_extensions(big_dag); }) == ErrorCode::Capacity);
}

TEST_CASE("enumerated extensions are exactly the arc-respecting orders") {
  std::mt19937_64 rng(113);
  for (int trial = 0; trial < 200; ++trial) {
    // Random subsets of one ambient order always yield an acyclic dag.
    const TotalOrder ambient = ordersheaf::testing::random_order_on(
        ordersheaf::testing::random_subset(6, 2, rng), rng);
    std::vector<TotalOrder> orders;
    const int k = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < k; ++i) {
      std::vector<AltId> subset = ambient.domain();
      std::shuffle(subset.begin(), subset.end(), rng);
      subset.resize(1 + static_cast<std::size_t>(rng() % subset.size()));
      std::sort(subset.begin(), subset.end());
      orders.push_back(ambient.restricted_to(subset));
    }
    ConstraintDag dag = build_constraint_dag(orders);
    std::vector<TotalOrder> extensions = enumerate_linear_extensions(dag);
    CHECK(extensions.size() == count_linear_extensions(dag));
    CHECK(std::is_sorted(extensions.begin(), extensions.end()));
    CHECK(!extensions.empty());
    CHECK(topological_witness(dag) == extensions.front());

    std::vector<TotalOrder> expected;
    for (const TotalOrder& candidate : all_total_orders(dag.nodes())) {
      if (ordersheaf::testing::satisfies_all_arcs(dag, candidate)) expected.push_back(candidate);
    }
    CHECK(extensions == expected);
  }
}

TEST_CASE("merged stalk matches the naive oracle across a random sweep") {
  std::mt19937_64 rng(127);
  int empties = 0;
  for (int trial = 0; trial < 200; ++trial) {
    ordersheaf::testing::MergeCase mc = ordersheaf::testing::random_merge_case(6, 4, rng);
    ordersheaf::testing::MergedInstance merged = ordersheaf::testing::merged_instance(mc, 6);
    StalkComputation detailed =
        compute_stalk_detailed(merged.quotient, merged.sheaf, merged.profile, 0);
    PushforwardStalk naive = naive_stalk_oracle(mc.orders, mc.alphabet);

    CHECK(detailed.stalk.status == naive.status);
    CHECK(detailed.stalk.alternatives == mc.alphabet);
    if (detailed.stalk.status == PushforwardStalk::Status::Empty) {
      ++empties;
      CHECK(ordersheaf::testing::verify_cycle(detailed.dag, detailed.stalk.cycle_witness));
      CHECK(!detailed.stalk.witness.has_value());
    } else {
      REQUIRE(detailed.stalk.witness.has_value());
      REQUIRE(detailed.stalk.enumeration.has_value());
      REQUIRE(naive.enumeration.has_value());
      CHECK(*detailed.stalk.enumeration == *naive.enumeration);
      CHECK(detailed.stalk.extension_count == naive.extension_count);
      CHECK(detailed.stalk.witness == detailed.stalk.enumeration->front());
    }
  }
  CHECK(empties > 20);
}

TEST_CASE("naive oracle on disjoint forced pairs") {
  const TotalOrder orders[] = {TotalOrder({0, 1}), TotalOrder({2, 3})};
  const std::vector<AltId> alphabet{0, 1, 2, 3};
  PushforwardStalk stalk = naive_stalk_oracle(orders, alphabet);
  CHECK(stalk.status == PushforwardStalk::Status::NonEmpty);
  REQUIRE(stalk.enumeration.has_value());
  CHECK(stalk.enumeration->size() == 6);
  CHECK(stalk.extension_count == 6);
}

TEST_CASE("merging the identical pair keeps exactly the shared order") {
  CatalogInstance k4 = catalog_example(ExampleName::CompleteK4);
  std::vector<VertexId> block{0, 3};
  QuotientMap quotient = QuotientMap::merge_block(k4.sheaf.graph(), block);
  PushforwardStalk stalk = compute_stalk(quotient, k4.sheaf, k4.profile, 0);
  CHECK(stalk.status == PushforwardStalk::Status::NonEmpty);
  REQUIRE(stalk.enumeration.has_value());
  CHECK(*stalk.enumeration == std::vector<TotalOrder>{TotalOrder({0, 1, 2})});
}

TEST_CASE("quotient report for the merged identical pair keeps all three conflicts") {
  CatalogInstance k4 = catalog_example(ExampleName::CompleteK4);
  QuotientMap quotient = QuotientMap::merge_block(k4.sheaf.graph(), std::vector<VertexId>{0, 3});
  PushforwardReport report = pushforward_report(quotient, k4.sheaf, k4.profile);
  CHECK(report.stalks.size() == 3);
  CHECK(report.empty_stalk_vertices.empty());
  CHECK(report.incompatibility_index == 3);
  CHECK(!report.h0_exists);
  for (const QuotientEdgeDiagnostic& diag : report.per_edge) {
    CHECK(!diag.compatible);
    CHECK(diag.full_edge_stalk_size == 6);
    REQUIRE(diag.common_restrictions.has_value());
    CHECK(diag.common_restrictions->empty());
  }
}

TEST_CASE("quotient report under the identity map mirrors the edge scan") {
  std::mt19937_64 rng(139);
  for (int trial = 0; trial < 120; ++trial) {
    ordersheaf::testing::RandomInstance instance =
        ordersheaf::testing::random_instance(5, 5, rng);
    QuotientMap identity = QuotientMap::identity(instance.sheaf.graph());
    PushforwardReport pushed = pushforward_report(identity, instance.sheaf, instance.profile);
    ObstructionReport direct = compute_obstruction(instance.sheaf, instance.profile);

    CHECK(pushed.empty_stalk_vertices.empty());
    CHECK(pushed.incompatibility_index == direct.incompatibility_index);
    CHECK(pushed.obstructed_edges == direct.obstructed_edges);
    CHECK(pushed.h0_exists == direct.h0_exists);
    for (std::size_t v = 0; v < pushed.stalks.size(); ++v) {
      const PushforwardStalk& stalk = pushed.stalks[v];
      CHECK(stalk.status == PushforwardStalk::Status::NonEmpty);
      REQUIRE(stalk.enumeration.has_value());
      CHECK(*stalk.enumeration ==
            std::vector<TotalOrder>{instance.profile.order_of(static_cast<VertexId>(v))});
    }
  }
}

TEST_CASE("quotient edge compatibility equals nonempty intersection of restrictions") {
  std::mt19937_64 rng(149);
  for (int trial = 0; trial < 150; ++trial) {
    // Two merged blocks over a shared universe, joined by one target edge.
    const int m = 4 + static_cast<int>(rng() % 3);
    ordersheaf::testing::MergeCase left = ordersheaf::testing::random_merge_case(m, 3, rng);
    ordersheaf::testing::MergeCase right = ordersheaf::testing::random_merge_case(m, 3, rng);
    const int nl = static_cast<int>(left.orders.size());
    const int nr = static_cast<int>(right.orders.size());

    std::vector<Edge> edges;
    for (int a = 0; a < nl; ++a) {
      for (int b = 0; b < nr; ++b) edges.push_back(make_edge(a, nl + b));
    }
    InteractionGraph graph(nl + nr, std::move(edges));
    std::vector<std::vector<AltId>> visibility;
    std::vector<TotalOrder> orders;
    for (const TotalOrder& order : left.orders) {
      visibility.push_back(order.domain());
      orders.push_back(order);
    }
    for (const TotalOrder& order : right.orders) {
      visibility.push_back(order.domain());
      orders.push_back(order);
    }
    DiscreteOrderSheaf sheaf(std::move(graph), std::move(visibility), m);
    PreferenceProfile profile(sheaf, std::move(orders));

    std::vector<VertexId> map(static_cast<std::size_t>(nl + nr), 0);
    for (int b = 0; b < nr; ++b) map[static_cast<std::size_t>(nl + b)] = 1;
    QuotientMap quotient(sheaf.graph(), std::move(map));
    PushforwardReport report = pushforward_report(quotient, sheaf, profile);
    REQUIRE(report.per_edge.size() == 1);
    const QuotientEdgeDiagnostic& diag = report.per_edge[0];

    const PushforwardStalk& su = report.stalks[0];
    const PushforwardStalk& sv = report.stalks[1];
    if (su.status == PushforwardStalk::Status::Empty ||
        sv.status == PushforwardStalk::Status::Empty || diag.overlap.size() < 2) {
      CHECK(diag.vacuous);
      CHECK(diag.compatible);
      continue;
    }

    // Independent oracle: intersect the restriction images of both stalks.
    REQUIRE(su.enumeration.has_value());
    REQUIRE(sv.enumeration.has_value());
    std::vector<TotalOrder> left_restr;
    for (const TotalOrder& t : *su.enumeration) left_restr.push_back(t.restricted_to(diag.overlap));
    std::vector<TotalOrder> right_restr;
    for (const TotalOrder& t : *sv.enumeration) {
      right_restr.push_back(t.restricted_to(diag.overlap));
    }
    std::sort(left_restr.begin(), left_restr.end());
    left_restr.erase(std::unique(left_restr.begin(), left_restr.end()), left_restr.end());
    std::sort(right_restr.begin(), right_restr.end());
    right_restr.erase(std::unique(right_restr.begin(), right_restr.end()), right_restr.end());
    std::vector<TotalOrder> common;
    std::set_intersection(left_restr.begin(), left_restr.end(), right_restr.begin(),
                          right_restr.end(), std::back_inserter(common));

    CHECK(diag.compatible == !common.empty());
    REQUIRE(diag.common_restrictions.has_value());
    CHECK(*diag.common_restrictions == common);
  }
}

TEST_CASE("conflicting restrictions on a pairwise overlap force an empty merged stalk") {
  std::mt19937_64 rng(151);
  for (int trial = 0; trial < 300; ++trial) {
    // Two orders over overlapping domains whose restrictions to the overlap
    // are deliberately reversed; the merged stalk must come out empty.
    const int m = 4 + static_cast<int>(rng() % 3);
    std::vector<AltId> dom1 = ordersheaf::testing::random_subset(m, 2, rng);
    std::vector<AltId> dom2 = ordersheaf::testing::random_subset(m, 2, rng);
    std::vector<AltId> shared = id_intersection(dom1, dom2);
    if (shared.size() < 2) continue;

    TotalOrder first = ordersheaf::testing::random_order_on(dom1, rng);
    std::vector<AltId> target = first.restricted_to(shared).ranking();
    std::reverse(target.begin(), target.end());

    // Random order on dom2, then rewrite the shared elements in place so its
    // restriction to the overlap equals the reversed target.
    std::vector<AltId> ranking2 = ordersheaf::testing::random_order_on(dom2, rng).ranking();
    std::size_t next = 0;
    for (AltId& slot : ranking2) {
      if (std::binary_search(shared.begin(), shared.end(), slot)) slot = target[next++];
    }
    TotalOrder second(std::move(ranking2));
    REQUIRE(second.restricted_to(shared) != first.restricted_to(shared));

    std::vector<TotalOrder> orders{first, second};
    std::vector<AltId> alphabet = id_union(first.domain(), second.domain());
    ordersheaf::testing::MergeCase mc{orders, alphabet};
    ordersheaf::testing::MergedInstance merged = ordersheaf::testing::merged_instance(mc, m);
    PushforwardStalk stalk = compute_stalk(merged.quotient, merged.sheaf, merged.profile, 0);
    CHECK(stalk.status == PushforwardStalk::Status::Empty);
  }
}
