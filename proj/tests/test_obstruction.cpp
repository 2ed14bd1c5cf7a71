#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "ordersheaf/error.hpp"
#include "ordersheaf/obstruction.hpp"
#include "ordersheaf/sheaf.hpp"
#include "support/generators.hpp"

using namespace ordersheaf;
using ordersheaf::testing::code_of;

namespace {

ObstructionReport report_for(ExampleName name) {
  CatalogInstance instance = catalog_example(name);
  return compute_obstruction(instance.sheaf, instance.profile);
}

}  // namespace

TEST_CASE("condorcet triangle: every edge obstructed") {
  ObstructionReport report = report_for(ExampleName::CondorcetTriangle);
  CHECK(!report.h0_exists);
  CHECK(report.incompatibility_index == 3);
  CHECK(report.obstructed_edges == std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}});
  CHECK(report.empty_stalk_vertices.empty());
}

TEST_CASE("transitive triangle: no conflicts anywhere") {
  ObstructionReport report = report_for(ExampleName::TransitiveTriangle);
  CHECK(report.h0_exists);
  CHECK(report.incompatibility_index == 0);
  CHECK(report.obstructed_edges.empty());
  for (const EdgeDiagnostic& diag : report.per_edge) {
    CHECK(diag.compatible);
    CHECK(!diag.vacuous);
  }
}

TEST_CASE("partial visibility: exactly the third-to-first edge conflicts") {
  ObstructionReport report = report_for(ExampleName::PartialVisibility);
  CHECK(!report.h0_exists);
  CHECK(report.incompatibility_index == 1);
  REQUIRE(report.obstructed_edges.size() == 1);
  CHECK(report.obstructed_edges[0] == Edge{0, 2});

  // The conflicting pair restricts to opposite orders on a two-element overlap.
  for (const EdgeDiagnostic& diag : report.per_edge) {
    if (diag.edge == Edge{0, 2}) {
      CHECK(diag.overlap == std::vector<AltId>{0, 2});
      REQUIRE(diag.restriction_u.has_value());
      REQUIRE(diag.restriction_v.has_value());
      CHECK(*diag.restriction_u == TotalOrder({0, 2}));
      CHECK(*diag.restriction_v == TotalOrder({2, 0}));
      CHECK(!diag.compatible);
    } else {
      CHECK(diag.compatible);
    }
  }
}

TEST_CASE("complete four-voter graph: five of six edges obstructed") {
  ObstructionReport report = report_for(ExampleName::CompleteK4);
  CHECK(!report.h0_exists);
  CHECK(report.incompatibility_index == 5);
  // V1 and V4 hold the same order, so {0,3} is the single compatible edge.
  for (const EdgeDiagnostic& diag : report.per_edge) {
    CHECK(diag.compatible == (diag.edge == Edge{0, 3}));
  }
}

TEST_CASE("edges with overlap below two alternatives are vacuously compatible") {
  InteractionGraph graph(3, {make_edge(0, 1), make_edge(1, 2), make_edge(0, 2)});
  // Voter 0 and 2 share one alternative; 0 and 1 share none.
  DiscreteOrderSheaf sheaf(graph, {{0, 1}, {2, 3}, {1, 2}}, 4);
  PreferenceProfile profile(sheaf,
                            {TotalOrder({1, 0}), TotalOrder({3, 2}), TotalOrder({2, 1})});
  ObstructionReport report = compute_obstruction(sheaf, profile);
  CHECK(report.h0_exists);
  CHECK(report.incompatibility_index == 0);
  for (const EdgeDiagnostic& diag : report.per_edge) {
    CHECK(diag.compatible);
    CHECK(diag.vacuous);
    if (diag.overlap.empty()) {
      CHECK(!diag.restriction_u.has_value());
      CHECK(!diag.restriction_v.has_value());
    } else {
      CHECK(diag.restriction_u.has_value());
    }
  }
}

TEST_CASE("report bookkeeping is internally consistent on random instances") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 300; ++trial) {
    ordersheaf::testing::RandomInstance instance =
        ordersheaf::testing::random_instance(6, 5, rng);
    ObstructionReport report = compute_obstruction(instance.sheaf, instance.profile);
    CHECK(report.per_edge.size() ==
          static_cast<std::size_t>(instance.sheaf.graph().edge_count()));
    CHECK(report.incompatibility_index == static_cast<int>(report.obstructed_edges.size()));
    CHECK(std::is_sorted(report.obstructed_edges.begin(), report.obstructed_edges.end()));
    CHECK(report.empty_stalk_vertices.empty());
    CHECK(report.h0_exists == (report.incompatibility_index == 0));
    CHECK(report.h0_exists == global_section_exists(instance.sheaf, instance.profile));
    for (const EdgeDiagnostic& diag : report.per_edge) {
      CHECK(diag.overlap == instance.sheaf.edge_overlap(diag.edge));
      CHECK(diag.vacuous == (diag.overlap.size() < 2));
      if (diag.vacuous) CHECK(diag.compatible);
    }
  }
}

TEST_CASE("profiles with a global section are exactly the enumerated sections") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 40; ++trial) {
    ordersheaf::testing::RandomInstance instance =
        ordersheaf::testing::random_instance(4, 4, rng);
    std::vector<std::vector<TotalOrder>> sections =
        enumerate_global_sections(instance.sheaf);
    const bool is_section =
        std::find(sections.begin(), sections.end(), instance.profile.orders()) != sections.end();
    CHECK(is_section == compute_obstruction(instance.sheaf, instance.profile).h0_exists);
  }
}

TEST_CASE("global sections of the full triangle are the diagonal profiles") {
  CatalogInstance instance = catalog_example(ExampleName::CondorcetTriangle);
  std::vector<std::vector<TotalOrder>> sections = enumerate_global_sections(instance.sheaf);
  REQUIRE(sections.size() == 6);  // one per total order, all three voters equal
  for (const std::vector<TotalOrder>& section : sections) {
    CHECK(section[0] == section[1]);
    CHECK(section[1] == section[2]);
  }
}

TEST_CASE("enumerate_global_sections refuses oversized assignment spaces") {
  // Eight full-visibility voters on four alternatives: 24^8 assignments.
  InteractionGraph graph(8, {});
  std::vector<std::vector<AltId>> visibility(8, {0, 1, 2, 3});
  DiscreteOrderSheaf sheaf(graph, visibility, 4);
  CHECK(code_of([&] { enumerate_global_sections(sheaf); }) == ErrorCode::Capacity);
}

TEST_CASE("cycle_rank counts independent cycles") {
  CHECK(cycle_rank(catalog_topology(TopologyName::K3)) == 1);
  CHECK(cycle_rank(catalog_topology(TopologyName::P4)) == 0);
  CHECK(cycle_rank(catalog_topology(TopologyName::K4)) == 3);
  CHECK(cycle_rank(catalog_topology(TopologyName::S4)) == 0);
  CHECK(cycle_rank(catalog_topology(TopologyName::C5)) == 1);
  CHECK(cycle_rank(InteractionGraph(5, {})) == 0);
  CHECK(cycle_rank(InteractionGraph(4, {make_edge(0, 1), make_edge(2, 3)})) == 0);
}
