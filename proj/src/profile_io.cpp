#include "ordersheaf/profile_io.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ordersheaf/error.hpp"

namespace ordersheaf {
namespace {

using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

void expect_object(const ojson& value, const std::string& path) {
  if (!value.is_object()) fail(ErrorCode::Validation, path + " must be an object");
}

void expect_array(const ojson& value, const std::string& path) {
  if (!value.is_array()) fail(ErrorCode::Validation, path + " must be an array");
}

std::string expect_string(const ojson& value, const std::string& path) {
  if (!value.is_string()) fail(ErrorCode::Validation, path + " must be a string");
  return value.get<std::string>();
}

const ojson& member(const ojson& object, const char* key, const std::string& path) {
  if (!object.contains(key)) {
    fail(ErrorCode::Validation, path + ": missing required field \"" + key + "\"");
  }
  return object.at(key);
}

void reject_unknown_keys(const ojson& object, std::initializer_list<const char*> known,
                         const std::string& path) {
  for (const auto& item : object.items()) {
    bool found = false;
    for (const char* key : known) {
      if (item.key() == key) {
        found = true;
        break;
      }
    }
    if (!found) fail(ErrorCode::Validation, path + ": unknown field \"" + item.key() + "\"");
  }
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

const std::string& label_of(const NamedInstance& instance, AltId id) {
  return instance.alternative_labels.at(static_cast<std::size_t>(id));
}

ojson labels_json(const NamedInstance& instance, std::span<const AltId> ids) {
  ojson out = ojson::array();
  for (AltId id : ids) out.push_back(label_of(instance, id));
  return out;
}

ojson order_json(const NamedInstance& instance, const TotalOrder& order) {
  return labels_json(instance, order.ranking());
}

ojson edge_json(std::span<const std::string> names, Edge e) {
  return ojson::array({names[static_cast<std::size_t>(e.u)], names[static_cast<std::size_t>(e.v)]});
}

std::string joined_labels(const NamedInstance& instance, std::span<const AltId> ids,
                          const char* separator) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += separator;
    out += label_of(instance, ids[i]);
  }
  return out;
}

std::int64_t histogram_bucket(const std::vector<std::int64_t>& histogram, std::size_t k) {
  return k < histogram.size() ? histogram[k] : 0;
}

void append_cells(std::string& out, std::span<const std::string> cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_escape(cells[i]);
  }
  out += '\n';
}

std::string bool_cell(bool value) { return value ? "true" : "false"; }

}  // namespace

std::string format_significant(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

std::string default_alternative_label(AltId id) {
  if (id >= 0 && id < 26) return std::string(1, static_cast<char>('A' + id));
  return "a" + std::to_string(id);
}

NamedInstance parse_profile(const std::string& json_text) {
  ojson doc;
  try {
    doc = ojson::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::ParseSyntax, e.what());
  }
  expect_object(doc, "document root");
  reject_unknown_keys(doc, {"alternatives", "voters", "edges", "quotient"}, "document root");

  // Alternatives: unique labels; ids follow declaration order.
  const ojson& alternatives = member(doc, "alternatives", "document root");
  expect_array(alternatives, "alternatives");
  if (alternatives.empty()) fail(ErrorCode::Validation, "alternatives must be nonempty");
  std::vector<std::string> alternative_labels;
  std::unordered_map<std::string, AltId> alt_of;
  for (std::size_t i = 0; i < alternatives.size(); ++i) {
    std::string label =
        expect_string(alternatives[i], "alternatives[" + std::to_string(i) + "]");
    if (!alt_of.emplace(label, static_cast<AltId>(i)).second) {
      fail(ErrorCode::Validation, "duplicate alternative label \"" + label + "\"");
    }
    alternative_labels.push_back(std::move(label));
  }

  // Voters: name, visibility, order. Ids follow declaration order.
  const ojson& voters = member(doc, "voters", "document root");
  expect_array(voters, "voters");
  if (voters.empty()) fail(ErrorCode::Validation, "voters must be nonempty");
  std::vector<std::string> voter_names;
  std::unordered_map<std::string, VertexId> voter_of;
  std::vector<std::vector<AltId>> visibility;
  std::vector<TotalOrder> orders;
  for (std::size_t v = 0; v < voters.size(); ++v) {
    const std::string path = "voters[" + std::to_string(v) + "]";
    const ojson& voter = voters[v];
    expect_object(voter, path);
    reject_unknown_keys(voter, {"name", "visibility", "order"}, path);

    std::string name = expect_string(member(voter, "name", path), path + ".name");
    if (!voter_of.emplace(name, static_cast<VertexId>(v)).second) {
      fail(ErrorCode::DuplicateVoter, "duplicate voter name \"" + name + "\"");
    }
    voter_names.push_back(std::move(name));

    const ojson& vis = member(voter, "visibility", path);
    expect_array(vis, path + ".visibility");
    std::vector<AltId> vis_ids;
    for (std::size_t i = 0; i < vis.size(); ++i) {
      const std::string cell = path + ".visibility[" + std::to_string(i) + "]";
      std::string label = expect_string(vis[i], cell);
      auto it = alt_of.find(label);
      if (it == alt_of.end()) {
        fail(ErrorCode::UnknownLabel, cell + ": unknown alternative \"" + label + "\"");
      }
      vis_ids.push_back(it->second);
    }
    std::vector<AltId> vis_sorted = vis_ids;
    std::sort(vis_sorted.begin(), vis_sorted.end());
    if (std::adjacent_find(vis_sorted.begin(), vis_sorted.end()) != vis_sorted.end()) {
      fail(ErrorCode::Validation, path + ".visibility has a repeated alternative");
    }
    if (vis_sorted.empty()) fail(ErrorCode::Validation, path + ".visibility must be nonempty");

    const ojson& order = member(voter, "order", path);
    expect_array(order, path + ".order");
    std::vector<AltId> ranking;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const std::string cell = path + ".order[" + std::to_string(i) + "]";
      std::string label = expect_string(order[i], cell);
      auto it = alt_of.find(label);
      if (it == alt_of.end()) {
        fail(ErrorCode::UnknownLabel, cell + ": unknown alternative \"" + label + "\"");
      }
      ranking.push_back(it->second);
    }
    std::vector<AltId> ranking_sorted = ranking;
    std::sort(ranking_sorted.begin(), ranking_sorted.end());
    if (ranking_sorted != vis_sorted) {
      fail(ErrorCode::OrderNotPermutation,
           path + ".order must be a permutation of " + path + ".visibility");
    }

    visibility.push_back(std::move(vis_sorted));
    orders.emplace_back(std::move(ranking));
  }

  // Edges: pairs of declared voter names, no self-loops, no duplicates.
  const ojson& edges_json = member(doc, "edges", "document root");
  expect_array(edges_json, "edges");
  std::vector<Edge> edges;
  std::set<Edge> seen;
  for (std::size_t e = 0; e < edges_json.size(); ++e) {
    const std::string path = "edges[" + std::to_string(e) + "]";
    const ojson& pair = edges_json[e];
    expect_array(pair, path);
    if (pair.size() != 2) fail(ErrorCode::Validation, path + " must hold exactly two voter names");
    VertexId endpoints[2];
    for (int side = 0; side < 2; ++side) {
      std::string name = expect_string(pair[side], path + "[" + std::to_string(side) + "]");
      auto it = voter_of.find(name);
      if (it == voter_of.end()) {
        fail(ErrorCode::DanglingEdge, path + ": unknown voter \"" + name + "\"");
      }
      endpoints[side] = it->second;
    }
    if (endpoints[0] == endpoints[1]) {
      fail(ErrorCode::Validation, path + " joins a voter to itself");
    }
    Edge edge = make_edge(endpoints[0], endpoints[1]);
    if (!seen.insert(edge).second) fail(ErrorCode::Validation, path + " repeats an earlier edge");
    edges.push_back(edge);
  }

  InteractionGraph graph(static_cast<int>(voter_names.size()), std::move(edges));
  DiscreteOrderSheaf sheaf(std::move(graph), std::move(visibility),
                           static_cast<int>(alternative_labels.size()));
  PreferenceProfile profile(sheaf, std::move(orders));

  NamedInstance instance{std::move(sheaf), std::move(profile), std::move(alternative_labels),
                         std::move(voter_names), std::nullopt, {}};

  // Quotient: a total map from voter names to target names. Target ids follow
  // first appearance in voter id order.
  if (doc.contains("quotient")) {
    const ojson& quotient = doc.at("quotient");
    if (!quotient.is_object()) fail(ErrorCode::InvalidQuotient, "quotient must be an object");
    std::unordered_map<std::string, std::string> target_of;
    for (const auto& item : quotient.items()) {
      if (voter_of.find(item.key()) == voter_of.end()) {
        fail(ErrorCode::InvalidQuotient, "quotient: unknown voter \"" + item.key() + "\"");
      }
      if (!item.value().is_string()) {
        fail(ErrorCode::InvalidQuotient,
             "quotient[\"" + item.key() + "\"] must be a target name string");
      }
      target_of.emplace(item.key(), item.value().get<std::string>());
    }
    std::vector<VertexId> vertex_map(instance.voter_names.size(), -1);
    std::vector<std::string> target_names;
    std::unordered_map<std::string, VertexId> target_id_of;
    for (std::size_t v = 0; v < instance.voter_names.size(); ++v) {
      auto it = target_of.find(instance.voter_names[v]);
      if (it == target_of.end()) {
        fail(ErrorCode::InvalidQuotient,
             "quotient must map every voter; missing \"" + instance.voter_names[v] + "\"");
      }
      auto [slot, inserted] =
          target_id_of.emplace(it->second, static_cast<VertexId>(target_names.size()));
      if (inserted) target_names.push_back(it->second);
      vertex_map[v] = slot->second;
    }
    instance.quotient.emplace(instance.sheaf.graph(), std::move(vertex_map));
    instance.target_names = std::move(target_names);
  }

  return instance;
}

std::string emit_profile(const NamedInstance& instance) {
  ojson doc;
  doc["alternatives"] = instance.alternative_labels;

  ojson voters = ojson::array();
  const int n = instance.sheaf.graph().vertex_count();
  for (VertexId v = 0; v < n; ++v) {
    ojson voter;
    voter["name"] = instance.voter_names[static_cast<std::size_t>(v)];
    voter["visibility"] = labels_json(instance, instance.sheaf.visibility(v));
    voter["order"] = order_json(instance, instance.profile.order_of(v));
    voters.push_back(std::move(voter));
  }
  doc["voters"] = std::move(voters);

  ojson edges = ojson::array();
  for (Edge e : instance.sheaf.graph().edges()) {
    edges.push_back(edge_json(instance.voter_names, e));
  }
  doc["edges"] = std::move(edges);

  if (instance.quotient.has_value()) {
    ojson quotient;
    const std::vector<VertexId>& map = instance.quotient->vertex_map();
    for (VertexId v = 0; v < n; ++v) {
      quotient[instance.voter_names[static_cast<std::size_t>(v)]] =
          instance.target_names[static_cast<std::size_t>(map[static_cast<std::size_t>(v)])];
    }
    doc["quotient"] = std::move(quotient);
  }

  return doc.dump(2) + "\n";
}

NamedInstance named_catalog_example(ExampleName name, double t) {
  CatalogInstance base = catalog_example(name, t);
  const int alternative_count = base.sheaf.alternative_count();
  const int voter_count = base.sheaf.graph().vertex_count();
  NamedInstance instance{std::move(base.sheaf), std::move(base.profile), {}, {}, std::nullopt, {}};
  for (AltId a = 0; a < alternative_count; ++a) {
    instance.alternative_labels.push_back(default_alternative_label(a));
  }
  for (VertexId v = 0; v < voter_count; ++v) {
    instance.voter_names.push_back("V" + std::to_string(v + 1));
  }
  return instance;
}

NamedInstance with_merge(NamedInstance instance, std::span<const std::string> merge_names,
                         const std::string& merged_name) {
  if (merge_names.size() < 2) {
    fail(ErrorCode::Validation, "a merge needs at least two voters");
  }
  std::vector<VertexId> block;
  for (const std::string& name : merge_names) {
    auto it = std::find(instance.voter_names.begin(), instance.voter_names.end(), name);
    if (it == instance.voter_names.end()) {
      fail(ErrorCode::Validation, "merge list names unknown voter \"" + name + "\"");
    }
    block.push_back(static_cast<VertexId>(it - instance.voter_names.begin()));
  }
  std::sort(block.begin(), block.end());
  if (std::adjacent_find(block.begin(), block.end()) != block.end()) {
    fail(ErrorCode::Validation, "merge list repeats a voter");
  }

  QuotientMap quotient = QuotientMap::merge_block(instance.sheaf.graph(), block);
  const std::vector<VertexId>& map = quotient.vertex_map();
  std::vector<std::string> target_names(
      static_cast<std::size_t>(quotient.target().vertex_count()));
  std::vector<bool> assigned(target_names.size(), false);
  for (std::size_t v = 0; v < map.size(); ++v) {
    const auto tid = static_cast<std::size_t>(map[v]);
    if (assigned[tid]) continue;
    assigned[tid] = true;
    const bool in_block = std::binary_search(block.begin(), block.end(), static_cast<VertexId>(v));
    target_names[tid] = in_block ? merged_name : instance.voter_names[v];
  }
  std::set<std::string> unique(target_names.begin(), target_names.end());
  if (unique.size() != target_names.size()) {
    fail(ErrorCode::Validation,
         "merged name \"" + merged_name + "\" collides with a remaining voter");
  }

  instance.quotient.emplace(std::move(quotient));
  instance.target_names = std::move(target_names);
  return instance;
}

std::string obstruction_report_json(const ObstructionReport& report,
                                    const NamedInstance& instance) {
  ojson j;
  j["h0_exists"] = report.h0_exists;
  j["incompatibility_index"] = report.incompatibility_index;
  ojson obstructed = ojson::array();
  for (Edge e : report.obstructed_edges) obstructed.push_back(edge_json(instance.voter_names, e));
  j["obstructed_edges"] = std::move(obstructed);
  ojson empty_stalks = ojson::array();
  for (VertexId v : report.empty_stalk_vertices) {
    empty_stalks.push_back(instance.voter_names[static_cast<std::size_t>(v)]);
  }
  j["empty_stalk_vertices"] = std::move(empty_stalks);

  ojson edges = ojson::array();
  for (const EdgeDiagnostic& diag : report.per_edge) {
    ojson entry;
    entry["edge"] = edge_json(instance.voter_names, diag.edge);
    entry["overlap"] = labels_json(instance, diag.overlap);
    entry["restriction_u"] =
        diag.restriction_u ? order_json(instance, *diag.restriction_u) : ojson(nullptr);
    entry["restriction_v"] =
        diag.restriction_v ? order_json(instance, *diag.restriction_v) : ojson(nullptr);
    entry["compatible"] = diag.compatible;
    entry["vacuous"] = diag.vacuous;
    edges.push_back(std::move(entry));
  }
  j["edges"] = std::move(edges);
  return j.dump(2) + "\n";
}

std::string obstruction_report_csv(const ObstructionReport& report,
                                   const NamedInstance& instance) {
  std::string out = "edge_u,edge_v,overlap,restriction_u,restriction_v,compatible,vacuous\n";
  for (const EdgeDiagnostic& diag : report.per_edge) {
    const std::string cells[] = {
        instance.voter_names[static_cast<std::size_t>(diag.edge.u)],
        instance.voter_names[static_cast<std::size_t>(diag.edge.v)],
        joined_labels(instance, diag.overlap, " "),
        diag.restriction_u ? joined_labels(instance, diag.restriction_u->ranking(), ">") : "",
        diag.restriction_v ? joined_labels(instance, diag.restriction_v->ranking(), ">") : "",
        bool_cell(diag.compatible),
        bool_cell(diag.vacuous),
    };
    append_cells(out, cells);
  }
  return out;
}

std::string pushforward_report_json(const PushforwardReport& report,
                                    const NamedInstance& instance) {
  if (!instance.quotient.has_value()) {
    fail(ErrorCode::Validation, "pushforward report needs an instance with a quotient");
  }
  const std::vector<std::string>& target_names = instance.target_names;

  ojson j;
  j["h0_exists"] = report.h0_exists;
  j["incompatibility_index"] = report.incompatibility_index;
  ojson empty_stalks = ojson::array();
  for (VertexId v : report.empty_stalk_vertices) {
    empty_stalks.push_back(target_names[static_cast<std::size_t>(v)]);
  }
  j["empty_stalk_vertices"] = std::move(empty_stalks);
  ojson obstructed = ojson::array();
  for (Edge e : report.obstructed_edges) obstructed.push_back(edge_json(target_names, e));
  j["obstructed_edges"] = std::move(obstructed);

  ojson vertices = ojson::array();
  for (std::size_t v = 0; v < report.stalks.size(); ++v) {
    const PushforwardStalk& stalk = report.stalks[v];
    ojson entry;
    entry["name"] = target_names[v];
    ojson preimage = ojson::array();
    for (VertexId source : report.preimages[v]) {
      preimage.push_back(instance.voter_names[static_cast<std::size_t>(source)]);
    }
    entry["preimage"] = std::move(preimage);
    entry["alternatives"] = labels_json(instance, stalk.alternatives);
    entry["status"] = stalk.status == PushforwardStalk::Status::Empty ? "empty" : "nonempty";
    if (!stalk.cycle_witness.empty()) {
      entry["cycle"] = labels_json(instance, stalk.cycle_witness);
    }
    if (stalk.witness.has_value()) entry["witness"] = order_json(instance, *stalk.witness);
    if (stalk.extension_count.has_value()) entry["stalk_size"] = *stalk.extension_count;
    if (stalk.enumeration.has_value()) {
      ojson orders = ojson::array();
      for (const TotalOrder& order : *stalk.enumeration) {
        orders.push_back(order_json(instance, order));
      }
      entry["stalk_orders"] = std::move(orders);
    }
    vertices.push_back(std::move(entry));
  }
  j["vertices"] = std::move(vertices);

  ojson edges = ojson::array();
  for (const QuotientEdgeDiagnostic& diag : report.per_edge) {
    ojson entry;
    entry["edge"] = edge_json(target_names, diag.edge);
    entry["overlap"] = labels_json(instance, diag.overlap);
    entry["compatible"] = diag.compatible;
    entry["vacuous"] = diag.vacuous;
    if (diag.full_edge_stalk_size.has_value()) {
      entry["full_edge_stalk_size"] = *diag.full_edge_stalk_size;
    }
    if (diag.common_restrictions.has_value()) {
      ojson orders = ojson::array();
      for (const TotalOrder& order : *diag.common_restrictions) {
        orders.push_back(order_json(instance, order));
      }
      entry["common_restrictions"] = std::move(orders);
    }
    edges.push_back(std::move(entry));
  }
  j["edges"] = std::move(edges);
  return j.dump(2) + "\n";
}

std::string interpolation_csv(std::span<const InterpolationPoint> curve) {
  std::string out = "t,mean_omega1,std_omega1,consistency_rate,h0,h1,h2,h3\n";
  for (const InterpolationPoint& point : curve) {
    const std::string cells[] = {
        format_significant(point.t),
        format_significant(point.stats.mean_index),
        format_significant(point.stats.std_index),
        format_significant(point.stats.consistency_rate),
        std::to_string(histogram_bucket(point.stats.histogram, 0)),
        std::to_string(histogram_bucket(point.stats.histogram, 1)),
        std::to_string(histogram_bucket(point.stats.histogram, 2)),
        std::to_string(histogram_bucket(point.stats.histogram, 3)),
    };
    append_cells(out, cells);
  }
  return out;
}

std::string family_csv(std::span<const FamilyPoint> curve) {
  std::string out = "t,omega1\n";
  for (const FamilyPoint& point : curve) {
    const std::string cells[] = {
        format_significant(point.t),
        std::to_string(point.incompatibility_index),
    };
    append_cells(out, cells);
  }
  return out;
}

std::string uniform_csv(const TrialStats& stats, TopologyName topology) {
  std::string out =
      "topology,n_trials,mean_omega1,std_omega1,consistency_rate,h0,h1,h2,h3,h4,h5,h6\n";
  std::vector<std::string> cells = {
      to_string(topology),
      std::to_string(stats.n_trials),
      format_significant(stats.mean_index),
      format_significant(stats.std_index),
      format_significant(stats.consistency_rate),
  };
  for (std::size_t k = 0; k <= 6; ++k) {
    cells.push_back(std::to_string(histogram_bucket(stats.histogram, k)));
  }
  append_cells(out, cells);
  return out;
}

std::string bench_csv(std::span<const BenchResult> results) {
  std::string out = "parameter,dag_ms_median,naive_ms,extrapolated_flag,speedup,conflict_rate\n";
  for (const BenchResult& result : results) {
    const std::string cells[] = {
        std::to_string(result.parameter),
        format_significant(result.dag_time.median_ms),
        format_significant(result.naive_ms),
        result.naive_extrapolated ? "1" : "0",
        format_significant(result.speedup),
        format_significant(result.conflict_rate),
    };
    append_cells(out, cells);
  }
  return out;
}

std::string committee_csv(std::span<const CommitteeReport> reports) {
  std::string out =
      "voters,alternatives,edge_probability,merge_size,seed,edge_count,obstructed_count,"
      "incompatibility_rate,obstruction_ms,merged_block,stalk_status,cycle_witness,merge_ms\n";
  for (const CommitteeReport& report : reports) {
    std::string block;
    for (std::size_t i = 0; i < report.merged.size(); ++i) {
      if (i > 0) block += ' ';
      block += std::to_string(report.merged[i]);
    }
    std::string cycle;
    for (std::size_t i = 0; i < report.merged_stalk.cycle_witness.size(); ++i) {
      if (i > 0) cycle += ' ';
      cycle += default_alternative_label(report.merged_stalk.cycle_witness[i]);
    }
    const bool empty = report.merged_stalk.status == PushforwardStalk::Status::Empty;
    const std::string cells[] = {
        std::to_string(report.params.voters),
        std::to_string(report.params.alternatives),
        format_significant(report.params.edge_probability),
        std::to_string(report.params.merge_size),
        std::to_string(report.seed),
        std::to_string(report.edge_count),
        std::to_string(report.obstructed_count),
        format_significant(report.incompatibility_rate),
        format_significant(report.obstruction_ms),
        block,
        empty ? "empty" : "nonempty",
        cycle,
        format_significant(report.merge_ms),
    };
    append_cells(out, cells);
  }
  return out;
}

}  // namespace ordersheaf
