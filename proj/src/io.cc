/*
 * Copyright 2026 The xdual Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "xdual/io.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "xdual/error.h"

namespace xdual {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void SchemaError(const std::string& path,
                              const std::string& message) {
  throw Error(ErrorCode::kSchema, path + ": " + message);
}

std::string Field(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string Index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void CheckObject(const Json& j, const std::string& path,
                 std::initializer_list<const char*> allowed) {
  if (!j.is_object()) SchemaError(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; })) {
      SchemaError(Field(path, key), "unknown field");
    }
  }
}

const Json& Member(const Json& j, const char* key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) SchemaError(Field(path, key), "missing field");
  return *it;
}

std::string AsString(const Json& j, const std::string& path) {
  if (!j.is_string()) SchemaError(path, "expected a string");
  return j.get<std::string>();
}

std::int64_t AsInteger(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) {
    const auto v = j.get<std::uint64_t>();
    if (v > static_cast<std::uint64_t>(
                std::numeric_limits<std::int64_t>::max())) {
      SchemaError(path, "integer out of range");
    }
    return static_cast<std::int64_t>(v);
  }
  if (!j.is_number_integer()) SchemaError(path, "expected an integer");
  return j.get<std::int64_t>();
}

const Json& AsArray(const Json& j, const std::string& path) {
  if (!j.is_array()) SchemaError(path, "expected an array");
  return j;
}

NodeId AsNodeId(const Json& j, const std::string& path) {
  const std::int64_t v = AsInteger(j, path);
  if (v < 0 || v > std::numeric_limits<NodeId>::max()) {
    SchemaError(path, "node id out of range");
  }
  return static_cast<NodeId>(v);
}

FeatureSpace ParseFeatures(const Json& j, const std::string& path) {
  std::vector<Feature> features;
  const Json& array = AsArray(j, path);
  for (std::size_t i = 0; i < array.size(); ++i) {
    const std::string p = Index(path, i);
    CheckObject(array[i], p, {"name", "values"});
    Feature feature;
    feature.name = AsString(Member(array[i], "name", p), Field(p, "name"));
    const std::string vp = Field(p, "values");
    const Json& values = AsArray(Member(array[i], "values", p), vp);
    for (std::size_t k = 0; k < values.size(); ++k) {
      feature.values.push_back(AsString(values[k], Index(vp, k)));
    }
    features.push_back(std::move(feature));
  }
  return FeatureSpace(std::move(features));
}

template <typename LeafValue, typename LeafParser>
BasicTree<LeafValue> ParseTree(const Json& nodes_json, NodeId root,
                               const FeatureSpace& space,
                               const std::string& path, const char* leaf_key,
                               LeafParser&& parse_leaf) {
  std::vector<TreeNode<LeafValue>> nodes;
  const Json& array = AsArray(nodes_json, path);
  for (std::size_t i = 0; i < array.size(); ++i) {
    const std::string p = Index(path, i);
    const Json& j = array[i];
    CheckObject(j, p, {"feature", "children", leaf_key});
    TreeNode<LeafValue> node;
    if (j.contains(leaf_key)) {
      if (j.contains("feature") || j.contains("children")) {
        SchemaError(p, std::string("leaf with '") + leaf_key +
                           "' cannot have 'feature' or 'children'");
      }
      node.leaf = parse_leaf(j[leaf_key], Field(p, leaf_key));
    } else {
      const std::string name =
          AsString(Member(j, "feature", p), Field(p, "feature"));
      const auto f = space.FindFeature(name);
      if (!f) SchemaError(Field(p, "feature"), "unknown feature '" + name + "'");
      node.feature = *f;
      node.children.assign(space.domain_size(*f), kNoNode);
      const std::string cp = Field(p, "children");
      const Json& children = Member(j, "children", p);
      if (!children.is_object()) SchemaError(cp, "expected an object");
      for (const auto& [value, child] : children.items()) {
        const auto v = space.FindValue(*f, value);
        if (!v) {
          SchemaError(Field(cp, value), "unknown category '" + value +
                                            "' of feature '" + name + "'");
        }
        node.children[*v] = AsNodeId(child, Field(cp, value));
      }
    }
    nodes.push_back(std::move(node));
  }
  return BasicTree<LeafValue>(std::move(nodes), root);
}

template <typename LeafValue, typename LeafWriter>
Json WriteNodes(const BasicTree<LeafValue>& tree, const FeatureSpace& space,
                const char* leaf_key, LeafWriter&& write_leaf) {
  Json nodes = Json::array();
  for (const auto& node : tree.nodes()) {
    Json j = Json::object();
    if (node.is_leaf()) {
      j[leaf_key] = write_leaf(node.leaf);
    } else {
      const Feature& feature = space.feature(*node.feature);
      j["feature"] = feature.name;
      Json children = Json::object();
      for (ValueId v = 0; v < node.children.size(); ++v) {
        if (node.children[v] != kNoNode) {
          children[feature.values[v]] = node.children[v];
        }
      }
      j["children"] = std::move(children);
    }
    nodes.push_back(std::move(j));
  }
  return nodes;
}

std::pair<std::size_t, std::size_t> LineAndColumn(std::string_view text,
                                                  std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

std::string FormatDouble(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.3f", value);
  return buffer;
}

}  // namespace

Model ParseModel(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const auto [line, column] = LineAndColumn(text, e.byte);
    throw Error(ErrorCode::kParse,
                "syntax error at line " + std::to_string(line) + ", column " +
                    std::to_string(column) + ": " + e.what());
  }

  CheckObject(root, "model",
              {"format_version", "kind", "features", "classes", "root",
               "nodes", "scale", "trees"});
  const std::int64_t version =
      AsInteger(Member(root, "format_version", ""), "format_version");
  if (version != kModelFormatVersion) {
    SchemaError("format_version",
                "unsupported version " + std::to_string(version));
  }
  FeatureSpace space = ParseFeatures(Member(root, "features", ""), "features");

  std::vector<std::string> classes;
  const Json& classes_json = AsArray(Member(root, "classes", ""), "classes");
  for (std::size_t i = 0; i < classes_json.size(); ++i) {
    classes.push_back(AsString(classes_json[i], Index("classes", i)));
  }
  auto find_class = [&](const std::string& name,
                        const std::string& path) -> std::size_t {
    const auto it = std::find(classes.begin(), classes.end(), name);
    if (it == classes.end()) SchemaError(path, "unknown class '" + name + "'");
    return static_cast<std::size_t>(it - classes.begin());
  };

  const std::string kind = AsString(Member(root, "kind", ""), "kind");
  if (kind == "tree") {
    for (const char* key : {"scale", "trees"}) {
      if (root.contains(key)) SchemaError(key, "not allowed for kind 'tree'");
    }
    const NodeId root_id = AsNodeId(Member(root, "root", ""), "root");
    DecisionTree tree = ParseTree<ClassLabel>(
        Member(root, "nodes", ""), root_id, space, "nodes", "class",
        [&](const Json& j, const std::string& path) {
          return ClassLabel{find_class(AsString(j, path), path)};
        });
    return Model::Create(std::move(space), std::move(classes),
                         std::move(tree));
  }
  if (kind == "ensemble") {
    for (const char* key : {"root", "nodes"}) {
      if (root.contains(key)) {
        SchemaError(key, "not allowed for kind 'ensemble'");
      }
    }
    AdditiveEnsemble ensemble;
    ensemble.scale = AsInteger(Member(root, "scale", ""), "scale");
    ensemble.class_trees.resize(classes.size());
    const Json& trees = AsArray(Member(root, "trees", ""), "trees");
    for (std::size_t t = 0; t < trees.size(); ++t) {
      const std::string p = Index("trees", t);
      CheckObject(trees[t], p, {"class", "root", "nodes"});
      const std::size_t c = find_class(
          AsString(Member(trees[t], "class", p), Field(p, "class")),
          Field(p, "class"));
      const NodeId root_id =
          AsNodeId(Member(trees[t], "root", p), Field(p, "root"));
      ensemble.class_trees[c].push_back(ParseTree<std::int64_t>(
          Member(trees[t], "nodes", p), root_id, space, Field(p, "nodes"),
          "score", [](const Json& j, const std::string& path) {
            return AsInteger(j, path);
          }));
    }
    return Model::Create(std::move(space), std::move(classes),
                         std::move(ensemble));
  }
  SchemaError("kind", "unknown kind '" + kind + "' (expected tree|ensemble)");
}

std::string SerializeModel(const Model& model) {
  const FeatureSpace& space = model.space();
  Json root = Json::object();
  root["format_version"] = kModelFormatVersion;
  root["kind"] = model.is_tree() ? "tree" : "ensemble";
  Json features = Json::array();
  for (const Feature& feature : space.features()) {
    Json f = Json::object();
    f["name"] = feature.name;
    f["values"] = feature.values;
    features.push_back(std::move(f));
  }
  root["features"] = std::move(features);
  root["classes"] = model.classes();

  if (const auto* tree = std::get_if<DecisionTree>(&model.classifier())) {
    root["root"] = tree->root();
    root["nodes"] = WriteNodes(*tree, space, "class", [&](ClassLabel label) {
      return model.class_name(label);
    });
  } else {
    const auto& ensemble = std::get<AdditiveEnsemble>(model.classifier());
    root["scale"] = ensemble.scale;
    Json trees = Json::array();
    for (std::size_t c = 0; c < ensemble.class_trees.size(); ++c) {
      for (const ScoreTree& tree : ensemble.class_trees[c]) {
        Json t = Json::object();
        t["class"] = model.classes()[c];
        t["root"] = tree.root();
        t["nodes"] = WriteNodes(tree, space, "score",
                                [](std::int64_t score) { return score; });
        trees.push_back(std::move(t));
      }
    }
    root["trees"] = std::move(trees);
  }
  return root.dump(2) + "\n";
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, "cannot open '" + path + "'");
  std::ostringstream contents;
  contents << in.rdbuf();
  return contents.str();
}

Model LoadModel(const std::string& path) {
  try {
    return ParseModel(ReadFile(path));
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

namespace {

struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> cells;
};

// Comma-separated cells, double quotes for cells containing commas, quotes
// or newlines. Blank lines are skipped.
std::vector<CsvRecord> SplitCsv(std::string_view text) {
  std::vector<CsvRecord> records;
  CsvRecord current;
  std::string cell;
  std::size_t line = 1;
  bool quoted = false;
  bool any = false;
  current.line = line;
  auto end_cell = [&] {
    current.cells.push_back(std::move(cell));
    cell.clear();
  };
  auto end_record = [&] {
    if (any || !current.cells.empty()) {
      end_cell();
      records.push_back(std::move(current));
    }
    current = CsvRecord{};
    cell.clear();
    any = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        cell += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        any = true;
        break;
      case ',':
        end_cell();
        any = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        current.line = ++line;
        break;
      default:
        cell += c;
        any = true;
    }
  }
  if (quoted) {
    throw Error(ErrorCode::kParse,
                "unterminated quoted cell (line " + std::to_string(line) + ")");
  }
  end_record();
  return records;
}

}  // namespace

std::vector<InstanceRow> ParseInstances(std::string_view text,
                                        const FeatureSpace& space) {
  const std::vector<CsvRecord> records = SplitCsv(text);
  if (records.empty()) throw Error(ErrorCode::kParse, "missing header row");

  const std::vector<std::string>& header = records.front().cells;
  std::vector<FeatureId> column_feature;
  std::vector<bool> seen(space.num_features(), false);
  for (std::size_t col = 0; col < header.size(); ++col) {
    const auto f = space.FindFeature(header[col]);
    if (!f) {
      throw Error(ErrorCode::kParse, "unknown feature '" + header[col] +
                                         "' (header, col " +
                                         std::to_string(col + 1) + ")");
    }
    if (seen[*f]) {
      throw Error(ErrorCode::kParse,
                  "duplicate column '" + header[col] + "' (header)");
    }
    seen[*f] = true;
    column_feature.push_back(*f);
  }
  for (FeatureId f = 0; f < space.num_features(); ++f) {
    if (!seen[f]) {
      throw Error(ErrorCode::kParse, "missing column for feature '" +
                                         space.feature(f).name + "'");
    }
  }

  std::vector<InstanceRow> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const std::vector<std::string>& cells = records[r].cells;
    const std::string where = "row " + std::to_string(r);
    if (cells.size() > header.size()) {
      throw Error(ErrorCode::kParse, "too many cells (" + where + ")");
    }
    std::vector<ValueId> values(space.num_features(), 0);
    for (std::size_t col = 0; col < header.size(); ++col) {
      const FeatureId f = column_feature[col];
      const std::string loc = "(" + where + ", col " + header[col] + ")";
      if (col >= cells.size()) {
        throw Error(ErrorCode::kParse, "missing cell " + loc);
      }
      const auto v = space.FindValue(f, cells[col]);
      if (!v) {
        throw Error(ErrorCode::kParse,
                    "unknown category '" + cells[col] + "' " + loc);
      }
      values[f] = *v;
    }
    rows.push_back({r, Instance(std::move(values))});
  }
  return rows;
}

std::string SerializeInstances(const std::vector<Instance>& instances,
                               const FeatureSpace& space) {
  auto quote = [](const std::string& cell) {
    if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  };
  std::string out;
  for (FeatureId f = 0; f < space.num_features(); ++f) {
    if (f > 0) out += ',';
    out += quote(space.feature(f).name);
  }
  out += '\n';
  for (const Instance& instance : instances) {
    for (FeatureId f = 0; f < space.num_features(); ++f) {
      if (f > 0) out += ',';
      out += quote(space.feature(f).values[instance.value(f)]);
    }
    out += '\n';
  }
  return out;
}

double InstanceStats::avg_axp_size() const {
  return num_axps == 0 ? 0.0 : double(total_axp_size) / double(num_axps);
}

double InstanceStats::avg_cxp_size() const {
  return num_cxps == 0 ? 0.0 : double(total_cxp_size) / double(num_cxps);
}

InstanceStats SummarizeInstance(std::size_t row, std::string prediction,
                                const EnumerationResult& result,
                                const OracleStats& oracle_stats,
                                double seconds) {
  InstanceStats s;
  s.row = row;
  s.prediction = std::move(prediction);
  s.num_axps = result.axps.size();
  s.num_cxps = result.cxps.size();
  for (const AXp& a : result.axps) {
    s.total_axp_size += a.literals.size();
    s.max_axp_size = std::max(s.max_axp_size, a.literals.size());
  }
  for (const CXp& c : result.cxps) {
    s.total_cxp_size += c.literals.size();
    s.max_cxp_size = std::max(s.max_cxp_size, c.literals.size());
  }
  s.entailment_calls = oracle_stats.entailment_calls;
  s.witness_calls = oracle_stats.witness_calls;
  s.seconds = seconds;
  return s;
}

InstanceStats StatsReport::Total() const {
  InstanceStats t;
  for (const InstanceStats& s : rows) {
    t.num_axps += s.num_axps;
    t.num_cxps += s.num_cxps;
    t.total_axp_size += s.total_axp_size;
    t.total_cxp_size += s.total_cxp_size;
    t.max_axp_size = std::max(t.max_axp_size, s.max_axp_size);
    t.max_cxp_size = std::max(t.max_cxp_size, s.max_cxp_size);
    t.entailment_calls += s.entailment_calls;
    t.witness_calls += s.witness_calls;
    t.seconds += s.seconds;
  }
  return t;
}

bool StatsReport::CxpsNoLargerThanAxps() const {
  const InstanceStats t = Total();
  return t.avg_cxp_size() <= t.avg_axp_size();
}

std::string StatsReport::ToCsv(bool with_time) const {
  std::ostringstream out;
  out << "row,prediction,axps,cxps,avg_axp_size,max_axp_size,avg_cxp_size,"
         "max_cxp_size,entailment_calls,witness_calls,oracle_calls";
  if (with_time) out << ",seconds";
  out << '\n';
  auto line = [&](const std::string& row, const InstanceStats& s) {
    out << row << ',' << s.prediction << ',' << s.num_axps << ','
        << s.num_cxps << ',' << FormatDouble(s.avg_axp_size()) << ','
        << s.max_axp_size << ',' << FormatDouble(s.avg_cxp_size()) << ','
        << s.max_cxp_size << ',' << s.entailment_calls << ','
        << s.witness_calls << ',' << s.oracle_calls();
    if (with_time) out << ',' << FormatDouble(s.seconds);
    out << '\n';
  };
  for (const InstanceStats& s : rows) line(std::to_string(s.row), s);
  line("all", Total());
  return out.str();
}

std::string StatsReport::Summary() const {
  const InstanceStats t = Total();
  const double n = rows.empty() ? 1.0 : double(rows.size());
  std::ostringstream out;
  out << "instances: " << rows.size() << '\n'
      << "AXps: total " << t.num_axps << ", per instance "
      << FormatDouble(double(t.num_axps) / n) << ", avg size "
      << FormatDouble(t.avg_axp_size()) << ", max size " << t.max_axp_size
      << '\n'
      << "CXps: total " << t.num_cxps << ", per instance "
      << FormatDouble(double(t.num_cxps) / n) << ", avg size "
      << FormatDouble(t.avg_cxp_size()) << ", max size " << t.max_cxp_size
      << '\n'
      << "oracle calls: total " << t.oracle_calls() << ", per instance "
      << FormatDouble(double(t.oracle_calls()) / n) << '\n'
      << "avg CXp size <= avg AXp size: "
      << (CxpsNoLargerThanAxps() ? "yes" : "no (counterexample)") << '\n';
  return out.str();
}

}  // namespace xdual
