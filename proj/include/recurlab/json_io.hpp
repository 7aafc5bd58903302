#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "recurlab/group.hpp"
#include "recurlab/mps.hpp"

namespace recurlab {

using Json = nlohmann::ordered_json;

inline Rat rat_from_json(const Json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (j.is_string()) return parse_rat(j.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(std::string(e.what()), where);
  }
  throw ParseError("expected a rational as \"p/q\" string or integer", where);
}

inline Json rat_to_json(const Rat& r) { return Json(rat_str(r)); }

/// Group descriptors: {"kind":"cyclic","n":N}, {"kind":"product",
/// "factors":[...]}, {"kind":"table","mul":[[...]]}.
inline GroupPtr group_from_json(const Json& j, const std::string& where = "group") {
  if (!j.is_object() || !j.contains("kind"))
    throw ParseError("group descriptor must be an object with a \"kind\"", where);
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "cyclic") {
    if (!j.contains("n") || !j.at("n").is_number_integer())
      throw ParseError("cyclic group needs integer \"n\"", where);
    return FiniteGroup::cyclic(j.at("n").get<int>());
  }
  if (kind == "product") {
    if (!j.contains("factors") || !j.at("factors").is_array() || j.at("factors").empty())
      throw ParseError("product group needs a nonempty \"factors\" array", where);
    GroupPtr acc;
    int i = 0;
    for (const Json& f : j.at("factors")) {
      GroupPtr g = group_from_json(f, where + ".factors[" + std::to_string(i++) + "]");
      acc = acc ? FiniteGroup::product(acc, g) : g;
    }
    return acc;
  }
  if (kind == "table") {
    if (!j.contains("mul") || !j.at("mul").is_array())
      throw ParseError("table group needs a \"mul\" matrix", where);
    std::vector<std::vector<int>> mul;
    for (const Json& row : j.at("mul")) {
      if (!row.is_array()) throw ParseError("multiplication table rows must be arrays", where);
      mul.push_back(row.get<std::vector<int>>());
    }
    return FiniteGroup::from_table(std::move(mul));
  }
  if (kind == "dihedral") {
    if (!j.contains("m") || !j.at("m").is_number_integer())
      throw ParseError("dihedral group needs integer \"m\"", where);
    return FiniteGroup::dihedral(j.at("m").get<int>());
  }
  if (kind == "quaternion") return FiniteGroup::quaternion();
  throw ParseError("unknown group kind \"" + kind + "\"", where);
}

inline Json group_to_json(const FiniteGroup& G) {
  Json mul = Json::array();
  for (int a = 0; a < G.order(); ++a) {
    Json row = Json::array();
    for (int b = 0; b < G.order(); ++b) row.push_back(G.mul(a, b));
    mul.push_back(std::move(row));
  }
  return Json{{"kind", "table"}, {"mul", std::move(mul)}};
}

/// System: {"group":…, "points":[{"label":…,"mass":"p/q"}],
/// "actions":{"T1":[[perm for g=0], [perm for g=1], …], …}}.
inline FiniteMPS system_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("system must be a JSON object", "system");
  if (!j.contains("group")) throw ParseError("system needs a \"group\"", "system");
  GroupPtr G = group_from_json(j.at("group"), "system.group");
  if (!j.contains("points") || !j.at("points").is_array() || j.at("points").empty())
    throw ParseError("system needs a nonempty \"points\" array", "system.points");
  std::vector<std::string> labels;
  std::vector<Rat> mass;
  int pi = 0;
  for (const Json& p : j.at("points")) {
    std::string where = "system.points[" + std::to_string(pi++) + "]";
    if (!p.is_object() || !p.contains("label") || !p.contains("mass"))
      throw ParseError("point needs \"label\" and \"mass\"", where);
    labels.push_back(p.at("label").get<std::string>());
    mass.push_back(rat_from_json(p.at("mass"), where + ".mass"));
  }
  if (!j.contains("actions") || !j.at("actions").is_object() || j.at("actions").empty())
    throw ParseError("system needs an \"actions\" object", "system.actions");
  std::vector<Action> actions;
  for (int i = 1; i <= static_cast<int>(j.at("actions").size()); ++i) {
    std::string key = "T" + std::to_string(i);
    if (!j.at("actions").contains(key))
      throw ParseError("actions must be named T1, T2, … without gaps", "system.actions");
    const Json& a = j.at("actions").at(key);
    if (!a.is_array() || static_cast<int>(a.size()) != G->order())
      throw ParseError("action " + key + " needs one permutation per group element",
                       "system.actions." + key);
    Action act;
    for (const Json& perm : a) act.push_back(perm.get<std::vector<int>>());
    actions.push_back(std::move(act));
  }
  return FiniteMPS(G, std::move(labels), std::move(mass), std::move(actions));
}

inline Json system_to_json(const FiniteMPS& X) {
  Json points = Json::array();
  for (int x = 0; x < X.points(); ++x)
    points.push_back(Json{{"label", X.labels()[x]}, {"mass", rat_str(X.mass()[x])}});
  Json actions = Json::object();
  for (int i = 0; i < X.k(); ++i) {
    Json arr = Json::array();
    for (int g = 0; g < X.group()->order(); ++g) arr.push_back(X.perm(i, g));
    actions["T" + std::to_string(i + 1)] = std::move(arr);
  }
  return Json{{"group", group_to_json(*X.group())}, {"points", std::move(points)},
              {"actions", std::move(actions)}};
}

/// Sets: either a list of point labels or a map label -> 0/1.
inline std::vector<char> set_from_json(const Json& j, const FiniteMPS& X) {
  std::vector<char> out(X.points(), 0);
  auto index_of = [&](const std::string& label) {
    int i = X.label_index(label);
    if (i < 0) throw ParseError("unknown point label \"" + label + "\"", "set");
    return i;
  };
  if (j.is_array()) {
    for (const Json& e : j) out[index_of(e.get<std::string>())] = 1;
    return out;
  }
  if (j.is_object()) {
    for (const auto& [label, v] : j.items())
      if (v.get<int>() != 0) out[index_of(label)] = 1;
    return out;
  }
  throw ParseError("set must be a label list or a label -> 0/1 map", "set");
}

/// Observables: map label -> rational; missing labels default to 0.
inline Observable observable_from_json(const Json& j, const FiniteMPS& X) {
  if (!j.is_object()) throw ParseError("observable must be a label -> rational map", "observable");
  Observable f(X.points(), Rat(0));
  for (const auto& [label, v] : j.items()) {
    int i = X.label_index(label);
    if (i < 0) throw ParseError("unknown point label \"" + label + "\"", "observable");
    f[i] = rat_from_json(v, "observable." + label);
  }
  return f;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file", path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), path);
  }
}

}  // namespace recurlab
