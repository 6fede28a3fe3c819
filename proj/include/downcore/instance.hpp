#pragma once

/// \file
/// JSON instance files:
///   {"points": [{"id": str, "weight": number}, ...],
///    "chain": [[point-id, ...], ...],          // smallest first, {} optional
///    "functions": {"name": [number, ...]}}
/// and the half-line step-function format
///   {"positions": [...], "masses": [...], "values": [...]}.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>

#include <json.hpp>

#include "downcore/core_space.hpp"
#include "downcore/halfline.hpp"

namespace downcore {

using json = nlohmann::json;

struct Instance {
  MeasureSpace space;
  OrderedCoreSpec spec;
  std::map<std::string, FunctionOnU> functions;

  /// The named function, or the only one when `name` is empty.
  const FunctionOnU& function(const std::string& name) const {
    if (name.empty()) {
      if (functions.size() == 1) return functions.begin()->second;
      throw Error(ErrorCode::UnknownFunction,
                  functions.empty() ? "instance has no functions"
                                    : "several functions present; pick one by name");
    }
    auto it = functions.find(name);
    if (it == functions.end()) throw Error(ErrorCode::UnknownFunction, name);
    return it->second;
  }
};

namespace detail {

[[noreturn]] inline void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedInstance, what);
}

inline double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) malformed(where + " must be a number");
  return j.get<double>();
}

}  // namespace detail

/// Builds an instance. With `restrict_to_chain`, points outside the union of
/// the chain are dropped instead of producing NotFull later.
inline Instance parse_instance(const json& doc, bool restrict_to_chain = false) {
  using detail::malformed;
  if (!doc.is_object()) malformed("instance must be a JSON object");
  if (!doc.contains("points") || !doc["points"].is_array()) malformed("missing array 'points'");
  if (!doc.contains("chain") || !doc["chain"].is_array()) malformed("missing array 'chain'");

  std::vector<std::string> ids;
  std::vector<double> weights;
  for (const auto& p : doc["points"]) {
    if (!p.is_object() || !p.contains("id") || !p["id"].is_string() || !p.contains("weight")) {
      malformed("each point needs a string 'id' and a numeric 'weight'");
    }
    ids.push_back(p["id"].get<std::string>());
    weights.push_back(detail::number_at(p["weight"], "weight of " + ids.back()));
  }
  MeasureSpace space(ids, weights);
  std::unordered_map<std::string, PointIndex> index;
  for (PointIndex i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);

  OrderedCoreSpec spec;
  for (const auto& set : doc["chain"]) {
    if (!set.is_array()) malformed("chain entries must be arrays of point ids");
    PointSet s;
    for (const auto& id : set) {
      if (!id.is_string()) malformed("chain entries must be arrays of point ids");
      auto it = index.find(id.get<std::string>());
      if (it == index.end()) throw Error(ErrorCode::UnknownPointId, id.get<std::string>());
      s.push_back(it->second);
    }
    spec.chain.push_back(std::move(s));
  }
  if (spec.chain.empty() || !spec.chain.front().empty()) spec.chain.insert(spec.chain.begin(), PointSet{});

  std::map<std::string, FunctionOnU> functions;
  if (doc.contains("functions")) {
    if (!doc["functions"].is_object()) malformed("'functions' must be an object");
    for (const auto& [name, values] : doc["functions"].items()) {
      if (!values.is_array()) malformed("function " + name + " must be an array");
      FunctionOnU f;
      for (const auto& v : values) f.values.push_back(detail::number_at(v, "value of " + name));
      if (f.size() != space.size()) {
        throw Error(ErrorCode::LengthMismatch, "function " + name + " has " +
                                                   std::to_string(f.size()) + " values for " +
                                                   std::to_string(space.size()) + " points");
      }
      functions.emplace(name, std::move(f));
    }
  }

  if (!restrict_to_chain) return Instance{std::move(space), std::move(spec), std::move(functions)};

  auto r = restrict_to_union(space, spec);
  std::map<std::string, FunctionOnU> kept;
  for (const auto& [name, f] : functions) kept.emplace(name, r.restrict(f));
  return Instance{std::move(r.space), std::move(r.spec), std::move(kept)};
}

inline Instance parse_instance_text(const std::string& text, bool restrict_to_chain = false) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedInstance, e.what());
  }
  return parse_instance(doc, restrict_to_chain);
}

inline Instance load_instance(const std::string& path, bool restrict_to_chain = false) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInstance, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance_text(buf.str(), restrict_to_chain);
}

inline json chain_to_json(const MeasureSpace& space, const OrderedCoreSpec& spec,
                          bool include_empty = false) {
  json chain = json::array();
  for (const auto& s : spec.chain) {
    if (s.empty() && !include_empty) continue;
    json ids = json::array();
    for (PointIndex u : s) ids.push_back(space.id(u));
    chain.push_back(std::move(ids));
  }
  return chain;
}

inline json to_json(const Instance& inst) {
  json doc;
  doc["points"] = json::array();
  for (PointIndex u = 0; u < inst.space.size(); ++u) {
    doc["points"].push_back({{"id", inst.space.id(u)}, {"weight", inst.space.weight(u)}});
  }
  doc["chain"] = chain_to_json(inst.space, inst.spec);
  doc["functions"] = json::object();
  for (const auto& [name, f] : inst.functions) doc["functions"][name] = f.values;
  return doc;
}

inline json to_json(const TailoredMeasure& m, const StepFunction& phi) {
  return {{"positions", std::vector<double>(m.positions().begin(), m.positions().end())},
          {"masses", std::vector<double>(m.masses().begin(), m.masses().end())},
          {"values", phi.values}};
}

/// Reads the "values" of a step function; positions and masses, when
/// present, must agree with `m`.
inline StepFunction step_function_from_json(const json& doc, const TailoredMeasure& m) {
  using detail::malformed;
  if (!doc.is_object() || !doc.contains("values") || !doc["values"].is_array()) {
    malformed("step function needs an array 'values'");
  }
  StepFunction phi;
  for (const auto& v : doc["values"]) phi.values.push_back(detail::number_at(v, "step value"));
  if (phi.size() != m.k()) {
    throw Error(ErrorCode::LengthMismatch, "step function has " + std::to_string(phi.size()) +
                                               " values for " + std::to_string(m.k()) + " atoms");
  }
  auto check = [&](const char* key, std::span<const double> expected) {
    if (!doc.contains(key)) return;
    const auto& arr = doc[key];
    if (!arr.is_array() || arr.size() != expected.size()) malformed(std::string(key) + " mismatch");
    for (std::size_t j = 0; j < expected.size(); ++j) {
      const double x = detail::number_at(arr[j], key);
      if (std::fabs(x - expected[j]) > 1e-9 * std::max(1.0, std::fabs(expected[j]))) {
        malformed(std::string(key) + " disagree with the instance's chain");
      }
    }
  };
  check("positions", m.positions());
  check("masses", m.masses());
  return phi;
}

}  // namespace downcore
