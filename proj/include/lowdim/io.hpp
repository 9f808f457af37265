// Copyright 2026 The lowdim Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOWDIM_IO_HPP
#define LOWDIM_IO_HPP

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lowdim/applications.hpp"
#include "lowdim/guess_search.hpp"
#include "lowdim/model.hpp"

namespace lowdim {

using Json = nlohmann::ordered_json;

/// Malformed JSON input (shape or type errors, not semantic validation).
class FormatError : public Error {
 public:
  using Error::Error;
};

namespace io_detail {

inline const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw FormatError(std::string("missing field '") + name + "'");
  return j.at(name);
}

inline std::int64_t to_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw FormatError(std::string(what) + ": expected integer");
  return j.get<std::int64_t>();
}

inline Rat to_rat(const Json& j, const char* what) {
  if (j.is_number_integer()) return make_rat(j.get<std::int64_t>());
  if (!j.is_string()) throw FormatError(std::string(what) + ": expected rational string \"p/q\"");
  try {
    return parse_rat(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

inline IntVec to_int_vec(const Json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + ": expected array");
  IntVec out;
  for (const auto& e : j) out.push_back(to_int(e, what));
  return out;
}

inline RatVec to_rat_vec(const Json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + ": expected array");
  RatVec out;
  for (const auto& e : j) out.push_back(to_rat(e, what));
  return out;
}

inline IntMat to_int_mat(const Json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + ": expected array of rows");
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& r : j) rows.push_back(to_int_vec(r, what));
  try {
    return IntMat(rows);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

inline std::vector<Bound> to_bounds(const Json& j, const char* what, const char* infinity) {
  if (!j.is_array()) throw FormatError(std::string(what) + ": expected array");
  std::vector<Bound> out;
  for (const auto& e : j) {
    if (e.is_string() && e.get<std::string>() == infinity) {
      out.emplace_back(std::nullopt);
    } else {
      out.emplace_back(to_int(e, what));
    }
  }
  return out;
}

inline ConvexPwl to_pwl(const Json& j) {
  ConvexPwl p;
  p.breakpoints = to_int_vec(field(j, "breakpoints"), "breakpoints");
  p.slopes = to_rat_vec(field(j, "slopes"), "slopes");
  p.offset = j.contains("offset") ? to_rat(j.at("offset"), "offset") : Rat(0);
  return p;
}

inline Penalty to_penalty(const Json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "quadratic") {
    auto get = [&](const char* k) { return j.contains(k) ? to_rat(j.at(k), k) : Rat(0); };
    return QuadraticPenalty{get("a"), get("b"), get("c")};
  }
  if (kind == "pwl") return to_pwl(j);
  throw FormatError("penalty.kind must be 'quadratic' or 'pwl'");
}

inline ObjectiveSpec to_objective(const Json& j) {
  const std::string type = field(j, "type").get<std::string>();
  if (type == "equality_indicator") return EqualityIndicator{to_int_vec(field(j, "b"), "objective.b")};
  if (type == "quadratic_distance") return QuadraticDistance{to_rat_vec(field(j, "b"), "objective.b")};
  if (type == "separable_convex_pwl") {
    SeparableConvexPwl o;
    for (const auto& piece : field(j, "pieces")) o.pieces.push_back(to_pwl(piece));
    return o;
  }
  if (type == "knapsack_penalty") return KnapsackPenalty{to_penalty(field(j, "penalty"))};
  throw FormatError("unknown objective type '" + type + "'");
}

inline Json from_bound(const Bound& b, const char* infinity) { return b ? Json(*b) : Json(infinity); }

inline Json from_rat_vec(const RatVec& v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(to_string(r));
  return out;
}

inline Json from_pwl(const ConvexPwl& p) {
  return Json{{"breakpoints", p.breakpoints}, {"slopes", from_rat_vec(p.slopes)}, {"offset", to_string(p.offset)}};
}

}  // namespace io_detail

/// An instance file after shorthand expansion; z and N feed the unknown-W engine.
struct ParsedInput {
  Instance instance;
  std::string application;  // empty for plain instances
  std::optional<RatVec> z;
  std::optional<std::int64_t> budget;
};

inline ParsedInput parse_input(const Json& j) {
  using namespace io_detail;
  ParsedInput out;
  if (!j.is_object()) throw FormatError("instance must be a JSON object");
  if (j.contains("application")) {
    out.application = j.at("application").get<std::string>();
    if (out.application == "knapsack") {
      RatVec p = to_rat_vec(field(j, "p"), "p");
      IntVec w = to_int_vec(field(j, "w"), "w");
      std::vector<Bound> u = to_bounds(field(j, "u"), "u", "+inf");
      Instance inst;
      inst.W = IntMat({w});
      for (const auto& pi : p) inst.c.push_back(-pi);
      inst.lower.assign(w.size(), Bound{0});
      inst.upper = u;
      inst.objective = KnapsackPenalty{to_penalty(field(j, "penalty"))};
      out.instance = std::move(inst);
    } else if (out.application == "equality_ilp") {
      out.instance = Instance{to_int_mat(field(j, "A"), "A"), to_rat_vec(field(j, "c"), "c"),
                              to_bounds(field(j, "lower"), "lower", "-inf"),
                              to_bounds(field(j, "upper"), "upper", "+inf"),
                              EqualityIndicator{to_int_vec(field(j, "b"), "b")}};
    } else if (out.application == "compressed_sensing") {
      IntMat w = to_int_mat(field(j, "W"), "W");
      Instance inst;
      inst.W = w;
      inst.c.assign(w.cols(), Rat(0));
      inst.lower.assign(w.cols(), Bound{0});
      inst.upper.assign(w.cols(), Bound{1});
      inst.objective = QuadraticDistance{to_rat_vec(field(j, "b"), "b")};
      out.instance = std::move(inst);
    } else {
      throw FormatError("unknown application '" + out.application + "'");
    }
  } else {
    Instance& inst = out.instance;
    inst.W = to_int_mat(field(j, "W"), "W");
    inst.c = to_rat_vec(field(j, "c"), "c");
    inst.lower = to_bounds(field(j, "lower"), "lower", "-inf");
    inst.upper = to_bounds(field(j, "upper"), "upper", "+inf");
    inst.objective = to_objective(field(j, "objective"));
    if (j.contains("m") && to_int(j.at("m"), "m") != static_cast<std::int64_t>(inst.m())) {
      throw FormatError("m does not match the rows of W");
    }
    if (j.contains("n") && to_int(j.at("n"), "n") != static_cast<std::int64_t>(inst.n())) {
      throw FormatError("n does not match the columns of W");
    }
  }
  if (j.contains("z")) out.z = to_rat_vec(j.at("z"), "z");
  if (j.contains("N")) out.budget = to_int(j.at("N"), "N");
  return out;
}

inline ParsedInput read_input_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return parse_input(Json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("JSON parse error: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed instance: ") + e.what());
  }
}

/// Plain-instance JSON for anything but ExternalOracle objectives.
inline Json instance_to_json(const Instance& inst) {
  using namespace io_detail;
  Json j;
  j["m"] = inst.m();
  j["n"] = inst.n();
  j["W"] = inst.W.to_rows();
  j["c"] = from_rat_vec(inst.c);
  Json lo = Json::array();
  Json hi = Json::array();
  for (const auto& b : inst.lower) lo.push_back(from_bound(b, "-inf"));
  for (const auto& b : inst.upper) hi.push_back(from_bound(b, "+inf"));
  j["lower"] = lo;
  j["upper"] = hi;
  j["objective"] = std::visit(
      Overloaded{
          [](const EqualityIndicator& o) { return Json{{"type", "equality_indicator"}, {"b", o.b}}; },
          [](const QuadraticDistance& o) { return Json{{"type", "quadratic_distance"}, {"b", from_rat_vec(o.b)}}; },
          [](const SeparableConvexPwl& o) {
            Json pieces = Json::array();
            for (const auto& p : o.pieces) pieces.push_back(from_pwl(p));
            return Json{{"type", "separable_convex_pwl"}, {"pieces", pieces}};
          },
          [](const KnapsackPenalty& o) {
            Json pen;
            if (auto* q = std::get_if<QuadraticPenalty>(&o.penalty)) {
              pen = Json{{"kind", "quadratic"}, {"a", to_string(q->a)}, {"b", to_string(q->b)}, {"c", to_string(q->c)}};
            } else {
              pen = from_pwl(std::get<ConvexPwl>(o.penalty));
              pen["kind"] = "pwl";
            }
            return Json{{"type", "knapsack_penalty"}, {"penalty", pen}};
          },
          [](const ExternalOracle&) -> Json { throw FormatError("external oracles cannot be serialized"); },
      },
      inst.objective);
  return j;
}

/// {"status", "x", "value", "guesses_explored", "oracle_calls", "radius_used"}.
inline Json result_to_json(const Solution& s, const SolveStats& stats) {
  Json j;
  j["status"] = to_string(s.status);
  j["x"] = s.x;
  j["value"] = to_string(s.value);
  j["guesses_explored"] = stats.guesses_explored;
  j["oracle_calls"] = stats.oracle_calls;
  j["radius_used"] = stats.radius_used;
  return j;
}

/// Reads back "value" from result JSON ("+inf" or "p/q").
inline ExtRat parse_value(const std::string& text) {
  if (text == "+inf") return ExtRat::infinity();
  return ExtRat(parse_rat(text));
}

}  // namespace lowdim

#endif  // LOWDIM_IO_HPP
