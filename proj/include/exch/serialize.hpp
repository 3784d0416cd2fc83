#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "exch/families.hpp"
#include "exch/joint_law.hpp"
#include "exch/matrix.hpp"
#include "exch/montecarlo.hpp"
#include "exch/report.hpp"

namespace exch {

using Json = nlohmann::ordered_json;

// Laws, reports and estimates travel as structured JSON documents. Every
// rational is the exact string "numerator/denominator"; floats appear only
// in Monte Carlo estimates.

inline Json law_to_json(const JointLaw& law) {
  Json doc;
  doc["alphabet"] = law.alphabet().names();
  doc["length"] = law.length();
  Json probs = Json::array();
  for (const auto& [outcome, p] : law.probs()) {
    Json entry;
    std::vector<std::string> symbols;
    for (const Symbol s : outcome) symbols.push_back(law.alphabet().name(s));
    entry["outcome"] = symbols;
    entry["p"] = format_rational(p);
    probs.push_back(std::move(entry));
  }
  doc["probs"] = std::move(probs);
  return doc;
}

inline JointLaw law_from_json(const Json& doc) {
  const Alphabet alphabet(doc.at("alphabet").get<std::vector<std::string>>());
  const std::size_t length = doc.at("length").get<std::size_t>();
  JointLaw::ProbMap probs;
  for (const auto& entry : doc.at("probs")) {
    Outcome outcome;
    for (const auto& name : entry.at("outcome"))
      outcome.push_back(alphabet.index_of(name.get<std::string>()));
    probs[outcome] += parse_rational(entry.at("p").get<std::string>());
  }
  return JointLaw(alphabet, length, std::move(probs));
}

inline Json matrix_law_to_json(const MatrixLaw& law) {
  Json doc;
  doc["alphabet"] = law.alphabet().names();
  doc["rows"] = law.rows();
  doc["cols"] = law.cols();
  Json probs = Json::array();
  for (const auto& [flat, p] : law.probs()) {
    Json entry;
    Json outcome = Json::array();
    for (std::size_t i = 0; i < law.rows(); ++i) {
      Json row = Json::array();
      for (std::size_t j = 0; j < law.cols(); ++j)
        row.push_back(law.alphabet().name(flat[i * law.cols() + j]));
      outcome.push_back(std::move(row));
    }
    entry["outcome"] = std::move(outcome);
    entry["p"] = format_rational(p);
    probs.push_back(std::move(entry));
  }
  doc["probs"] = std::move(probs);
  return doc;
}

inline MatrixLaw matrix_law_from_json(const Json& doc) {
  const Alphabet alphabet(doc.at("alphabet").get<std::vector<std::string>>());
  const std::size_t rows = doc.at("rows").get<std::size_t>();
  const std::size_t cols = doc.at("cols").get<std::size_t>();
  JointLaw::ProbMap probs;
  for (const auto& entry : doc.at("probs")) {
    Outcome flat;
    for (const auto& row : entry.at("outcome"))
      for (const auto& name : row) flat.push_back(alphabet.index_of(name.get<std::string>()));
    probs[flat] += parse_rational(entry.at("p").get<std::string>());
  }
  return MatrixLaw(alphabet, rows, cols, std::move(probs));
}

inline Measure measure_from_json(const Json& doc, const Alphabet& alphabet) {
  Measure m(alphabet.size());
  for (const auto& [name, value] : doc.items()) {
    const Symbol s = alphabet.index_of(name);
    m.set_mass(s, value.is_string() ? parse_rational(value.get<std::string>())
                                    : Rational(value.get<long>()));
  }
  return m;
}

// Family descriptors: {"family": "...", parameters...}. The "n" field may
// be overridden by the caller (CLI --n).
inline JointLaw family_to_law(const Json& doc, std::optional<std::size_t> n_override = {}) {
  const std::string family = doc.at("family").get<std::string>();
  const auto n_of = [&](std::size_t fallback) {
    if (n_override) return *n_override;
    if (doc.contains("n")) return doc.at("n").get<std::size_t>();
    return fallback;
  };
  if (family == "counterexample") return counterexample_law(n_of(4));
  const Alphabet alphabet(doc.contains("alphabet")
                              ? Alphabet(doc.at("alphabet").get<std::vector<std::string>>())
                              : Alphabet({"a", "b"}));
  if (family == "iid")
    return iid_law(alphabet, measure_from_json(doc.at("base"), alphabet), n_of(3));
  if (family == "urn")
    return urn_law(alphabet, measure_from_json(doc.at("counts"), alphabet), n_of(2));
  if (family == "polya")
    return polya_law(alphabet, measure_from_json(doc.at("counts"), alphabet),
                     doc.value("reinforcement", 1), n_of(3));
  if (family == "markov") {
    MarkovSpec spec;
    spec.init = measure_from_json(doc.at("init"), alphabet);
    spec.kernel.resize(alphabet.size(), Measure(alphabet.size()));
    for (const auto& [state, row] : doc.at("kernel").items())
      spec.kernel[alphabet.index_of(state)] = measure_from_json(row, alphabet);
    return markov_law(alphabet, spec, n_of(3));
  }
  if (family == "mixture") {
    std::vector<std::pair<Rational, JointLaw>> components;
    for (const auto& comp : doc.at("components")) {
      const Rational weight = parse_rational(comp.at("weight").get<std::string>());
      const Json& inner = comp.at("law");
      components.emplace_back(weight, inner.contains("family")
                                          ? family_to_law(inner, n_override)
                                          : law_from_json(inner));
    }
    return mixture_law(components);
  }
  throw std::invalid_argument("unknown family '" + family + "'");
}

// A law document is either an explicit law or a family descriptor.
inline JointLaw load_law(const Json& doc, std::optional<std::size_t> n_override = {}) {
  if (doc.contains("family")) return family_to_law(doc, n_override);
  return law_from_json(doc);
}

inline Json report_to_json(const CheckReport& report) {
  Json doc;
  doc["check"] = report.check;
  doc["verdict"] = report.pass ? "pass" : "fail";
  doc["checked"] = report.checked_count;
  Json witnesses = Json::array();
  for (const auto& w : report.witnesses) {
    Json entry;
    entry["location"] = w.location;
    entry["test"] = w.test_id;
    entry["lhs"] = format_rational(w.lhs);
    entry["rhs"] = format_rational(w.rhs);
    witnesses.push_back(std::move(entry));
  }
  doc["witnesses"] = std::move(witnesses);
  if (!report.sub_verdicts.empty()) {
    Json subs = Json::array();
    for (const auto& sv : report.sub_verdicts) {
      Json entry;
      entry["name"] = sv.name;
      entry["verdict"] = sv.pass ? "pass" : "fail";
      subs.push_back(std::move(entry));
    }
    doc["sub_verdicts"] = std::move(subs);
  }
  if (!report.info.empty()) {
    Json info;
    for (const auto& [key, value] : report.info) info[key] = value;
    doc["info"] = std::move(info);
  }
  return doc;
}

inline CheckReport report_from_json(const Json& doc) {
  CheckReport report;
  report.check = doc.at("check").get<std::string>();
  report.pass = doc.at("verdict").get<std::string>() == "pass";
  report.checked_count = doc.at("checked").get<std::uint64_t>();
  for (const auto& entry : doc.at("witnesses")) {
    Witness w;
    w.location = entry.at("location").get<std::string>();
    w.test_id = entry.at("test").get<std::string>();
    w.lhs = parse_rational(entry.at("lhs").get<std::string>());
    w.rhs = parse_rational(entry.at("rhs").get<std::string>());
    report.witnesses.push_back(std::move(w));
  }
  if (doc.contains("sub_verdicts"))
    for (const auto& entry : doc.at("sub_verdicts"))
      report.sub_verdicts.push_back({entry.at("name").get<std::string>(),
                                     entry.at("verdict").get<std::string>() == "pass"});
  if (doc.contains("info"))
    for (const auto& [key, value] : doc.at("info").items())
      report.info.emplace_back(key, value.get<std::string>());
  return report;
}

inline Json estimate_to_json(const Estimate& estimate, std::uint64_t seed) {
  Json doc;
  doc["point"] = estimate.point;
  doc["half_width"] = estimate.half_width;
  doc["n_samples"] = estimate.n_samples;
  doc["seed"] = seed;
  doc["level"] = "3sigma";
  return doc;
}

inline std::string measure_to_text(const Measure& m, const Alphabet& alphabet) {
  std::string out = "{";
  bool first = true;
  for (std::size_t a = 0; a < m.alphabet_size(); ++a) {
    if (!first) out += ",";
    first = false;
    out += alphabet.name(static_cast<Symbol>(a)) + ":" + format_rational(m.mass(static_cast<Symbol>(a)));
  }
  out += "}";
  return out;
}

}  // namespace exch
