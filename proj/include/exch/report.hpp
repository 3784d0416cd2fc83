#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "exch/rational.hpp"

namespace exch {

// One exact counterexample to a checked identity: where it failed, which
// test function or identity was involved, and both sides as rationals.
struct Witness {
  std::string location;  // block, outcome or path, in canonical text form
  std::string test_id;   // identity / test-function label
  Rational lhs;
  Rational rhs;
};

struct SubVerdict {
  std::string name;
  bool pass = false;
};

// Verdict plus exact witnesses for any failed identity. `pass` implies an
// empty witness list; `fail` carries at least one witness.
struct CheckReport {
  std::string check;
  bool pass = true;
  std::vector<Witness> witnesses;
  std::uint64_t checked_count = 0;
  std::vector<SubVerdict> sub_verdicts;
  std::vector<std::pair<std::string, std::string>> info;

  void record_pass(std::uint64_t n = 1) { checked_count += n; }

  void record_fail(std::string location, std::string test_id, Rational lhs, Rational rhs) {
    ++checked_count;
    pass = false;
    if (witnesses.size() < kMaxWitnesses)
      witnesses.push_back({std::move(location), std::move(test_id), std::move(lhs), std::move(rhs)});
  }

  void add_info(std::string key, std::string value) {
    info.emplace_back(std::move(key), std::move(value));
  }

  bool sub_verdict(const std::string& name) const {
    for (const auto& sv : sub_verdicts)
      if (sv.name == name) return sv.pass;
    throw std::domain_error("report: no sub-verdict named '" + name + "'");
  }

  static constexpr std::size_t kMaxWitnesses = 16;
};

}  // namespace exch
