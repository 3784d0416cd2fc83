#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "exch/alphabet.hpp"
#include "exch/measure.hpp"
#include "exch/rational.hpp"
#include "exch/report.hpp"

namespace exch {

// An exact finitely supported probability law on length-n tuples over a
// finite alphabet. Masses are nonnegative rationals summing to exactly 1;
// zero-mass outcomes are pruned. Immutable after construction.
class JointLaw {
 public:
  using ProbMap = std::map<Outcome, Rational>;

  JointLaw(Alphabet alphabet, std::size_t length, ProbMap probs)
      : alphabet_(std::move(alphabet)), length_(length) {
    if (length_ == 0) throw std::domain_error("law: length must be >= 1");
    Rational total(0);
    for (auto& [outcome, p] : probs) {
      if (outcome.size() != length_)
        throw std::domain_error("law: outcome length mismatch");
      for (const Symbol s : outcome)
        if (s >= alphabet_.size()) throw std::domain_error("law: symbol outside alphabet");
      if (p < 0) throw std::domain_error("law: negative probability");
      total += p;
      if (p > 0) probs_.emplace(outcome, std::move(p));
    }
    if (total != 1) throw std::domain_error("law: total mass is not 1");
  }

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t length() const { return length_; }
  const ProbMap& probs() const { return probs_; }

  Rational prob(const Outcome& x) const {
    const auto it = probs_.find(x);
    return it == probs_.end() ? Rational(0) : it->second;
  }

  template <typename Pred>
  Rational event_prob(Pred&& pred) const {
    Rational acc(0);
    for (const auto& [outcome, p] : probs_)
      if (pred(outcome)) acc += p;
    return acc;
  }

  bool same_shape(const JointLaw& other) const {
    return alphabet_ == other.alphabet_ && length_ == other.length_;
  }

 private:
  Alphabet alphabet_;
  std::size_t length_;
  ProbMap probs_;
};

// Pushforward under coordinate reindexing: mass at x moves to y with
// y[perm[i]] = x[i]. Composes as a left group action:
// permute(permute(L,p),q) == permute(L, compose(q,p)).
inline JointLaw permute(const JointLaw& law, const Permutation& perm) {
  if (perm.size() != law.length()) throw std::domain_error("permute: index out of range");
  validate_permutation(perm);
  JointLaw::ProbMap out;
  for (const auto& [x, p] : law.probs()) {
    Outcome y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[perm[i]] = x[i];
    out[y] += p;
  }
  return JointLaw(law.alphabet(), law.length(), std::move(out));
}

// Pushforward onto the selected coordinates (0-based, strictly increasing).
inline JointLaw marginal(const JointLaw& law, const std::vector<std::size_t>& index_set) {
  if (index_set.empty()) throw std::domain_error("marginal: empty index set");
  for (std::size_t i = 0; i < index_set.size(); ++i) {
    if (index_set[i] >= law.length()) throw std::domain_error("marginal: index out of range");
    if (i > 0 && index_set[i] <= index_set[i - 1])
      throw std::domain_error("marginal: indices must be strictly increasing");
  }
  JointLaw::ProbMap out;
  for (const auto& [x, p] : law.probs()) {
    Outcome y;
    y.reserve(index_set.size());
    for (const std::size_t i : index_set) y.push_back(x[i]);
    out[y] += p;
  }
  return JointLaw(law.alphabet(), index_set.size(), std::move(out));
}

inline std::vector<std::size_t> index_range(std::size_t begin, std::size_t end) {
  std::vector<std::size_t> out;
  out.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) out.push_back(i);
  return out;
}

// Exact equality of probability maps. Witnesses list the lexicographically
// least differing outcomes first.
inline CheckReport equal_in_distribution(const JointLaw& a, const JointLaw& b) {
  if (!a.same_shape(b))
    throw std::domain_error("equal_in_distribution: alphabet/length mismatch");
  CheckReport report;
  report.check = "equal-in-distribution";
  auto ia = a.probs().begin();
  auto ib = b.probs().begin();
  while (ia != a.probs().end() || ib != b.probs().end()) {
    if (ib == b.probs().end() || (ia != a.probs().end() && ia->first < ib->first)) {
      report.record_fail(format_outcome(a.alphabet(), ia->first), "prob", ia->second, Rational(0));
      ++ia;
    } else if (ia == a.probs().end() || ib->first < ia->first) {
      report.record_fail(format_outcome(a.alphabet(), ib->first), "prob", Rational(0), ib->second);
      ++ib;
    } else {
      if (ia->second != ib->second)
        report.record_fail(format_outcome(a.alphabet(), ia->first), "prob", ia->second, ib->second);
      else
        report.record_pass();
      ++ia;
      ++ib;
    }
  }
  return report;
}

}  // namespace exch
