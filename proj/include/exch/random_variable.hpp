#pragma once

#include <map>
#include <stdexcept>

#include "exch/joint_law.hpp"

namespace exch {

// A rational-valued function of the path, defined at least on the support
// of the law it is paired with (quantities like eta_k f or f(xi_k)).
class RandomVariable {
 public:
  using ValueMap = std::map<Outcome, Rational>;

  RandomVariable() = default;
  explicit RandomVariable(ValueMap values) : values_(std::move(values)) {}

  template <typename Fn>
  static RandomVariable from_function(const JointLaw& law, Fn&& fn) {
    ValueMap values;
    for (const auto& [outcome, p] : law.probs()) values.emplace(outcome, fn(outcome));
    return RandomVariable(std::move(values));
  }

  const Rational& at(const Outcome& x) const {
    const auto it = values_.find(x);
    if (it == values_.end())
      throw std::domain_error("random variable: undefined at outcome");
    return it->second;
  }

  bool defined_at(const Outcome& x) const { return values_.count(x) > 0; }

  const ValueMap& values() const { return values_; }

  bool covers_support(const JointLaw& law) const {
    for (const auto& [outcome, p] : law.probs())
      if (!defined_at(outcome)) return false;
    return true;
  }

 private:
  ValueMap values_;
};

inline Rational expectation(const JointLaw& law, const RandomVariable& rv) {
  Rational acc(0);
  for (const auto& [outcome, p] : law.probs()) acc += rv.at(outcome) * p;
  return acc;
}

}  // namespace exch
