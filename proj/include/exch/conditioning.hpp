#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "exch/joint_law.hpp"
#include "exch/random_variable.hpp"
#include "exch/statistic.hpp"

namespace exch {

// Partition of the full outcome space generated by a statistic: two
// outcomes share a block iff the statistic takes equal values on them.
// Blocks and their members are kept in lexicographic order.
class ConditioningField {
 public:
  ConditioningField(StatisticSpec generator, std::vector<std::vector<Outcome>> blocks)
      : generator_(std::move(generator)), blocks_(std::move(blocks)) {}

  const std::vector<std::vector<Outcome>>& blocks() const { return blocks_; }
  const StatisticSpec& generator() const { return generator_; }

  std::size_t block_count() const { return blocks_.size(); }

  Rational block_mass(std::size_t block_index, const JointLaw& law) const {
    Rational acc(0);
    for (const auto& outcome : blocks_.at(block_index)) acc += law.prob(outcome);
    return acc;
  }

 private:
  StatisticSpec generator_;
  std::vector<std::vector<Outcome>> blocks_;
};

inline ConditioningField field_from_context(const StatisticSpec& spec,
                                            const StatisticContext& ctx) {
  std::map<StatisticKey, std::vector<Outcome>> groups;
  for_each_outcome(ctx.alphabet_size, ctx.length, [&](const Outcome& x) {
    groups[evaluate_statistic(spec, x, ctx)].push_back(x);
  });
  // Lexicographic enumeration makes each group's front its least member;
  // order blocks by that representative for deterministic reports.
  std::map<Outcome, std::vector<Outcome>> ordered;
  for (auto& [key, members] : groups) ordered.emplace(members.front(), std::move(members));
  std::vector<std::vector<Outcome>> blocks;
  blocks.reserve(ordered.size());
  for (auto& [rep, members] : ordered) blocks.push_back(std::move(members));
  return ConditioningField(spec, std::move(blocks));
}

inline ConditioningField field_from(const JointLaw& law, const StatisticSpec& spec) {
  StatisticContext ctx{law.length(), law.alphabet().size(), 0, 0};
  return field_from_context(spec, ctx);
}

// Block-constant conditional expectation. On a positive-mass block the
// value is sum(rv * p) / sum(p); zero-mass blocks get 0 (outside "almost
// surely", never consulted by checkers).
inline RandomVariable cond_expectation(const JointLaw& law, const RandomVariable& rv,
                                       const ConditioningField& field) {
  RandomVariable::ValueMap values;
  for (const auto& block : field.blocks()) {
    Rational mass(0);
    Rational weighted(0);
    for (const auto& outcome : block) {
      const Rational p = law.prob(outcome);
      if (p > 0) {
        mass += p;
        weighted += rv.at(outcome) * p;
      }
    }
    const Rational value = mass > 0 ? Rational(weighted / mass) : Rational(0);
    for (const auto& outcome : block) values[outcome] = value;
  }
  return RandomVariable(std::move(values));
}

// True iff every block of `fine` lies inside one block of `coarse`.
inline bool refines(const ConditioningField& fine, const ConditioningField& coarse) {
  std::map<Outcome, std::size_t> coarse_of;
  for (std::size_t b = 0; b < coarse.blocks().size(); ++b)
    for (const auto& outcome : coarse.blocks()[b]) coarse_of[outcome] = b;
  for (const auto& block : fine.blocks()) {
    const auto it = coarse_of.find(block.front());
    if (it == coarse_of.end()) return false;
    for (const auto& outcome : block) {
      const auto jt = coarse_of.find(outcome);
      if (jt == coarse_of.end() || jt->second != it->second) return false;
    }
  }
  return true;
}

}  // namespace exch
