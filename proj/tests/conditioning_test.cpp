#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>

#include "exch/conditioning.hpp"
#include "exch/families.hpp"
#include "test_support.hpp"

using namespace exch;
using testing::binary;
using testing::random_law;

TEST_CASE("an empty tail generates the trivial field", "[conditioning]") {
  const JointLaw law = iid_law(binary(), Measure::uniform(2), 3);
  const ConditioningField field = field_from(law, StatisticSpec::tail_from(3));
  REQUIRE(field.block_count() == 1);
  REQUIRE(field.blocks().front().size() == 8);
}

TEST_CASE("the full prefix generates the singleton partition", "[conditioning]") {
  const JointLaw law = iid_law(binary(), Measure::uniform(2), 3);
  const ConditioningField field = field_from(law, StatisticSpec::prefix_coords(3));
  REQUIRE(field.block_count() == 8);
  for (const auto& block : field.blocks()) REQUIRE(block.size() == 1);
}

TEST_CASE("empirical-and-tail blocks group by prefix multiset and exact tail", "[conditioning]") {
  const JointLaw law = iid_law(binary(), Measure::uniform(2), 3);
  const ConditioningField field = field_from(
      law, StatisticSpec::conjunction({StatisticSpec::empirical_at(2),
                                       StatisticSpec::tail_from(2)}));
  // Oracle: group the 8 outcomes by (sorted first two coordinates, third).
  std::map<std::pair<Outcome, Symbol>, std::vector<Outcome>> expected;
  for_each_outcome(2, 3, [&](const Outcome& x) {
    Outcome prefix{x[0], x[1]};
    std::sort(prefix.begin(), prefix.end());
    expected[{prefix, x[2]}].push_back(x);
  });
  REQUIRE(field.block_count() == expected.size());
  std::map<Outcome, std::vector<Outcome>> by_representative;
  for (auto& [key, members] : expected) by_representative[members.front()] = members;
  std::size_t index = 0;
  for (const auto& [rep, members] : by_representative) {
    REQUIRE(field.blocks()[index] == members);
    ++index;
  }
}

TEST_CASE("statistic indices are validated", "[conditioning]") {
  const JointLaw law = iid_law(binary(), Measure::uniform(2), 3);
  REQUIRE_THROWS_AS(field_from(law, StatisticSpec::empirical_at(4)), std::domain_error);
  REQUIRE_THROWS_AS(field_from(law, StatisticSpec::single_coord(0)), std::domain_error);
  REQUIRE_THROWS_AS(field_from(law, StatisticSpec::quadrant_empirical(1, 1)), std::domain_error);
}

TEST_CASE("conditioning on the singleton partition returns the variable", "[conditioning]") {
  std::mt19937 gen(5);
  const JointLaw law = random_law(gen, binary(), 3);
  const RandomVariable rv = RandomVariable::from_function(
      law, [](const Outcome& x) { return Rational(static_cast<long>(x[0] + 2 * x[1])); });
  const ConditioningField field = field_from(law, StatisticSpec::prefix_coords(3));
  const RandomVariable cond = cond_expectation(law, rv, field);
  for (const auto& [outcome, p] : law.probs()) REQUIRE(cond.at(outcome) == rv.at(outcome));
}

TEST_CASE("conditioning on the trivial partition returns the expectation", "[conditioning]") {
  std::mt19937 gen(6);
  const JointLaw law = random_law(gen, binary(), 3);
  const RandomVariable rv = RandomVariable::from_function(
      law, [](const Outcome& x) { return Rational(static_cast<long>(x[2])); });
  const ConditioningField field = field_from(law, StatisticSpec::tail_from(3));
  const RandomVariable cond = cond_expectation(law, rv, field);
  const Rational mean = expectation(law, rv);
  for (const auto& [outcome, p] : law.probs()) REQUIRE(cond.at(outcome) == mean);
}

TEST_CASE("the tower property holds for nested fields", "[conditioning]") {
  std::mt19937 gen(9);
  for (int trial = 0; trial < 20; ++trial) {
    const JointLaw law = random_law(gen, binary(), 3);
    const RandomVariable rv = RandomVariable::from_function(law, [](const Outcome& x) {
      return Rational(static_cast<long>(1 + x[0] + 3 * x[1] + 5 * x[2]));
    });
    const ConditioningField fine = field_from(law, StatisticSpec::prefix_coords(2));
    const ConditioningField coarse = field_from(law, StatisticSpec::empirical_at(2));
    REQUIRE(refines(fine, coarse));
    const RandomVariable inner = cond_expectation(law, rv, fine);
    const RandomVariable two_step = cond_expectation(law, inner, coarse);
    const RandomVariable direct = cond_expectation(law, rv, coarse);
    for (const auto& [outcome, p] : law.probs())
      REQUIRE(two_step.at(outcome) == direct.at(outcome));
  }
}

TEST_CASE("conditional expectation preserves the mean", "[conditioning]") {
  std::mt19937 gen(13);
  const std::vector<StatisticSpec> specs = {
      StatisticSpec::empirical_at(2), StatisticSpec::tail_from(1),
      StatisticSpec::counts_total(3), StatisticSpec::single_coord(2),
      StatisticSpec::conjunction({StatisticSpec::empirical_at(2), StatisticSpec::tail_from(2)})};
  for (int trial = 0; trial < 10; ++trial) {
    const JointLaw law = random_law(gen, binary(), 3);
    const RandomVariable rv = RandomVariable::from_function(
        law, [](const Outcome& x) { return Rational(static_cast<long>(x[0] + x[1] + x[2])); });
    for (const auto& spec : specs) {
      const RandomVariable cond = cond_expectation(law, rv, field_from(law, spec));
      REQUIRE(expectation(law, cond) == expectation(law, rv));
    }
  }
}

TEST_CASE("conditional expectation is idempotent", "[conditioning]") {
  std::mt19937 gen(17);
  const JointLaw law = random_law(gen, binary(), 3);
  const RandomVariable rv = RandomVariable::from_function(
      law, [](const Outcome& x) { return Rational(static_cast<long>(2 * x[0] + x[2])); });
  const ConditioningField field = field_from(
      law, StatisticSpec::conjunction({StatisticSpec::empirical_at(2),
                                       StatisticSpec::tail_from(2)}));
  const RandomVariable once = cond_expectation(law, rv, field);
  const RandomVariable twice = cond_expectation(law, once, field);
  for (const auto& [outcome, p] : law.probs()) REQUIRE(once.at(outcome) == twice.at(outcome));
}

TEST_CASE("a conjunction refines both of its components", "[conditioning]") {
  const JointLaw law = iid_law(testing::ternary(), Measure::uniform(3), 3);
  const StatisticSpec a = StatisticSpec::empirical_at(2);
  const StatisticSpec b = StatisticSpec::single_coord(3);
  const ConditioningField both = field_from(law, StatisticSpec::conjunction({a, b}));
  REQUIRE(refines(both, field_from(law, a)));
  REQUIRE(refines(both, field_from(law, b)));
}

TEST_CASE("zero-probability blocks get conditional value zero", "[conditioning]") {
  // Law concentrated on (a,a); the block of (b,b) has no mass.
  const JointLaw law(binary(), 2, {{Outcome{0, 0}, Rational(1)}});
  const RandomVariable rv = RandomVariable::from_function(
      law, [](const Outcome&) { return Rational(5); });
  const ConditioningField field = field_from(law, StatisticSpec::prefix_coords(2));
  const RandomVariable cond = cond_expectation(law, rv, field);
  REQUIRE(cond.at(Outcome{0, 0}) == Rational(5));
  REQUIRE(cond.at(Outcome{1, 1}) == Rational(0));
}
