#include <catch2/catch_amalgamated.hpp>

#include "exch/families.hpp"
#include "exch/joint_law.hpp"
#include "test_support.hpp"

using namespace exch;
using testing::binary;
using testing::random_law;
using testing::random_permutation;

namespace {

JointLaw fair_iid(std::size_t n) {
  return iid_law(binary(), Measure::uniform(2), n);
}

}  // namespace

TEST_CASE("permute with the identity returns the same law", "[dist-core]") {
  const JointLaw law = fair_iid(3);
  REQUIRE(equal_in_distribution(law, permute(law, identity_permutation(3))).pass);
}

TEST_CASE("swapping coordinates of an iid law changes nothing", "[dist-core]") {
  const JointLaw law = fair_iid(2);
  const JointLaw swapped = permute(law, adjacent_transposition(2, 0));
  REQUIRE(equal_in_distribution(law, swapped).pass);
}

TEST_CASE("an adjacent swap is an involution", "[dist-core]") {
  std::mt19937 gen(7);
  const JointLaw law = random_law(gen, binary(), 3);
  const Permutation swap = adjacent_transposition(3, 1);
  REQUIRE(equal_in_distribution(law, permute(permute(law, swap), swap)).pass);
}

TEST_CASE("permute is a left group action", "[dist-core]") {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 30; ++trial) {
    const JointLaw law = random_law(gen, binary(), 4);
    const Permutation p = random_permutation(gen, 4);
    const Permutation q = random_permutation(gen, 4);
    const JointLaw lhs = permute(permute(law, p), q);
    const JointLaw rhs = permute(law, compose(q, p));
    REQUIRE(equal_in_distribution(lhs, rhs).pass);
  }
}

TEST_CASE("permute rejects wrong-size permutations", "[dist-core]") {
  const JointLaw law = fair_iid(2);
  REQUIRE_THROWS_AS(permute(law, identity_permutation(3)), std::domain_error);
  REQUIRE_THROWS_AS(permute(law, Permutation{0, 0}), std::domain_error);
}

TEST_CASE("marginal on the full index set is the identity", "[dist-core]") {
  std::mt19937 gen(3);
  const JointLaw law = random_law(gen, binary(), 3);
  REQUIRE(equal_in_distribution(law, marginal(law, index_range(0, 3))).pass);
}

TEST_CASE("first coordinate of the mixture example has the mixed masses", "[dist-core]") {
  // Oracle: assemble the three branches separately and mix by hand.
  const std::size_t n = 3;
  const Alphabet alphabet({"0", "1", "2"});
  const Symbol one = 1, zero = 0;
  JointLaw::ProbMap ones{{Outcome(n, one), Rational(1)}};
  JointLaw::ProbMap zeros{{Outcome(n, zero), Rational(1)}};
  Measure coin(3);
  coin.set_mass(1, Rational(1, 2));
  coin.set_mass(2, Rational(1, 2));
  const JointLaw mixed = mixture_law({{Rational(1, 3), JointLaw(alphabet, n, ones)},
                                      {Rational(1, 3), JointLaw(alphabet, n, zeros)},
                                      {Rational(1, 3), iid_law(alphabet, coin, n)}});
  const JointLaw expected = marginal(mixed, {0});

  const JointLaw first = marginal(counterexample_law(n), {0});
  REQUIRE(equal_in_distribution(first, expected).pass);
  REQUIRE(first.prob({0}) == Rational(1, 3));
  REQUIRE(first.prob({1}) == Rational(1, 2));
  REQUIRE(first.prob({2}) == Rational(1, 6));
}

TEST_CASE("coordinate marginals of a stationary law agree", "[dist-core]") {
  const JointLaw law = counterexample_law(3);
  REQUIRE(equal_in_distribution(marginal(law, {0}), marginal(law, {1})).pass);
  REQUIRE(equal_in_distribution(marginal(law, {0}), marginal(law, {2})).pass);
}

TEST_CASE("marginal validates its index set", "[dist-core]") {
  const JointLaw law = fair_iid(3);
  REQUIRE_THROWS_AS(marginal(law, {}), std::domain_error);
  REQUIRE_THROWS_AS(marginal(law, {0, 0}), std::domain_error);
  REQUIRE_THROWS_AS(marginal(law, {2, 1}), std::domain_error);
  REQUIRE_THROWS_AS(marginal(law, {3}), std::domain_error);
}

TEST_CASE("a law equals itself in distribution", "[dist-core]") {
  const JointLaw law = fair_iid(2);
  const CheckReport report = equal_in_distribution(law, law);
  REQUIRE(report.pass);
  REQUIRE(report.witnesses.empty());
}

TEST_CASE("fair iid differs from a point mass with an exact witness", "[dist-core]") {
  const JointLaw law = fair_iid(2);
  const JointLaw point(binary(), 2, {{Outcome{0, 0}, Rational(1)}});
  const CheckReport report = equal_in_distribution(law, point);
  REQUIRE_FALSE(report.pass);
  REQUIRE(report.witnesses.front().location == "(a,a)");
  REQUIRE(report.witnesses.front().lhs == Rational(1, 4));
  REQUIRE(report.witnesses.front().rhs == Rational(1));
}

TEST_CASE("the mixture example is invariant under the first swap", "[dist-core]") {
  const JointLaw law = counterexample_law(3);
  const JointLaw swapped = permute(law, adjacent_transposition(3, 0));
  REQUIRE(equal_in_distribution(law, swapped).pass);
}

TEST_CASE("equal_in_distribution requires matching shapes", "[dist-core]") {
  REQUIRE_THROWS_AS(equal_in_distribution(fair_iid(2), fair_iid(3)), std::domain_error);
}

TEST_CASE("laws keep exact unit mass through permute and marginal", "[dist-core]") {
  std::mt19937 gen(23);
  for (int trial = 0; trial < 20; ++trial) {
    const JointLaw law = random_law(gen, testing::ternary(), 3);
    const JointLaw moved = permute(law, random_permutation(gen, 3));
    Rational total(0);
    for (const auto& [outcome, p] : moved.probs()) {
      REQUIRE(p > 0);
      total += p;
    }
    REQUIRE(total == 1);
    const JointLaw cut = marginal(moved, {0, 2});
    total = 0;
    for (const auto& [outcome, p] : cut.probs()) total += p;
    REQUIRE(total == 1);
  }
}

TEST_CASE("law construction rejects invalid inputs", "[dist-core]") {
  REQUIRE_THROWS_AS(JointLaw(binary(), 2, {{Outcome{0, 0}, Rational(1, 2)}}), std::domain_error);
  REQUIRE_THROWS_AS(JointLaw(binary(), 2, {{Outcome{0}, Rational(1)}}), std::domain_error);
  REQUIRE_THROWS_AS(JointLaw(binary(), 2, {{Outcome{0, 5}, Rational(1)}}), std::domain_error);
  REQUIRE_THROWS_AS(JointLaw(binary(), 2,
                             {{Outcome{0, 0}, Rational(3, 2)}, {Outcome{0, 1}, Rational(-1, 2)}}),
                    std::domain_error);
}
