// Builds a reinforced-urn law, runs the exact martingale and
// exchangeability checkers, and prints the verdicts with one witness-level
// conditional expectation worked out by hand.

#include <iostream>

#include "exch/conditioning.hpp"
#include "exch/properties.hpp"

using namespace exch;

int main() {
  const Alphabet alphabet({"a", "b"});
  Measure counts(2);
  counts.set_mass(0, Rational(1));
  counts.set_mass(1, Rational(1));
  const JointLaw law = polya_law(alphabet, counts, 1, 4);

  std::cout << "reinforced urn, 4 draws, " << law.probs().size() << " support paths\n";
  std::cout << "exchangeable: " << (check_exchangeable(law).pass ? "pass" : "fail") << "\n";
  std::cout << "reverse-martingale: " << (check_reverse_martingale(law).pass ? "pass" : "fail")
            << "\n";

  // One conditional by hand: E(eta_2 1_a | eta_3, tail) on the block where
  // the first three draws hold two a's and the last draw is b.
  const ConditioningField field = field_from(
      law, StatisticSpec::conjunction({StatisticSpec::empirical_at(3),
                                       StatisticSpec::tail_from(3)}));
  const TestFunction f = TestFunction::indicator(2, 0);
  const RandomVariable eta2f = RandomVariable::from_function(law, [&](const Outcome& x) {
    return integrate(empirical_at(x, 2, 2), f);
  });
  const RandomVariable cond = cond_expectation(law, eta2f, field);
  const Outcome witness{0, 0, 1, 1};
  std::cout << "E(eta_2 1_a | eta_3, tail) at " << format_outcome(alphabet, witness) << " = "
            << format_rational(cond.at(witness)) << " (eta_3 1_a = "
            << format_rational(integrate(empirical_at(witness, 2, 3), f)) << ")\n";
  return 0;
}
