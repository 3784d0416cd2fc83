// Extends a stationary chain backward in time and samples the pre-window
// symbol by inverse CDF, checking the empirical grid against the exact
// conditional law.

#include <iostream>
#include <numeric>

#include "exch/families.hpp"
#include "exch/serialize.hpp"

using namespace exch;

int main() {
  const Alphabet alphabet({"a", "b"});
  MarkovSpec spec;
  spec.kernel = {Measure({Rational(1, 2), Rational(1, 2)}),
                 Measure({Rational(3, 4), Rational(1, 4)})};
  spec.init = stationary_init(spec.kernel);
  const StationaryModel model = markov_model(alphabet, spec);

  std::cout << "stationary start: " << measure_to_text(spec.init, alphabet) << "\n";

  const JointLaw extended = extend_backward_law(model, 2, 2);
  std::cout << "window of length 2 extended 2 steps back -> length " << extended.length()
            << ", all length-2 windows equal: "
            << (equal_in_distribution(marginal(extended, {0, 1}), marginal(extended, {2, 3})).pass
                    ? "yes"
                    : "no")
            << "\n";

  const Outcome future{0, 1};
  long grid = 1;
  for (std::size_t a = 0; a < 2; ++a) {
    Outcome prepended{static_cast<Symbol>(a), 0, 1};
    const Rational c = model.window_law(3).prob(prepended) / model.window_law(2).prob(future);
    grid = std::lcm(grid, denominator(c).convert_to<long>());
    std::cout << "P(previous = " << alphabet.name(static_cast<Symbol>(a)) << " | window ab) = "
              << format_rational(c) << "\n";
  }
  std::vector<long> histogram(2, 0);
  for (long i = 0; i < grid; ++i)
    ++histogram[backward_sample(model, future, UnitUniform(Rational(i, grid)))];
  std::cout << "inverse-CDF draws on the u-grid of size " << grid << ": a " << histogram[0]
            << ", b " << histogram[1] << "\n";
  return 0;
}
