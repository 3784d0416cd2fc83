#pragma once

#include <random>
#include <vector>

#include "exch/alphabet.hpp"
#include "exch/joint_law.hpp"
#include "exch/matrix.hpp"

namespace exch::testing {

// Random law on a rational grid: integer weights in [0, max_weight] over
// all outcomes, normalized by their exact sum.
inline JointLaw random_law(std::mt19937& gen, const Alphabet& alphabet, std::size_t n,
                           int max_weight = 6) {
  std::uniform_int_distribution<int> weight(0, max_weight);
  while (true) {
    std::vector<std::pair<Outcome, long>> weights;
    long total = 0;
    for_each_outcome(alphabet.size(), n, [&](const Outcome& x) {
      const long w = weight(gen);
      total += w;
      if (w > 0) weights.emplace_back(x, w);
    });
    if (total == 0) continue;
    JointLaw::ProbMap probs;
    for (const auto& [outcome, w] : weights) probs.emplace(outcome, Rational(w, total));
    return JointLaw(alphabet, n, std::move(probs));
  }
}

inline MatrixLaw random_matrix_law(std::mt19937& gen, const Alphabet& alphabet, std::size_t rows,
                                   std::size_t cols, int max_weight = 6) {
  const JointLaw flat = random_law(gen, alphabet, rows * cols, max_weight);
  return MatrixLaw(alphabet, rows, cols, flat.probs());
}

// Average of a law over all coordinate permutations: exchangeable by
// construction.
inline JointLaw symmetrized(const JointLaw& law) {
  Permutation perm = identity_permutation(law.length());
  std::vector<std::pair<Rational, JointLaw>> components;
  std::size_t count = 0;
  do {
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  perm = identity_permutation(law.length());
  do {
    components.emplace_back(Rational(1, static_cast<long>(count)), permute(law, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  JointLaw::ProbMap probs;
  for (const auto& [w, component] : components)
    for (const auto& [outcome, p] : component.probs()) probs[outcome] += w * p;
  return JointLaw(law.alphabet(), law.length(), std::move(probs));
}

inline Permutation random_permutation(std::mt19937& gen, std::size_t n) {
  Permutation p = identity_permutation(n);
  std::shuffle(p.begin(), p.end(), gen);
  return p;
}

inline Alphabet binary() { return Alphabet({"a", "b"}); }
inline Alphabet ternary() { return Alphabet({"a", "b", "c"}); }

}  // namespace exch::testing
