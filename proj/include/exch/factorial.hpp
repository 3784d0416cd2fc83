#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "exch/alphabet.hpp"
#include "exch/measure.hpp"

namespace exch {

// Integer-mass measure on length-n tuples. Two flavours live here:
// the sum of point masses over the distinct rearrangements of a tuple
// (total = multinomial coefficient), and the sequential-draw measure of a
// count vector (total = falling factorial of the total count). Masses stay
// unnormalized; division by (n-k)! happens at the point of use.
struct FactorialMeasure {
  std::size_t order = 0;
  std::map<Outcome, std::uint64_t> masses;

  std::uint64_t mass(const Outcome& t) const {
    const auto it = masses.find(t);
    return it == masses.end() ? 0 : it->second;
  }

  std::uint64_t total() const {
    std::uint64_t acc = 0;
    for (const auto& [tuple, m] : masses) acc += m;
    return acc;
  }
};

// Mass 1 on every distinct rearrangement of s. Repeated symbols collapse:
// (a,a) has the single rearrangement (a,a).
inline FactorialMeasure factorial_measure(const Outcome& s) {
  FactorialMeasure out;
  out.order = s.size();
  Outcome sorted = s;
  std::sort(sorted.begin(), sorted.end());
  do {
    out.masses.emplace(sorted, 1);
  } while (std::next_permutation(sorted.begin(), sorted.end()));
  return out;
}

namespace detail {

inline void enumerate_draws(std::vector<std::uint64_t>& remaining, std::size_t depth,
                            std::size_t k, std::uint64_t ways, Outcome& prefix,
                            std::map<Outcome, std::uint64_t>& out) {
  if (depth == k) {
    out[prefix] += ways;
    return;
  }
  for (std::size_t a = 0; a < remaining.size(); ++a) {
    if (remaining[a] == 0) continue;
    prefix.push_back(static_cast<Symbol>(a));
    remaining[a] -= 1;
    enumerate_draws(remaining, depth + 1, k, ways * (remaining[a] + 1), prefix, out);
    remaining[a] += 1;
    prefix.pop_back();
  }
}

}  // namespace detail

// Sequential draws without replacement from an integer count vector: the
// mass of a length-k tuple t is the number of ways to draw t in order,
// i.e. the product of falling counts along t. At k == total(beta) this
// equals the distinct-rearrangement measure weighted by the multiplicity
// factorials, with total k!.
inline FactorialMeasure count_measure_factorial(const Measure& beta, std::size_t k) {
  if (!beta.is_integer_valued())
    throw std::domain_error("count measure: masses must be integers");
  std::vector<std::uint64_t> remaining;
  std::uint64_t total = 0;
  for (std::size_t a = 0; a < beta.alphabet_size(); ++a) {
    const Rational& m = beta.mass(static_cast<Symbol>(a));
    const std::uint64_t c = numerator(m).convert_to<std::uint64_t>();
    remaining.push_back(c);
    total += c;
  }
  if (k > total) throw std::domain_error("count measure: order exceeds total count");
  FactorialMeasure out;
  out.order = k;
  Outcome prefix;
  detail::enumerate_draws(remaining, 0, k, 1, prefix, out.masses);
  return out;
}

inline std::uint64_t falling_factorial(std::uint64_t n, std::size_t k) {
  std::uint64_t acc = 1;
  for (std::size_t i = 0; i < k; ++i) acc *= n - i;
  return acc;
}

inline std::uint64_t factorial(std::size_t n) {
  std::uint64_t acc = 1;
  for (std::size_t i = 2; i <= n; ++i) acc *= i;
  return acc;
}

}  // namespace exch
