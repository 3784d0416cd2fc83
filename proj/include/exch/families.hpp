#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "exch/factorial.hpp"
#include "exch/joint_law.hpp"
#include "exch/measure.hpp"

namespace exch {

// Initial distribution plus one-step kernel, both exact. Kernel rows are
// indexed by the current symbol.
struct MarkovSpec {
  Measure init;
  std::vector<Measure> kernel;  // kernel[a] = law of the next symbol given a

  void validate(std::size_t alphabet_size) const {
    if (init.alphabet_size() != alphabet_size || init.total() != 1)
      throw std::domain_error("markov spec: init must be a probability measure");
    if (kernel.size() != alphabet_size)
      throw std::domain_error("markov spec: kernel must have one row per symbol");
    for (const auto& row : kernel)
      if (row.alphabet_size() != alphabet_size || row.total() != 1)
        throw std::domain_error("markov spec: kernel rows must be probability measures");
  }
};

// A rational in [0,1), housing the uniform randomization used by the
// backward sampler.
struct UnitUniform {
  Rational value;

  explicit UnitUniform(Rational v) : value(std::move(v)) {
    if (value < 0 || value >= 1) throw std::domain_error("unit uniform: outside [0,1)");
  }
};

inline JointLaw iid_law(const Alphabet& alphabet, const Measure& base, std::size_t n) {
  if (base.alphabet_size() != alphabet.size() || base.total() != 1)
    throw std::domain_error("iid law: base must be a probability measure");
  JointLaw::ProbMap probs;
  probs.emplace(Outcome{}, Rational(1));
  for (std::size_t step = 0; step < n; ++step) {
    JointLaw::ProbMap next;
    for (const auto& [prefix, p] : probs) {
      for (std::size_t a = 0; a < alphabet.size(); ++a) {
        const Rational& mass = base.mass(static_cast<Symbol>(a));
        if (mass == 0) continue;
        Outcome longer = prefix;
        longer.push_back(static_cast<Symbol>(a));
        next.emplace(std::move(longer), p * mass);
      }
    }
    probs = std::move(next);
  }
  return JointLaw(alphabet, n, std::move(probs));
}

inline JointLaw mixture_law(const std::vector<std::pair<Rational, JointLaw>>& components) {
  if (components.empty()) throw std::domain_error("mixture: no components");
  Rational total(0);
  JointLaw::ProbMap probs;
  for (const auto& [weight, law] : components) {
    if (weight < 0) throw std::domain_error("mixture: negative weight");
    if (!law.same_shape(components.front().second))
      throw std::domain_error("mixture: component alphabet/length mismatch");
    total += weight;
    for (const auto& [outcome, p] : law.probs()) probs[outcome] += weight * p;
  }
  if (total != 1) throw std::domain_error("mixture: weights must sum to 1");
  return JointLaw(components.front().second.alphabet(), components.front().second.length(),
                  std::move(probs));
}

// Sequential draws without replacement from an integer count vector.
inline JointLaw urn_law(const Alphabet& alphabet, const Measure& counts, std::size_t n) {
  if (counts.alphabet_size() != alphabet.size())
    throw std::domain_error("urn law: alphabet mismatch");
  const FactorialMeasure draws = count_measure_factorial(counts, n);  // checks n <= total
  const std::uint64_t total = numerator(counts.total()).convert_to<std::uint64_t>();
  const Rational denom(falling_factorial(total, n));
  JointLaw::ProbMap probs;
  for (const auto& [outcome, ways] : draws.masses)
    probs.emplace(outcome, Rational(ways) / denom);
  return JointLaw(alphabet, n, std::move(probs));
}

// Draw, replace, and add `reinforcement` further copies of the drawn
// symbol. Reinforcement 0 is sampling with replacement (iid).
inline JointLaw polya_law(const Alphabet& alphabet, const Measure& counts,
                          std::uint64_t reinforcement, std::size_t n) {
  if (counts.alphabet_size() != alphabet.size())
    throw std::domain_error("polya law: alphabet mismatch");
  if (!counts.is_integer_valued())
    throw std::domain_error("polya law: counts must be integers");
  if (counts.total() == 0) throw std::domain_error("polya law: empty urn");
  struct State {
    Outcome path;
    Measure urn;
    Rational p;
  };
  std::vector<State> frontier{{Outcome{}, counts, Rational(1)}};
  for (std::size_t step = 0; step < n; ++step) {
    std::vector<State> next;
    for (const auto& state : frontier) {
      const Rational total = state.urn.total();
      for (std::size_t a = 0; a < alphabet.size(); ++a) {
        const Rational& c = state.urn.mass(static_cast<Symbol>(a));
        if (c == 0) continue;
        State child = state;
        child.path.push_back(static_cast<Symbol>(a));
        child.p *= c / total;
        child.urn.add_mass(static_cast<Symbol>(a), Rational(reinforcement));
        next.push_back(std::move(child));
      }
    }
    frontier = std::move(next);
  }
  JointLaw::ProbMap probs;
  for (const auto& state : frontier) probs[state.path] += state.p;
  return JointLaw(alphabet, n, std::move(probs));
}

inline JointLaw markov_law(const Alphabet& alphabet, const MarkovSpec& spec, std::size_t n) {
  spec.validate(alphabet.size());
  JointLaw::ProbMap probs;
  for_each_outcome(alphabet.size(), n, [&](const Outcome& x) {
    Rational p = spec.init.mass(x[0]);
    for (std::size_t i = 0; i + 1 < n && p != 0; ++i) p *= spec.kernel[x[i]].mass(x[i + 1]);
    if (p != 0) probs.emplace(x, p);
  });
  return JointLaw(alphabet, n, std::move(probs));
}

// Exact left fixed point of the kernel (pi K = pi, sum pi = 1), by Gaussian
// elimination over the rationals. For reducible kernels this returns one
// stationary distribution.
inline Measure stationary_init(const std::vector<Measure>& kernel) {
  const std::size_t s = kernel.size();
  // Rows: (K^T - I) pi = 0 for symbols 0..s-2, plus the normalization row.
  std::vector<std::vector<Rational>> aug(s, std::vector<Rational>(s + 1, Rational(0)));
  for (std::size_t r = 0; r + 1 < s; ++r) {
    for (std::size_t c = 0; c < s; ++c) {
      aug[r][c] = kernel[c].mass(static_cast<Symbol>(r));
      if (r == c) aug[r][c] -= 1;
    }
  }
  for (std::size_t c = 0; c < s; ++c) aug[s - 1][c] = 1;
  aug[s - 1][s] = 1;

  std::size_t row = 0;
  for (std::size_t col = 0; col < s && row < s; ++col) {
    std::size_t pivot = row;
    while (pivot < s && aug[pivot][col] == 0) ++pivot;
    if (pivot == s) continue;
    std::swap(aug[row], aug[pivot]);
    const Rational lead = aug[row][col];
    for (auto& v : aug[row]) v /= lead;
    for (std::size_t r = 0; r < s; ++r) {
      if (r == row || aug[r][col] == 0) continue;
      const Rational factor = aug[r][col];
      for (std::size_t c = 0; c <= s; ++c) aug[r][c] -= factor * aug[row][c];
    }
    ++row;
  }
  std::vector<Rational> pi(s, Rational(0));
  for (std::size_t r = 0; r < s; ++r) {
    std::size_t lead = 0;
    while (lead < s && aug[r][lead] == 0) ++lead;
    if (lead < s) pi[lead] = aug[r][s];
  }
  Rational total(0);
  for (const auto& v : pi) {
    if (v < 0) throw std::domain_error("stationary init: no nonnegative fixed point found");
    total += v;
  }
  if (total != 1) throw std::domain_error("stationary init: kernel has no stationary law");
  return Measure(std::move(pi));
}

// Alphabet {0,1,2}. An equal mixture of the constant-ones path, the
// constant-zeros path, and iid uniform draws on {1,2}: exchangeable (it is
// conditionally iid) but not Markov. P(all ones) = 1/3 + (1/3) 2^-n.
inline JointLaw counterexample_law(std::size_t n) {
  if (n == 0) throw std::domain_error("counterexample law: length must be >= 1");
  const Alphabet alphabet({"0", "1", "2"});
  const Symbol zero = 0, one = 1, two = 2;
  JointLaw::ProbMap probs;
  probs[Outcome(n, one)] += Rational(1, 3);
  probs[Outcome(n, zero)] += Rational(1, 3);
  const Rational per_tuple = Rational(1, 3) * Rational(1, Integer(1) << n);
  std::vector<Symbol> coin{one, two};
  for_each_outcome(2, n, [&](const Outcome& bits) {
    Outcome mapped(n);
    for (std::size_t i = 0; i < n; ++i) mapped[i] = coin[bits[i]];
    probs[mapped] += per_tuple;
  });
  return JointLaw(alphabet, n, std::move(probs));
}

// A stationary process presented through its finite windows. window_law(L)
// must be shift- and truncation-consistent; that is checkable, not assumed.
struct StationaryModel {
  enum class Kind { iid, mixture, markov, explicit_laws };

  Alphabet alphabet;
  Kind kind = Kind::explicit_laws;
  std::function<JointLaw(std::size_t)> window_law;
};

struct ConsistencyError : std::runtime_error {
  std::size_t witness_length;
  explicit ConsistencyError(std::size_t length)
      : std::runtime_error("stationary model: window laws inconsistent at length " +
                           std::to_string(length)),
        witness_length(length) {}
};

// Verifies that windows agree under both truncation and shift up to
// max_length: both length-(L-1) marginals of window_law(L) equal
// window_law(L-1).
inline void check_model_consistency(const StationaryModel& model, std::size_t max_length) {
  for (std::size_t L = 2; L <= max_length; ++L) {
    const JointLaw longer = model.window_law(L);
    const JointLaw shorter = model.window_law(L - 1);
    const JointLaw front = marginal(longer, index_range(0, L - 1));
    const JointLaw back = marginal(longer, index_range(1, L));
    if (!equal_in_distribution(front, shorter).pass || !equal_in_distribution(back, shorter).pass)
      throw ConsistencyError(L);
  }
}

inline StationaryModel iid_model(const Alphabet& alphabet, const Measure& base) {
  StationaryModel model;
  model.alphabet = alphabet;
  model.kind = StationaryModel::Kind::iid;
  model.window_law = [alphabet, base](std::size_t L) { return iid_law(alphabet, base, L); };
  return model;
}

inline StationaryModel markov_model(const Alphabet& alphabet, const MarkovSpec& spec) {
  spec.validate(alphabet.size());
  StationaryModel model;
  model.alphabet = alphabet;
  model.kind = StationaryModel::Kind::markov;
  model.window_law = [alphabet, spec](std::size_t L) { return markov_law(alphabet, spec, L); };
  return model;
}

inline StationaryModel counterexample_model() {
  StationaryModel model;
  model.alphabet = Alphabet({"0", "1", "2"});
  model.kind = StationaryModel::Kind::mixture;
  model.window_law = [](std::size_t L) { return counterexample_law(L); };
  return model;
}

// The law of a window extended b steps into the past. By stationarity the
// extension is a relabeling: the law of (xi~_{-b},...,xi~_{L-b}) is
// window_law(L + b).
inline JointLaw extend_backward_law(const StationaryModel& model, std::size_t L, std::size_t b) {
  check_model_consistency(model, L + b);
  return model.window_law(L + b);
}

// Inverse-CDF draw (in alphabet order) from the exact conditional law of
// the symbol one step before `future`. Deterministic given (future, u).
inline Symbol backward_sample(const StationaryModel& model, const Outcome& future,
                              const UnitUniform& u) {
  const std::size_t L = future.size();
  if (L == 0) throw std::domain_error("backward sample: future must be nonempty");
  const JointLaw window = model.window_law(L);
  const Rational future_mass = window.prob(future);
  if (future_mass == 0) throw std::domain_error("backward sample: future has zero probability");
  const JointLaw extended = model.window_law(L + 1);
  Rational cumulative(0);
  for (std::size_t a = 0; a < model.alphabet.size(); ++a) {
    Outcome prepended;
    prepended.reserve(L + 1);
    prepended.push_back(static_cast<Symbol>(a));
    prepended.insert(prepended.end(), future.begin(), future.end());
    cumulative += extended.prob(prepended) / future_mass;
    if (u.value < cumulative) return static_cast<Symbol>(a);
  }
  throw std::domain_error("backward sample: conditional masses do not reach 1");
}

// Writes perm as a sequence of adjacent swaps: applying permute with
// adjacent_transposition(n, i) for each listed i, in order, equals
// permute with perm. The list length is the inversion count, at most
// n(n-1)/2.
inline std::vector<std::size_t> decompose_adjacent(const Permutation& perm) {
  validate_permutation(perm);
  Permutation arr = perm;
  std::vector<std::size_t> swaps;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t i = 0; i + 1 < arr.size(); ++i) {
      if (arr[i] > arr[i + 1]) {
        std::swap(arr[i], arr[i + 1]);
        swaps.push_back(i);
        moved = true;
      }
    }
  }
  return swaps;
}

}  // namespace exch
