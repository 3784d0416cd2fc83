#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "exch/conditioning.hpp"
#include "exch/empirical.hpp"
#include "exch/factorial.hpp"
#include "exch/families.hpp"
#include "exch/joint_law.hpp"
#include "exch/report.hpp"

namespace exch {

// Which test functions and which indices the martingale checker runs over.
// Indicators of singletons are complete: measures on a finite alphabet are
// determined by singleton masses.
struct MartingaleCheckConfig {
  std::vector<TestFunction> test_functions;  // empty = indicators of all symbols
  std::size_t k_min = 2;
  std::size_t k_max = 0;  // 0 = law length

  std::vector<TestFunction> functions_for(std::size_t alphabet_size) const {
    if (!test_functions.empty()) return test_functions;
    std::vector<TestFunction> fns;
    fns.reserve(alphabet_size);
    for (std::size_t a = 0; a < alphabet_size; ++a)
      fns.push_back(TestFunction::indicator(alphabet_size, static_cast<Symbol>(a)));
    return fns;
  }
};

namespace detail {

inline std::string indicator_name(const Alphabet& alphabet, std::size_t index) {
  return "1_" + alphabet.name(static_cast<Symbol>(index));
}

inline std::string function_name(const Alphabet& alphabet, const TestFunction& f,
                                 std::size_t index) {
  // Indicators get a readable name; anything else is positional.
  std::size_t ones = 0, zeros = 0, at = 0;
  for (std::size_t a = 0; a < f.alphabet_size(); ++a) {
    if (f.value(static_cast<Symbol>(a)) == 1) { ++ones; at = a; }
    else if (f.value(static_cast<Symbol>(a)) == 0) ++zeros;
  }
  if (ones == 1 && zeros + 1 == f.alphabet_size()) return indicator_name(alphabet, at);
  return "f" + std::to_string(index);
}

}  // namespace detail

// Invariance of the law under coordinate permutations. Adjacent
// transpositions generate the symmetric group, so checking the n-1 of them
// suffices; brute force runs all n! permutations instead.
inline CheckReport check_exchangeable(const JointLaw& law, bool brute_force = false) {
  CheckReport report;
  report.check = brute_force ? "exchangeable(brute-force)" : "exchangeable";
  const std::size_t n = law.length();

  const auto compare = [&](const Permutation& perm, const std::string& label) {
    const JointLaw permuted = permute(law, perm);
    const CheckReport eq = equal_in_distribution(law, permuted);
    if (eq.pass) {
      report.record_pass();
    } else {
      const Witness& w = eq.witnesses.front();
      report.record_fail(w.location, label, w.lhs, w.rhs);
    }
  };

  if (brute_force) {
    Permutation perm = identity_permutation(n);
    do {
      std::string label = "perm(";
      for (std::size_t i = 0; i < n; ++i) {
        if (i) label += ",";
        label += std::to_string(perm[i] + 1);
      }
      label += ")";
      compare(perm, label);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    for (std::size_t i = 0; i + 1 < n; ++i)
      compare(adjacent_transposition(n, i),
              "swap(" + std::to_string(i + 1) + "," + std::to_string(i + 2) + ")");
  }
  return report;
}

// Shift invariance of all window marginals: the marginal on coordinates
// 1..w equals the marginal on 1+s..w+s for every window w and shift s.
inline CheckReport check_stationary(const JointLaw& law) {
  CheckReport report;
  report.check = "stationary";
  const std::size_t n = law.length();
  for (std::size_t w = 1; w + 1 <= n; ++w) {
    const JointLaw base = marginal(law, index_range(0, w));
    for (std::size_t s = 1; s + w <= n; ++s) {
      const JointLaw shifted = marginal(law, index_range(s, s + w));
      const CheckReport eq = equal_in_distribution(base, shifted);
      if (eq.pass) {
        report.record_pass();
      } else {
        const Witness& wit = eq.witnesses.front();
        report.record_fail("window=" + std::to_string(w) + ",shift=" + std::to_string(s) +
                               ",outcome=" + wit.location,
                           "marginal-prob", wit.lhs, wit.rhs);
      }
    }
  }
  return report;
}

// Reverse measure-valued martingale property of the empirical path, with
// respect to the fields generated by (eta_k, tail after k). Checks, for
// every k, every test function f and every positive-mass block:
//   E(eta_{k-1} f | block) = eta_k f,
// plus the one-step identity E(f(xi_k) | block) = eta_k f.
inline CheckReport check_reverse_martingale(const JointLaw& law,
                                            const MartingaleCheckConfig& cfg = {}) {
  CheckReport report;
  report.check = "reverse-martingale";
  const std::size_t n = law.length();
  const std::size_t s = law.alphabet().size();
  const std::vector<TestFunction> fns = cfg.functions_for(s);
  const std::size_t k_max = cfg.k_max == 0 ? n : std::min(cfg.k_max, n);

  for (std::size_t k = std::max<std::size_t>(cfg.k_min, 2); k <= k_max; ++k) {
    const ConditioningField field = field_from(
        law, StatisticSpec::conjunction({StatisticSpec::empirical_at(k),
                                         StatisticSpec::tail_from(k)}));
    for (const auto& block : field.blocks()) {
      Rational block_mass(0);
      for (const auto& x : block) block_mass += law.prob(x);
      if (block_mass == 0) continue;
      const Measure eta_k = empirical_at(block.front(), s, k);
      for (std::size_t fi = 0; fi < fns.size(); ++fi) {
        const TestFunction& f = fns[fi];
        const Rational rhs = integrate(eta_k, f);
        Rational lhs_prev(0);   // E(eta_{k-1} f ; block)
        Rational lhs_point(0);  // E(f(xi_k) ; block)
        for (const auto& x : block) {
          const Rational p = law.prob(x);
          if (p == 0) continue;
          lhs_prev += integrate(empirical_at(x, s, k - 1), f) * p;
          lhs_point += f.value(x[k - 1]) * p;
        }
        lhs_prev /= block_mass;
        lhs_point /= block_mass;
        const std::string fname = detail::function_name(law.alphabet(), f, fi);
        const std::string where = "k=" + std::to_string(k) +
                                  ",block=" + format_outcome(law.alphabet(), block.front());
        if (lhs_prev == rhs) report.record_pass();
        else report.record_fail(where, "E(eta_{k-1}" + fname + "|block)", lhs_prev, rhs);
        if (lhs_point == rhs) report.record_pass();
        else report.record_fail(where, "E(" + fname + "(xi_k)|block)", lhs_point, rhs);
      }
    }
  }
  return report;
}

// Conditional law of the next coordinate depends on the prefix only through
// its last symbol (on positive-probability prefixes).
inline CheckReport check_markov(const JointLaw& law) {
  CheckReport report;
  report.check = "markov";
  const std::size_t n = law.length();
  const std::size_t s = law.alphabet().size();
  for (std::size_t k = 1; k + 1 <= n; ++k) {
    const JointLaw prefixes = marginal(law, index_range(0, k + 1));
    const JointLaw shorter = marginal(law, index_range(0, k));
    // First positive-probability prefix seen for each last symbol is the
    // reference; later prefixes must agree with it.
    std::vector<std::optional<std::pair<Outcome, std::vector<Rational>>>> reference(s);
    for (const auto& [prefix, mass] : shorter.probs()) {
      std::vector<Rational> conditional(s, Rational(0));
      for (std::size_t a = 0; a < s; ++a) {
        Outcome extended = prefix;
        extended.push_back(static_cast<Symbol>(a));
        conditional[a] = prefixes.prob(extended) / mass;
      }
      auto& ref = reference[prefix.back()];
      if (!ref) {
        ref = {prefix, conditional};
        continue;
      }
      for (std::size_t a = 0; a < s; ++a) {
        if (conditional[a] == ref->second[a]) {
          report.record_pass();
        } else {
          report.record_fail(
              "k=" + std::to_string(k) + ",prefix=" + format_outcome(law.alphabet(), ref->first) +
                  " vs " + format_outcome(law.alphabet(), prefix),
              "P(next=" + law.alphabet().name(static_cast<Symbol>(a)) + "|prefix)",
              ref->second[a], conditional[a]);
        }
      }
    }
  }
  return report;
}

// One-step conditional laws agree across time indices on
// positive-probability states. Meaningful only for Markov laws.
inline CheckReport check_homogeneous(const JointLaw& law) {
  if (!check_markov(law).pass)
    throw std::domain_error("check_homogeneous: law is not Markov");
  CheckReport report;
  report.check = "homogeneous";
  const std::size_t n = law.length();
  const std::size_t s = law.alphabet().size();
  std::vector<std::optional<std::pair<std::size_t, std::vector<Rational>>>> reference(s);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const JointLaw pair_law = marginal(law, {k, k + 1});
    for (std::size_t a = 0; a < s; ++a) {
      Rational state_mass(0);
      std::vector<Rational> conditional(s, Rational(0));
      for (std::size_t b = 0; b < s; ++b)
        conditional[b] = pair_law.prob({static_cast<Symbol>(a), static_cast<Symbol>(b)});
      for (const auto& m : conditional) state_mass += m;
      if (state_mass == 0) continue;
      for (auto& m : conditional) m /= state_mass;
      auto& ref = reference[a];
      if (!ref) {
        ref = {k, conditional};
        continue;
      }
      for (std::size_t b = 0; b < s; ++b) {
        if (conditional[b] == ref->second[b]) {
          report.record_pass();
        } else {
          report.record_fail("state=" + law.alphabet().name(static_cast<Symbol>(a)) +
                                 ",step=" + std::to_string(ref->first + 1) + " vs " +
                                 std::to_string(k + 1),
                             "P(next=" + law.alphabet().name(static_cast<Symbol>(b)) + "|state)",
                             ref->second[b], conditional[b]);
        }
      }
    }
  }
  return report;
}

// Runs the stationarity and reverse-martingale premises and the
// exchangeability conclusion; flags an implication violation if the
// premises hold exactly but the conclusion fails.
inline CheckReport verify_converse(const JointLaw& law) {
  CheckReport report;
  report.check = "converse";
  const CheckReport stationary = check_stationary(law);
  const CheckReport martingale = check_reverse_martingale(law);
  const CheckReport exchangeable = check_exchangeable(law);
  report.sub_verdicts = {{"stationary", stationary.pass},
                         {"reverse-martingale", martingale.pass},
                         {"exchangeable", exchangeable.pass}};
  report.checked_count =
      stationary.checked_count + martingale.checked_count + exchangeable.checked_count;
  const bool premises = stationary.pass && martingale.pass;
  if (premises && !exchangeable.pass) {
    report.pass = false;
    report.add_info("implication", "VIOLATED");
    for (const auto& w : exchangeable.witnesses) {
      if (report.witnesses.size() >= CheckReport::kMaxWitnesses) break;
      report.witnesses.push_back(w);
    }
  } else {
    report.pass = true;
    report.add_info("implication", premises ? "holds" : "vacuously holds");
  }
  return report;
}

// Conditional law of the next draw given the prefix and the total counts:
// it must equal (beta_n - beta_k) / (n - k) on every positive block.
inline CheckReport check_marginal_urn(const JointLaw& law) {
  CheckReport report;
  report.check = "marginal-urn";
  const std::size_t n = law.length();
  if (n < 2) throw std::domain_error("check_marginal_urn: length must be >= 2");
  const std::size_t s = law.alphabet().size();
  for (std::size_t k = 0; k < n; ++k) {
    const ConditioningField field = field_from(
        law, StatisticSpec::conjunction({StatisticSpec::prefix_coords(k),
                                         StatisticSpec::counts_total(n)}));
    for (const auto& block : field.blocks()) {
      Rational block_mass(0);
      for (const auto& x : block) block_mass += law.prob(x);
      if (block_mass == 0) continue;
      const Outcome& rep = block.front();
      const Measure beta_n = counts_of(rep, s, 0, n);
      const Measure beta_k = counts_of(rep, s, 0, k);
      const Measure expected = beta_n.minus(beta_k).scaled(Rational(1, static_cast<long>(n - k)));
      for (std::size_t a = 0; a < s; ++a) {
        Rational got(0);
        for (const auto& x : block)
          if (x[k] == static_cast<Symbol>(a)) got += law.prob(x);
        got /= block_mass;
        if (got == expected.mass(static_cast<Symbol>(a))) {
          report.record_pass();
        } else {
          report.record_fail("k=" + std::to_string(k) +
                                 ",block=" + format_outcome(law.alphabet(), rep),
                             "P(next=" + law.alphabet().name(static_cast<Symbol>(a)) + "|block)",
                             got, expected.mass(static_cast<Symbol>(a)));
        }
      }
    }
  }
  return report;
}

// Conditional law of the whole remaining tail given the prefix and the
// total counts: it must equal the sequential-draw measure of the remaining
// counts, normalized by (n-k)!.
inline CheckReport check_joint_urn(const JointLaw& law) {
  CheckReport report;
  report.check = "joint-urn";
  const std::size_t n = law.length();
  if (n < 2) throw std::domain_error("check_joint_urn: length must be >= 2");
  const std::size_t s = law.alphabet().size();
  for (std::size_t k = 0; k < n; ++k) {
    const ConditioningField field = field_from(
        law, StatisticSpec::conjunction({StatisticSpec::prefix_coords(k),
                                         StatisticSpec::counts_total(n)}));
    for (const auto& block : field.blocks()) {
      Rational block_mass(0);
      for (const auto& x : block) block_mass += law.prob(x);
      if (block_mass == 0) continue;
      const Outcome& rep = block.front();
      const Measure remaining = counts_of(rep, s, 0, n).minus(counts_of(rep, s, 0, k));
      const FactorialMeasure draws = count_measure_factorial(remaining, n - k);
      const Rational norm(factorial(n - k));
      // Every tail in the block shares the remaining-count multiset, so the
      // draw measure's support enumerates exactly the candidate tails.
      for (const auto& [tail, ways] : draws.masses) {
        Outcome full(rep.begin(), rep.begin() + static_cast<std::ptrdiff_t>(k));
        full.insert(full.end(), tail.begin(), tail.end());
        const Rational got = law.prob(full) / block_mass;
        const Rational expected = Rational(ways) / norm;
        if (got == expected) {
          report.record_pass();
        } else {
          report.record_fail("k=" + std::to_string(k) +
                                 ",block=" + format_outcome(law.alphabet(), rep),
                             "P(tail=" + format_outcome(law.alphabet(), tail) + "|block)", got,
                             expected);
        }
      }
    }
  }
  return report;
}

// The urn-equivalence calculation fails before monotone-class extension:
// on the two-ball urn with f1 = f2 = 1_a, the stepwise product
//   prod_j ((beta_2 - beta_{j-1}) f_j) / (2 - j + 1)
// disagrees pointwise with the factorial-measure form
//   (beta_2^{(2)} / 2!) (f1 (x) f2)
// and is not even measurable with respect to sigma(beta_2). Conditioning on
// the full prefix at every step, by contrast, reproduces the true value.
inline CheckReport demonstrate_flaw() {
  CheckReport report;
  report.check = "urn-equivalence-flaw";
  const Alphabet alphabet({"a", "b"});
  Measure counts(2);
  counts.set_mass(0, Rational(1));
  counts.set_mass(1, Rational(1));
  const JointLaw law = urn_law(alphabet, counts, 2);
  const TestFunction f = TestFunction::indicator(2, 0);  // f1 = f2 = 1_a

  const StatisticSpec sigma_beta = StatisticSpec::conjunction(
      {StatisticSpec::prefix_coords(0), StatisticSpec::counts_total(2)});
  const ConditioningField beta_field = field_from(law, sigma_beta);

  // True conditional expectation of f(xi_1) f(xi_2) given beta_2.
  const RandomVariable product_rv = RandomVariable::from_function(
      law, [&](const Outcome& x) { return f.value(x[0]) * f.value(x[1]); });
  const RandomVariable true_cond = cond_expectation(law, product_rv, beta_field);

  // Stepwise product chain, evaluated pathwise.
  const auto chain_value = [&](const Outcome& x) {
    Rational value(1);
    const Measure beta_2 = counts_of(x, 2, 0, 2);
    for (std::size_t j = 1; j <= 2; ++j) {
      const Measure beta_prev = counts_of(x, 2, 0, j - 1);
      value *= integrate(beta_2.minus(beta_prev), f) / Rational(static_cast<long>(2 - j + 1));
    }
    return value;
  };
  const RandomVariable chain_rv = RandomVariable::from_function(law, chain_value);

  // Factorial-measure form (beta_2^{(2)} / 2!) applied to f (x) f.
  const Measure beta_2 = counts_of(Outcome{0, 1}, 2, 0, 2);
  const FactorialMeasure beta_factorial = count_measure_factorial(beta_2, 2);
  Rational factorial_form(0);
  for (const auto& [tuple, ways] : beta_factorial.masses)
    factorial_form += Rational(ways) * f.value(tuple[0]) * f.value(tuple[1]);
  factorial_form /= Rational(factorial(2));

  // The claimed identity: the chain equals the factorial form pointwise.
  // It does not; the report fails with the gap as witness.
  for (const auto& [x, p] : law.probs()) {
    const Rational chain = chain_rv.at(x);
    if (chain != factorial_form)
      report.record_fail("path=" + format_outcome(alphabet, x), "product-chain vs factorial-form",
                         chain, factorial_form);
    else
      report.record_pass();
    report.add_info("product-chain" + format_outcome(alphabet, x), format_rational(chain));
  }

  // Measurability of the chain with respect to sigma(beta_2): it must be
  // block-constant to qualify, and it is not.
  bool measurable = true;
  for (const auto& block : beta_field.blocks()) {
    std::optional<Rational> seen;
    for (const auto& x : block) {
      if (law.prob(x) == 0) continue;
      const Rational v = chain_rv.at(x);
      if (!seen) seen = v;
      else if (*seen != v) measurable = false;
    }
  }

  // The legitimate first steps: conditioning on the full prefix at each
  // step reproduces the true conditional expectation.
  const ConditioningField step_field = field_from(
      law, StatisticSpec::conjunction({StatisticSpec::prefix_coords(1),
                                       StatisticSpec::counts_total(2)}));
  const RandomVariable inner = cond_expectation(
      law, RandomVariable::from_function(law, [&](const Outcome& x) { return f.value(x[1]); }),
      step_field);
  const RandomVariable stepwise = RandomVariable::from_function(
      law, [&](const Outcome& x) { return f.value(x[0]) * inner.at(x); });
  const RandomVariable stepwise_cond = cond_expectation(law, stepwise, beta_field);

  Rational true_value(0), stepwise_value(0);
  for (const auto& [x, p] : law.probs()) {
    true_value = true_cond.at(x);
    stepwise_value = stepwise_cond.at(x);
    break;
  }

  report.add_info("true-conditional", format_rational(true_value));
  report.add_info("factorial-form", format_rational(factorial_form));
  report.add_info("stepwise-valid", format_rational(stepwise_value));
  report.sub_verdicts.push_back({"chain-measurable-wrt-counts", measurable});
  report.sub_verdicts.push_back({"stepwise-conditioning-valid", stepwise_value == true_value});
  return report;
}

}  // namespace exch
