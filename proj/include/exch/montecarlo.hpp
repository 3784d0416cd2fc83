#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "exch/families.hpp"
#include "exch/joint_law.hpp"
#include "exch/measure.hpp"

namespace exch {

// Deterministic stream: identical (seed, stream) reproduces the identical
// draw sequence on every platform. The raw engine output is mapped to
// doubles by hand; <random> distributions are avoided because their
// sequences are implementation-defined.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  static constexpr const char* algorithm() { return "mt19937-64"; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0,1) with 53 random bits.
  double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

// Generative sampler producing one path per call.
struct SampleModel {
  Alphabet alphabet;
  std::size_t length = 0;
  std::function<Outcome(SeededRng&)> draw;
};

namespace detail {

// Per-symbol cumulative weights; inverse-CDF in alphabet order.
inline Symbol draw_from_cumulative(const std::vector<double>& cumulative, double u) {
  for (std::size_t a = 0; a < cumulative.size(); ++a)
    if (u < cumulative[a]) return static_cast<Symbol>(a);
  return static_cast<Symbol>(cumulative.size() - 1);
}

inline std::vector<double> cumulative_of(const Measure& m) {
  std::vector<double> out;
  double acc = 0;
  const double total = to_double(m.total());
  for (std::size_t a = 0; a < m.alphabet_size(); ++a) {
    acc += to_double(m.mass(static_cast<Symbol>(a))) / total;
    out.push_back(acc);
  }
  return out;
}

}  // namespace detail

// Samples a law coordinate by coordinate: each step draws from the exact
// conditional law of the next coordinate given the prefix, via inverse CDF
// in alphabet order. Conditional CDFs are precomputed from the support.
inline SampleModel sampler_from_law(const JointLaw& law) {
  const std::size_t n = law.length();
  const std::size_t s = law.alphabet().size();
  // mass of every prefix, all lengths
  auto prefix_mass = std::make_shared<std::map<Outcome, double>>();
  for (const auto& [outcome, p] : law.probs()) {
    const double pd = to_double(p);
    for (std::size_t len = 0; len <= n; ++len)
      (*prefix_mass)[Outcome(outcome.begin(), outcome.begin() + static_cast<std::ptrdiff_t>(len))] += pd;
  }
  SampleModel model;
  model.alphabet = law.alphabet();
  model.length = n;
  model.draw = [prefix_mass, n, s](SeededRng& rng) {
    Outcome path;
    path.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double here = prefix_mass->at(path);
      double acc = 0;
      const double u = rng.next_double();
      Symbol chosen = static_cast<Symbol>(s - 1);
      for (std::size_t a = 0; a < s; ++a) {
        path.push_back(static_cast<Symbol>(a));
        const auto it = prefix_mass->find(path);
        path.pop_back();
        if (it != prefix_mass->end()) acc += it->second / here;
        if (u < acc) {
          chosen = static_cast<Symbol>(a);
          break;
        }
      }
      path.push_back(chosen);
    }
    return path;
  };
  return model;
}

inline SampleModel iid_sampler(const Alphabet& alphabet, const Measure& base, std::size_t n) {
  const auto cumulative = detail::cumulative_of(base);
  SampleModel model;
  model.alphabet = alphabet;
  model.length = n;
  model.draw = [cumulative, n](SeededRng& rng) {
    Outcome path(n);
    for (auto& coord : path) coord = detail::draw_from_cumulative(cumulative, rng.next_double());
    return path;
  };
  return model;
}

inline SampleModel markov_sampler(const Alphabet& alphabet, const MarkovSpec& spec,
                                  std::size_t n) {
  spec.validate(alphabet.size());
  const auto init = detail::cumulative_of(spec.init);
  std::vector<std::vector<double>> rows;
  for (const auto& row : spec.kernel) rows.push_back(detail::cumulative_of(row));
  SampleModel model;
  model.alphabet = alphabet;
  model.length = n;
  model.draw = [init, rows, n](SeededRng& rng) {
    Outcome path(n);
    path[0] = detail::draw_from_cumulative(init, rng.next_double());
    for (std::size_t i = 1; i < n; ++i)
      path[i] = detail::draw_from_cumulative(rows[path[i - 1]], rng.next_double());
    return path;
  };
  return model;
}

// Draw, replace, add `reinforcement` copies; reinforcement 0 is iid.
inline SampleModel polya_sampler(const Alphabet& alphabet, const Measure& counts,
                                 std::uint64_t reinforcement, std::size_t n) {
  if (!counts.is_integer_valued() || counts.total() == 0)
    throw std::domain_error("polya sampler: counts must be positive integers");
  std::vector<double> start;
  for (std::size_t a = 0; a < counts.alphabet_size(); ++a)
    start.push_back(to_double(counts.mass(static_cast<Symbol>(a))));
  SampleModel model;
  model.alphabet = alphabet;
  model.length = n;
  model.draw = [start, reinforcement, n](SeededRng& rng) {
    std::vector<double> urn = start;
    Outcome path(n);
    for (std::size_t i = 0; i < n; ++i) {
      double total = 0;
      for (const double c : urn) total += c;
      const double u = rng.next_double() * total;
      double acc = 0;
      Symbol chosen = static_cast<Symbol>(urn.size() - 1);
      for (std::size_t a = 0; a < urn.size(); ++a) {
        acc += urn[a];
        if (u < acc) {
          chosen = static_cast<Symbol>(a);
          break;
        }
      }
      path[i] = chosen;
      urn[chosen] += static_cast<double>(reinforcement);
    }
    return path;
  };
  return model;
}

inline SampleModel urn_sampler(const Alphabet& alphabet, const Measure& counts, std::size_t n) {
  if (!counts.is_integer_valued()) throw std::domain_error("urn sampler: counts must be integers");
  if (Rational(static_cast<long>(n)) > counts.total())
    throw std::domain_error("urn sampler: not enough balls");
  std::vector<double> start;
  for (std::size_t a = 0; a < counts.alphabet_size(); ++a)
    start.push_back(to_double(counts.mass(static_cast<Symbol>(a))));
  SampleModel model;
  model.alphabet = alphabet;
  model.length = n;
  model.draw = [start, n](SeededRng& rng) {
    std::vector<double> urn = start;
    Outcome path(n);
    for (std::size_t i = 0; i < n; ++i) {
      double total = 0;
      for (const double c : urn) total += c;
      const double u = rng.next_double() * total;
      double acc = 0;
      Symbol chosen = static_cast<Symbol>(urn.size() - 1);
      for (std::size_t a = 0; a < urn.size(); ++a) {
        acc += urn[a];
        if (u < acc) {
          chosen = static_cast<Symbol>(a);
          break;
        }
      }
      path[i] = chosen;
      urn[chosen] -= 1.0;
    }
    return path;
  };
  return model;
}

// Branch draw for the mixture, then the per-coordinate coin on {1,2}.
inline SampleModel counterexample_sampler(std::size_t n) {
  SampleModel model;
  model.alphabet = Alphabet({"0", "1", "2"});
  model.length = n;
  model.draw = [n](SeededRng& rng) {
    const double u = rng.next_double();
    if (u < 1.0 / 3.0) return Outcome(n, 1);
    if (u < 2.0 / 3.0) return Outcome(n, 0);
    Outcome path(n);
    for (auto& coord : path) coord = rng.next_double() < 0.5 ? 1 : 2;
    return path;
  };
  return model;
}

inline std::vector<Outcome> sample_path(const SampleModel& model, SeededRng& rng,
                                        std::size_t count) {
  std::vector<Outcome> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(model.draw(rng));
  return out;
}

// Point estimate with a normal-approximation confidence radius at 3 sigma
// (99.7%).
struct Estimate {
  double point = 0;
  double half_width = 0;
  std::uint64_t n_samples = 0;

  bool contains(double value) const {
    return value >= point - half_width && value <= point + half_width;
  }
};

template <typename Pred>
Estimate estimate_event(const SampleModel& model, Pred&& event, SeededRng& rng,
                        std::size_t count) {
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i < count; ++i)
    if (event(model.draw(rng))) ++hits;
  const double p = static_cast<double>(hits) / static_cast<double>(count);
  Estimate e;
  e.point = p;
  e.half_width = 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(count));
  e.n_samples = count;
  return e;
}

// Ratio estimator for P(event | given) with a delta-method radius. Returns
// nothing when the conditioning event was never hit.
template <typename EventPred, typename GivenPred>
std::optional<Estimate> estimate_conditional(const SampleModel& model, EventPred&& event,
                                             GivenPred&& given, SeededRng& rng,
                                             std::size_t count) {
  std::uint64_t given_hits = 0, both_hits = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const Outcome path = model.draw(rng);
    if (!given(path)) continue;
    ++given_hits;
    if (event(path)) ++both_hits;
  }
  if (given_hits == 0) return std::nullopt;
  const double p = static_cast<double>(both_hits) / static_cast<double>(given_hits);
  Estimate e;
  e.point = p;
  e.half_width = 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(given_hits));
  e.n_samples = count;
  return e;
}

// One bin of the sampled reverse-martingale diagnostic: paths are binned by
// the exact value of (eta_k, tail after k); within a bin eta_k f is
// constant and the bin mean of eta_{k-1} f - eta_k f estimates the
// martingale gap, which is 0 for exchangeable models.
struct BinDiagnostic {
  std::string bin;
  Estimate estimate;
};

inline std::vector<BinDiagnostic> mc_reverse_martingale_diagnostic(
    const SampleModel& model, std::size_t k, const TestFunction& f, SeededRng& rng,
    std::size_t count, std::size_t min_hits = 100) {
  if (k < 2 || k > model.length)
    throw std::domain_error("martingale diagnostic: k out of range");
  const std::size_t s = model.alphabet.size();
  struct Accumulator {
    std::uint64_t hits = 0;
    double sum = 0, sumsq = 0;
  };
  std::map<std::string, Accumulator> bins;
  for (std::size_t i = 0; i < count; ++i) {
    const Outcome path = model.draw(rng);
    std::vector<std::uint32_t> counts(s, 0);
    for (std::size_t j = 0; j < k; ++j) ++counts[path[j]];
    std::string key = "counts=";
    for (std::size_t a = 0; a < s; ++a) {
      if (a) key += ",";
      key += std::to_string(counts[a]);
    }
    key += ";tail=";
    for (std::size_t j = k; j < model.length; ++j) key += model.alphabet.name(path[j]);
    double eta_k_f = 0, eta_prev_f = 0;
    for (std::size_t a = 0; a < s; ++a)
      eta_k_f += to_double(f.value(static_cast<Symbol>(a))) * counts[a] / static_cast<double>(k);
    --counts[path[k - 1]];
    for (std::size_t a = 0; a < s; ++a)
      eta_prev_f +=
          to_double(f.value(static_cast<Symbol>(a))) * counts[a] / static_cast<double>(k - 1);
    auto& acc = bins[key];
    const double gap = eta_prev_f - eta_k_f;
    ++acc.hits;
    acc.sum += gap;
    acc.sumsq += gap * gap;
  }
  std::vector<BinDiagnostic> out;
  for (const auto& [key, acc] : bins) {
    if (acc.hits < min_hits) continue;
    const double n = static_cast<double>(acc.hits);
    const double mean = acc.sum / n;
    const double variance = acc.hits > 1 ? std::max(0.0, (acc.sumsq - acc.sum * acc.sum / n) / (n - 1)) : 0.0;
    BinDiagnostic bin;
    bin.bin = key;
    bin.estimate.point = mean;
    bin.estimate.half_width = 3.0 * std::sqrt(variance / n);
    bin.estimate.n_samples = acc.hits;
    out.push_back(std::move(bin));
  }
  return out;
}

}  // namespace exch
