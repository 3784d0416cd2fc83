#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "exch/conditioning.hpp"
#include "exch/empirical.hpp"
#include "exch/joint_law.hpp"
#include "exch/properties.hpp"
#include "exch/report.hpp"

namespace exch {

// An exact law on N x M matrices over a finite alphabet, stored row-major.
class MatrixLaw {
 public:
  MatrixLaw(Alphabet alphabet, std::size_t rows, std::size_t cols, JointLaw::ProbMap probs)
      : rows_(rows),
        cols_(cols),
        law_(std::move(alphabet), rows * cols, std::move(probs)) {
    if (rows_ == 0 || cols_ == 0) throw std::domain_error("matrix law: empty grid");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Alphabet& alphabet() const { return law_.alphabet(); }
  const JointLaw::ProbMap& probs() const { return law_.probs(); }
  Rational prob(const Outcome& flat) const { return law_.prob(flat); }
  const JointLaw& as_law() const { return law_; }

  StatisticContext context() const {
    return {rows_ * cols_, alphabet().size(), rows_, cols_};
  }

  std::string format_matrix(const Outcome& flat) const {
    std::string out = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i) out += ",";
      out += "[";
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) out += ",";
        out += alphabet().name(flat[i * cols_ + j]);
      }
      out += "]";
    }
    out += "]";
    return out;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  JointLaw law_;
};

// Pushforward under simultaneous row/column reindexing: mass at X moves to
// Y with Y[row_perm[i]][col_perm[j]] = X[i][j].
inline MatrixLaw permute_matrix(const MatrixLaw& law, const Permutation& row_perm,
                                const Permutation& col_perm) {
  if (row_perm.size() != law.rows() || col_perm.size() != law.cols())
    throw std::domain_error("permute_matrix: permutation size mismatch");
  validate_permutation(row_perm);
  validate_permutation(col_perm);
  const std::size_t M = law.cols();
  JointLaw::ProbMap out;
  for (const auto& [x, p] : law.probs()) {
    Outcome y(x.size());
    for (std::size_t i = 0; i < law.rows(); ++i)
      for (std::size_t j = 0; j < M; ++j) y[row_perm[i] * M + col_perm[j]] = x[i * M + j];
    out[y] += p;
  }
  return MatrixLaw(law.alphabet(), law.rows(), law.cols(), std::move(out));
}

// Invariance under independent row and column permutations. Adjacent row
// and column transpositions generate S_N x S_M; brute force runs all
// N!*M! pairs.
inline CheckReport check_sep_exchangeable(const MatrixLaw& law, bool brute_force = false) {
  CheckReport report;
  report.check = brute_force ? "sep-exchangeable(brute-force)" : "sep-exchangeable";
  const std::size_t N = law.rows();
  const std::size_t M = law.cols();

  const auto compare = [&](const Permutation& rp, const Permutation& cp,
                           const std::string& label) {
    const MatrixLaw permuted = permute_matrix(law, rp, cp);
    // Walk both ordered maps for the lexicographically least difference.
    auto ia = law.probs().begin();
    auto ib = permuted.probs().begin();
    while (ia != law.probs().end() || ib != permuted.probs().end()) {
      if (ib == permuted.probs().end() ||
          (ia != law.probs().end() && ia->first < ib->first)) {
        report.record_fail(law.format_matrix(ia->first), label, ia->second, Rational(0));
        return;
      }
      if (ia == law.probs().end() || ib->first < ia->first) {
        report.record_fail(law.format_matrix(ib->first), label, Rational(0), ib->second);
        return;
      }
      if (ia->second != ib->second) {
        report.record_fail(law.format_matrix(ia->first), label, ia->second, ib->second);
        return;
      }
      ++ia;
      ++ib;
    }
    report.record_pass();
  };

  if (brute_force) {
    Permutation rp = identity_permutation(N);
    do {
      Permutation cp = identity_permutation(M);
      do {
        compare(rp, cp, "rows+cols perm");
      } while (std::next_permutation(cp.begin(), cp.end()));
    } while (std::next_permutation(rp.begin(), rp.end()));
  } else {
    for (std::size_t i = 0; i + 1 < N; ++i)
      compare(adjacent_transposition(N, i), identity_permutation(M),
              "row-swap(" + std::to_string(i + 1) + "," + std::to_string(i + 2) + ")");
    for (std::size_t j = 0; j + 1 < M; ++j)
      compare(identity_permutation(N), adjacent_transposition(M, j),
              "col-swap(" + std::to_string(j + 1) + "," + std::to_string(j + 2) + ")");
  }
  return report;
}

// The two candidate conditioning fields at block size (n,m). The quadrant
// field knows every eta_{u,v} with u >= n, v >= m; the block-complement
// field knows eta_{n,m} and every entry outside the top-left n x m block.
// The complement determines all quadrant empiricals, so block-complement
// always refines quadrant-empiricals; on a finite grid it can be strictly
// finer.
enum class FieldVariant { block_complement, quadrant_empiricals };

inline std::string to_string(FieldVariant v) {
  return v == FieldVariant::block_complement ? "block-complement" : "quadrant-empiricals";
}

inline ConditioningField matrix_field(const MatrixLaw& law, std::size_t n, std::size_t m,
                                      FieldVariant variant) {
  StatisticSpec spec = variant == FieldVariant::quadrant_empiricals
                           ? StatisticSpec::quadrant_empirical(n, m)
                           : StatisticSpec::conjunction({StatisticSpec::quadrant_empirical(n, m),
                                                         StatisticSpec::complement_block(n, m)});
  return field_from_context(spec, law.context());
}

// 2-D reverse measure-valued martingale: for every block size (n,m), every
// smaller block (k,l), every indicator f and every positive-mass block of
// the selected field, E(eta_{k,l} f | block) = eta_{n,m} f.
inline CheckReport check_reverse_martingale_2d(const MatrixLaw& law, FieldVariant variant) {
  CheckReport report;
  report.check = "reverse-martingale-2d(" + to_string(variant) + ")";
  const std::size_t N = law.rows();
  const std::size_t M = law.cols();
  const std::size_t s = law.alphabet().size();
  if (N < 2 || M < 2)
    throw std::domain_error("check_reverse_martingale_2d: grid must be at least 2x2");

  for (std::size_t n = 2; n <= N; ++n) {
    for (std::size_t m = 2; m <= M; ++m) {
      const ConditioningField field = matrix_field(law, n, m, variant);
      for (const auto& block : field.blocks()) {
        Rational block_mass(0);
        for (const auto& x : block) block_mass += law.prob(x);
        if (block_mass == 0) continue;
        const Measure eta_nm = empirical_2d(block.front(), N, M, n, m, s);
        for (std::size_t a = 0; a < s; ++a) {
          const TestFunction f = TestFunction::indicator(s, static_cast<Symbol>(a));
          const Rational rhs = integrate(eta_nm, f);
          for (std::size_t k = 1; k <= n; ++k) {
            for (std::size_t l = 1; l <= m; ++l) {
              Rational lhs(0);
              for (const auto& x : block) {
                const Rational p = law.prob(x);
                if (p == 0) continue;
                lhs += integrate(empirical_2d(x, N, M, k, l, s), f) * p;
              }
              lhs /= block_mass;
              if (lhs == rhs) {
                report.record_pass();
              } else {
                report.record_fail(
                    "(n,m)=(" + std::to_string(n) + "," + std::to_string(m) + "),(k,l)=(" +
                        std::to_string(k) + "," + std::to_string(l) +
                        "),block=" + law.format_matrix(block.front()),
                    "E(eta_{k,l}1_" + law.alphabet().name(static_cast<Symbol>(a)) + "|block)", lhs,
                    rhs);
              }
            }
          }
        }
      }
    }
  }
  return report;
}

enum class ViewAxis { column_tuples, row_tuples };

// The sequence of column tuples Y^n_j = (X_{1,j},...,X_{n,j}) as a law of
// length M over the n-fold tuple alphabet (resp. row tuples Z^m_i).
inline JointLaw marginal_views(const MatrixLaw& law, std::size_t depth, ViewAxis axis) {
  const std::size_t N = law.rows();
  const std::size_t M = law.cols();
  const std::size_t s = law.alphabet().size();
  const bool columns = axis == ViewAxis::column_tuples;
  if (depth < 1 || depth > (columns ? N : M))
    throw std::domain_error("marginal_views: depth out of range");
  std::size_t tuple_count = 1;
  for (std::size_t i = 0; i < depth; ++i) {
    tuple_count *= s;
    if (tuple_count > 255) throw std::domain_error("marginal_views: tuple alphabet too large");
  }
  const Alphabet tuple_alphabet = law.alphabet().power(depth);
  const std::size_t length = columns ? M : N;
  JointLaw::ProbMap out;
  for (const auto& [x, p] : law.probs()) {
    Outcome view(length);
    for (std::size_t pos = 0; pos < length; ++pos) {
      std::size_t rank = 0;
      for (std::size_t d = 0; d < depth; ++d) {
        const Symbol entry = columns ? x[d * M + pos] : x[pos * M + d];
        rank = rank * s + entry;
      }
      view[pos] = static_cast<Symbol>(rank);
    }
    out[view] += p;
  }
  return JointLaw(tuple_alphabet, length, std::move(out));
}

// Both directions of the marginal characterisation: separate
// exchangeability holds iff every column/row tuple view is stationary with
// a reverse-martingale empirical path.
inline CheckReport check_marginal_characterisation(const MatrixLaw& law) {
  CheckReport report;
  report.check = "marginal-characterisation";
  const CheckReport sep = check_sep_exchangeable(law);
  report.sub_verdicts.push_back({"sep-exchangeable", sep.pass});
  report.checked_count += sep.checked_count;

  bool all_views_pass = true;
  std::string first_failed_view;
  const auto run_view = [&](const JointLaw& view, const std::string& name) {
    const CheckReport st = check_stationary(view);
    const CheckReport rm = check_reverse_martingale(view);
    report.sub_verdicts.push_back({name + "-stationary", st.pass});
    report.sub_verdicts.push_back({name + "-reverse-martingale", rm.pass});
    report.checked_count += st.checked_count + rm.checked_count;
    if (!(st.pass && rm.pass) && all_views_pass) {
      all_views_pass = false;
      first_failed_view = name;
    }
  };
  for (std::size_t n = 1; n <= law.rows(); ++n)
    run_view(marginal_views(law, n, ViewAxis::column_tuples), "Y" + std::to_string(n));
  for (std::size_t m = 1; m <= law.cols(); ++m)
    run_view(marginal_views(law, m, ViewAxis::row_tuples), "Z" + std::to_string(m));

  const bool forward_ok = !sep.pass || all_views_pass;
  const bool reverse_ok = !all_views_pass || sep.pass;
  report.pass = forward_ok && reverse_ok;
  if (!forward_ok) {
    report.add_info("implication", "forward VIOLATED");
    report.witnesses.push_back(
        {first_failed_view, "sep-exchangeable but view fails", Rational(1), Rational(0)});
  } else if (!reverse_ok) {
    report.add_info("implication", "reverse VIOLATED");
    const Witness& w = sep.witnesses.front();
    report.witnesses.push_back(w);
  } else {
    report.add_info("implication",
                    sep.pass ? "holds (both directions)" : "holds (premises fail coherently)");
  }
  return report;
}

// Exhaustive or budgeted search space: all convex combinations, on the
// rational grid with the given denominator, of point masses on single
// matrices.
struct SearchSpace {
  std::size_t rows = 2;
  std::size_t cols = 2;
  std::size_t alphabet_size = 2;
  std::uint64_t denominator = 4;
};

struct SearchResult {
  CheckReport report;
  std::optional<MatrixLaw> counterexample;  // reverse-martingale pass, sep-exchangeable fail
};

namespace detail {

inline std::uint64_t composition_count(std::uint64_t total, std::size_t parts) {
  // C(total + parts - 1, total), saturating; exact while it fits.
  Integer num = 1, den = 1;
  for (std::uint64_t i = 1; i <= total; ++i) {
    num *= Integer(parts - 1 + i);
    den *= Integer(i);
  }
  const Integer count = num / den;
  if (count > Integer(std::numeric_limits<std::uint64_t>::max()))
    return std::numeric_limits<std::uint64_t>::max();
  return count.convert_to<std::uint64_t>();
}

// fn returns false to stop the enumeration early.
template <typename Fn>
bool for_each_composition(std::uint64_t total, std::size_t parts, std::vector<std::uint64_t>& acc,
                          Fn&& fn) {
  if (parts == 1) {
    acc.push_back(total);
    const bool keep_going = fn(const_cast<const std::vector<std::uint64_t>&>(acc));
    acc.pop_back();
    return keep_going;
  }
  for (std::uint64_t first = 0; first <= total; ++first) {
    acc.push_back(first);
    const bool keep_going = for_each_composition(total - first, parts - 1, acc, fn);
    acc.pop_back();
    if (!keep_going) return false;
  }
  return true;
}

}  // namespace detail

inline std::size_t default_parallelism() {
  if (const char* env = std::getenv("EXCH_THREADS")) {
    const long v = std::atol(env);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Enumerates the space in deterministic lexicographic order; for every
// candidate runs both martingale variants and the separate-exchangeability
// check. A candidate passing the martingale check but failing separate
// exchangeability is evidence against the converse and is returned, not
// asserted away. budget = 0 means exhaustive.
inline SearchResult conjecture_search(
    const SearchSpace& space, std::uint64_t budget = std::numeric_limits<std::uint64_t>::max(),
    const std::function<void(std::uint64_t, std::uint64_t)>& progress = {},
    std::size_t threads = 0) {
  SearchResult result;
  result.report.check = "conjecture-search";

  std::vector<std::string> names;
  for (std::size_t a = 0; a < space.alphabet_size; ++a) names.push_back(std::string(1, 'a' + a));
  const Alphabet alphabet(names);
  const std::size_t cells = space.rows * space.cols;

  std::vector<Outcome> matrices;
  for_each_outcome(space.alphabet_size, cells, [&](const Outcome& x) { matrices.push_back(x); });

  const std::uint64_t all = detail::composition_count(space.denominator, matrices.size());
  const std::uint64_t total = std::min<std::uint64_t>(all, budget);

  std::vector<std::vector<std::uint64_t>> candidates;
  candidates.reserve(total);
  if (total > 0) {
    std::vector<std::uint64_t> acc;
    detail::for_each_composition(space.denominator, matrices.size(), acc,
                                 [&](const std::vector<std::uint64_t>& weights) {
                                   candidates.push_back(weights);
                                   return candidates.size() < total;
                                 });
  }

  struct Verdicts {
    bool rm_block = false, rm_quadrant = false, sep = false;
  };
  std::vector<Verdicts> verdicts(candidates.size());

  const auto evaluate = [&](std::size_t index) {
    const auto& weights = candidates[index];
    JointLaw::ProbMap probs;
    for (std::size_t i = 0; i < weights.size(); ++i)
      if (weights[i] > 0)
        probs[matrices[i]] = Rational(weights[i], space.denominator);
    const MatrixLaw law(alphabet, space.rows, space.cols, std::move(probs));
    Verdicts v;
    v.rm_block = check_reverse_martingale_2d(law, FieldVariant::block_complement).pass;
    v.rm_quadrant = check_reverse_martingale_2d(law, FieldVariant::quadrant_empiricals).pass;
    v.sep = check_sep_exchangeable(law).pass;
    verdicts[index] = v;
  };

  const std::size_t workers = std::min<std::size_t>(
      threads == 0 ? default_parallelism() : threads, std::max<std::size_t>(candidates.size(), 1));
  std::atomic<std::size_t> next{0};
  std::atomic<std::uint64_t> processed{0};
  std::mutex progress_mutex;
  std::uint64_t last_milestone = 0;
  const auto worker = [&]() {
    while (true) {
      const std::size_t index = next.fetch_add(1);
      if (index >= candidates.size()) return;
      evaluate(index);
      const std::uint64_t done = processed.fetch_add(1) + 1;
      if (progress && (done % 1000 == 0 || done == candidates.size())) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        if (done > last_milestone) {
          last_milestone = done;
          progress(done, candidates.size());
        }
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::uint64_t rm_block_pass = 0, rm_quadrant_pass = 0, sep_pass = 0;
  std::uint64_t prop_violations = 0, converse_gap_block = 0, converse_gap_quadrant = 0;
  std::optional<std::size_t> first_gap;
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    const Verdicts& v = verdicts[i];
    rm_block_pass += v.rm_block;
    rm_quadrant_pass += v.rm_quadrant;
    sep_pass += v.sep;
    if (v.sep && !(v.rm_block && v.rm_quadrant)) {
      ++prop_violations;
      result.report.record_fail("candidate#" + std::to_string(i),
                                "sep-exchangeable must be a reverse martingale", Rational(1),
                                Rational(0));
    }
    if (v.rm_block && !v.sep) {
      ++converse_gap_block;
      if (!first_gap) first_gap = i;
    }
    if (v.rm_quadrant && !v.sep) ++converse_gap_quadrant;
  }
  result.report.checked_count += verdicts.size();

  if (first_gap) {
    const auto& weights = candidates[*first_gap];
    JointLaw::ProbMap probs;
    for (std::size_t i = 0; i < weights.size(); ++i)
      if (weights[i] > 0) probs[matrices[i]] = Rational(weights[i], space.denominator);
    result.counterexample = MatrixLaw(alphabet, space.rows, space.cols, std::move(probs));
  }

  result.report.add_info("candidates", std::to_string(verdicts.size()));
  result.report.add_info("rm-block-complement-pass", std::to_string(rm_block_pass));
  result.report.add_info("rm-quadrant-pass", std::to_string(rm_quadrant_pass));
  result.report.add_info("sep-exchangeable-pass", std::to_string(sep_pass));
  result.report.add_info("direct-implication-violations", std::to_string(prop_violations));
  result.report.add_info("converse-gap-block-complement", std::to_string(converse_gap_block));
  result.report.add_info("converse-gap-quadrant", std::to_string(converse_gap_quadrant));
  result.report.add_info("converse-status",
                         converse_gap_block + converse_gap_quadrant == 0
                             ? "no counterexample in budget"
                             : "counterexample found");
  return result;
}

}  // namespace exch
