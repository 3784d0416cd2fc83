#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "exch/alphabet.hpp"

namespace exch {

// Generators for conditioning fields. Index arguments follow the counting
// convention: EmpiricalAt{k} is the empirical measure of the first k
// coordinates, TailFrom{k} the tuple of everything after them. SingleCoord
// is 1-based. The quadrant/complement atoms apply to matrix laws laid out
// row-major; their (n,m) select the top-left block.
struct EmpiricalAt { std::size_t k; };
struct TailFrom { std::size_t k; };
struct PrefixCoords { std::size_t k; };
struct CountsTotal { std::size_t n; };
struct SingleCoord { std::size_t k; };
struct QuadrantEmpirical { std::size_t n, m; };
struct ComplementBlock { std::size_t n, m; };

using StatisticAtom = std::variant<EmpiricalAt, TailFrom, PrefixCoords, CountsTotal,
                                   SingleCoord, QuadrantEmpirical, ComplementBlock>;

// A conjunction of atoms; a single atom is the one-element conjunction.
// Two outcomes are equivalent iff every atom takes equal values on them.
struct StatisticSpec {
  std::vector<StatisticAtom> atoms;

  static StatisticSpec empirical_at(std::size_t k) { return {{EmpiricalAt{k}}}; }
  static StatisticSpec tail_from(std::size_t k) { return {{TailFrom{k}}}; }
  static StatisticSpec prefix_coords(std::size_t k) { return {{PrefixCoords{k}}}; }
  static StatisticSpec counts_total(std::size_t n) { return {{CountsTotal{n}}}; }
  static StatisticSpec single_coord(std::size_t k) { return {{SingleCoord{k}}}; }
  static StatisticSpec quadrant_empirical(std::size_t n, std::size_t m) {
    return {{QuadrantEmpirical{n, m}}};
  }
  static StatisticSpec complement_block(std::size_t n, std::size_t m) {
    return {{ComplementBlock{n, m}}};
  }

  static StatisticSpec conjunction(std::vector<StatisticSpec> parts) {
    StatisticSpec out;
    for (auto& part : parts)
      for (auto& atom : part.atoms) out.atoms.push_back(atom);
    return out;
  }
};

// Evaluation context: 1-D laws have rows == cols == 0; matrix laws are
// row-major with length == rows * cols.
struct StatisticContext {
  std::size_t length = 0;
  std::size_t alphabet_size = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
};

using StatisticKey = std::vector<std::uint32_t>;

namespace detail {

inline void append_counts(StatisticKey& key, const Outcome& x, std::size_t alphabet_size,
                          std::size_t begin, std::size_t end) {
  std::vector<std::uint32_t> counts(alphabet_size, 0);
  for (std::size_t i = begin; i < end; ++i) ++counts[x[i]];
  key.insert(key.end(), counts.begin(), counts.end());
}

inline void append_block_counts(StatisticKey& key, const Outcome& x, const StatisticContext& ctx,
                                std::size_t u, std::size_t v) {
  std::vector<std::uint32_t> counts(ctx.alphabet_size, 0);
  for (std::size_t i = 0; i < u; ++i)
    for (std::size_t j = 0; j < v; ++j) ++counts[x[i * ctx.cols + j]];
  key.insert(key.end(), counts.begin(), counts.end());
}

inline void require_grid(const StatisticContext& ctx, const char* what) {
  if (ctx.rows == 0 || ctx.cols == 0)
    throw std::domain_error(std::string(what) + ": statistic requires a matrix law");
}

}  // namespace detail

inline void validate_atom(const StatisticAtom& atom, const StatisticContext& ctx) {
  std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, EmpiricalAt>) {
          if (a.k < 1 || a.k > ctx.length) throw std::domain_error("EmpiricalAt: index out of range");
        } else if constexpr (std::is_same_v<T, TailFrom>) {
          if (a.k > ctx.length) throw std::domain_error("TailFrom: index out of range");
        } else if constexpr (std::is_same_v<T, PrefixCoords>) {
          if (a.k > ctx.length) throw std::domain_error("PrefixCoords: index out of range");
        } else if constexpr (std::is_same_v<T, CountsTotal>) {
          if (a.n < 1 || a.n > ctx.length) throw std::domain_error("CountsTotal: index out of range");
        } else if constexpr (std::is_same_v<T, SingleCoord>) {
          if (a.k < 1 || a.k > ctx.length) throw std::domain_error("SingleCoord: index out of range");
        } else if constexpr (std::is_same_v<T, QuadrantEmpirical>) {
          detail::require_grid(ctx, "QuadrantEmpirical");
          if (a.n < 1 || a.n > ctx.rows || a.m < 1 || a.m > ctx.cols)
            throw std::domain_error("QuadrantEmpirical: block out of range");
        } else if constexpr (std::is_same_v<T, ComplementBlock>) {
          detail::require_grid(ctx, "ComplementBlock");
          if (a.n < 1 || a.n > ctx.rows || a.m < 1 || a.m > ctx.cols)
            throw std::domain_error("ComplementBlock: block out of range");
        }
      },
      atom);
}

// Canonical key of the statistic's value on one outcome; two outcomes share
// a key iff the statistic takes equal values on them.
inline StatisticKey evaluate_statistic(const StatisticSpec& spec, const Outcome& x,
                                       const StatisticContext& ctx) {
  StatisticKey key;
  for (const auto& atom : spec.atoms) {
    validate_atom(atom, ctx);
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          key.push_back(0xFFFFFFFFu);  // atom boundary marker
          if constexpr (std::is_same_v<T, EmpiricalAt>) {
            detail::append_counts(key, x, ctx.alphabet_size, 0, a.k);
          } else if constexpr (std::is_same_v<T, TailFrom>) {
            for (std::size_t i = a.k; i < ctx.length; ++i) key.push_back(x[i]);
          } else if constexpr (std::is_same_v<T, PrefixCoords>) {
            for (std::size_t i = 0; i < a.k; ++i) key.push_back(x[i]);
          } else if constexpr (std::is_same_v<T, CountsTotal>) {
            detail::append_counts(key, x, ctx.alphabet_size, 0, a.n);
          } else if constexpr (std::is_same_v<T, SingleCoord>) {
            key.push_back(x[a.k - 1]);
          } else if constexpr (std::is_same_v<T, QuadrantEmpirical>) {
            for (std::size_t u = a.n; u <= ctx.rows; ++u)
              for (std::size_t v = a.m; v <= ctx.cols; ++v)
                detail::append_block_counts(key, x, ctx, u, v);
          } else if constexpr (std::is_same_v<T, ComplementBlock>) {
            for (std::size_t i = 0; i < ctx.rows; ++i)
              for (std::size_t j = 0; j < ctx.cols; ++j)
                if (i >= a.n || j >= a.m) key.push_back(x[i * ctx.cols + j]);
          }
        },
        atom);
  }
  return key;
}

inline std::string describe_atom(const StatisticAtom& atom) {
  return std::visit(
      [](const auto& a) -> std::string {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, EmpiricalAt>) return "empirical@" + std::to_string(a.k);
        else if constexpr (std::is_same_v<T, TailFrom>) return "tail>" + std::to_string(a.k);
        else if constexpr (std::is_same_v<T, PrefixCoords>) return "prefix" + std::to_string(a.k);
        else if constexpr (std::is_same_v<T, CountsTotal>) return "counts" + std::to_string(a.n);
        else if constexpr (std::is_same_v<T, SingleCoord>) return "coord" + std::to_string(a.k);
        else if constexpr (std::is_same_v<T, QuadrantEmpirical>)
          return "quadrant@" + std::to_string(a.n) + "x" + std::to_string(a.m);
        else return "complement@" + std::to_string(a.n) + "x" + std::to_string(a.m);
      },
      atom);
}

inline std::string describe_spec(const StatisticSpec& spec) {
  std::string out;
  for (std::size_t i = 0; i < spec.atoms.size(); ++i) {
    if (i > 0) out += "&";
    out += describe_atom(spec.atoms[i]);
  }
  return out;
}

}  // namespace exch
