#pragma once

#include <stdexcept>
#include <vector>

#include "exch/alphabet.hpp"
#include "exch/measure.hpp"

namespace exch {

// The running empirical measures eta_1..eta_n of one path. They satisfy
// k*eta_k = (k-1)*eta_{k-1} + delta_{x_k} at every step.
struct EmpiricalPath {
  Outcome path;
  std::vector<Measure> measures;  // measures[k-1] == eta_k

  const Measure& at(std::size_t k) const {
    if (k < 1 || k > measures.size()) throw std::domain_error("empirical path: index out of range");
    return measures[k - 1];
  }
};

inline EmpiricalPath empirical_path(const Outcome& x, std::size_t alphabet_size) {
  if (x.empty()) throw std::domain_error("empirical path: length must be >= 1");
  EmpiricalPath out;
  out.path = x;
  out.measures.reserve(x.size());
  Measure counts(alphabet_size);
  for (std::size_t k = 1; k <= x.size(); ++k) {
    counts.add_mass(x[k - 1], 1);
    out.measures.push_back(counts.scaled(Rational(1, k)));
  }
  return out;
}

// Empirical measure of the first k coordinates (eta_k), without building
// the whole path of measures.
inline Measure empirical_at(const Outcome& x, std::size_t alphabet_size, std::size_t k) {
  if (k < 1 || k > x.size()) throw std::domain_error("empirical: index out of range");
  return counts_of(x, alphabet_size, 0, k).scaled(Rational(1, k));
}

// Uniform average of point masses over the top-left n x m block of a
// row-major matrix outcome.
inline Measure empirical_2d(const Outcome& flat, std::size_t rows, std::size_t cols,
                            std::size_t n, std::size_t m, std::size_t alphabet_size) {
  if (flat.size() != rows * cols) throw std::domain_error("empirical_2d: shape mismatch");
  if (n < 1 || n > rows || m < 1 || m > cols)
    throw std::domain_error("empirical_2d: block out of range");
  Measure counts(alphabet_size);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) counts.add_mass(flat[i * cols + j], 1);
  return counts.scaled(Rational(1, static_cast<long>(n * m)));
}

}  // namespace exch
