#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace exch {

// Symbols are indices into an Alphabet; outcomes are coordinate tuples.
using Symbol = std::uint8_t;
using Outcome = std::vector<Symbol>;

// Permutation of {0..n-1}, stored as images: perm[i] is where index i goes.
using Permutation = std::vector<std::size_t>;

// An ordered finite set of distinct symbol names. The order is total and
// fixed; it drives outcome enumeration, inverse-CDF sampling and the
// ordering of report witnesses.
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw std::domain_error("alphabet: must hold at least one symbol");
    if (symbols_.size() > 255) throw std::domain_error("alphabet: too many symbols");
    std::set<std::string> seen(symbols_.begin(), symbols_.end());
    if (seen.size() != symbols_.size())
      throw std::domain_error("alphabet: duplicate symbol");
  }

  std::size_t size() const { return symbols_.size(); }

  const std::string& name(Symbol s) const {
    if (s >= symbols_.size()) throw std::domain_error("alphabet: symbol index out of range");
    return symbols_[s];
  }

  const std::vector<std::string>& names() const { return symbols_; }

  Symbol index_of(const std::string& name) const {
    const auto it = std::find(symbols_.begin(), symbols_.end(), name);
    if (it == symbols_.end())
      throw std::domain_error("alphabet: unknown symbol '" + name + "'");
    return static_cast<Symbol>(it - symbols_.begin());
  }

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }
  bool operator!=(const Alphabet& other) const { return !(*this == other); }

  // Tuple alphabet over this one: all length-k tuples in lexicographic
  // order, named "(x,y,...)". Used for column/row tuple views of matrices.
  Alphabet power(std::size_t k) const {
    std::vector<std::string> names;
    Outcome tuple(k, 0);
    const std::size_t s = size();
    while (true) {
      std::string label = "(";
      for (std::size_t i = 0; i < k; ++i) {
        if (i > 0) label += ",";
        label += symbols_[tuple[i]];
      }
      label += ")";
      names.push_back(std::move(label));
      std::size_t pos = k;
      while (pos > 0) {
        --pos;
        if (tuple[pos] + 1u < s) {
          ++tuple[pos];
          std::fill(tuple.begin() + static_cast<std::ptrdiff_t>(pos) + 1, tuple.end(), 0);
          break;
        }
        if (pos == 0) return Alphabet(std::move(names));
      }
      if (k == 0) return Alphabet(std::move(names));
    }
  }

 private:
  std::vector<std::string> symbols_;
};

inline std::string format_outcome(const Alphabet& alphabet, const Outcome& x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > 0) out += ",";
    out += alphabet.name(x[i]);
  }
  out += ")";
  return out;
}

// Visits all s^n outcomes in lexicographic order.
template <typename Fn>
void for_each_outcome(std::size_t alphabet_size, std::size_t length, Fn&& fn) {
  Outcome x(length, 0);
  while (true) {
    fn(const_cast<const Outcome&>(x));
    std::size_t pos = length;
    while (true) {
      if (pos == 0) return;
      --pos;
      if (x[pos] + 1u < alphabet_size) {
        ++x[pos];
        std::fill(x.begin() + static_cast<std::ptrdiff_t>(pos) + 1, x.end(), 0);
        break;
      }
      x[pos] = 0;
    }
  }
}

inline void validate_permutation(const Permutation& perm) {
  std::vector<bool> hit(perm.size(), false);
  for (const std::size_t image : perm) {
    if (image >= perm.size()) throw std::domain_error("permutation: image out of range");
    if (hit[image]) throw std::domain_error("permutation: not a bijection");
    hit[image] = true;
  }
}

inline Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  return p;
}

// Swap of positions i and i+1 (0-based).
inline Permutation adjacent_transposition(std::size_t n, std::size_t i) {
  if (i + 1 >= n) throw std::domain_error("transposition: index out of range");
  Permutation p = identity_permutation(n);
  std::swap(p[i], p[i + 1]);
  return p;
}

// compose(q, p)[i] = q[p[i]]  (apply p first, then q).
inline Permutation compose(const Permutation& q, const Permutation& p) {
  if (q.size() != p.size()) throw std::domain_error("compose: size mismatch");
  Permutation r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = q[p[i]];
  return r;
}

}  // namespace exch
