#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "exch/alphabet.hpp"
#include "exch/rational.hpp"

namespace exch {

// Rational-mass assignment on an alphabet, indexed by symbol. Houses
// empirical measures, point masses and count measures alike; empirical
// measures total 1, count measures have integer masses.
class Measure {
 public:
  Measure() = default;

  explicit Measure(std::size_t alphabet_size) : masses_(alphabet_size, Rational(0)) {}

  explicit Measure(std::vector<Rational> masses) : masses_(std::move(masses)) {
    for (const auto& m : masses_)
      if (m < 0) throw std::domain_error("measure: negative mass");
  }

  static Measure point_mass(std::size_t alphabet_size, Symbol at) {
    Measure m(alphabet_size);
    m.masses_.at(at) = 1;
    return m;
  }

  static Measure uniform(std::size_t alphabet_size) {
    Measure m(alphabet_size);
    for (auto& v : m.masses_) v = Rational(1, alphabet_size);
    return m;
  }

  std::size_t alphabet_size() const { return masses_.size(); }

  const Rational& mass(Symbol s) const { return masses_.at(s); }

  void set_mass(Symbol s, const Rational& v) {
    if (v < 0) throw std::domain_error("measure: negative mass");
    masses_.at(s) = v;
  }

  void add_mass(Symbol s, const Rational& v) {
    masses_.at(s) += v;
    if (masses_[s] < 0) throw std::domain_error("measure: negative mass");
  }

  Rational total() const {
    return std::accumulate(masses_.begin(), masses_.end(), Rational(0));
  }

  bool is_integer_valued() const {
    for (const auto& m : masses_)
      if (denominator(m) != 1) return false;
    return true;
  }

  Measure scaled(const Rational& factor) const {
    Measure out(*this);
    for (auto& m : out.masses_) m *= factor;
    return out;
  }

  Measure plus(const Measure& other) const {
    if (other.alphabet_size() != alphabet_size())
      throw std::domain_error("measure: alphabet mismatch");
    Measure out(*this);
    for (std::size_t i = 0; i < masses_.size(); ++i) out.masses_[i] += other.masses_[i];
    return out;
  }

  // Defined only when the result stays nonnegative (count differences).
  Measure minus(const Measure& other) const {
    if (other.alphabet_size() != alphabet_size())
      throw std::domain_error("measure: alphabet mismatch");
    Measure out(*this);
    for (std::size_t i = 0; i < masses_.size(); ++i) {
      out.masses_[i] -= other.masses_[i];
      if (out.masses_[i] < 0) throw std::domain_error("measure: negative difference");
    }
    return out;
  }

  bool operator==(const Measure& other) const { return masses_ == other.masses_; }
  bool operator!=(const Measure& other) const { return !(*this == other); }

  const std::vector<Rational>& masses() const { return masses_; }

 private:
  std::vector<Rational> masses_;
};

// Symbol counts over a coordinate range [begin, end) of an outcome.
inline Measure counts_of(const Outcome& x, std::size_t alphabet_size, std::size_t begin,
                         std::size_t end) {
  Measure m(alphabet_size);
  for (std::size_t i = begin; i < end; ++i) m.add_mass(x[i], 1);
  return m;
}

// A total rational-valued function on the alphabet; indicators of
// singletons form the generating family used by every checker.
class TestFunction {
 public:
  explicit TestFunction(std::vector<Rational> values) : values_(std::move(values)) {}

  static TestFunction indicator(std::size_t alphabet_size, Symbol at) {
    std::vector<Rational> v(alphabet_size, Rational(0));
    v.at(at) = 1;
    return TestFunction(std::move(v));
  }

  static TestFunction constant(std::size_t alphabet_size, const Rational& c) {
    return TestFunction(std::vector<Rational>(alphabet_size, c));
  }

  std::size_t alphabet_size() const { return values_.size(); }
  const Rational& value(Symbol s) const { return values_.at(s); }
  const std::vector<Rational>& values() const { return values_; }

  TestFunction plus(const TestFunction& other) const {
    if (other.alphabet_size() != alphabet_size())
      throw std::domain_error("test function: alphabet mismatch");
    std::vector<Rational> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
    return TestFunction(std::move(v));
  }

 private:
  std::vector<Rational> values_;
};

// Integral of f against m:  sum_a f(a) * m(a).
inline Rational integrate(const Measure& m, const TestFunction& f) {
  if (m.alphabet_size() != f.alphabet_size())
    throw std::domain_error("integrate: alphabet mismatch");
  Rational acc(0);
  for (std::size_t a = 0; a < m.alphabet_size(); ++a)
    acc += f.value(static_cast<Symbol>(a)) * m.mass(static_cast<Symbol>(a));
  return acc;
}

}  // namespace exch
