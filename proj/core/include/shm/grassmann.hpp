#pragma once

// Finite-dimensional real Grassmann algebra with sparse coefficient storage.
//
// An element is a sum of monomials theta_{i1} ... theta_{ik} (i1 < ... < ik)
// encoded as bitmasks over at most 16 generators. The coefficient type is
// either double or an exact rational.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "shm/errors.hpp"

namespace shm {

using Monomial = std::uint32_t;
using Rational = boost::rational<std::int64_t>;

inline constexpr int kMaxGenerators = 16;

inline int degree(Monomial m) { return std::popcount(m); }

// Sign picked up when bringing theta_A theta_B into ascending order. Only
// meaningful for disjoint A and B.
inline int product_sign(Monomial a, Monomial b) {
  int swaps = 0;
  while (b != 0) {
    const int j = std::countr_zero(b);
    b &= b - 1;
    swaps += std::popcount(a >> (j + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

enum class Parity { zero, even, odd, mixed };

// Coefficient helpers; specialised below for the two supported types.
template <class C>
struct CoefTraits;

template <>
struct CoefTraits<double> {
  static double ratio(std::int64_t num, std::int64_t den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double abs(double c) { return std::abs(c); }
  static double to_double(double c) { return c; }
  static bool negligible(double c, double tol) { return std::abs(c) <= tol; }
};

template <>
struct CoefTraits<Rational> {
  static Rational ratio(std::int64_t num, std::int64_t den) {
    return Rational(num, den);
  }
  static Rational abs(const Rational& c) { return boost::abs(c); }
  static double to_double(const Rational& c) {
    return boost::rational_cast<double>(c);
  }
  static bool negligible(const Rational& c, double) { return c == Rational(0); }
};

template <class C>
class Grassmann {
 public:
  using Coef = C;
  using Term = std::pair<Monomial, C>;

  Grassmann() = default;
  explicit Grassmann(int generator_count) : gens_(check_count(generator_count)) {}

  static Grassmann scalar(int generator_count, const C& value) {
    Grassmann g(generator_count);
    if (!(value == C(0))) g.terms_.emplace_back(Monomial{0}, value);
    return g;
  }

  static Grassmann generator(int generator_count, int index, const C& value = C(1)) {
    Grassmann g(generator_count);
    if (index < 0 || index >= generator_count) {
      fail(ErrorCode::generator_budget_exceeded,
           "generator " + std::to_string(index) + " outside budget " +
               std::to_string(generator_count));
    }
    if (!(value == C(0))) g.terms_.emplace_back(Monomial{1} << index, value);
    return g;
  }

  // Builds an element from arbitrary (mask, coefficient) pairs; duplicate
  // masks are summed.
  static Grassmann from_terms(int generator_count, const std::vector<Term>& terms) {
    Grassmann g(generator_count);
    std::map<Monomial, C> acc;
    for (const auto& [m, c] : terms) {
      g.check_mask(m);
      acc[m] += c;
    }
    g.assign(acc);
    return g;
  }

  int generator_count() const { return gens_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  C coefficient(Monomial m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, Monomial key) { return t.first < key; });
    return (it != terms_.end() && it->first == m) ? it->second : C(0);
  }

  C body() const { return coefficient(0); }
  Grassmann soul() const {
    Grassmann out = *this;
    if (!out.terms_.empty() && out.terms_.front().first == 0) out.terms_.erase(out.terms_.begin());
    return out;
  }

  Parity parity() const {
    bool even = false, odd = false;
    for (const auto& t : terms_) (degree(t.first) % 2 == 0 ? even : odd) = true;
    if (even && odd) return Parity::mixed;
    if (even) return Parity::even;
    if (odd) return Parity::odd;
    return Parity::zero;
  }
  bool is_even() const { auto p = parity(); return p == Parity::even || p == Parity::zero; }
  bool is_odd() const { auto p = parity(); return p == Parity::odd || p == Parity::zero; }

  Grassmann even_part() const { return filter(0); }
  Grassmann odd_part() const { return filter(1); }

  double max_abs() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, CoefTraits<C>::to_double(CoefTraits<C>::abs(t.second)));
    return m;
  }

  // Largest coefficient magnitude restricted to odd monomials.
  double max_abs_odd() const { return odd_part().max_abs(); }

  // Drops every coefficient at or below tol in magnitude.
  Grassmann pruned(double tol) const {
    Grassmann out(gens_);
    for (const auto& t : terms_)
      if (!CoefTraits<C>::negligible(t.second, tol)) out.terms_.push_back(t);
    return out;
  }

  Grassmann operator-() const {
    Grassmann out = *this;
    for (auto& t : out.terms_) t.second = -t.second;
    return out;
  }

  Grassmann& operator+=(const Grassmann& o) { return *this = combine(o, C(1)); }
  Grassmann& operator-=(const Grassmann& o) { return *this = combine(o, C(-1)); }

  friend Grassmann operator+(const Grassmann& a, const Grassmann& b) { return a.combine(b, C(1)); }
  friend Grassmann operator-(const Grassmann& a, const Grassmann& b) { return a.combine(b, C(-1)); }

  friend Grassmann operator*(const Grassmann& a, const Grassmann& b) {
    a.require_same(b);
    std::map<Monomial, C> acc;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        if ((ma & mb) != 0) continue;
        const C v = ca * cb;
        if (product_sign(ma, mb) < 0) {
          acc[ma | mb] -= v;
        } else {
          acc[ma | mb] += v;
        }
      }
    }
    Grassmann out(a.gens_);
    out.assign(acc);
    return out;
  }

  friend Grassmann operator*(const Grassmann& a, const C& s) { return a.scaled(s); }
  friend Grassmann operator*(const C& s, const Grassmann& a) { return a.scaled(s); }

  Grassmann scaled(const C& s) const {
    Grassmann out(gens_);
    if (s == C(0)) return out;
    out.terms_ = terms_;
    for (auto& t : out.terms_) t.second *= s;
    return out;
  }

  // Inverse by terminating geometric series in the nilpotent soul.
  Grassmann inverse() const {
    const C b = body();
    if (b == C(0)) fail(ErrorCode::no_body, "element has vanishing body");
    const C inv_b = C(1) / b;
    const Grassmann n = soul().scaled(-inv_b);
    Grassmann acc = scalar(gens_, C(1));
    Grassmann power = acc;
    for (int k = 1; k <= gens_ && !power.is_zero(); ++k) {
      power = power * n;
      acc += power;
    }
    return acc.scaled(inv_b);
  }

  friend bool operator==(const Grassmann& a, const Grassmann& b) {
    return a.gens_ == b.gens_ && a.terms_ == b.terms_;
  }

  // Human-readable form, e.g. "1 + 2*t0t1".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (i) s += " + ";
      s += std::to_string(CoefTraits<C>::to_double(terms_[i].second));
      if (terms_[i].first != 0) s += "*";
      for (int g = 0; g < gens_; ++g)
        if (terms_[i].first & (Monomial{1} << g)) s += "t" + std::to_string(g);
    }
    return s;
  }

 private:
  static int check_count(int n) {
    if (n < 0 || n > kMaxGenerators)
      fail(ErrorCode::generator_budget_exceeded, "generator count " + std::to_string(n));
    return n;
  }

  void check_mask(Monomial m) const {
    if (gens_ < 32 && (m >> gens_) != 0)
      fail(ErrorCode::generator_budget_exceeded, "monomial outside generator budget");
  }

  void require_same(const Grassmann& o) const {
    if (gens_ != o.gens_)
      fail(ErrorCode::generator_mismatch,
           std::to_string(gens_) + " vs " + std::to_string(o.gens_) + " generators");
  }

  void assign(const std::map<Monomial, C>& acc) {
    terms_.clear();
    terms_.reserve(acc.size());
    for (const auto& [m, c] : acc)
      if (!(c == C(0))) terms_.emplace_back(m, c);
  }

  Grassmann combine(const Grassmann& o, const C& sign) const {
    require_same(o);
    Grassmann out(gens_);
    out.terms_.reserve(terms_.size() + o.terms_.size());
    auto i = terms_.begin();
    auto j = o.terms_.begin();
    while (i != terms_.end() || j != o.terms_.end()) {
      if (j == o.terms_.end() || (i != terms_.end() && i->first < j->first)) {
        out.terms_.push_back(*i++);
      } else if (i == terms_.end() || j->first < i->first) {
        out.terms_.emplace_back(j->first, sign * j->second);
        ++j;
      } else {
        C v = i->second + sign * j->second;
        if (!(v == C(0))) out.terms_.emplace_back(i->first, v);
        ++i;
        ++j;
      }
    }
    return out;
  }

  Grassmann filter(int parity_bit) const {
    Grassmann out(gens_);
    for (const auto& t : terms_)
      if (degree(t.first) % 2 == parity_bit) out.terms_.push_back(t);
    return out;
  }

  int gens_ = 0;
  std::vector<Term> terms_;
};

using GrassmannElement = Grassmann<double>;
using RationalGrassmann = Grassmann<Rational>;

template <class C>
std::pair<Grassmann<C>, Grassmann<C>> parity_split(const Grassmann<C>& a) {
  return {a.even_part(), a.odd_part()};
}

// Element of A[eps]/(eps^2) with an even deformation parameter eps.
template <class T>
struct Dual {
  T value;
  T eps;

  Dual() = default;
  Dual(T v, T e) : value(std::move(v)), eps(std::move(e)) {}

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.value + b.value, a.eps + b.eps}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.value - b.value, a.eps - b.eps}; }
  Dual operator-() const { return {-value, -eps}; }
  friend Dual operator*(const Dual& a, const Dual& b) {
    return {a.value * b.value, a.value * b.eps + a.eps * b.value};
  }
  Dual& operator+=(const Dual& o) { return *this = *this + o; }
  Dual& operator-=(const Dual& o) { return *this = *this - o; }
};

using DualScalar = Dual<GrassmannElement>;

template <class T>
Dual<T> constant_dual(const T& v) {
  return {v, v - v};
}

// Ring-generic helpers used by the templated Clifford and field code.
template <class C>
Grassmann<C> scale(const Grassmann<C>& x, std::int64_t num, std::int64_t den) {
  return x.scaled(CoefTraits<C>::ratio(num, den));
}
inline double scale(double x, std::int64_t num, std::int64_t den) {
  return x * static_cast<double>(num) / static_cast<double>(den);
}
inline Rational scale(const Rational& x, std::int64_t num, std::int64_t den) { return x * Rational(num, den); }
template <class T>
Dual<T> scale(const Dual<T>& x, std::int64_t num, std::int64_t den) {
  return {scale(x.value, num, den), scale(x.eps, num, den)};
}

template <class C>
Grassmann<C> zero_like(const Grassmann<C>& x) { return Grassmann<C>(x.generator_count()); }
inline double zero_like(double) { return 0.0; }
inline Rational zero_like(const Rational&) { return Rational(0); }
template <class T>
Dual<T> zero_like(const Dual<T>& x) { return {zero_like(x.value), zero_like(x.value)}; }

template <class C>
Grassmann<C> inverse(const Grassmann<C>& x) { return x.inverse(); }
inline double inverse(double x) {
  if (x == 0.0) fail(ErrorCode::no_body, "division by zero");
  return 1.0 / x;
}
// d(1/v) = -eps/v^2; valid because the value is even and therefore central.
template <class T>
Dual<T> inverse(const Dual<T>& x) {
  T inv = inverse(x.value);
  return {inv, -(inv * x.eps * inv)};
}

}  // namespace shm
