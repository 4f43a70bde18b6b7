#pragma once

// Real Majorana spinors of Cl(2,0) in the representation
//   gamma^1 = [[1,0],[0,-1]],  gamma^2 = [[0,1],[1,0]],
// with almost complex structure J = -gamma^1 gamma^2 = [[0,-1],[1,0]].
//
// Everything is generic in the component ring R: double, complex,
// Grassmann elements, dual numbers, or whole grids (ScalarField). The
// matrices only hold 0 and +-1, so the action never multiplies ring
// elements with each other and ordering of odd factors is preserved.
//
// Indices are 0-based in code: s[0], s[1] are the components along the
// orthonormal spinor frame s_1, s_2; a SpinorForm z[a][k] carries spinor
// index a and orthonormal coframe index k.

#include <array>
#include <complex>
#include <cstdint>
#include <utility>

#include "shm/grassmann.hpp"

namespace shm {

using Complex = std::complex<double>;

inline Complex scale(const Complex& x, std::int64_t num, std::int64_t den) {
  return x * (static_cast<double>(num) / static_cast<double>(den));
}
inline Complex zero_like(const Complex&) { return {0.0, 0.0}; }

template <class R>
struct Spinor {
  std::array<R, 2> c;

  R& operator[](int a) { return c[a]; }
  const R& operator[](int a) const { return c[a]; }

  friend Spinor operator+(const Spinor& x, const Spinor& y) { return {{x[0] + y[0], x[1] + y[1]}}; }
  friend Spinor operator-(const Spinor& x, const Spinor& y) { return {{x[0] - y[0], x[1] - y[1]}}; }
  Spinor operator-() const { return {{-c[0], -c[1]}}; }
  Spinor& operator+=(const Spinor& o) { return *this = *this + o; }
  Spinor& operator-=(const Spinor& o) { return *this = *this - o; }
};

// Element of the dual module S*, components along the dual frame s^1, s^2.
// Clifford matrices act on it exactly as on S.
template <class R>
struct DualSpinor {
  std::array<R, 2> c;

  R& operator[](int a) { return c[a]; }
  const R& operator[](int a) const { return c[a]; }
};

// Value of S (x) T*M at a point: z[a][k].
template <class R>
struct SpinorForm {
  std::array<std::array<R, 2>, 2> z;

  Spinor<R> column(int k) const { return {{z[0][k], z[1][k]}}; }
  static SpinorForm from_columns(const Spinor<R>& c0, const Spinor<R>& c1) {
    return {{{{c0[0], c1[0]}, {c0[1], c1[1]}}}};
  }

  friend SpinorForm operator+(const SpinorForm& x, const SpinorForm& y) {
    return from_columns(x.column(0) + y.column(0), x.column(1) + y.column(1));
  }
  friend SpinorForm operator-(const SpinorForm& x, const SpinorForm& y) {
    return from_columns(x.column(0) - y.column(0), x.column(1) - y.column(1));
  }
};

template <class R>
Spinor<R> scale(const Spinor<R>& s, std::int64_t num, std::int64_t den) {
  return {{scale(s[0], num, den), scale(s[1], num, den)}};
}

template <class R>
SpinorForm<R> scale(const SpinorForm<R>& z, std::int64_t num, std::int64_t den) {
  return SpinorForm<R>::from_columns(scale(z.column(0), num, den), scale(z.column(1), num, den));
}

// Left multiplication of every component by an (even) ring element.
template <class R>
Spinor<R> times(const R& f, const Spinor<R>& s) {
  return {{f * s[0], f * s[1]}};
}

// gamma^{k+1} s for k = 0, 1.
template <class R>
Spinor<R> gamma(int k, const Spinor<R>& s) {
  if (k == 0) return {{s[0], -s[1]}};
  return {{s[1], s[0]}};
}

// gamma^1 gamma^2 s.
template <class R>
Spinor<R> gamma12(const Spinor<R>& s) {
  return {{s[1], -s[0]}};
}

// J s = -gamma^1 gamma^2 s.
template <class R>
Spinor<R> aci(const Spinor<R>& s) {
  return {{-s[1], s[0]}};
}

// gamma(alpha) s for a covector given in the orthonormal coframe.
template <class R>
Spinor<R> clifford_act(const std::array<R, 2>& alpha, const Spinor<R>& s) {
  return times(alpha[0], gamma(0, s)) + times(alpha[1], gamma(1, s));
}

enum class PairKind { metric, symplectic };

template <class R>
R metric_pair(const Spinor<R>& s, const Spinor<R>& t) {
  return s[0] * t[0] + s[1] * t[1];
}

// omega(s, t) = g(J s, t); omega(s_1, s_2) = +1.
template <class R>
R symplectic_pair(const Spinor<R>& s, const Spinor<R>& t) {
  return s[0] * t[1] - s[1] * t[0];
}

template <class R>
R spinor_pair(PairKind kind, const Spinor<R>& s, const Spinor<R>& t) {
  return kind == PairKind::metric ? metric_pair(s, t) : symplectic_pair(s, t);
}

// delta_gamma: z |-> gamma^k z_k.
template <class R>
Spinor<R> quantize(const SpinorForm<R>& z) {
  return gamma(0, z.column(0)) + gamma(1, z.column(1));
}

// delta_Theta: s |-> (1/2) gamma^k s (x) e^k.
template <class R>
SpinorForm<R> theta_insert(const Spinor<R>& s) {
  return SpinorForm<R>::from_columns(scale(gamma(0, s), 1, 2), scale(gamma(1, s), 1, 2));
}

template <class R>
SpinorForm<R> project_p(const SpinorForm<R>& z) {
  return theta_insert(quantize(z));
}

template <class R>
SpinorForm<R> project_q(const SpinorForm<R>& z) {
  return z - project_p(z);
}

// z = theta_insert(s) + g with quantize(g) = 0.
template <class R>
std::pair<Spinor<R>, SpinorForm<R>> decompose_form(const SpinorForm<R>& z) {
  return {quantize(z), project_q(z)};
}

// Pairing on S (x) T*M: orthonormal contraction of the form index with the
// chosen spinor pairing in the spinor slot.
template <class R>
R form_pair(PairKind kind, const SpinorForm<R>& z, const SpinorForm<R>& w) {
  return spinor_pair(kind, z.column(0), w.column(0)) + spinor_pair(kind, z.column(1), w.column(1));
}

// s |-> omega(s, .); s_1 |-> s^2, s_2 |-> -s^1.
template <class R>
DualSpinor<R> symplectic_dual(const Spinor<R>& s) {
  return {{-s[1], s[0]}};
}

// Inverse of symplectic_dual.
template <class R>
Spinor<R> dual_to_spinor(const DualSpinor<R>& d) {
  return {{d[1], -d[0]}};
}

// Contraction d(s) = d_k s^k.
template <class R>
R evaluate(const DualSpinor<R>& d, const Spinor<R>& s) {
  return d[0] * s[0] + d[1] * s[1];
}

// Weyl components: s = z_W w + z_Wbar conj(w), w = (s_1 - i s_2)/sqrt2.
struct WeylPair {
  Complex w;
  Complex wbar;
};

WeylPair weyl_split(const Spinor<Complex>& s);
Spinor<Complex> weyl_join(const WeylPair& p);
Spinor<Complex> weyl_frame();  // w

// Frame-level identification S (x) S -> T M (x) C:
//   s (x) t |-> (1/sqrt2) sum_k (s^T gamma^k t) e_k.
std::array<Complex, 2> square_to_vector(const Spinor<Complex>& s, const Spinor<Complex>& t);

}  // namespace shm
