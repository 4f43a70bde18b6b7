#pragma once

// Integrands and action functionals.
//
// The graded pairing on E = S* (x) R^d is
//   (z, w)_E = sum_a eps^{kl} z^a_k w^a_l,   eps^{12} = +1,
// symmetric on odd arguments and antisymmetric on even ones. With a
// two-dimensional symplectic target the target metric is replaced by
// omega_2 = eps_{ab}, which makes the pairing symmetric on real fields.

#include <string>
#include <type_traits>
#include <utility>

#include "shm/fields.hpp"

namespace shm {

// Numerical constants of the super action and its supersymmetry. The
// defaults are the stationary convention for the pairings fixed here; the
// factor 4 on the mixed coupling is fixed, the rest follow from it.
struct Convention {
  double mixed = 4.0;       // coefficient of the mixed coupling in the action
  double quartic = -1.0;    // coefficient of the quartic coupling
  double ev = -1.0;         // delta psi = gamma(d phi - ev * ev(psi, chi)) s~
  double frame = 4.0;       // delta e_k = frame * omega(delta_Theta# s, chi(e_k))
  double gravitino = -1.0;  // delta chi = gravitino * d_A s
  double torsion = 1.0;     // slaved torsion A = torsion * torsion_from_gravitino(chi)
};

template <class R>
R pairing_E(const std::vector<Spinor<R>>& z, const std::vector<Spinor<R>>& w) {
  if (z.size() != w.size()) fail(ErrorCode::shape_mismatch, "target dimensions differ");
  R acc = z[0][0] * w[0][1] - z[0][1] * w[0][0];
  for (std::size_t a = 1; a < z.size(); ++a) acc = acc + (z[a][0] * w[a][1] - z[a][1] * w[a][0]);
  return acc;
}

// eps^{kl} omega_2(z_k, w_l) for a two-dimensional symplectic target.
template <class R>
R pairing_symplectic_target(const std::vector<Spinor<R>>& z, const std::vector<Spinor<R>>& w) {
  if (z.size() != 2 || w.size() != 2) fail(ErrorCode::shape_mismatch, "symplectic target needs d = 2");
  auto eps_pair = [](const Spinor<R>& x, const Spinor<R>& y) { return x[0] * y[1] - x[1] * y[0]; };
  // omega_2(y_1, y_2) = +1 on the standard basis.
  return eps_pair(z[0], w[1]) - eps_pair(z[1], w[0]);
}

// Value type returned by integration: GrassmannElement or DualScalar.
template <class S>
using Integral = decltype(sum_cells(std::declval<S>()));

template <class V>
struct ActionBreakdown {
  V harmonic;
  V dirac;
  V quartic_coupling;
  V mixed_coupling;
  V f_squared;
  V scal_term;
  // Weights applied by total(); unit for the torsion functionals.
  double quartic_weight = -1.0;
  double mixed_weight = 4.0;

  V total() const {
    return harmonic + dirac + scaled_by(quartic_coupling, quartic_weight) + scaled_by(mixed_coupling, mixed_weight) +
           f_squared + scal_term;
  }

 private:
  static V scaled_by(const V& v, double w) {
    if constexpr (std::is_same_v<V, GrassmannElement>) {
      return v.scaled(w);
    } else {
      return V{v.value.scaled(w), v.eps.scaled(w)};
    }
  }
};

template <class S>
Integral<S> harmonic_energy(const MapField<S>& phi, const Geometry<S>& geo);

// ((psi, D psi)) with the torsion connection.
template <class S>
Integral<S> dirac_action(const TwistedSpinor<S>& psi, const Geometry<S>& geo, const OneForm<S>& A);

// ((phi, psi)).
template <class S>
Integral<S> integrated_pairing(const TwistedSpinor<S>& phi, const TwistedSpinor<S>& psi, const Geometry<S>& geo);

// sum_i omega(chi_i, q(chi)_i), frame components.
template <class S>
S gravitino_quadratic(const Gravitino<S>& chi, const Geometry<S>& geo);

template <class S>
Integral<S> coupling_quartic(const Gravitino<S>& chi, const TwistedSpinor<S>& psi, const Geometry<S>& geo);

// (flat(q(chi)(grad phi)), psi)_E with flat(s) = omega(s, .).
template <class S>
Integral<S> coupling_mixed(const Gravitino<S>& chi, const MapField<S>& phi, const TwistedSpinor<S>& psi,
                           const Geometry<S>& geo);

// sum_{ij} omega(chi_i, gamma^j gamma^i psi#^a) omega(psi#^a, chi_j).
template <class S>
Integral<S> coupling_ruled_out(const Gravitino<S>& chi, const TwistedSpinor<S>& psi, const Geometry<S>& geo);

template <class S>
ActionBreakdown<Integral<S>> super_action(const MapField<S>& phi, const TwistedSpinor<S>& psi,
                                          const Gravitino<S>& chi, const Geometry<S>& geo, const OneForm<S>& A,
                                          const Convention& conv = {});

// Dirac harmonic maps with torsion: harmonic + dirac + int |F_A|^2 + scal
// (the scalar curvature term is identically zero on the flat torus).
template <class S>
ActionBreakdown<Integral<S>> dym_dhym_action(const MapField<S>& phi, const TwistedSpinor<S>& psi,
                                             const Geometry<S>& geo, const OneForm<S>& A);

// int eps^{kl} omega_2(psi_k, (D psi)_l) dvol for real psi, d = 2.
template <class S>
Integral<S> symplectic_target_dirac_action(const TwistedSpinor<S>& psi, const Geometry<S>& geo,
                                           const OneForm<S>& A);

// {"term": {"[i,j]": coefficient}} with monomials as sorted generator lists.
std::string to_json(const ActionBreakdown<GrassmannElement>& b);

}  // namespace shm
