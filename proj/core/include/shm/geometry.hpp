#pragma once

// Zweibein geometry on the torus.
//
// A frame stores e[k][mu] = e_k^mu (orthonormal frame vector k in coordinate
// components). The coframe c[k][mu] is the inverse transpose, the volume
// density is det c, and the Levi-Civita connection one-form Gamma_mu comes
// from the torsion-free Cartan equations
//   d c^1 = -Gamma ^ c^2,   d c^2 = Gamma ^ c^1.
// Spinor covariant derivative: nabla_mu s = d_mu s + (Gamma_mu + A_mu)/2 gamma^1 gamma^2 s.
//
// Templates are instantiated for ScalarField and DualField.

#include <array>
#include <vector>

#include "shm/clifford.hpp"
#include "shm/field_ops.hpp"

namespace shm {

template <class S>
using Matrix2 = std::array<std::array<S, 2>, 2>;

template <class S>
using OneForm = std::array<S, 2>;

template <class S>
struct FrameField {
  Matrix2<S> e;

  static FrameField flat(const GridPtr& grid, int generator_count);
  // e_k^mu = exp(-u) delta_k^mu.
  static FrameField conformal(const GridPtr& grid, int generator_count, std::span<const double> u);
};

template <class S>
struct Geometry {
  FrameField<S> frame;
  Matrix2<S> coframe;  // c[k][mu]
  S volume;            // det c
  S frame_det;         // det e = 1 / volume
  Matrix2<S> metric;   // g_{mu nu}
  OneForm<S> connection;
};

// Coframe, metric and volume density. Throws NonOrientedFrame when the body
// of det e is not positive everywhere.
template <class S>
Geometry<S> make_geometry(const FrameField<S>& frame);

// Residual of both Cartan equations (largest coefficient).
template <class S>
double cartan_residual(const Geometry<S>& geo);

// Column mu of the result is nabla_mu s (coordinate index).
template <class S>
SpinorForm<S> spin_cov_deriv(const Spinor<S>& s, const Geometry<S>& geo, const OneForm<S>& A);

// Twisted spinor: one spinor per target index.
template <class S>
using TwistedSpinor = std::vector<Spinor<S>>;

// (D psi)^a = gamma^k e_k^mu nabla_mu psi^a.
template <class S>
TwistedSpinor<S> dirac_apply(const TwistedSpinor<S>& psi, const Geometry<S>& geo, const OneForm<S>& A);

// F_12 = d_1 A_2 - d_2 A_1.
template <class S>
S curvature_of_torsion(const OneForm<S>& A);

// (1/vol) d_mu (vol J^mu) for a coordinate vector field J.
template <class S>
S divergence(const OneForm<S>& J, const Geometry<S>& geo);

// Coordinate components of grad f.
template <class S>
OneForm<S> gradient(const S& f, const Geometry<S>& geo);

// e_k(f) = e_k^mu d_mu f for a given coordinate differential df.
template <class S>
OneForm<S> frame_components(const OneForm<S>& df, const Geometry<S>& geo);

// int f dvol.
template <class S>
auto integrate(const S& f, const Geometry<S>& geo) {
  return sum_cells(f * geo.volume);
}

}  // namespace shm
