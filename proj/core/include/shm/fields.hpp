#pragma once

// Physical fields on the torus and their constructors.
//
// Fields are built from explicit mode tables so that spectral checks act on
// trigonometric polynomials. One record reads
//   kind k1 k2 amplitude generator component [phase]
// and contributes amplitude * cos(2 pi (k1 x1 / L1 + k2 x2 / L2) + phase)
// times the Grassmann generator (or the unit when generator = -1). Along an
// antiperiodic direction, spinor-valued kinds use the half-integer
// wavenumber k + 1/2. Components:
//   map      target index a
//   psi      2 a + k   (target index a, dual spinor index k)
//   chi      2 mu + k  (coordinate index mu, spinor index k)
//   spinor   k
//   torsion  mu
//
// Odd generators are split into disjoint blocks: psi uses 0..2, chi 3..5 and
// the variation spinor 6..7.

#include <iosfwd>
#include <string>
#include <vector>

#include "shm/geometry.hpp"

namespace shm {

enum class FieldKind { map, psi, chi, spinor, torsion };

struct GeneratorBlock {
  int first;
  int count;
};

GeneratorBlock generator_block(FieldKind kind);
std::string_view to_string(FieldKind kind);

struct Mode {
  FieldKind kind = FieldKind::map;
  int k1 = 0;
  int k2 = 0;
  double amplitude = 0.0;
  int generator = -1;
  int component = 0;
  double phase = 0.0;
};

struct ModeTable {
  std::vector<Mode> modes;

  ModeTable& add(const Mode& m) {
    modes.push_back(m);
    return *this;
  }
  ModeTable only(FieldKind kind) const;
};

// Reads records, skipping blank lines and '#' comments. Throws ConfigParse.
ModeTable parse_mode_table(std::istream& in);
std::string format_mode_table(const ModeTable& table);

// phi^a is a periodic grid plus a constant winding: d phi^a = d(phi^a) + W^a.
template <class S>
struct MapField {
  std::vector<S> phi;
  std::vector<std::array<double, 2>> winding;

  int dim() const { return static_cast<int>(phi.size()); }
  OneForm<S> differential(int a) const {
    return {add_real(partial(phi[a], 0), winding[a][0]), add_real(partial(phi[a], 1), winding[a][1])};
  }
};

// Gravitino in coordinate components: chi.z[k][mu].
template <class S>
using Gravitino = SpinorForm<S>;

struct FieldContext {
  GridPtr grid;
  int generator_count = 8;
  int target_dim = 2;
};

// One scalar grid from modes of one component. Spinor kinds follow the
// grid's spin structure.
ScalarField make_trig_field(const ModeTable& table, const FieldContext& ctx, FieldKind kind, int component);

MapField<ScalarField> make_map(const ModeTable& table, const FieldContext& ctx,
                               std::vector<std::array<double, 2>> winding = {});
TwistedSpinor<ScalarField> make_psi(const ModeTable& table, const FieldContext& ctx);
Gravitino<ScalarField> make_chi(const ModeTable& table, const FieldContext& ctx);
Spinor<ScalarField> make_spinor(const ModeTable& table, const FieldContext& ctx);
OneForm<ScalarField> make_torsion(const ModeTable& table, const FieldContext& ctx);

// chi(e_k) = e_k^mu chi_mu, and back.
template <class S>
SpinorForm<S> to_frame(const Gravitino<S>& chi, const Geometry<S>& geo);
template <class S>
Gravitino<S> to_coordinates(const SpinorForm<S>& chi_frame, const Geometry<S>& geo);

// A_mu = torsion_normalisation * <gamma(chi), chi_mu>, with the metric spinor
// pairing of the Clifford trace against each component (the pairing of the
// classical recovery). The normalisation makes the super action stationary
// for the connection d + (1/2) A gamma12 on spinors.
inline constexpr int torsion_normalisation = -2;

template <class S>
OneForm<S> torsion_from_gravitino(const Gravitino<S>& chi, const Geometry<S>& geo);

// Pointwise decomposition chi(e_k) = theta_insert(s) + g.
template <class S>
std::pair<Spinor<S>, SpinorForm<S>> gravitino_split(const Gravitino<S>& chi, const Geometry<S>& geo);

// q(chi) in frame components.
template <class S>
SpinorForm<S> q_part(const Gravitino<S>& chi, const Geometry<S>& geo);

// Classical factorization of a real torsion form at one point, in frame
// components a = (A(e_1), A(e_2)).
struct TorsionFactor {
  Spinor<double> spin_half;        // s
  SpinorForm<double> spin_three_half;  // g
  SpinorForm<double> chi;          // frame components
  bool near_branch_cut = false;
};

TorsionFactor factorize_torsion_point(double a1, double a2);

// Commuting pairing used for the classical recovery: <gamma(chi), chi(e_k)>.
std::array<double, 2> recover_torsion_point(const SpinorForm<double>& chi);

struct FactorizedTorsion {
  Gravitino<ScalarField> chi;  // real, coordinate components
  bool branch_cut_crossed = false;
};

// Gridwise factorization of a real torsion form (coordinate components) on a
// real frame.
FactorizedTorsion factorize_torsion(const OneForm<ScalarField>& A, const Geometry<ScalarField>& geo);

// L2 norm of q(nabla s) in frame components, torsion-free connection.
double holomorphy_residual(const Spinor<ScalarField>& s, const Geometry<ScalarField>& geo);

}  // namespace shm
