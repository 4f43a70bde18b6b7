#pragma once

// Weyl, super Weyl and supersymmetry transformations, and exact first
// variations through dual-number arithmetic.

#include <vector>

#include "shm/functionals.hpp"

namespace shm {

template <class S>
struct SuperFields {
  MapField<S> phi;
  TwistedSpinor<S> psi;
  FrameField<S> frame;
  Gravitino<S> chi;
  OneForm<S> A;
};

// Conformal weights: e -> exp(-u) e, field -> exp(w u) field.
struct WeylWeights {
  Rational phi{0};
  Rational psi{-1, 2};
  Rational chi{1, 2};
};

SuperFields<ScalarField> weyl_rescale(const SuperFields<ScalarField>& f, std::span<const double> u,
                                      const WeylWeights& w = {});

// chi(v) -> chi(v) + gamma(v^flat) s. The spinor must share the parity of
// chi (odd for the super action, real for classical fields); otherwise
// throws ParityMismatch.
Gravitino<ScalarField> super_weyl_shift(const Gravitino<ScalarField>& chi, const Spinor<ScalarField>& s,
                                        const Geometry<ScalarField>& geo);

enum class SusyKind { basic, full };
enum class TorsionMode { independent, slaved };

// A = torsion * torsion_from_gravitino(chi).
OneForm<ScalarField> slaved_torsion(const SuperFields<ScalarField>& f, const Convention& conv = {});

// Fields plus their first-order supersymmetry variation. Basic: only phi and
// psi move (chi is ignored). Full: all of phi, psi, e, chi; in slaved mode
// the torsion is recomputed from the varied gravitino and frame.
SuperFields<DualField> susy_varied_fields(const SuperFields<ScalarField>& f, const Spinor<ScalarField>& s,
                                          SusyKind kind, TorsionMode mode, const Convention& conv = {});

enum class ActionKind { sdh, srs };

struct SusyVariationReport {
  GrassmannElement harmonic;
  GrassmannElement dirac;
  GrassmannElement quartic_coupling;
  GrassmannElement mixed_coupling;
  GrassmannElement total;
  double max_abs = 0.0;
};

// epsilon coefficient of the action, term by term (weights from conv).
SusyVariationReport first_variation(const SuperFields<DualField>& f, ActionKind kind, const Convention& conv = {});

// Action value (no variation) for difference-quotient oracles.
GrassmannElement action_value(const SuperFields<ScalarField>& f, ActionKind kind, const Convention& conv = {});

// Symplectic target, real fields, flat frame, constant s0.
struct Varform1Report {
  double residual_phi = 0.0;    // pointwise, first identity
  double residual_psi = 0.0;    // pointwise, second identity
  double divergence_phi = 0.0;  // |int Div J_phi|
  double divergence_psi = 0.0;
  double total_variation = 0.0;  // |delta of the symplectic-target functional|
};

Varform1Report varform1_check(const MapField<ScalarField>& phi, const TwistedSpinor<ScalarField>& psi,
                              const Geometry<ScalarField>& geo, const std::array<double, 2>& s0);

// Currents of the basic transformation (flat frame, A = 0):
//   J_phi^j = sum_a psi^a(s) d_j phi^a,
//   J_psi^j = -(psi, Theta#^j gamma(d phi) s~)_E,
// so that the variation integrand equals bulk + 2 Div(J_phi + J_psi) with
//   bulk = 2 (psi, gamma^i gamma^j d_i s~ d_j phi)_E.
struct SusyCurrentReport {
  OneForm<ScalarField> J_phi;
  OneForm<ScalarField> J_psi;
  OneForm<ScalarField> J_susy;
  double identity_residual = 0.0;  // pointwise
  double divergence_integral = 0.0;  // |int Div J_susy dvol|
  double bulk = 0.0;                 // max |bulk|
};

SusyCurrentReport susy_current(const MapField<ScalarField>& phi, const TwistedSpinor<ScalarField>& psi,
                               const Spinor<ScalarField>& s, const Geometry<ScalarField>& geo);

// Searches weights in {-1, -1/2, 0, 1/2, 1}^3 for which the super action
// drift under u stays below tol; returns all passing tables.
std::vector<WeylWeights> search_weyl_weights(const SuperFields<ScalarField>& f, std::span<const double> u,
                                             double tol, const Convention& conv = {});

double max_abs_coefficient(const GrassmannElement& g);

}  // namespace shm
