#include "shm/symmetry.hpp"

#include <cmath>

namespace shm {

namespace {

Parity combined(Parity a, Parity b) {
  if (a == Parity::zero) return b;
  if (b == Parity::zero || a == b) return a;
  return Parity::mixed;
}

void require_odd(const Spinor<ScalarField>& s) {
  for (int k = 0; k < 2; ++k) {
    const Parity p = s[k].parity();
    if (p != Parity::odd && p != Parity::zero) fail(ErrorCode::parity_mismatch, "variation spinor must be odd");
  }
}

template <class S>
Spinor<S> spinor_of(const DualSpinor<S>& d) {
  return {{d[0], d[1]}};
}

DualField dual(const ScalarField& value, const ScalarField& eps) { return {value, eps}; }
DualField dual(const ScalarField& value) { return {value, zero_like(value)}; }

Spinor<DualField> dual(const Spinor<ScalarField>& v, const Spinor<ScalarField>& e) {
  return {{dual(v[0], e[0]), dual(v[1], e[1])}};
}

ScalarField sum(const std::vector<ScalarField>& terms) {
  ScalarField acc = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) acc += terms[i];
  return acc;
}

GrassmannElement eps_of(const DualScalar& d) { return d.eps; }

std::vector<double> exp_grid(std::span<const double> u, double w) {
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::exp(w * u[i]);
  return out;
}

double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

// psi^a(s) for each target index.
std::vector<ScalarField> evaluate_on(const TwistedSpinor<ScalarField>& psi, const Spinor<ScalarField>& s) {
  std::vector<ScalarField> out;
  for (const auto& p : psi) out.push_back(p[0] * s[0] + p[1] * s[1]);
  return out;
}

}  // namespace

double max_abs_coefficient(const GrassmannElement& g) { return g.max_abs(); }

SuperFields<ScalarField> weyl_rescale(const SuperFields<ScalarField>& f, std::span<const double> u,
                                      const WeylWeights& w) {
  SuperFields<ScalarField> out = f;
  const std::vector<double> shrink = exp_grid(u, -1.0);
  for (auto& row : out.frame.e)
    for (auto& c : row) c = c.times_real(shrink, Band::unknown());
  if (w.phi != Rational(0)) {
    for (const auto& wind : f.phi.winding)
      if (wind[0] != 0.0 || wind[1] != 0.0)
        fail(ErrorCode::shape_mismatch, "a winding map cannot carry a nonzero conformal weight");
    const std::vector<double> g = exp_grid(u, to_double(w.phi));
    for (auto& p : out.phi.phi) p = p.times_real(g, Band::unknown());
  }
  const std::vector<double> gpsi = exp_grid(u, to_double(w.psi));
  for (auto& p : out.psi)
    for (int k = 0; k < 2; ++k) p[k] = p[k].times_real(gpsi, Band::unknown());
  const std::vector<double> gchi = exp_grid(u, to_double(w.chi));
  for (auto& row : out.chi.z)
    for (auto& c : row) c = c.times_real(gchi, Band::unknown());
  return out;
}

Gravitino<ScalarField> super_weyl_shift(const Gravitino<ScalarField>& chi, const Spinor<ScalarField>& s,
                                        const Geometry<ScalarField>& geo) {
  Parity pc = Parity::zero, ps = combined(s[0].parity(), s[1].parity());
  for (const auto& row : chi.z)
    for (const auto& c : row) pc = combined(pc, c.parity());
  if (ps == Parity::mixed || pc == Parity::mixed || (ps != Parity::zero && pc != Parity::zero && ps != pc))
    fail(ErrorCode::parity_mismatch, "super Weyl spinor must match the parity of the gravitino");
  // Only the shift is converted to coordinates, so s = 0 leaves chi untouched.
  const SpinorForm<ScalarField> shift =
      to_coordinates(SpinorForm<ScalarField>::from_columns(gamma(0, s), gamma(1, s)), geo);
  return chi + shift;
}

OneForm<ScalarField> slaved_torsion(const SuperFields<ScalarField>& f, const Convention& conv) {
  const Geometry<ScalarField> geo = make_geometry(f.frame);
  const OneForm<ScalarField> A = torsion_from_gravitino(f.chi, geo);
  return {A[0].scaled(conv.torsion), A[1].scaled(conv.torsion)};
}

SuperFields<DualField> susy_varied_fields(const SuperFields<ScalarField>& f, const Spinor<ScalarField>& s,
                                          SusyKind kind, TorsionMode mode, const Convention& conv) {
  require_odd(s);
  const Geometry<ScalarField> geo = make_geometry(f.frame);
  const Spinor<ScalarField> st = spinor_of(symplectic_dual(s));
  const bool full = kind == SusyKind::full;
  const SpinorForm<ScalarField> chi_frame = to_frame(f.chi, geo);

  SuperFields<DualField> out;
  // delta phi^a = psi^a(s)
  const std::vector<ScalarField> dphi = evaluate_on(f.psi, s);
  out.phi.winding = f.phi.winding;
  for (int a = 0; a < f.phi.dim(); ++a) out.phi.phi.push_back(dual(f.phi.phi[a], dphi[a]));

  // delta psi^a = sum_j (e_j(phi^a) - ev * ev_j^a) gamma^j s~
  for (int a = 0; a < f.phi.dim(); ++a) {
    OneForm<ScalarField> E = frame_components(f.phi.differential(a), geo);
    if (full) {
      for (int j = 0; j < 2; ++j) {
        const ScalarField ev = f.psi[a][0] * chi_frame.z[0][j] + f.psi[a][1] * chi_frame.z[1][j];
        E[j] -= ev.scaled(conv.ev);
      }
    }
    const Spinor<ScalarField> dpsi = times(E[0], gamma(0, st)) + times(E[1], gamma(1, st));
    out.psi.push_back(dual(f.psi[a], dpsi));
  }

  // delta e_k^mu = frame/2 * sum_m omega(gamma^m s, chi(e_k)) e_m^mu
  for (int k = 0; k < 2; ++k)
    for (int mu = 0; mu < 2; ++mu) {
      if (!full) {
        out.frame.e[k][mu] = dual(f.frame.e[k][mu]);
        continue;
      }
      std::vector<ScalarField> terms;
      for (int m = 0; m < 2; ++m)
        terms.push_back(symplectic_pair(gamma(m, s), chi_frame.column(k)) * f.frame.e[m][mu]);
      out.frame.e[k][mu] = dual(f.frame.e[k][mu], sum(terms).scaled(conv.frame / 2.0));
    }

  // delta chi = gravitino * d_A s
  const OneForm<ScalarField> A_value = (full && mode == TorsionMode::slaved) ? slaved_torsion(f, conv) : f.A;
  if (full) {
    const SpinorForm<ScalarField> ds = spin_cov_deriv(s, geo, A_value);
    for (int k = 0; k < 2; ++k)
      for (int mu = 0; mu < 2; ++mu) out.chi.z[k][mu] = dual(f.chi.z[k][mu], ds.z[k][mu].scaled(conv.gravitino));
  } else {
    for (int k = 0; k < 2; ++k)
      for (int mu = 0; mu < 2; ++mu) out.chi.z[k][mu] = dual(f.chi.z[k][mu]);
  }

  if (full && mode == TorsionMode::slaved) {
    const Geometry<DualField> dgeo = make_geometry(out.frame);
    const OneForm<DualField> A = torsion_from_gravitino(out.chi, dgeo);
    out.A = {scaled(A[0], conv.torsion), scaled(A[1], conv.torsion)};
  } else {
    out.A = {dual(f.A[0]), dual(f.A[1])};
  }
  return out;
}

SusyVariationReport first_variation(const SuperFields<DualField>& f, ActionKind kind, const Convention& conv) {
  const Geometry<DualField> geo = make_geometry(f.frame);
  SusyVariationReport r;
  const int gens = primal(f.psi[0][0]).generator_count();
  r.harmonic = eps_of(harmonic_energy(f.phi, geo));
  r.dirac = eps_of(dirac_action(f.psi, geo, f.A));
  if (kind == ActionKind::srs) {
    r.quartic_coupling = eps_of(coupling_quartic(f.chi, f.psi, geo));
    r.mixed_coupling = eps_of(coupling_mixed(f.chi, f.phi, f.psi, geo));
  } else {
    r.quartic_coupling = GrassmannElement(gens);
    r.mixed_coupling = GrassmannElement(gens);
  }
  r.total = r.harmonic + r.dirac + r.quartic_coupling.scaled(conv.quartic) + r.mixed_coupling.scaled(conv.mixed);
  r.max_abs = r.total.max_abs();
  return r;
}

GrassmannElement action_value(const SuperFields<ScalarField>& f, ActionKind kind, const Convention& conv) {
  const Geometry<ScalarField> geo = make_geometry(f.frame);
  if (kind == ActionKind::sdh) return harmonic_energy(f.phi, geo) + dirac_action(f.psi, geo, f.A);
  return super_action(f.phi, f.psi, f.chi, geo, f.A, conv).total();
}

Varform1Report varform1_check(const MapField<ScalarField>& phi, const TwistedSpinor<ScalarField>& psi,
                              const Geometry<ScalarField>& geo, const std::array<double, 2>& s0) {
  if (phi.dim() != 2 || psi.size() != 2) fail(ErrorCode::shape_mismatch, "varform1 needs a 2-dimensional target");
  const Spinor<double> st = spinor_of(symplectic_dual(Spinor<double>{{s0[0], s0[1]}}));
  auto const_times = [](const Spinor<double>& c, const ScalarField& f) {
    return Spinor<ScalarField>{{f.scaled(c[0]), f.scaled(c[1])}};
  };

  Varform1Report r;
  std::vector<ScalarField> dphi;
  std::vector<OneForm<ScalarField>> d;
  std::vector<ScalarField> lap;
  TwistedSpinor<ScalarField> dpsi, st_lap;
  for (int a = 0; a < 2; ++a) {
    dphi.push_back(psi[a][0].scaled(s0[0]) + psi[a][1].scaled(s0[1]));
    d.push_back(phi.differential(a));
    lap.push_back(partial(d[a][0], 0) + partial(d[a][1], 1));
    dpsi.push_back(const_times(gamma(0, st), d[a][0]) + const_times(gamma(1, st), d[a][1]));
    st_lap.push_back(const_times(st, lap[a]));
  }

  // First identity: sum_j d_j(delta phi) d_j phi = -<psi, s~0 (x) lap phi> + Div J_phi.
  ScalarField lhs1 = partial(dphi[0], 0) * d[0][0] + partial(dphi[0], 1) * d[0][1] +
                     partial(dphi[1], 0) * d[1][0] + partial(dphi[1], 1) * d[1][1];
  // <psi, s~0 (x) y>_E = omega*(psi^a, s~0) y^a = psi^a(s0) y^a
  const ScalarField bulk1 = dphi[0] * lap[0] + dphi[1] * lap[1];
  const OneForm<ScalarField> J_phi{dphi[0] * d[0][0] + dphi[1] * d[1][0], dphi[0] * d[0][1] + dphi[1] * d[1][1]};
  const ScalarField div_phi = divergence(J_phi, geo);
  r.residual_phi = (lhs1 + bulk1 - div_phi).max_abs();
  r.divergence_phi = integrate(div_phi, geo).max_abs();

  // Second identity: eps^{kl} omega_2(delta psi_k, (D psi)_l) = (psi, s~0 (x) lap phi) + Div J_psi,
  // J_psi^j = -2 (psi, Theta#^j gamma(d phi) s~0) = -(psi, gamma^j delta psi).
  const OneForm<ScalarField> zero{zero_like(lap[0]), zero_like(lap[0])};
  const ScalarField lhs2 = pairing_symplectic_target(dpsi, dirac_apply(psi, geo, zero));
  const ScalarField bulk2 = pairing_symplectic_target(psi, st_lap);
  OneForm<ScalarField> J_psi;
  for (int j = 0; j < 2; ++j) {
    const TwistedSpinor<ScalarField> g{gamma(j, dpsi[0]), gamma(j, dpsi[1])};
    J_psi[j] = -pairing_symplectic_target(psi, g);
  }
  const ScalarField div_psi = divergence(J_psi, geo);
  r.residual_psi = (lhs2 - bulk2 - div_psi).max_abs();
  r.divergence_psi = integrate(div_psi, geo).max_abs();

  // Exact first variation of int (|d phi|^2 + (psi, D psi)) along (delta phi, delta psi).
  MapField<DualField> vphi;
  vphi.winding = phi.winding;
  TwistedSpinor<DualField> vpsi;
  for (int a = 0; a < 2; ++a) {
    vphi.phi.push_back(dual(phi.phi[a], dphi[a]));
    vpsi.push_back(dual(psi[a], dpsi[a]));
  }
  FrameField<DualField> frame;
  for (int k = 0; k < 2; ++k)
    for (int mu = 0; mu < 2; ++mu) frame.e[k][mu] = dual(geo.frame.e[k][mu]);
  const Geometry<DualField> dgeo = make_geometry(frame);
  const OneForm<DualField> dzero{dual(zero[0]), dual(zero[1])};
  const DualScalar total = harmonic_energy(vphi, dgeo) + symplectic_target_dirac_action(vpsi, dgeo, dzero);
  r.total_variation = total.eps.max_abs();
  return r;
}

SusyCurrentReport susy_current(const MapField<ScalarField>& phi, const TwistedSpinor<ScalarField>& psi,
                               const Spinor<ScalarField>& s, const Geometry<ScalarField>& geo) {
  SuperFields<ScalarField> f;
  f.phi = phi;
  f.psi = psi;
  f.frame = geo.frame;
  const ScalarField zero = zero_like(phi.phi[0]);
  for (auto& row : f.chi.z)
    for (auto& c : row) c = zero_like(psi[0][0]);
  f.A = {zero, zero};
  const SuperFields<DualField> v = susy_varied_fields(f, s, SusyKind::basic, TorsionMode::independent);
  const Geometry<DualField> dgeo = make_geometry(v.frame);

  // Pointwise variation of (|d phi|^2 + (psi, D psi)_E) dvol.
  DualField integrand = pairing_E(v.psi, dirac_apply(v.psi, dgeo, v.A));
  for (int a = 0; a < phi.dim(); ++a) {
    const OneForm<DualField> e = frame_components(v.phi.differential(a), dgeo);
    integrand = integrand + e[0] * e[0] + e[1] * e[1];
  }
  const ScalarField var = (integrand * dgeo.volume).eps;

  SusyCurrentReport r;
  const std::vector<ScalarField> dphi = evaluate_on(psi, s);
  TwistedSpinor<ScalarField> dpsi;
  for (const auto& p : v.psi) dpsi.push_back({{p[0].eps, p[1].eps}});
  for (int j = 0; j < 2; ++j) {
    std::vector<ScalarField> terms;
    for (int a = 0; a < phi.dim(); ++a) terms.push_back(dphi[a] * phi.differential(a)[j]);
    r.J_phi[j] = sum(terms);
    TwistedSpinor<ScalarField> g;
    for (const auto& p : psi) g.push_back(gamma(j, p));
    r.J_psi[j] = pairing_E(g, dpsi).scaled(0.5);
    r.J_susy[j] = r.J_phi[j] + r.J_psi[j];
  }

  // bulk = 2 (psi, gamma^i gamma^j d_i s~ d_j phi)_E
  const Spinor<ScalarField> st = spinor_of(symplectic_dual(s));
  TwistedSpinor<ScalarField> w;
  for (int a = 0; a < phi.dim(); ++a) {
    const OneForm<ScalarField> d = phi.differential(a);
    Spinor<ScalarField> acc{{zero_like(st[0]), zero_like(st[1])}};
    for (int i = 0; i < 2; ++i) {
      const Spinor<ScalarField> di{{partial(st[0], i), partial(st[1], i)}};
      for (int j = 0; j < 2; ++j) acc += times(d[j], gamma(i, gamma(j, di)));
    }
    w.push_back(acc);
  }
  const ScalarField bulk = pairing_E(psi, w).scaled(2.0);
  const ScalarField div = divergence(r.J_susy, geo);
  r.identity_residual = (var - bulk - div.scaled(2.0)).max_abs();
  r.divergence_integral = integrate(div, geo).max_abs();
  r.bulk = bulk.max_abs();
  return r;
}

std::vector<WeylWeights> search_weyl_weights(const SuperFields<ScalarField>& f, std::span<const double> u,
                                             double tol, const Convention& conv) {
  const GrassmannElement before = action_value(f, ActionKind::srs, conv);
  const Rational grid[] = {Rational(-1), Rational(-1, 2), Rational(0), Rational(1, 2), Rational(1)};
  std::vector<WeylWeights> passing;
  for (const Rational& wphi : grid)
    for (const Rational& wpsi : grid)
      for (const Rational& wchi : grid) {
        const WeylWeights w{wphi, wpsi, wchi};
        const GrassmannElement after = action_value(weyl_rescale(f, u, w), ActionKind::srs, conv);
        if ((after - before).max_abs() <= tol) passing.push_back(w);
      }
  return passing;
}

}  // namespace shm
