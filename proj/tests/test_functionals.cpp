#include <Eigen/Dense>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

using namespace shm;
using namespace shm::test;

namespace {

constexpr int N = 8;
const double kTau = 2.0 * M_PI;

// Fourier differentiation matrix on n equispaced points of a period L.
Eigen::MatrixXd fourier_matrix(int n, double L) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) D(i, j) = (M_PI / L) * (((i - j) % 2 == 0) ? 1.0 : -1.0) / std::tan(M_PI * (i - j) / n);
  return D;
}

Eigen::MatrixXd kron_left(const Eigen::MatrixXd& a, int n) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows() * n, a.cols() * n);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < n; ++k) out(i * n + k, j * n + k) = a(i, j);
  return out;
}

Eigen::MatrixXd kron_right(int n, const Eigen::MatrixXd& a) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows() * n, a.cols() * n);
  for (int k = 0; k < n; ++k) out.block(k * a.rows(), k * a.cols(), a.rows(), a.cols()) = a;
  return out;
}

// (D psi)_0 = d_1 psi_0 + d_2 psi_1, (D psi)_1 = -d_1 psi_1 + d_2 psi_0.
Eigen::MatrixXd dirac_matrix(const TorusGrid& g) {
  const int n1 = g.n(0), n2 = g.n(1), m = n1 * n2;
  const Eigen::MatrixXd d1 = kron_left(fourier_matrix(n1, g.period(0)), n2);
  const Eigen::MatrixXd d2 = kron_right(n1, fourier_matrix(n2, g.period(1)));
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  D.block(0, 0, m, m) = d1;
  D.block(0, m, m, m) = d2;
  D.block(m, m, m, m) = -d1;
  D.block(m, 0, m, m) = d2;
  return D;
}

// eps^{kl} pairing on stacked spinors.
Eigen::MatrixXd eps_matrix(int m) {
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  E.block(0, m, m, m) = Eigen::MatrixXd::Identity(m, m);
  E.block(m, 0, m, m) = -Eigen::MatrixXd::Identity(m, m);
  return E;
}

Eigen::VectorXd stacked(const Spinor<ScalarField>& s, Monomial mask) {
  const std::size_t m = s[0].grid()->size();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * static_cast<Eigen::Index>(m));
  for (int k = 0; k < 2; ++k)
    if (const auto* vals = s[k].find(mask))
      for (std::size_t p = 0; p < m; ++p) v(static_cast<Eigen::Index>(k * m + p)) = (*vals)[p];
  return v;
}

using G = GrassmannElement;

Spinor<G> at(const Spinor<ScalarField>& s, std::size_t p) { return {{s[0].at(p), s[1].at(p)}}; }
Spinor<G> g1(const Spinor<G>& v) { return {{v[0], -v[1]}}; }
Spinor<G> g2(const Spinor<G>& v) { return {{v[1], v[0]}}; }
G omega(const Spinor<G>& s, const Spinor<G>& t) { return s[0] * t[1] - s[1] * t[0]; }

ModeTable odd_psi_chi(std::uint64_t seed) {
  Rng r(seed);
  ModeTable t = random_modes(r, FieldKind::psi, 4, {0, 1}, 1, 0.6);
  for (const auto& m : random_modes(r, FieldKind::chi, 4, {3, 4}, 1, 0.6).modes) t.add(m);
  for (const auto& m : random_modes(r, FieldKind::map, 2, {-1}, 1, 0.8).modes) t.add(m);
  return t;
}

}  // namespace

TEST_CASE("graded pairing examples") {
  const G z(N);
  const G t1 = G::generator(N, 0), t2 = G::generator(N, 1);
  const std::vector<Spinor<G>> a{{{t1, z}}}, b{{{z, t2}}};
  CHECK(pairing_E(a, b) == t1 * t2);
  CHECK(pairing_E(b, a) == t1 * t2);
  const std::vector<Spinor<double>> real{{{0.3, -1.2}}, {{2.0, 0.5}}};
  CHECK(pairing_E(real, real) == 0.0);
  CHECK_THROWS_AS((void)pairing_E(real, std::vector<Spinor<double>>{{{1.0, 0.0}}}), Error);
}

TEST_CASE("harmonic energy examples") {
  const auto g = unit_grid(16);
  const FieldContext ctx{g, N, 2};
  const auto geo = make_geometry(FrameField<ScalarField>::flat(g, N));
  ModeTable c;
  c.add({FieldKind::map, 0, 0, 3.0, -1, 0});
  CHECK(harmonic_energy(make_map(c, ctx), geo).max_abs() <= 1e-15);
  const auto linear = make_map(ModeTable{}, ctx, {{1.0, 0.0}, {0.0, 1.0}});
  CHECK(harmonic_energy(linear, geo).body() == doctest::Approx(2.0).epsilon(1e-14));
  ModeTable s;
  s.add({FieldKind::map, 1, 0, 1.0, -1, 0, -M_PI / 2});
  CHECK(harmonic_energy(make_map(s, ctx), geo).body() == doctest::Approx(kTau * kTau / 2).epsilon(1e-13));
}

TEST_CASE("Dirac action vanishes on commuting real spinors") {
  const auto g = unit_grid(16);
  const FieldContext ctx{g, N, 2};
  const auto geo = make_geometry(FrameField<ScalarField>::conformal(g, N, conformal_factor(g, 0.15)));
  Rng r(51);
  for (int k = 0; k < 20; ++k) {
    const auto psi = make_psi(random_modes(r, FieldKind::psi, 4, {-1}, 2, 1.0), ctx);
    REQUIRE(dirac_action(psi, geo, zero_form(g, N)).max_abs() <= 1e-12);
  }
}

TEST_CASE("Dirac action matches the dense operator") {
  const auto g = unit_grid(8);
  const FieldContext ctx{g, N, 1};
  ModeTable t;
  t.add({FieldKind::psi, 1, 2, 0.8, 0, 0}).add({FieldKind::psi, 1, 2, -0.5, 1, 1, 0.3});
  t.add({FieldKind::psi, 0, 1, 0.6, 1, 0, 1.1}).add({FieldKind::psi, 2, 1, 0.4, 0, 1, -0.7});
  const auto psi = make_psi(t, ctx);
  const auto geo = make_geometry(FrameField<ScalarField>::flat(g, N));
  const G value = dirac_action(psi, geo, zero_form(g, N));

  const Eigen::MatrixXd ED = eps_matrix(static_cast<int>(g->size())) * dirac_matrix(*g);
  const Eigen::VectorXd x0 = stacked(psi[0], 0b1), x1 = stacked(psi[0], 0b10);
  const double expected = g->cell_area() * (x0.dot(ED * x1) - x1.dot(ED * x0));
  CHECK(std::abs(expected) > 1e-2);
  CHECK(value.coefficient(0b11) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(value.terms().size() == 1);

  // A constant torsion does not change it.
  const OneForm<ScalarField> A{ScalarField::constant(g, N, 0.7), ScalarField::constant(g, N, -0.3)};
  CHECK((dirac_action(psi, geo, A) - value).max_abs() <= 1e-12);
}

TEST_CASE("Dirac action is independent of the torsion on odd spinors") {
  const auto g = unit_grid(16);
  const FieldContext ctx{g, N, 2};
  const auto geo = make_geometry(FrameField<ScalarField>::conformal(g, N, conformal_factor(g, 0.1)));
  Rng r(52);
  const auto psi = make_psi(random_modes(r, FieldKind::psi, 4, {0, 1, 2}, 1, 0.6), ctx);
  const G base = dirac_action(psi, geo, zero_form(g, N));
  CHECK(base.max_abs() > 1e-3);
  for (int k = 0; k < 5; ++k) {
    const auto A = make_torsion(random_modes(r, FieldKind::torsion, 2, {-1}, 2, 1.0), ctx);
    REQUIRE((dirac_action(psi, geo, A) - base).max_abs() <= 1e-10);
  }
}

TEST_CASE("quartic coupling matches the expanded index formula") {
  const auto g = unit_grid(24);
  const FieldContext ctx{g, N, 2};
  const auto geo = make_geometry(FrameField<ScalarField>::flat(g, N));
  const ModeTable t = odd_psi_chi(53);
  const auto psi = make_psi(t, ctx);
  const auto chi = make_chi(t, ctx);
  G expected(N);
  for (std::size_t p = 0; p < g->size(); ++p) {
    const Spinor<G> c0 = at(chi.column(0), p), c1 = at(chi.column(1), p);
    const std::array<Spinor<G>, 2> c{c0, c1};
    auto gam = [](int i, const Spinor<G>& v) { return i == 0 ? g1(v) : g2(v); };
    G q = omega(c0, c0) + omega(c1, c1);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) q -= omega(c[i], gam(i, gam(j, c[j]))).scaled(0.5);
    G pp(N);
    for (const auto& s : psi) pp += at(s, p)[0] * at(s, p)[1] - at(s, p)[1] * at(s, p)[0];
    expected += (q * pp).scaled(g->cell_area());
  }
  const G value = coupling_quartic(chi, psi, geo);
  CHECK(expected.max_abs() > 1e-4);
  CHECK((value - expected).max_abs() <= 1e-14);
  CHECK(value.max_abs_odd() == 0.0);
}

TEST_CASE("quartic coupling degenerate cases") {
  const auto g = unit_grid(8);
  const FieldContext ctx{g, N, 2};
  const auto geo = make_geometry(FrameField<ScalarField>::flat(g, N));
  const ModeTable t = odd_psi_chi(54);
  const auto psi = make_psi(t, ctx);
  ModeTable ts;
  ts.add({FieldKind::spinor, 1, 0, 0.5, 6, 0}).add({FieldKind::spinor, 0, 1, 0.4, 7, 1});
  const auto s = make_spinor(ts, ctx);
  const Gravitino<ScalarField> p_image = to_coordinates(theta_insert(s), geo);
  CHECK(coupling_quartic(p_image, psi, geo).max_abs() <= 1e-15);
  CHECK(coupling_ruled_out(p_image, psi, geo).max_abs() <= 1e-15);
  Rng r(55);
  const auto real_psi = make_psi(random_modes(r, FieldKind::psi, 4, {-1}, 1, 1.0), ctx);
  CHECK(coupling_quartic(make_chi(t, ctx), real_psi, geo).max_abs() <= 1e-15);
}

TEST_CASE("mixed coupling matches the index formula") {
  const auto g = unit_grid(8);
  const FieldContext ctx{g, N, 2};
  const auto geo = make_geometry(FrameField<ScalarField>::flat(g, N));
  const ModeTable t = odd_psi_chi(56);
  const auto psi = make_psi(t, ctx);
  const auto chi = make_chi(t, ctx);
  const auto phi = make_map(t, ctx);
  std::array<std::array<std::vector<double>, 2>, 2> dphi;
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < 2; ++i) dphi[a][i] = partial(phi.phi[a], i).body_values();
  G expected(N);
  for (std::size_t p = 0; p < g->size(); ++p) {
    const std::array<Spinor<G>, 2> c{at(chi.column(0), p), at(chi.column(1), p)};
    auto gam = [](int i, const Spinor<G>& v) { return i == 0 ? g1(v) : g2(v); };
    for (int a = 0; a < 2; ++a) {
      // q(chi)(grad phi^a) = (1/2) sum_{ik} d_i phi^a gamma^k gamma^i chi_k.
      Spinor<G> w{{G(N), G(N)}};
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
          const Spinor<G> v = gam(k, gam(i, c[k]));
          w[0] += v[0].scaled(0.5 * dphi[a][i][p]);
          w[1] += v[1].scaled(0.5 * dphi[a][i][p]);
        }
      const Spinor<G> flat{{-w[1], w[0]}};
      const Spinor<G> ps = at(psi[a], p);
      expected += (flat[0] * ps[1] - flat[1] * ps[0]).scaled(g->cell_area());
    }
  }
  const G value = coupling_mixed(chi, phi, psi, geo);
  CHECK(expected.max_abs() > 1e-4);
  CHECK((value - expected).max_abs() <= 1e-14);

  ModeTable c;
  c.add({FieldKind::map, 0, 0, 2.0, -1, 0});
  CHECK(coupling_mixed(chi, make_map(c, ctx), psi, geo).max_abs() == 0.0);
  ModeTable ts;
  ts.add({FieldKind::spinor, 1, 1, 0.5, 6, 0}).add({FieldKind::spinor, 0, 1, 0.4, 7, 1});
  const Gravitino<ScalarField> p_image = to_coordinates(theta_insert(make_spinor(ts, ctx)), geo);
  CHECK(coupling_mixed(p_image, phi, psi, geo).max_abs() <= 1e-15);
}

TEST_CASE("super action breakdown") {
  const auto g = unit_grid(16);
  const FieldContext ctx{g, N, 2};
  const auto geo = make_geometry(FrameField<ScalarField>::conformal(g, N, conformal_factor(g, 0.1)));
  const ModeTable t = odd_psi_chi(57);
  const auto phi = make_map(t, ctx);
  const auto psi = make_psi(t, ctx);
  const auto A = zero_form(g, N);
  const auto none = super_action(phi, psi, make_chi(ModeTable{}, ctx), geo, A);
  CHECK(none.total() == harmonic_energy(phi, geo) + dirac_action(psi, geo, A));
  CHECK(none.quartic_coupling.is_zero());
  CHECK(none.mixed_coupling.is_zero());

  const auto b = super_action(phi, psi, make_chi(t, ctx), geo, A);
  CHECK(b.total() == b.harmonic + b.dirac + b.quartic_coupling.scaled(-1.0) + b.mixed_coupling.scaled(4.0) +
                         b.f_squared + b.scal_term);
  for (const G* v : {&b.harmonic, &b.dirac, &b.quartic_coupling, &b.mixed_coupling, &b.f_squared, &b.scal_term})
    CHECK(v->max_abs_odd() == 0.0);
  CHECK(b.scal_term.is_zero());

  const auto zero = super_action(make_map(ModeTable{}, ctx), make_psi(ModeTable{}, ctx), make_chi(ModeTable{}, ctx),
                                 geo, A);
  CHECK(zero.total().is_zero());
}

TEST_CASE("torsion functional") {
  const auto g = unit_grid(16);
  const FieldContext ctx{g, N, 2};
  const auto geo = make_geometry(FrameField<ScalarField>::flat(g, N));
  const auto phi = make_map(ModeTable{}, ctx);
  const auto psi = make_psi(ModeTable{}, ctx);
  const OneForm<ScalarField> closed{ScalarField::constant(g, N, 0.3), ScalarField::constant(g, N, 0.1)};
  const auto b0 = dym_dhym_action(phi, psi, geo, closed);
  CHECK(b0.f_squared.max_abs() <= 1e-15);
  CHECK(b0.scal_term.is_zero());
  ModeTable t;
  t.add({FieldKind::torsion, 0, 1, 1.0, -1, 0, -M_PI / 2});
  const auto b1 = dym_dhym_action(phi, psi, geo, make_torsion(t, ctx));
  CHECK(b1.f_squared.body() == doctest::Approx(kTau * kTau / 2).epsilon(1e-13));
  CHECK(b1.total() == b1.f_squared);
}

TEST_CASE("symplectic-target Dirac action") {
  const auto g = unit_grid(8);
  const FieldContext ctx{g, N, 2};
  const auto geo = make_geometry(FrameField<ScalarField>::flat(g, N));
  ModeTable t;
  t.add({FieldKind::psi, 1, 0, 0.8, -1, 0}).add({FieldKind::psi, 1, 0, 0.5, -1, 3, 0.4});
  t.add({FieldKind::psi, 0, 1, -0.3, -1, 1, 1.0}).add({FieldKind::psi, 0, 1, 0.7, -1, 2});
  const auto psi = make_psi(t, ctx);
  const G value = symplectic_target_dirac_action(psi, geo, zero_form(g, N));

  const Eigen::MatrixXd ED = eps_matrix(static_cast<int>(g->size())) * dirac_matrix(*g);
  const Eigen::VectorXd y0 = stacked(psi[0], 0), y1 = stacked(psi[1], 0);
  const double expected = g->cell_area() * (y0.dot(ED * y1) - y1.dot(ED * y0));
  CHECK(std::abs(expected) > 1e-2);
  CHECK(value.body() == doctest::Approx(expected).epsilon(1e-12));

  Rng r(58);
  const auto A = make_torsion(random_modes(r, FieldKind::torsion, 2, {-1}, 2, 1.0), ctx);
  CHECK(std::abs(symplectic_target_dirac_action(psi, geo, A).body() - value.body()) <= 1e-10);

  const auto other = make_psi(random_modes(r, FieldKind::psi, 4, {-1}, 2, 1.0), ctx);
  for (std::size_t p = 0; p < g->size(); p += 7) {
    const std::vector<Spinor<double>> a{{{psi[0][0].at(p).body(), psi[0][1].at(p).body()}},
                                        {{psi[1][0].at(p).body(), psi[1][1].at(p).body()}}};
    const std::vector<Spinor<double>> b{{{other[0][0].at(p).body(), other[0][1].at(p).body()}},
                                        {{other[1][0].at(p).body(), other[1][1].at(p).body()}}};
    CHECK(std::abs(pairing_symplectic_target(a, b) - pairing_symplectic_target(b, a)) <= 1e-15);
  }
}

TEST_CASE("breakdown serializes by monomial") {
  ActionBreakdown<G> b;
  b.harmonic = G::scalar(N, 2.0);
  b.dirac = G::from_terms(N, {{0b101, -0.5}});
  b.quartic_coupling = b.mixed_coupling = b.f_squared = b.scal_term = G(N);
  const auto j = nlohmann::json::parse(to_json(b));
  CHECK(j["harmonic"]["[]"].get<double>() == 2.0);
  CHECK(j["dirac"]["[0,2]"].get<double>() == -0.5);
  CHECK(j.contains("total"));
  CHECK(j["total"]["[0,2]"].get<double>() == -0.5);
  CHECK(j["scal_term"].empty());
}
