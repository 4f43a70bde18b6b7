#include <sstream>

#include "doctest.h"
#include "support.hpp"

using namespace shm;
using namespace shm::test;

namespace {

constexpr int N = 8;
const double kTau = 2.0 * M_PI;

Complex as_complex(const Spinor<double>& s) { return {s[0], -s[1]}; }

}  // namespace

TEST_CASE("trig field constructors") {
  const auto g = unit_grid(8);
  const FieldContext ctx{g, N, 2};
  CHECK(make_trig_field(ModeTable{}, ctx, FieldKind::psi, 0).is_zero());

  ModeTable t;
  t.add({FieldKind::psi, 0, 0, 1.0, 0, 0});
  const ScalarField c = make_trig_field(t, ctx, FieldKind::psi, 0);
  CHECK(c.terms().size() == 1);
  CHECK(c.terms()[0].mask == 0b1);
  for (double v : c.terms()[0].values) CHECK(v == 1.0);

  ModeTable a, b;
  a.add({FieldKind::psi, 1, 0, 0.5, 1, 0});
  b.add({FieldKind::psi, 0, 2, 0.25, 2, 0, 0.4});
  const ScalarField fa = make_trig_field(a, ctx, FieldKind::psi, 0);
  const ScalarField fb = make_trig_field(b, ctx, FieldKind::psi, 0);
  const ScalarField prod = fa * fb;
  REQUIRE(prod.terms().size() == 1);
  CHECK(prod.terms()[0].mask == 0b110);
  CHECK((fa * fa).is_zero());
}

TEST_CASE("generator blocks are enforced") {
  const auto g = unit_grid(8);
  const FieldContext ctx{g, N, 2};
  CHECK(generator_block(FieldKind::psi).first == 0);
  CHECK(generator_block(FieldKind::chi).first == 3);
  CHECK(generator_block(FieldKind::spinor).first == 6);
  ModeTable t;
  t.add({FieldKind::psi, 0, 0, 1.0, 4, 0});
  try {
    (void)make_psi(t, ctx);
    FAIL("expected GeneratorBudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::generator_budget_exceeded);
  }
  ModeTable m;
  m.add({FieldKind::map, 0, 0, 1.0, 0, 0});
  CHECK_THROWS_AS((void)make_map(m, ctx), Error);
}

TEST_CASE("mode tables parse and format") {
  std::istringstream in(
      "# comment\n"
      "psi 1 -2 0.5 1 3\n"
      "\n"
      "chi 0 1 -0.25 4 2 0.75  # trailing comment\n");
  const ModeTable t = parse_mode_table(in);
  REQUIRE(t.modes.size() == 2);
  CHECK(t.modes[0].kind == FieldKind::psi);
  CHECK(t.modes[0].k2 == -2);
  CHECK(t.modes[0].phase == 0.0);
  CHECK(t.modes[1].component == 2);
  CHECK(t.modes[1].phase == 0.75);

  std::istringstream again(format_mode_table(t));
  const ModeTable u = parse_mode_table(again);
  REQUIRE(u.modes.size() == 2);
  CHECK(u.modes[1].amplitude == t.modes[1].amplitude);
  CHECK(u.modes[1].generator == 4);

  for (const char* bad : {"spin 0 0 1 0 0\n", "psi 0 0 1 0\n", "psi 0 0 1 0 0 0.1 extra\n", "psi a 0 1 0 0\n"}) {
    std::istringstream b(bad);
    try {
      (void)parse_mode_table(b);
      FAIL("accepted " << bad);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::config_parse);
    }
  }
}

TEST_CASE("torsion factorization at a point") {
  const TorsionFactor zero = factorize_torsion_point(0.0, 0.0);
  const auto rz = recover_torsion_point(zero.chi);
  CHECK(rz[0] == 0.0);
  CHECK(rz[1] == 0.0);

  const TorsionFactor unit = factorize_torsion_point(1.0, 0.0);
  CHECK(unit.spin_half[0] == doctest::Approx(1.0));
  CHECK(std::abs(unit.spin_half[1]) <= 1e-15);
  const auto ru = recover_torsion_point(unit.chi);
  CHECK(std::abs(ru[0] - 1.0) <= 1e-15);
  CHECK(std::abs(ru[1]) <= 1e-15);

  // The spin-3/2 part lies in the q-image and the split is the decomposition.
  Rng r(41);
  for (int k = 0; k < 100; ++k) {
    const double rad = r.uniform(0.2, 3.0), arg = r.uniform(-2.9, 2.9);
    const double a1 = rad * std::cos(arg), a2 = -rad * std::sin(arg);
    const TorsionFactor f = factorize_torsion_point(a1, a2);
    const auto rec = recover_torsion_point(f.chi);
    REQUIRE(std::abs(rec[0] - a1) <= 1e-12);
    REQUIRE(std::abs(rec[1] - a2) <= 1e-12);
    const auto qg = quantize(f.spin_three_half);
    REQUIRE(std::abs(qg[0]) + std::abs(qg[1]) <= 1e-14);
    CHECK_FALSE(f.near_branch_cut);
  }
  CHECK(factorize_torsion_point(-1.0, 0.0).near_branch_cut);
}

TEST_CASE("factor components rotate with weights 1/2 and 3/2") {
  // Rotating the frame by alpha multiplies a = A(e_1) - i A(e_2) by exp(i alpha).
  Rng r(42);
  for (int k = 0; k < 50; ++k) {
    const double rad = r.uniform(0.3, 2.0), arg = r.uniform(-2.5, 2.5), alpha = r.uniform(-0.5, 0.5);
    const double a1 = rad * std::cos(arg), a2 = -rad * std::sin(arg);
    const double c = std::cos(alpha), s = std::sin(alpha);
    const TorsionFactor f = factorize_torsion_point(a1, a2);
    const TorsionFactor g = factorize_torsion_point(c * a1 + s * a2, -s * a1 + c * a2);
    const Complex half = std::polar(1.0, alpha / 2);
    REQUIRE(std::abs(as_complex(g.spin_half) - half * as_complex(f.spin_half)) <= 1e-12);
    const Complex bf{f.spin_three_half.z[0][0], f.spin_three_half.z[1][0]};
    const Complex bg{g.spin_three_half.z[0][0], g.spin_three_half.z[1][0]};
    REQUIRE(std::abs(bg - std::polar(1.0, -1.5 * alpha) * bf) <= 1e-12);
  }
}

TEST_CASE("gridwise factorization is recovered by the torsion bilinear") {
  const auto g = unit_grid(16);
  const auto geo = make_geometry(FrameField<ScalarField>::flat(g, N));
  const auto v = sample(*g, [](double x, double) { return std::sin(kTau * x + 1.2) + 1.5; });
  const OneForm<ScalarField> A{ScalarField::monomial(g, N, 0, v), ScalarField(g, N)};
  const FactorizedTorsion f = factorize_torsion(A, geo);
  CHECK_FALSE(f.branch_cut_crossed);
  const auto back = torsion_from_gravitino(f.chi, geo);
  CHECK((back[0] - A[0]).max_abs() <= 1e-10);
  CHECK(back[1].max_abs() <= 1e-10);

  // a = -1 - 0.3 i sin(2 pi x1) winds across the negative real axis.
  const auto w = sample(*g, [](double x, double) { return 0.3 * std::sin(kTau * x); });
  const OneForm<ScalarField> across{ScalarField::constant(g, N, -1.0), ScalarField::monomial(g, N, 0, w)};
  CHECK(factorize_torsion(across, geo).branch_cut_crossed);

  const FactorizedTorsion z = factorize_torsion(zero_form(g, N), geo);
  for (int a = 0; a < 2; ++a)
    for (int mu = 0; mu < 2; ++mu) CHECK(z.chi.z[a][mu].max_abs() == 0.0);
}

TEST_CASE("torsion from an odd gravitino") {
  const auto g = unit_grid(8);
  const FieldContext ctx{g, N, 2};
  const auto geo = make_geometry(FrameField<ScalarField>::flat(g, N));
  const auto zero = torsion_from_gravitino(make_chi(ModeTable{}, ctx), geo);
  CHECK(zero[0].is_zero());
  CHECK(zero[1].is_zero());

  ModeTable single;
  for (int c = 0; c < 4; ++c) single.add({FieldKind::chi, c % 2, 1, 0.3 + 0.1 * c, 3, c});
  const auto same = torsion_from_gravitino(make_chi(single, ctx), geo);
  CHECK(same[0].is_zero());
  CHECK(same[1].is_zero());

  // chi_mu = x_mu theta_3 + y_mu theta_4 with constant spinors x_mu, y_mu.
  const double x[2][2] = {{0.7, -0.2}, {0.4, 1.1}};  // x[mu][a]
  const double y[2][2] = {{-0.5, 0.3}, {0.9, 0.6}};
  ModeTable two;
  for (int mu = 0; mu < 2; ++mu)
    for (int a = 0; a < 2; ++a) {
      two.add({FieldKind::chi, 0, 0, x[mu][a], 3, 2 * mu + a});
      two.add({FieldKind::chi, 0, 0, y[mu][a], 4, 2 * mu + a});
    }
  const auto A = torsion_from_gravitino(make_chi(two, ctx), geo);
  // A_mu = -2 sum_a (gamma^k chi_k)_a chi_{a mu}; with gamma^1 = diag(1,-1) and
  // gamma^2 the swap, (gamma^k v_k) = (v_00 + v_11, -v_01 + v_10) for v[k][a].
  auto qx = [&](const double v[2][2]) {
    return std::array<double, 2>{v[0][0] + v[1][1], -v[0][1] + v[1][0]};
  };
  const auto gx = qx(x), gy = qx(y);
  for (int mu = 0; mu < 2; ++mu) {
    // theta3 theta4 coefficient of (gx t3 + gy t4)_a (x t3 + y t4)_a.
    double coef = 0.0;
    for (int a = 0; a < 2; ++a) coef += gx[a] * y[mu][a] - gy[a] * x[mu][a];
    coef *= -2.0;
    const auto* vals = A[mu].find(0b11000);
    REQUIRE(vals != nullptr);
    for (double v : *vals) CHECK(v == doctest::Approx(coef).epsilon(1e-14));
    CHECK(A[mu].terms().size() == 1);
  }
}

TEST_CASE("gravitino split and q part") {
  const auto g = unit_grid(32);
  Rng r(43);
  const FieldContext ctx{g, N, 2};
  const auto geo = make_geometry(FrameField<ScalarField>::conformal(g, N, conformal_factor(g, 0.1)));
  const auto chi = make_chi(random_modes(r, FieldKind::chi, 4, {3, 4, 5}, 1, 0.5), ctx);
  const auto [s, gp] = gravitino_split(chi, geo);
  const auto frame = to_frame(chi, geo);
  const auto back = theta_insert(s) + gp;
  const auto q = q_part(chi, geo);
  for (int a = 0; a < 2; ++a)
    for (int k = 0; k < 2; ++k) {
      CHECK((back.z[a][k] - frame.z[a][k]).max_abs() <= 1e-15);
      CHECK((q.z[a][k] - gp.z[a][k]).max_abs() == 0.0);
    }
  const auto qq = quantize(gp);
  CHECK(qq[0].max_abs() <= 1e-15);
  CHECK(qq[1].max_abs() <= 1e-15);
  const auto coords = to_coordinates(frame, geo);
  for (int a = 0; a < 2; ++a)
    for (int mu = 0; mu < 2; ++mu) CHECK((coords.z[a][mu] - chi.z[a][mu]).max_abs() <= 1e-14);
}

TEST_CASE("holomorphy residual") {
  const auto g = unit_grid(16);
  const FieldContext ctx{g, N, 2};
  const auto geo = make_geometry(FrameField<ScalarField>::flat(g, N));
  ModeTable c;
  c.add({FieldKind::spinor, 0, 0, 0.7, 6, 0}).add({FieldKind::spinor, 0, 0, -0.4, 7, 1});
  CHECK(holomorphy_residual(make_spinor(c, ctx), geo) <= 1e-14);

  // A single cos mode has a non-vanishing spin-3/2 derivative.
  ModeTable w;
  w.add({FieldKind::spinor, 1, 0, 0.5, 6, 0});
  CHECK(holomorphy_residual(make_spinor(w, ctx), geo) > 0.1);
}
