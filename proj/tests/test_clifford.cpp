#include "doctest.h"
#include "support.hpp"

using namespace shm;
using shm::test::Rng;
using shm::test::random_element;

namespace {

constexpr int N = 8;

template <class R>
bool same(const Spinor<R>& a, const Spinor<R>& b) {
  return a[0] == b[0] && a[1] == b[1];
}

template <class R>
bool same(const SpinorForm<R>& a, const SpinorForm<R>& b) {
  return same(a.column(0), b.column(0)) && same(a.column(1), b.column(1));
}

Spinor<double> sp(double a, double b) { return {{a, b}}; }

Rational rnd(Rng& r) { return Rational(r.integer(-9, 9), r.integer(1, 7)); }

double abs_form(const SpinorForm<Complex>& z) {
  double m = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int k = 0; k < 2; ++k) m = std::max(m, std::abs(z.z[a][k]));
  return m;
}

SpinorForm<Complex> tensor(const Spinor<Complex>& s, const std::array<Complex, 2>& form) {
  return SpinorForm<Complex>::from_columns({{s[0] * form[0], s[1] * form[0]}}, {{s[0] * form[1], s[1] * form[1]}});
}

}  // namespace

TEST_CASE("clifford action examples") {
  CHECK(same(clifford_act<double>({1.0, 0.0}, sp(1, 0)), sp(1, 0)));
  CHECK(same(clifford_act<double>({0.0, 1.0}, sp(1, 0)), sp(0, 1)));
  const auto s = sp(0.3, -0.8);
  const auto anti = gamma(0, gamma(1, s)) + gamma(1, gamma(0, s));
  CHECK(same(anti, sp(0, 0)));
}

TEST_CASE("clifford relation and complex structure in rational mode") {
  Rng r(21);
  for (int k = 0; k < 100; ++k) {
    const std::array<Rational, 2> al{rnd(r), rnd(r)};
    const std::array<Rational, 2> be{rnd(r), rnd(r)};
    const Spinor<Rational> s{{rnd(r), rnd(r)}};
    const auto lhs = clifford_act(al, clifford_act(be, s)) + clifford_act(be, clifford_act(al, s));
    const Rational g = al[0] * be[0] + al[1] * be[1];
    REQUIRE(same(lhs, Spinor<Rational>{{g * s[0] * Rational(2), g * s[1] * Rational(2)}}));
    REQUIRE(same(aci(aci(s)), -s));
    REQUIRE(same(aci(s), -gamma12(s)));
    REQUIRE(same(aci(s), -gamma(0, gamma(1, s))));
  }
  CHECK(symplectic_pair(sp(1, 0), sp(0, 1)) == 1.0);
  CHECK(metric_pair(sp(1, 0), sp(1, 0)) == 1.0);
  CHECK(symplectic_pair(sp(1, 0), sp(0, 1)) == metric_pair(aci(sp(1, 0)), sp(0, 1)));
}

TEST_CASE("gamma is metric-symmetric and symplectic-skew") {
  Rng r(22);
  for (int k = 0; k < 100; ++k) {
    const std::array<Rational, 2> al{rnd(r), rnd(r)};
    const Spinor<Rational> s{{rnd(r), rnd(r)}}, t{{rnd(r), rnd(r)}};
    REQUIRE(metric_pair(s, clifford_act(al, t)) == metric_pair(clifford_act(al, s), t));
    REQUIRE(symplectic_pair(s, clifford_act(al, t)) + symplectic_pair(clifford_act(al, s), t) == Rational(0));
  }
  // Odd entries: the symmetry types swap.
  const auto t0 = GrassmannElement::generator(N, 0), t1 = GrassmannElement::generator(N, 1);
  const GrassmannElement z(N);
  const Spinor<GrassmannElement> a{{t0, z}}, b{{t1, z}};
  const Spinor<GrassmannElement> c{{t0, t1}}, d{{t1.scaled(0.5), t0.scaled(-2.0)}};
  CHECK(metric_pair(c, d) == -metric_pair(d, c));
  CHECK(symplectic_pair(c, d) == symplectic_pair(d, c));
  for (int k = 0; k < 10; ++k) {
    const std::array<GrassmannElement, 2> al{GrassmannElement::scalar(N, r.uniform(-1, 1)),
                                             GrassmannElement::scalar(N, r.uniform(-1, 1))};
    const auto sum = symplectic_pair(a, clifford_act(al, b)) + symplectic_pair(clifford_act(al, a), b);
    REQUIRE(sum.is_zero());
  }
}

TEST_CASE("quantize and theta insertion") {
  const auto z = SpinorForm<double>::from_columns(sp(1, 0), sp(0, 0));
  CHECK(same(quantize(z), sp(1, 0)));
  const auto th = theta_insert(sp(1, 0));
  CHECK(same(th, SpinorForm<double>::from_columns(sp(0.5, 0), sp(0, 0.5))));
  CHECK(same(theta_insert(sp(0, 0)), SpinorForm<double>::from_columns(sp(0, 0), sp(0, 0))));

  Rng r(23);
  for (int k = 0; k < 50; ++k) {
    const Spinor<GrassmannElement> s{{random_element(r, N, 5), random_element(r, N, 5)}};
    REQUIRE(same(quantize(theta_insert(s)), s));
  }
}

TEST_CASE("projector algebra is exact in rational mode") {
  Rng r(24);
  for (int k = 0; k < 100; ++k) {
    const auto z = SpinorForm<Rational>::from_columns({{rnd(r), rnd(r)}}, {{rnd(r), rnd(r)}});
    const auto w = SpinorForm<Rational>::from_columns({{rnd(r), rnd(r)}}, {{rnd(r), rnd(r)}});
    const auto p = project_p(z), q = project_q(z);
    REQUIRE(same(p + q, z));
    REQUIRE(same(project_p(p), p));
    REQUIRE(same(project_q(q), q));
    REQUIRE(same(project_p(q), SpinorForm<Rational>{}));
    REQUIRE(same(project_q(p), SpinorForm<Rational>{}));
    REQUIRE(form_pair(PairKind::metric, project_p(z), w) == form_pair(PairKind::metric, z, project_p(w)));
    REQUIRE(form_pair(PairKind::metric, project_p(z), project_q(w)) == Rational(0));
  }
}

TEST_CASE("projectors on theta insertions and spin-3/2 images") {
  const auto s = sp(0.4, -1.3);
  CHECK(same(project_p(theta_insert(s)), theta_insert(s)));
  CHECK(same(project_q(theta_insert(s)), SpinorForm<double>{{{{0, 0}, {0, 0}}}}));

  const double h = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  const Spinor<Complex> w = weyl_frame();
  const Spinor<Complex> wbar{{std::conj(w[0]), std::conj(w[1])}};
  const std::array<Complex, 2> theta{h, i * h}, theta_bar{h, -i * h};
  for (const auto& z : {tensor(w, theta_bar), tensor(wbar, theta)}) {
    CHECK(abs_form(project_q(z) - z) <= 1e-15);
    CHECK(abs_form(project_p(z)) <= 1e-15);
  }
  for (const auto& z : {tensor(w, theta), tensor(wbar, theta_bar)}) {
    CHECK(abs_form(project_p(z) - z) <= 1e-15);
  }
}

TEST_CASE("unique decomposition") {
  const auto z = SpinorForm<double>::from_columns(sp(1, 0), sp(0, 0));
  const auto [s, g] = decompose_form(z);
  CHECK(same(s, sp(1, 0)));
  CHECK(same(g, SpinorForm<double>::from_columns(sp(0.5, 0), sp(0, -0.5))));
  CHECK(same(quantize(g), sp(0, 0)));
  CHECK(same(theta_insert(s) + g, z));

  const auto s0 = sp(0.25, -2.0);
  const auto [s1, g1] = decompose_form(theta_insert(s0));
  CHECK(same(s1, s0));
  CHECK(same(g1, SpinorForm<double>::from_columns(sp(0, 0), sp(0, 0))));
}

TEST_CASE("symplectic dual conventions") {
  const auto d1 = symplectic_dual(sp(1, 0));
  const auto d2 = symplectic_dual(sp(0, 1));
  CHECK((d1[0] == 0.0 && d1[1] == 1.0));
  CHECK((d2[0] == -1.0 && d2[1] == 0.0));
  Rng r(25);
  for (int k = 0; k < 20; ++k) {
    const auto s = sp(r.uniform(-1, 1), r.uniform(-1, 1)), t = sp(r.uniform(-1, 1), r.uniform(-1, 1));
    REQUIRE(same(dual_to_spinor(symplectic_dual(s)), s));
    REQUIRE(evaluate(symplectic_dual(s), t) == doctest::Approx(symplectic_pair(s, t)));
  }
}

TEST_CASE("Weyl split") {
  const double h = 1.0 / std::sqrt(2.0);
  const auto p = weyl_split({{Complex(1, 0), Complex(0, 0)}});
  CHECK(std::abs(p.w - h) <= 1e-15);
  CHECK(std::abs(p.wbar - h) <= 1e-15);
  const auto q = weyl_split(weyl_frame());
  CHECK(std::abs(q.w - 1.0) <= 1e-15);
  CHECK(std::abs(q.wbar) <= 1e-15);

  const Spinor<Complex> s{{Complex(0.3, -0.2), Complex(-1.1, 0.7)}};
  const auto a = weyl_split(s), b = weyl_split(aci(s));
  const Complex i(0.0, 1.0);
  CHECK(std::abs(b.w - i * a.w) <= 1e-15);
  CHECK(std::abs(b.wbar + i * a.wbar) <= 1e-15);
  const auto j = weyl_join(a);
  CHECK(std::abs(j[0] - s[0]) + std::abs(j[1] - s[1]) <= 1e-15);
}

TEST_CASE("w (x) w covers the frame") {
  const auto v = square_to_vector(weyl_frame(), weyl_frame());
  const double h = 1.0 / std::sqrt(2.0);
  // (e_1 - i e_2) / sqrt2, the complex frame vector dual to theta.
  CHECK(std::abs(v[0] - Complex(h, 0)) <= 1e-15);
  CHECK(std::abs(v[1] - Complex(0, -h)) <= 1e-15);
}
