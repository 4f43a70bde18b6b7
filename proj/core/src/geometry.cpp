#include "shm/geometry.hpp"

namespace shm {

namespace {

template <class S>
S constant_field(const GridPtr& grid, int gens, double v) {
  return lift<S>(ScalarField::constant(grid, gens, v).with_band(Band{}));
}

template <class S>
Spinor<S> partial(const Spinor<S>& s, int mu) {
  return {{partial(s[0], mu), partial(s[1], mu)}};
}

}  // namespace

template <class S>
FrameField<S> FrameField<S>::flat(const GridPtr& grid, int generator_count) {
  FrameField f;
  for (int k = 0; k < 2; ++k)
    for (int mu = 0; mu < 2; ++mu) f.e[k][mu] = constant_field<S>(grid, generator_count, k == mu ? 1.0 : 0.0);
  return f;
}

template <class S>
FrameField<S> FrameField<S>::conformal(const GridPtr& grid, int generator_count, std::span<const double> u) {
  std::vector<double> w(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) w[i] = std::exp(-u[i]);
  FrameField f = flat(grid, generator_count);
  const ScalarField c = ScalarField::monomial(grid, generator_count, 0, w, Band::unknown());
  f.e[0][0] = lift<S>(c);
  f.e[1][1] = lift<S>(c);
  return f;
}

template <class S>
Geometry<S> make_geometry(const FrameField<S>& frame) {
  Geometry<S> g;
  g.frame = frame;
  const auto& e = frame.e;
  g.frame_det = e[0][0] * e[1][1] - e[0][1] * e[1][0];
  for (double b : primal(g.frame_det).body_values())
    if (!(b > 0.0)) fail(ErrorCode::non_oriented_frame, "det e has non-positive body");
  g.volume = inverse(g.frame_det);
  g.coframe[0][0] = e[1][1] * g.volume;
  g.coframe[0][1] = -(e[1][0] * g.volume);
  g.coframe[1][0] = -(e[0][1] * g.volume);
  g.coframe[1][1] = e[0][0] * g.volume;
  const auto& c = g.coframe;
  for (int mu = 0; mu < 2; ++mu)
    for (int nu = 0; nu < 2; ++nu) g.metric[mu][nu] = c[0][mu] * c[0][nu] + c[1][mu] * c[1][nu];

  const S t1 = partial(c[0][1], 0) - partial(c[0][0], 1);
  const S t2 = partial(c[1][1], 0) - partial(c[1][0], 1);
  g.connection[0] = -(c[0][0] * t1 + c[1][0] * t2) * g.frame_det;
  g.connection[1] = -(c[0][1] * t1 + c[1][1] * t2) * g.frame_det;
  return g;
}

template <class S>
double cartan_residual(const Geometry<S>& geo) {
  const auto& c = geo.coframe;
  const auto& G = geo.connection;
  const S t1 = partial(c[0][1], 0) - partial(c[0][0], 1);
  const S t2 = partial(c[1][1], 0) - partial(c[1][0], 1);
  const S r1 = t1 + (G[0] * c[1][1] - G[1] * c[1][0]);
  const S r2 = t2 - (G[0] * c[0][1] - G[1] * c[0][0]);
  return std::max(max_abs(r1), max_abs(r2));
}

template <class S>
SpinorForm<S> spin_cov_deriv(const Spinor<S>& s, const Geometry<S>& geo, const OneForm<S>& A) {
  const Spinor<S> rot = gamma12(s);
  std::array<Spinor<S>, 2> col;
  for (int mu = 0; mu < 2; ++mu) {
    const S w = scale(geo.connection[mu] + A[mu], 1, 2);
    col[mu] = partial(s, mu) + times(w, rot);
  }
  return SpinorForm<S>::from_columns(col[0], col[1]);
}

template <class S>
TwistedSpinor<S> dirac_apply(const TwistedSpinor<S>& psi, const Geometry<S>& geo, const OneForm<S>& A) {
  const auto& e = geo.frame.e;
  TwistedSpinor<S> out;
  out.reserve(psi.size());
  for (const auto& p : psi) {
    const SpinorForm<S> nabla = spin_cov_deriv(p, geo, A);
    Spinor<S> acc;
    for (int k = 0; k < 2; ++k) {
      const Spinor<S> along = times(e[k][0], nabla.column(0)) + times(e[k][1], nabla.column(1));
      acc = k == 0 ? gamma(0, along) : acc + gamma(1, along);
    }
    out.push_back(acc);
  }
  return out;
}

template <class S>
S curvature_of_torsion(const OneForm<S>& A) {
  return partial(A[1], 0) - partial(A[0], 1);
}

template <class S>
S divergence(const OneForm<S>& J, const Geometry<S>& geo) {
  return (partial(geo.volume * J[0], 0) + partial(geo.volume * J[1], 1)) * geo.frame_det;
}

template <class S>
OneForm<S> gradient(const S& f, const Geometry<S>& geo) {
  const OneForm<S> df{partial(f, 0), partial(f, 1)};
  const OneForm<S> ek = frame_components(df, geo);
  const auto& e = geo.frame.e;
  return {e[0][0] * ek[0] + e[1][0] * ek[1], e[0][1] * ek[0] + e[1][1] * ek[1]};
}

template <class S>
OneForm<S> frame_components(const OneForm<S>& df, const Geometry<S>& geo) {
  const auto& e = geo.frame.e;
  return {e[0][0] * df[0] + e[0][1] * df[1], e[1][0] * df[0] + e[1][1] * df[1]};
}

#define SHM_INSTANTIATE(S)                                                                        \
  template struct FrameField<S>;                                                                  \
  template Geometry<S> make_geometry(const FrameField<S>&);                                       \
  template double cartan_residual(const Geometry<S>&);                                            \
  template SpinorForm<S> spin_cov_deriv(const Spinor<S>&, const Geometry<S>&, const OneForm<S>&); \
  template TwistedSpinor<S> dirac_apply(const TwistedSpinor<S>&, const Geometry<S>&,             \
                                        const OneForm<S>&);                                       \
  template S curvature_of_torsion(const OneForm<S>&);                                             \
  template S divergence(const OneForm<S>&, const Geometry<S>&);                                   \
  template OneForm<S> gradient(const S&, const Geometry<S>&);                                     \
  template OneForm<S> frame_components(const OneForm<S>&, const Geometry<S>&);

SHM_INSTANTIATE(ScalarField)
SHM_INSTANTIATE(DualField)

#undef SHM_INSTANTIATE

}  // namespace shm
