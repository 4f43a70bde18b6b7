#include "shm/functionals.hpp"

#include "json.hpp"

namespace shm {

namespace {

template <class S>
S square_sum(const OneForm<S>& v) {
  return v[0] * v[0] + v[1] * v[1];
}

template <class V>
V zero_value(int gens) {
  if constexpr (std::is_same_v<V, GrassmannElement>) {
    return GrassmannElement(gens);
  } else {
    return V{GrassmannElement(gens), GrassmannElement(gens)};
  }
}

}  // namespace

template <class S>
Integral<S> harmonic_energy(const MapField<S>& phi, const Geometry<S>& geo) {
  S acc = square_sum(frame_components(phi.differential(0), geo));
  for (int a = 1; a < phi.dim(); ++a) acc = acc + square_sum(frame_components(phi.differential(a), geo));
  return integrate(acc, geo);
}

template <class S>
Integral<S> dirac_action(const TwistedSpinor<S>& psi, const Geometry<S>& geo, const OneForm<S>& A) {
  return integrate(pairing_E(psi, dirac_apply(psi, geo, A)), geo);
}

template <class S>
Integral<S> integrated_pairing(const TwistedSpinor<S>& phi, const TwistedSpinor<S>& psi, const Geometry<S>& geo) {
  return integrate(pairing_E(phi, psi), geo);
}

template <class S>
S gravitino_quadratic(const Gravitino<S>& chi, const Geometry<S>& geo) {
  const SpinorForm<S> f = to_frame(chi, geo);
  const SpinorForm<S> q = project_q(f);
  return symplectic_pair(f.column(0), q.column(0)) + symplectic_pair(f.column(1), q.column(1));
}

template <class S>
Integral<S> coupling_quartic(const Gravitino<S>& chi, const TwistedSpinor<S>& psi, const Geometry<S>& geo) {
  return integrate(gravitino_quadratic(chi, geo) * pairing_E(psi, psi), geo);
}

template <class S>
Integral<S> coupling_mixed(const Gravitino<S>& chi, const MapField<S>& phi, const TwistedSpinor<S>& psi,
                           const Geometry<S>& geo) {
  const SpinorForm<S> q = q_part(chi, geo);
  TwistedSpinor<S> flat;
  for (int a = 0; a < phi.dim(); ++a) {
    const OneForm<S> dphi = frame_components(phi.differential(a), geo);
    const Spinor<S> w = times(dphi[0], q.column(0)) + times(dphi[1], q.column(1));
    const DualSpinor<S> d = symplectic_dual(w);
    flat.push_back({{d[0], d[1]}});
  }
  return integrate(pairing_E(flat, psi), geo);
}

template <class S>
Integral<S> coupling_ruled_out(const Gravitino<S>& chi, const TwistedSpinor<S>& psi, const Geometry<S>& geo) {
  const SpinorForm<S> f = to_frame(chi, geo);
  S acc;
  bool first = true;
  for (const auto& p : psi) {
    const Spinor<S> sharp = dual_to_spinor(DualSpinor<S>{{p[0], p[1]}});
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const S term = symplectic_pair(f.column(i), gamma(j, gamma(i, sharp))) * symplectic_pair(sharp, f.column(j));
        acc = first ? term : acc + term;
        first = false;
      }
  }
  return integrate(acc, geo);
}

template <class S>
ActionBreakdown<Integral<S>> super_action(const MapField<S>& phi, const TwistedSpinor<S>& psi,
                                          const Gravitino<S>& chi, const Geometry<S>& geo, const OneForm<S>& A,
                                          const Convention& conv) {
  using V = Integral<S>;
  ActionBreakdown<V> b;
  b.harmonic = harmonic_energy(phi, geo);
  const int gens = primal(psi[0][0]).generator_count();
  b.dirac = dirac_action(psi, geo, A);
  b.quartic_coupling = coupling_quartic(chi, psi, geo);
  b.mixed_coupling = coupling_mixed(chi, phi, psi, geo);
  b.f_squared = zero_value<V>(gens);
  b.scal_term = zero_value<V>(gens);
  b.quartic_weight = conv.quartic;
  b.mixed_weight = conv.mixed;
  return b;
}

template <class S>
ActionBreakdown<Integral<S>> dym_dhym_action(const MapField<S>& phi, const TwistedSpinor<S>& psi,
                                             const Geometry<S>& geo, const OneForm<S>& A) {
  using V = Integral<S>;
  ActionBreakdown<V> b;
  const int gens = primal(psi[0][0]).generator_count();
  b.harmonic = harmonic_energy(phi, geo);
  b.dirac = dirac_action(psi, geo, A);
  b.quartic_coupling = zero_value<V>(gens);
  b.mixed_coupling = zero_value<V>(gens);
  const S F = curvature_of_torsion(A);
  // |F|^2 = F_12^2 / det g = (F_12 det e)^2.
  const S Fn = F * geo.frame_det;
  b.f_squared = integrate(Fn * Fn, geo);
  b.scal_term = zero_value<V>(gens);
  b.quartic_weight = 1.0;
  b.mixed_weight = 1.0;
  return b;
}

template <class S>
Integral<S> symplectic_target_dirac_action(const TwistedSpinor<S>& psi, const Geometry<S>& geo,
                                           const OneForm<S>& A) {
  return integrate(pairing_symplectic_target(psi, dirac_apply(psi, geo, A)), geo);
}

std::string to_json(const ActionBreakdown<GrassmannElement>& b) {
  auto encode = [](const GrassmannElement& g) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (const auto& [mask, coef] : g.terms()) {
      std::string key = "[";
      bool first = true;
      for (int i = 0; i < g.generator_count(); ++i)
        if (mask & (Monomial{1} << i)) {
          key += (first ? "" : ",") + std::to_string(i);
          first = false;
        }
      key += "]";
      obj[key] = coef;
    }
    return obj;
  };
  nlohmann::ordered_json j;
  j["harmonic"] = encode(b.harmonic);
  j["dirac"] = encode(b.dirac);
  j["quartic_coupling"] = encode(b.quartic_coupling);
  j["mixed_coupling"] = encode(b.mixed_coupling);
  j["f_squared"] = encode(b.f_squared);
  j["scal_term"] = encode(b.scal_term);
  j["total"] = encode(b.total());
  return j.dump();
}

#define SHM_INSTANTIATE(S)                                                                                    \
  template Integral<S> harmonic_energy(const MapField<S>&, const Geometry<S>&);                               \
  template Integral<S> dirac_action(const TwistedSpinor<S>&, const Geometry<S>&, const OneForm<S>&);          \
  template Integral<S> integrated_pairing(const TwistedSpinor<S>&, const TwistedSpinor<S>&, const Geometry<S>&); \
  template S gravitino_quadratic(const Gravitino<S>&, const Geometry<S>&);                                    \
  template Integral<S> coupling_quartic(const Gravitino<S>&, const TwistedSpinor<S>&, const Geometry<S>&);    \
  template Integral<S> coupling_mixed(const Gravitino<S>&, const MapField<S>&, const TwistedSpinor<S>&,       \
                                      const Geometry<S>&);                                                    \
  template Integral<S> coupling_ruled_out(const Gravitino<S>&, const TwistedSpinor<S>&, const Geometry<S>&);  \
  template ActionBreakdown<Integral<S>> super_action(const MapField<S>&, const TwistedSpinor<S>&,             \
                                                     const Gravitino<S>&, const Geometry<S>&,                 \
                                                     const OneForm<S>&, const Convention&);                   \
  template ActionBreakdown<Integral<S>> dym_dhym_action(const MapField<S>&, const TwistedSpinor<S>&,          \
                                                        const Geometry<S>&, const OneForm<S>&);               \
  template Integral<S> symplectic_target_dirac_action(const TwistedSpinor<S>&, const Geometry<S>&,            \
                                                      const OneForm<S>&);

SHM_INSTANTIATE(ScalarField)
SHM_INSTANTIATE(DualField)

#undef SHM_INSTANTIATE

}  // namespace shm
