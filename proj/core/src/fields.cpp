#include "shm/fields.hpp"

#include <cmath>
#include <complex>
#include <istream>
#include <numbers>
#include <sstream>

namespace shm {

GeneratorBlock generator_block(FieldKind kind) {
  switch (kind) {
    case FieldKind::psi: return {0, 3};
    case FieldKind::chi: return {3, 3};
    case FieldKind::spinor: return {6, 2};
    case FieldKind::map:
    case FieldKind::torsion: return {0, 0};
  }
  return {0, 0};
}

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::map: return "map";
    case FieldKind::psi: return "psi";
    case FieldKind::chi: return "chi";
    case FieldKind::spinor: return "spinor";
    case FieldKind::torsion: return "torsion";
  }
  return "?";
}

ModeTable ModeTable::only(FieldKind kind) const {
  ModeTable out;
  for (const auto& m : modes)
    if (m.kind == kind) out.modes.push_back(m);
  return out;
}

ModeTable parse_mode_table(std::istream& in) {
  ModeTable table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    Mode m;
    if (kind == "map") m.kind = FieldKind::map;
    else if (kind == "psi") m.kind = FieldKind::psi;
    else if (kind == "chi") m.kind = FieldKind::chi;
    else if (kind == "spinor") m.kind = FieldKind::spinor;
    else if (kind == "torsion") m.kind = FieldKind::torsion;
    else fail(ErrorCode::config_parse, "line " + std::to_string(lineno) + ": unknown kind '" + kind + "'");
    if (!(ls >> m.k1 >> m.k2 >> m.amplitude >> m.generator >> m.component))
      fail(ErrorCode::config_parse, "line " + std::to_string(lineno) + ": expected 6 fields");
    if (!(ls >> m.phase)) m.phase = 0.0;
    std::string extra;
    if (ls.clear(), ls >> extra)
      fail(ErrorCode::config_parse, "line " + std::to_string(lineno) + ": trailing data");
    table.modes.push_back(m);
  }
  return table;
}

std::string format_mode_table(const ModeTable& table) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& m : table.modes)
    os << to_string(m.kind) << ' ' << m.k1 << ' ' << m.k2 << ' ' << m.amplitude << ' ' << m.generator << ' '
       << m.component << ' ' << m.phase << '\n';
  return os.str();
}

namespace {

bool is_spinor_kind(FieldKind kind) {
  return kind == FieldKind::psi || kind == FieldKind::chi || kind == FieldKind::spinor;
}

void check_generator(const Mode& m, const FieldContext& ctx) {
  if (m.generator < 0) return;
  const GeneratorBlock block = generator_block(m.kind);
  if (m.generator < block.first || m.generator >= block.first + block.count || m.generator >= ctx.generator_count)
    fail(ErrorCode::generator_budget_exceeded,
         std::string(to_string(m.kind)) + " mode uses generator " + std::to_string(m.generator) +
             " outside its block");
}

}  // namespace

ScalarField make_trig_field(const ModeTable& table, const FieldContext& ctx, FieldKind kind, int component) {
  const auto& grid = *ctx.grid;
  const Twist twist = is_spinor_kind(kind) ? grid.spin_twist() : Twist{false, false};
  ScalarField out(ctx.grid, ctx.generator_count, twist);
  Band band{};
  for (const auto& m : table.modes) {
    if (m.kind != kind || m.component != component) continue;
    check_generator(m, ctx);
    const double k1 = m.k1 + (twist[0] ? 0.5 : 0.0);
    const double k2 = m.k2 + (twist[1] ? 0.5 : 0.0);
    for (int mu = 0; mu < 2; ++mu) {
      const double k = std::abs(mu == 0 ? k1 : k2);
      if (grid.mode() == DerivMode::spectral && k > grid.max_resolved_band(mu, twist[mu]))
        fail(ErrorCode::aliasing_detected, "mode wavenumber above the resolvable band");
      band.k[mu] = std::max(band.k[mu], k);
    }
    const double w1 = 2.0 * std::numbers::pi * k1 / grid.period(0);
    const double w2 = 2.0 * std::numbers::pi * k2 / grid.period(1);
    std::vector<double> v = sample(grid, [&](double x1, double x2) {
      return m.amplitude * std::cos(w1 * x1 + w2 * x2 + m.phase);
    });
    const Monomial mask = m.generator < 0 ? 0 : (Monomial{1} << m.generator);
    out += ScalarField::monomial(ctx.grid, ctx.generator_count, mask, std::move(v), band, twist);
  }
  return out.with_twist(twist).with_band(band);
}

MapField<ScalarField> make_map(const ModeTable& table, const FieldContext& ctx,
                               std::vector<std::array<double, 2>> winding) {
  MapField<ScalarField> phi;
  winding.resize(ctx.target_dim, {0.0, 0.0});
  phi.winding = std::move(winding);
  for (int a = 0; a < ctx.target_dim; ++a) phi.phi.push_back(make_trig_field(table, ctx, FieldKind::map, a));
  return phi;
}

TwistedSpinor<ScalarField> make_psi(const ModeTable& table, const FieldContext& ctx) {
  TwistedSpinor<ScalarField> psi;
  for (int a = 0; a < ctx.target_dim; ++a)
    psi.push_back({{make_trig_field(table, ctx, FieldKind::psi, 2 * a),
                    make_trig_field(table, ctx, FieldKind::psi, 2 * a + 1)}});
  return psi;
}

Gravitino<ScalarField> make_chi(const ModeTable& table, const FieldContext& ctx) {
  Gravitino<ScalarField> chi;
  for (int mu = 0; mu < 2; ++mu)
    for (int k = 0; k < 2; ++k) chi.z[k][mu] = make_trig_field(table, ctx, FieldKind::chi, 2 * mu + k);
  return chi;
}

Spinor<ScalarField> make_spinor(const ModeTable& table, const FieldContext& ctx) {
  return {{make_trig_field(table, ctx, FieldKind::spinor, 0), make_trig_field(table, ctx, FieldKind::spinor, 1)}};
}

OneForm<ScalarField> make_torsion(const ModeTable& table, const FieldContext& ctx) {
  return {make_trig_field(table, ctx, FieldKind::torsion, 0), make_trig_field(table, ctx, FieldKind::torsion, 1)};
}

template <class S>
SpinorForm<S> to_frame(const Gravitino<S>& chi, const Geometry<S>& geo) {
  const auto& e = geo.frame.e;
  std::array<Spinor<S>, 2> col;
  for (int k = 0; k < 2; ++k) col[k] = times(e[k][0], chi.column(0)) + times(e[k][1], chi.column(1));
  return SpinorForm<S>::from_columns(col[0], col[1]);
}

template <class S>
Gravitino<S> to_coordinates(const SpinorForm<S>& chi_frame, const Geometry<S>& geo) {
  const auto& c = geo.coframe;
  std::array<Spinor<S>, 2> col;
  for (int mu = 0; mu < 2; ++mu)
    col[mu] = times(c[0][mu], chi_frame.column(0)) + times(c[1][mu], chi_frame.column(1));
  return SpinorForm<S>::from_columns(col[0], col[1]);
}

template <class S>
OneForm<S> torsion_from_gravitino(const Gravitino<S>& chi, const Geometry<S>& geo) {
  const Spinor<S> q = quantize(to_frame(chi, geo));
  return {scale(metric_pair(q, chi.column(0)), torsion_normalisation, 1),
          scale(metric_pair(q, chi.column(1)), torsion_normalisation, 1)};
}

template <class S>
std::pair<Spinor<S>, SpinorForm<S>> gravitino_split(const Gravitino<S>& chi, const Geometry<S>& geo) {
  return decompose_form(to_frame(chi, geo));
}

template <class S>
SpinorForm<S> q_part(const Gravitino<S>& chi, const Geometry<S>& geo) {
  return project_q(to_frame(chi, geo));
}

TorsionFactor factorize_torsion_point(double a1, double a2) {
  TorsionFactor f;
  const std::complex<double> a(a1, -a2);
  if (std::abs(a) == 0.0) {
    f.spin_half = {{0.0, 0.0}};
    f.spin_three_half = SpinorForm<double>{{{{0.0, 0.0}, {0.0, 0.0}}}};
    f.chi = f.spin_three_half;
    return f;
  }
  f.near_branch_cut = a.real() < 0.0 && std::abs(a.imag()) <= 1e-12 * std::abs(a);
  const std::complex<double> r = std::sqrt(a);
  // With s built from sqrt(a), <gamma(chi), chi_k> = a/2 + c a for chi =
  // theta_insert(s) + c g0, g0 built from conj(a)/sqrt(a); c = -1 makes the
  // normalised recovery -2 <gamma(chi), chi_k> return a exactly.
  const std::complex<double> b = -std::conj(a) / r;
  f.spin_half = {{r.real(), -r.imag()}};
  f.spin_three_half = SpinorForm<double>::from_columns({{b.real(), b.imag()}}, {{b.imag(), -b.real()}});
  f.chi = theta_insert(f.spin_half) + f.spin_three_half;
  return f;
}

std::array<double, 2> recover_torsion_point(const SpinorForm<double>& chi) {
  const Spinor<double> q = quantize(chi);
  return {scale(metric_pair(q, chi.column(0)), torsion_normalisation, 1),
          scale(metric_pair(q, chi.column(1)), torsion_normalisation, 1)};
}

FactorizedTorsion factorize_torsion(const OneForm<ScalarField>& A, const Geometry<ScalarField>& geo) {
  const GridPtr& grid = A[0].grid();
  const int gens = A[0].generator_count();
  const std::size_t n = grid->size();
  std::array<std::vector<double>, 2> a{A[0].body_values(), A[1].body_values()};
  std::array<std::array<std::vector<double>, 2>, 2> e, c;
  for (int k = 0; k < 2; ++k)
    for (int mu = 0; mu < 2; ++mu) {
      e[k][mu] = geo.frame.e[k][mu].body_values();
      c[k][mu] = geo.coframe[k][mu].body_values();
    }
  std::array<std::array<std::vector<double>, 2>, 2> chi;
  for (auto& row : chi)
    for (auto& v : row) v.assign(n, 0.0);
  FactorizedTorsion out;
  std::vector<double> imag(n), real(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double a1 = e[0][0][p] * a[0][p] + e[0][1][p] * a[1][p];
    const double a2 = e[1][0][p] * a[0][p] + e[1][1][p] * a[1][p];
    real[p] = a1;
    imag[p] = -a2;
    const TorsionFactor f = factorize_torsion_point(a1, a2);
    out.branch_cut_crossed = out.branch_cut_crossed || f.near_branch_cut;
    for (int s = 0; s < 2; ++s)
      for (int mu = 0; mu < 2; ++mu) chi[s][mu][p] = c[0][mu][p] * f.chi.z[s][0] + c[1][mu][p] * f.chi.z[s][1];
  }
  // A sign change of Im(a) on the negative real half-axis between neighbours
  // means the principal root jumps.
  for (int i = 0; i < grid->n(0); ++i)
    for (int j = 0; j < grid->n(1); ++j) {
      const std::size_t p = grid->index(i, j);
      for (const std::size_t q : {grid->index((i + 1) % grid->n(0), j), grid->index(i, (j + 1) % grid->n(1))})
        if (real[p] < 0.0 && real[q] < 0.0 && (imag[p] < 0.0) != (imag[q] < 0.0)) out.branch_cut_crossed = true;
    }
  for (int s = 0; s < 2; ++s)
    for (int mu = 0; mu < 2; ++mu)
      out.chi.z[s][mu] = ScalarField::monomial(grid, gens, 0, chi[s][mu], Band::unknown(), grid->spin_twist());
  return out;
}

double holomorphy_residual(const Spinor<ScalarField>& s, const Geometry<ScalarField>& geo) {
  const OneForm<ScalarField> zero{zero_like(s[0]).with_twist({false, false}),
                                  zero_like(s[0]).with_twist({false, false})};
  const SpinorForm<ScalarField> ds = spin_cov_deriv(s, geo, zero);
  const SpinorForm<ScalarField> q = project_q(to_frame(ds, geo));
  double sq = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int k = 0; k < 2; ++k) {
      const double n = l2_norm(q.z[a][k]);
      sq += n * n;
    }
  return std::sqrt(sq);
}

#define SHM_INSTANTIATE(S)                                                                         \
  template SpinorForm<S> to_frame(const Gravitino<S>&, const Geometry<S>&);                        \
  template Gravitino<S> to_coordinates(const SpinorForm<S>&, const Geometry<S>&);                  \
  template OneForm<S> torsion_from_gravitino(const Gravitino<S>&, const Geometry<S>&);             \
  template std::pair<Spinor<S>, SpinorForm<S>> gravitino_split(const Gravitino<S>&, const Geometry<S>&); \
  template SpinorForm<S> q_part(const Gravitino<S>&, const Geometry<S>&);

SHM_INSTANTIATE(ScalarField)
SHM_INSTANTIATE(DualField)

#undef SHM_INSTANTIATE

}  // namespace shm
