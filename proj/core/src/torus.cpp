#include "shm/torus.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

namespace shm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::generator_mismatch: return "GeneratorMismatch";
    case ErrorCode::no_body: return "NoBody";
    case ErrorCode::ring_mismatch: return "RingMismatch";
    case ErrorCode::non_oriented_frame: return "NonOrientedFrame";
    case ErrorCode::singular_solve: return "SingularSolve";
    case ErrorCode::shape_mismatch: return "ShapeMismatch";
    case ErrorCode::aliasing_detected: return "AliasingDetected";
    case ErrorCode::generator_budget_exceeded: return "GeneratorBudgetExceeded";
    case ErrorCode::parity_mismatch: return "ParityMismatch";
    case ErrorCode::unknown_suite: return "UnknownSuite";
    case ErrorCode::config_parse: return "ConfigParse";
  }
  return "Error";
}

Band band_product(const Band& a, const Band& b) {
  if (!a.known || !b.known) return Band::unknown();
  return Band{{a.k[0] + b.k[0], a.k[1] + b.k[1]}, true};
}

Band band_sum(const Band& a, const Band& b) {
  if (!a.known || !b.known) return Band::unknown();
  return Band{{std::max(a.k[0], b.k[0]), std::max(a.k[1], b.k[1])}, true};
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// ---------------------------------------------------------------------------
// TorusGrid

struct TorusGrid::Fft {
  std::mutex lock;
  fftw_complex* buffer = nullptr;
  fftw_plan forward[2]{};
  fftw_plan backward[2]{};

  ~Fft() {
    for (int mu = 0; mu < 2; ++mu) {
      if (forward[mu]) fftw_destroy_plan(forward[mu]);
      if (backward[mu]) fftw_destroy_plan(backward[mu]);
    }
    if (buffer) fftw_free(buffer);
  }
};

std::shared_ptr<const TorusGrid> TorusGrid::create(const Options& options) {
  return std::shared_ptr<const TorusGrid>(new TorusGrid(options));
}

TorusGrid::TorusGrid(const Options& options) : opt_(options) {
  for (int mu = 0; mu < 2; ++mu) {
    const int nm = n(mu);
    if (nm < 4 || nm % 2 != 0)
      fail(ErrorCode::shape_mismatch, "grid sizes must be even and >= 4");
    if (opt_.mode == DerivMode::spectral && nm < 8)
      fail(ErrorCode::shape_mismatch, "spectral mode needs at least 8 points per direction");
    if (!(period(mu) > 0.0)) fail(ErrorCode::shape_mismatch, "periods must be positive");
  }
  if (opt_.mode != DerivMode::spectral) return;

  static std::mutex planner_lock;  // the FFTW planner is not reentrant
  std::lock_guard<std::mutex> guard(planner_lock);
  fft_ = std::make_unique<Fft>();
  fft_->buffer = fftw_alloc_complex(size());
  const int n1 = opt_.n1, n2 = opt_.n2;
  int len0 = n1, len1 = n2;
  fft_->forward[0] = fftw_plan_many_dft(1, &len0, n2, fft_->buffer, nullptr, n2, 1, fft_->buffer,
                                        nullptr, n2, 1, FFTW_FORWARD, FFTW_ESTIMATE);
  fft_->backward[0] = fftw_plan_many_dft(1, &len0, n2, fft_->buffer, nullptr, n2, 1, fft_->buffer,
                                         nullptr, n2, 1, FFTW_BACKWARD, FFTW_ESTIMATE);
  fft_->forward[1] = fftw_plan_many_dft(1, &len1, n1, fft_->buffer, nullptr, 1, n2, fft_->buffer,
                                        nullptr, 1, n2, FFTW_FORWARD, FFTW_ESTIMATE);
  fft_->backward[1] = fftw_plan_many_dft(1, &len1, n1, fft_->buffer, nullptr, 1, n2, fft_->buffer,
                                         nullptr, 1, n2, FFTW_BACKWARD, FFTW_ESTIMATE);
}

TorusGrid::~TorusGrid() = default;

double TorusGrid::coordinate(int mu, std::size_t index) const {
  const std::size_t i = index / opt_.n2;
  const std::size_t j = index % opt_.n2;
  return mu == 0 ? static_cast<double>(i) * spacing(0) : static_cast<double>(j) * spacing(1);
}

double TorusGrid::max_resolved_band(int mu, bool antiperiodic) const {
  return antiperiodic ? n(mu) / 2 - 0.5 : n(mu) / 2 - 1.0;
}

void TorusGrid::derivative(std::span<const double> in, std::span<double> out, int mu,
                           bool antiperiodic, const Band& band) const {
  const int nm = n(mu);
  const double h = spacing(mu);
  const int other = n(1 - mu);
  // Strided access along direction mu for line `line`, position p.
  auto at = [&](int line, int p) -> std::size_t {
    return mu == 0 ? index(p, line) : index(line, p);
  };
  switch (opt_.mode) {
    case DerivMode::spectral: {
      bool check_tail = !band.known;
      if (band.known && band.k[mu] > max_resolved_band(mu, antiperiodic) + 1e-12) {
        fail(ErrorCode::aliasing_detected,
             "band " + std::to_string(band.k[mu]) + " exceeds resolvable " +
                 std::to_string(max_resolved_band(mu, antiperiodic)));
      }
      spectral_derivative(in, out, mu, antiperiodic, check_tail);
      return;
    }
    case DerivMode::central2: {
      for (int line = 0; line < other; ++line)
        for (int p = 0; p < nm; ++p) {
          const int pp = (p + 1) % nm, pm = (p - 1 + nm) % nm;
          const double sp = (antiperiodic && p + 1 >= nm) ? -1.0 : 1.0;
          const double sm = (antiperiodic && p - 1 < 0) ? -1.0 : 1.0;
          out[at(line, p)] = (sp * in[at(line, pp)] - sm * in[at(line, pm)]) / (2.0 * h);
        }
      return;
    }
    case DerivMode::central4: {
      for (int line = 0; line < other; ++line)
        for (int p = 0; p < nm; ++p) {
          auto val = [&](int q) {
            const int w = ((q % nm) + nm) % nm;
            const bool wrapped = (q < 0) || (q >= nm);
            return (antiperiodic && wrapped ? -1.0 : 1.0) * in[at(line, w)];
          };
          out[at(line, p)] =
              (-val(p + 2) + 8.0 * val(p + 1) - 8.0 * val(p - 1) + val(p - 2)) / (12.0 * h);
        }
      return;
    }
  }
}

void TorusGrid::spectral_derivative(std::span<const double> in, std::span<double> out, int mu,
                                    bool antiperiodic, bool check_tail) const {
  const int nm = n(mu);
  const int other = n(1 - mu);
  const double L = period(mu);
  std::lock_guard<std::mutex> guard(fft_->lock);
  auto* buf = reinterpret_cast<std::complex<double>*>(fft_->buffer);
  auto at = [&](int line, int p) -> std::size_t {
    return mu == 0 ? index(p, line) : index(line, p);
  };
  std::vector<std::complex<double>> phase;
  if (antiperiodic) {
    phase.resize(nm);
    for (int p = 0; p < nm; ++p) phase[p] = std::polar(1.0, -std::numbers::pi * p / nm);
  }
  for (int line = 0; line < other; ++line)
    for (int p = 0; p < nm; ++p) {
      const std::size_t k = at(line, p);
      buf[k] = antiperiodic ? in[k] * phase[p] : std::complex<double>(in[k], 0.0);
    }
  fftw_execute(fft_->forward[mu]);

  if (check_tail) {
    double peak = 0.0, tail = 0.0;
    for (int line = 0; line < other; ++line)
      for (int p = 0; p < nm; ++p) {
        const double a = std::abs(buf[at(line, p)]);
        peak = std::max(peak, a);
        const int k = p < nm / 2 ? p : p - nm;
        const bool top = antiperiodic ? (k == nm / 2 - 1 || k == -nm / 2) : (k == -nm / 2);
        if (top) tail = std::max(tail, a);
      }
    // Absolute floor: round-off residue of cancelled grids is not aliasing.
    if (tail > opt_.alias_tolerance * peak && tail > 1e-13 * nm) {
      char msg[96];
      std::snprintf(msg, sizeof msg, "spectrum tail ratio %.3e above tolerance %.1e", tail / peak, opt_.alias_tolerance);
      fail(ErrorCode::aliasing_detected, msg);
    }
  }

  const double norm = 1.0 / nm;
  for (int line = 0; line < other; ++line)
    for (int p = 0; p < nm; ++p) {
      const int k = p < nm / 2 ? p : p - nm;
      const double kappa = antiperiodic ? k + 0.5 : (k == -nm / 2 ? 0.0 : k);
      const std::complex<double> factor(0.0, 2.0 * std::numbers::pi * kappa / L * norm);
      buf[at(line, p)] *= factor;
    }
  fftw_execute(fft_->backward[mu]);
  for (int line = 0; line < other; ++line)
    for (int p = 0; p < nm; ++p) {
      const std::size_t k = at(line, p);
      out[k] = antiperiodic ? (buf[k] * std::conj(phase[p])).real() : buf[k].real();
    }
}

double TorusGrid::spectral_tail_ratio(std::span<const double> in, int mu, bool antiperiodic) const {
  if (opt_.mode != DerivMode::spectral) return 0.0;
  std::vector<double> scratch(size());
  try {
    spectral_derivative(in, scratch, mu, antiperiodic, true);
  } catch (const Error&) {
    return 1.0;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(GridPtr grid, int generator_count, Twist twist)
    : grid_(std::move(grid)), gens_(generator_count), twist_(twist) {
  if (gens_ < 0 || gens_ > kMaxGenerators)
    fail(ErrorCode::generator_budget_exceeded, "generator count " + std::to_string(gens_));
}

ScalarField ScalarField::constant(GridPtr grid, int generator_count, double value) {
  ScalarField f(grid, generator_count);
  if (value != 0.0) f.terms_.push_back({0, std::vector<double>(grid->size(), value)});
  return f;
}

ScalarField ScalarField::constant(GridPtr grid, const GrassmannElement& value) {
  ScalarField f(grid, value.generator_count());
  for (const auto& [m, c] : value.terms())
    f.terms_.push_back({m, std::vector<double>(grid->size(), c)});
  return f;
}

ScalarField ScalarField::monomial(GridPtr grid, int generator_count, Monomial mask,
                                  std::vector<double> values, Band band, Twist twist) {
  ScalarField f(grid, generator_count, twist);
  if (generator_count < 32 && (mask >> generator_count) != 0)
    fail(ErrorCode::generator_budget_exceeded, "monomial outside generator budget");
  if (values.size() != grid->size()) fail(ErrorCode::shape_mismatch, "grid size mismatch");
  f.band_ = band;
  if (std::any_of(values.begin(), values.end(), [](double x) { return x != 0.0; }))
    f.terms_.push_back({mask, std::move(values)});
  return f;
}

const std::vector<double>* ScalarField::find(Monomial mask) const {
  for (const auto& t : terms_)
    if (t.mask == mask) return &t.values;
  return nullptr;
}

std::vector<double> ScalarField::body_values() const {
  const auto* b = find(0);
  return b ? *b : std::vector<double>(grid_ ? grid_->size() : 0, 0.0);
}

GrassmannElement ScalarField::at(std::size_t index) const {
  std::vector<GrassmannElement::Term> t;
  for (const auto& term : terms_)
    if (term.values[index] != 0.0) t.emplace_back(term.mask, term.values[index]);
  return GrassmannElement::from_terms(gens_, t);
}

Parity ScalarField::parity() const {
  bool even = false, odd = false;
  for (const auto& t : terms_) (degree(t.mask) % 2 == 0 ? even : odd) = true;
  if (even && odd) return Parity::mixed;
  if (even) return Parity::even;
  if (odd) return Parity::odd;
  return Parity::zero;
}

ScalarField ScalarField::even_part() const {
  ScalarField out(grid_, gens_, twist_);
  out.band_ = band_;
  for (const auto& t : terms_)
    if (degree(t.mask) % 2 == 0) out.terms_.push_back(t);
  return out;
}

ScalarField ScalarField::odd_part() const {
  ScalarField out(grid_, gens_, twist_);
  out.band_ = band_;
  for (const auto& t : terms_)
    if (degree(t.mask) % 2 == 1) out.terms_.push_back(t);
  return out;
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (const auto& t : terms_)
    for (double x : t.values) m = std::max(m, std::abs(x));
  return m;
}

ScalarField ScalarField::with_band(const Band& band) const {
  ScalarField out = *this;
  out.band_ = band;
  return out;
}

ScalarField ScalarField::with_twist(const Twist& twist) const {
  ScalarField out = *this;
  out.twist_ = twist;
  return out;
}

void ScalarField::require_compatible(const ScalarField& o, bool additive) const {
  if (grid_ && o.grid_ && grid_ != o.grid_)
    fail(ErrorCode::shape_mismatch, "fields live on different grids");
  if (gens_ != o.gens_)
    fail(ErrorCode::generator_mismatch,
         std::to_string(gens_) + " vs " + std::to_string(o.gens_) + " generators");
  if (additive && !is_zero() && !o.is_zero() && twist_ != o.twist_)
    fail(ErrorCode::shape_mismatch, "adding fields with different spin-structure twist");
}

void ScalarField::accumulate(Monomial mask, std::span<const double> v, double sign) {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), mask,
                             [](const Term& t, Monomial key) { return t.mask < key; });
  if (it == terms_.end() || it->mask != mask) {
    std::vector<double> values(v.begin(), v.end());
    if (sign != 1.0)
      for (double& x : values) x *= sign;
    terms_.insert(it, Term{mask, std::move(values)});
  } else {
    for (std::size_t k = 0; k < v.size(); ++k) it->values[k] += sign * v[k];
  }
}

void ScalarField::prune() {
  std::erase_if(terms_, [](const Term& t) {
    return std::all_of(t.values.begin(), t.values.end(), [](double x) { return x == 0.0; });
  });
}

ScalarField ScalarField::operator-() const {
  ScalarField out = *this;
  for (auto& t : out.terms_)
    for (double& x : t.values) x = -x;
  return out;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  if (!grid_) return *this = o;
  if (!o.grid_) return *this;
  require_compatible(o, true);
  if (is_zero()) {
    twist_ = o.twist_;
    band_ = o.band_;
  } else if (!o.is_zero()) {
    band_ = band_sum(band_, o.band_);
  }
  for (const auto& t : o.terms_) accumulate(t.mask, t.values, 1.0);
  prune();
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  if (!o.grid_) return *this;
  if (!grid_) return *this = -o;
  require_compatible(o, true);
  if (is_zero()) {
    twist_ = o.twist_;
    band_ = o.band_;
  } else if (!o.is_zero()) {
    band_ = band_sum(band_, o.band_);
  }
  for (const auto& t : o.terms_) accumulate(t.mask, t.values, -1.0);
  prune();
  return *this;
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  a.require_compatible(b, false);
  ScalarField out(a.grid_, a.gens_, combine_twist(a.twist_, b.twist_));
  out.band_ = band_product(a.band_, b.band_);
  if (a.is_zero() || b.is_zero()) return out;
  const std::size_t n = a.grid_->size();
  std::map<Monomial, std::vector<double>> acc;
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      if ((ta.mask & tb.mask) != 0) continue;
      auto [it, inserted] = acc.try_emplace(ta.mask | tb.mask);
      if (inserted) it->second.assign(n, 0.0);
      double* dst = it->second.data();
      const double* x = ta.values.data();
      const double* y = tb.values.data();
      if (product_sign(ta.mask, tb.mask) < 0) {
        for (std::size_t k = 0; k < n; ++k) dst[k] -= x[k] * y[k];
      } else {
        for (std::size_t k = 0; k < n; ++k) dst[k] += x[k] * y[k];
      }
    }
  }
  out.terms_.reserve(acc.size());
  for (auto& [m, v] : acc) out.terms_.push_back({m, std::move(v)});
  out.prune();
  return out;
}

ScalarField ScalarField::scaled(double s) const {
  ScalarField out(grid_, gens_, twist_);
  out.band_ = band_;
  if (s == 0.0) return out;
  out.terms_ = terms_;
  for (auto& t : out.terms_)
    for (double& x : t.values) x *= s;
  return out;
}

ScalarField ScalarField::times_real(std::span<const double> f, const Band& band) const {
  ScalarField out = *this;
  out.band_ = band_product(band_, band);
  for (auto& t : out.terms_)
    for (std::size_t k = 0; k < f.size(); ++k) t.values[k] *= f[k];
  out.prune();
  return out;
}

ScalarField ScalarField::inverse() const {
  if (parity() == Parity::odd || parity() == Parity::mixed)
    fail(ErrorCode::parity_mismatch, "inverse of a non-even field");
  const std::vector<double> body = body_values();
  std::vector<double> inv_body(body.size());
  for (std::size_t k = 0; k < body.size(); ++k) {
    if (body[k] == 0.0) fail(ErrorCode::no_body, "field body vanishes at a grid point");
    inv_body[k] = 1.0 / body[k];
  }
  const bool constant_body =
      band_.known && band_.k[0] == 0.0 && band_.k[1] == 0.0;
  const Band inv_band = constant_body ? Band{} : Band::unknown();

  ScalarField soul(grid_, gens_, twist_);
  for (const auto& t : terms_)
    if (t.mask != 0) soul.terms_.push_back(t);
  soul.band_ = band_;
  const ScalarField n = (-soul).times_real(inv_body, inv_band);

  ScalarField acc = ScalarField::monomial(grid_, gens_, 0, std::vector<double>(body.size(), 1.0), Band{});
  ScalarField power = acc;
  for (int k = 1; k <= gens_ && !power.is_zero(); ++k) {
    power = power * n;
    acc += power;
  }
  ScalarField out = acc.times_real(inv_body, inv_band);
  return out;
}

ScalarField partial(const ScalarField& f, int mu) {
  ScalarField out(f.grid(), f.generator_count(), f.twist());
  if (f.is_zero()) return out;
  const auto& grid = *f.grid();
  std::vector<double> d(grid.size());
  for (const auto& t : f.terms()) {
    grid.derivative(t.values, d, mu, f.twist()[mu], f.band());
    out += ScalarField::monomial(f.grid(), f.generator_count(), t.mask, d, f.band(), f.twist());
  }
  return out.with_band(f.band());
}

ScalarField inverse(const ScalarField& f) { return f.inverse(); }

GrassmannElement sum_cells(const ScalarField& f) {
  if (f.is_zero()) return GrassmannElement(f.generator_count());
  const auto& grid = *f.grid();
  if (grid.mode() == DerivMode::spectral && f.band().known) {
    for (int mu = 0; mu < 2; ++mu)
      if (f.band().k[mu] > grid.n(mu) - 1)
        fail(ErrorCode::aliasing_detected, "integrand band exceeds grid resolution");
  }
  std::vector<GrassmannElement::Term> terms;
  for (const auto& t : f.terms())
    terms.emplace_back(t.mask, pairwise_sum(t.values) * grid.cell_area());
  return GrassmannElement::from_terms(f.generator_count(), terms);
}

double l2_norm(const ScalarField& f) {
  if (f.is_zero()) return 0.0;
  std::vector<double> sq(f.grid()->size(), 0.0);
  double total = 0.0;
  for (const auto& t : f.terms()) {
    for (std::size_t k = 0; k < sq.size(); ++k) sq[k] = t.values[k] * t.values[k];
    total += pairwise_sum(sq);
  }
  return std::sqrt(total * f.grid()->cell_area());
}

}  // namespace shm
