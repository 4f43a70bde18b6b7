#include "shm/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <istream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "shm/symmetry.hpp"

namespace shm {

// ---------------------------------------------------------------------------
// Configuration

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long long parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) fail(ErrorCode::config_parse, key + ": not an integer: '" + value + "'");
  return v;
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) fail(ErrorCode::config_parse, key + ": not a number: '" + value + "'");
  return v;
}

int parse_size(const std::string& key, const std::string& value) {
  const long long v = parse_int(key, value);
  if (v < 4 || v > 1024 || v % 2 != 0)
    fail(ErrorCode::config_parse, key + ": grid size must be even and in [4, 1024]");
  return static_cast<int>(v);
}

}  // namespace

DerivMode parse_mode(const std::string& name) {
  if (name == "spectral") return DerivMode::spectral;
  if (name == "fd2") return DerivMode::central2;
  if (name == "fd4") return DerivMode::central4;
  fail(ErrorCode::config_parse, "mode must be spectral, fd2 or fd4: '" + name + "'");
}

std::string mode_name(DerivMode mode) {
  switch (mode) {
    case DerivMode::spectral: return "spectral";
    case DerivMode::central2: return "fd2";
    case DerivMode::central4: return "fd4";
  }
  return "?";
}

std::pair<int, int> parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) fail(ErrorCode::config_parse, "grid must read NxM: '" + text + "'");
  return {parse_size("grid", text.substr(0, x)), parse_size("grid", text.substr(x + 1))};
}

void apply_config_entry(SuiteConfig& c, const std::string& key, const std::string& value) {
  if (key == "suite") {
    c.suite = value;
  } else if (key == "grid") {
    std::tie(c.n1, c.n2) = parse_grid(value);
  } else if (key == "n1") {
    c.n1 = parse_size(key, value);
  } else if (key == "n2") {
    c.n2 = parse_size(key, value);
  } else if (key == "mode") {
    c.mode = parse_mode(value);
  } else if (key == "gens") {
    const long long g = parse_int(key, value);
    if (g < 8 || g > kMaxGenerators)
      fail(ErrorCode::config_parse, "gens must lie in [8, " + std::to_string(kMaxGenerators) + "]");
    c.generators = static_cast<int>(g);
  } else if (key == "seed") {
    const long long s = parse_int(key, value);
    if (s < 0) fail(ErrorCode::config_parse, "seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "out") {
    c.out = value;
  } else if (key == "timing") {
    if (value != "0" && value != "1") fail(ErrorCode::config_parse, "timing must be 0 or 1");
    c.timing = value == "1";
  } else if (key.rfind("tol.", 0) == 0 && key.size() > 4) {
    c.tolerance[key.substr(4)] = parse_double(key, value);
  } else {
    fail(ErrorCode::config_parse, "unknown key '" + key + "'");
  }
}

void parse_config(std::istream& in, SuiteConfig& config) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line.substr(0, line.find('#')));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::config_parse, "line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty() || value.empty())
      fail(ErrorCode::config_parse, "line " + std::to_string(number) + ": empty key or value");
    apply_config_entry(config, key, value);
  }
}

// ---------------------------------------------------------------------------
// Records

std::string_view to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::bound: return "bound";
    case CheckKind::witness: return "witness";
    case CheckKind::band: return "band";
  }
  return "?";
}

std::string to_json_line(const CheckRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["anchor"] = r.anchor;
  j["kind"] = std::string(to_string(r.kind));
  j["mode"] = r.mode;
  j["grid"] = r.grid;
  if (std::isfinite(r.measured)) {
    j["measured"] = r.measured;
  } else {
    j["measured"] = nullptr;
  }
  j["tolerance"] = r.tolerance;
  if (r.kind == CheckKind::band) j["upper"] = r.upper;
  j["pass"] = r.pass;
  j["wall_seconds"] = r.wall_seconds;
  if (!r.error.empty()) j["error"] = r.error;
  return j.dump();
}

bool all_pass(const std::vector<CheckRecord>& records) {
  return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; });
}

std::string summary_table(const std::vector<CheckRecord>& records) {
  std::size_t width = 5;
  for (const auto& r : records) width = std::max(width, r.id.size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %-7s  %-11s  %-22s  %s\n", static_cast<int>(width), "check", "kind",
                "measured", "required", "result");
  out += buf;
  int passed = 0;
  for (const auto& r : records) {
    char req[64];
    switch (r.kind) {
      case CheckKind::bound: std::snprintf(req, sizeof req, "<= %.1e", r.tolerance); break;
      case CheckKind::witness: std::snprintf(req, sizeof req, ">= %.1e", r.tolerance); break;
      case CheckKind::band: std::snprintf(req, sizeof req, "in [%.3g, %.3g]", r.tolerance, r.upper); break;
    }
    std::snprintf(buf, sizeof buf, "%-*s  %-7s  %-11.3e  %-22s  %s\n", static_cast<int>(width), r.id.c_str(),
                  std::string(to_string(r.kind)).c_str(), r.measured, req, r.pass ? "PASS" : "FAIL");
    out += buf;
    if (!r.error.empty()) out += "    " + r.error + "\n";
    passed += r.pass ? 1 : 0;
  }
  std::snprintf(buf, sizeof buf, "%d/%zu checks passed\n", passed, records.size());
  out += buf;
  return out;
}

// ---------------------------------------------------------------------------
// Suite machinery

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Portable stream: mt19937_64 is fully specified, the mapping to doubles is
// done here rather than by a library distribution.
class Random {
 public:
  explicit Random(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return lo + (hi - lo) * static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  int integer(int lo, int hi) { return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  std::uint64_t bits() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

class Runner {
 public:
  Runner(const SuiteConfig& cfg, std::uint64_t stream)
      : rng(cfg.seed * 0x9E3779B97F4A7C15ULL + stream), cfg_(cfg) {
    grid_text_ = std::to_string(cfg.n1) + "x" + std::to_string(cfg.n2);
  }

  const SuiteConfig& cfg() const { return cfg_; }
  bool spectral() const { return cfg_.mode == DerivMode::spectral; }
  int gens() const { return cfg_.generators; }

  GridPtr grid(int refine = 1) const { return grid_in(cfg_.mode, refine); }
  GridPtr grid_in(DerivMode mode, int refine = 1) const {
    TorusGrid::Options o;
    o.n1 = cfg_.n1 * refine;
    o.n2 = cfg_.n2 * refine;
    o.mode = mode;
    return TorusGrid::create(o);
  }

  // FD mode used for convergence records: the configured one, or fd2.
  DerivMode fd_mode() const { return spectral() ? DerivMode::central2 : cfg_.mode; }
  int fd_order() const { return fd_mode() == DerivMode::central4 ? 4 : 2; }

  template <class F>
  void bound(const std::string& id, const std::string& anchor, double tol, F&& f) {
    run(id, anchor, CheckKind::bound, tol, 0.0, std::forward<F>(f));
  }
  template <class F>
  void witness(const std::string& id, const std::string& anchor, double threshold, F&& f) {
    run(id, anchor, CheckKind::witness, threshold, 0.0, std::forward<F>(f));
  }
  // Ratio of errors under grid halving for an FD scheme of order p.
  template <class F>
  void convergence(const std::string& id, const std::string& anchor, F&& error_at) {
    const double expected = std::pow(2.0, fd_order());
    run(id, anchor, CheckKind::band, 0.875 * expected, 1.125 * expected, [&] {
      const double coarse = error_at(grid_in(fd_mode(), 1));
      const double fine = error_at(grid_in(fd_mode(), 2));
      return coarse / fine;
    });
  }

  // Exact in spectral mode; in FD modes the statement only holds up to the
  // truncation error, whose ratio under grid halving is reported instead.
  template <class F>
  void bound_or_convergence(const std::string& id, const std::string& anchor, double tol, F&& error_at) {
    if (spectral()) {
      bound(id, anchor, tol, [&] { return error_at(grid()); });
    } else {
      convergence(id + "_convergence", anchor, error_at);
    }
  }

  std::vector<CheckRecord> take() { return std::move(records_); }

  Random rng;

 private:
  template <class F>
  void run(const std::string& id, const std::string& anchor, CheckKind kind, double tol, double upper, F&& f) {
    CheckRecord r;
    r.id = id;
    r.anchor = anchor;
    r.kind = kind;
    r.mode = mode_name(cfg_.mode);
    r.grid = grid_text_;
    r.tolerance = tol;
    r.upper = upper;
    if (const auto it = cfg_.tolerance.find(id); it != cfg_.tolerance.end()) r.tolerance = it->second;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r.measured = f();
    } catch (const Error& e) {
      r.measured = std::numeric_limits<double>::quiet_NaN();
      r.error = e.what();
    }
    if (cfg_.timing)
      r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    switch (kind) {
      case CheckKind::bound: r.pass = r.measured <= r.tolerance; break;
      case CheckKind::witness: r.pass = r.measured >= r.tolerance; break;
      case CheckKind::band: r.pass = r.measured >= r.tolerance && r.measured <= r.upper; break;
    }
    records_.push_back(std::move(r));
  }

  const SuiteConfig& cfg_;
  std::string grid_text_;
  std::vector<CheckRecord> records_;
};

double max_coef(const GrassmannElement& g) { return g.max_abs(); }

// Random mode records: `per` modes for every component and generator.
void add_random_modes(Random& r, ModeTable& t, FieldKind kind, int components, const std::vector<int>& generators,
                      int per, int kmax, double amplitude) {
  for (int c = 0; c < components; ++c)
    for (const int g : generators)
      for (int i = 0; i < per; ++i) {
        Mode m;
        m.kind = kind;
        m.k1 = r.integer(-kmax, kmax);
        m.k2 = r.integer(-kmax, kmax);
        m.amplitude = r.uniform(-amplitude, amplitude);
        m.generator = g;
        m.component = c;
        m.phase = r.uniform(0.0, kTwoPi);
        t.add(m);
      }
}

const std::vector<int> kPsiGens{0, 1, 2};
const std::vector<int> kChiGens{3, 4, 5};
const std::vector<int> kSpinorGens{6, 7};
const std::vector<int> kClassical{-1};

OneForm<ScalarField> zero_form(const GridPtr& grid, int gens) {
  return {ScalarField(grid, gens), ScalarField(grid, gens)};
}

OneForm<ScalarField> constant_form(const GridPtr& grid, int gens, double a1, double a2) {
  return {ScalarField::constant(grid, gens, a1), ScalarField::constant(grid, gens, a2)};
}

OneForm<ScalarField> operator+(const OneForm<ScalarField>& a, const OneForm<ScalarField>& b) {
  return {a[0] + b[0], a[1] + b[1]};
}

// Single-mode conformal factor u = amp cos(2 pi x^1 / L1 + phase).
std::vector<double> single_mode_u(const TorusGrid& grid, double amp, double phase) {
  const double L1 = grid.period(0);
  return sample(grid, [&](double x, double) { return amp * std::cos(kTwoPi * x / L1 + phase); });
}

// ---------------------------------------------------------------------------
// algebra

GrassmannElement random_element(Random& r, int gens, int terms, int parity, double body) {
  std::vector<GrassmannElement::Term> t;
  if (body != 0.0) t.emplace_back(Monomial{0}, body);
  const Monomial all = (Monomial{1} << gens) - 1;
  for (int i = 0; i < terms; ++i) {
    Monomial m = static_cast<Monomial>(r.bits()) & all;
    if (parity >= 0 && degree(m) % 2 != parity) m ^= 1u;
    t.emplace_back(m, r.uniform(-1.0, 1.0));
  }
  return GrassmannElement::from_terms(gens, t);
}

// Product of coefficient magnitudes without signs: bounds every coefficient
// of a * b term by term, the natural scale for relative errors.
GrassmannElement abs_product(const GrassmannElement& a, const GrassmannElement& b) {
  std::vector<GrassmannElement::Term> t;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms())
      if ((ma & mb) == 0) t.emplace_back(ma | mb, std::abs(ca) * std::abs(cb));
  return GrassmannElement::from_terms(a.generator_count(), t);
}

GrassmannElement abs_sum(const GrassmannElement& a, const GrassmannElement& b) {
  std::vector<GrassmannElement::Term> t;
  for (const auto& [m, c] : a.terms()) t.emplace_back(m, std::abs(c));
  for (const auto& [m, c] : b.terms()) t.emplace_back(m, std::abs(c));
  return GrassmannElement::from_terms(a.generator_count(), t);
}

// max_m |diff_m| / scale_m.
double relative_error(const GrassmannElement& diff, const GrassmannElement& scale) {
  double worst = 0.0;
  for (const auto& [m, c] : diff.terms()) {
    const double s = scale.coefficient(m);
    worst = std::max(worst, s > 0.0 ? std::abs(c) / s : std::numeric_limits<double>::infinity());
  }
  return worst;
}

RationalGrassmann random_rational(Random& r, int gens, int terms) {
  std::vector<RationalGrassmann::Term> t;
  const Monomial all = (Monomial{1} << gens) - 1;
  for (int i = 0; i < terms; ++i)
    t.emplace_back(static_cast<Monomial>(r.bits()) & all, Rational(r.integer(-9, 9), r.integer(1, 8)));
  return RationalGrassmann::from_terms(gens, t);
}

void suite_algebra(Runner& run) {
  const int n = run.gens();
  constexpr int cases = 200;
  constexpr int terms = 12;
  auto& r = run.rng;

  run.bound("algebra.associativity", "Grassmann product is associative", 1e-14, [&] {
    double worst = 0.0;
    for (int i = 0; i < cases; ++i) {
      const auto a = random_element(r, n, terms, -1, r.uniform(-1, 1));
      const auto b = random_element(r, n, terms, -1, r.uniform(-1, 1));
      const auto c = random_element(r, n, terms, -1, r.uniform(-1, 1));
      worst = std::max(worst, relative_error((a * b) * c - a * (b * c), abs_product(abs_product(a, b), c)));
    }
    return worst;
  });

  run.bound("algebra.graded_commutativity", "ab = (-1)^{|a||b|} ba", 1e-14, [&] {
    double worst = 0.0;
    for (int i = 0; i < cases; ++i) {
      const int pa = r.integer(0, 1);
      const int pb = r.integer(0, 1);
      const auto a = random_element(r, n, terms, pa, pa ? 0.0 : r.uniform(-1, 1));
      const auto b = random_element(r, n, terms, pb, pb ? 0.0 : r.uniform(-1, 1));
      const double sign = (pa && pb) ? -1.0 : 1.0;
      worst = std::max(worst, relative_error(a * b - (b * a).scaled(sign), abs_product(a, b)));
    }
    return worst;
  });

  run.bound("algebra.inversion", "elements with non-zero body are invertible", 1e-14, [&] {
    double worst = 0.0;
    for (int i = 0; i < cases; ++i) {
      const double body = (r.integer(0, 1) ? 1.0 : -1.0) * r.uniform(0.5, 2.0);
      const auto a = random_element(r, n, terms, -1, body);
      const auto inv = a.inverse();
      const auto one = GrassmannElement::scalar(n, 1.0);
      const auto scale = abs_product(a, inv);
      worst = std::max({worst, relative_error(a * inv - one, scale), relative_error(inv * a - one, scale)});
    }
    return worst;
  });

  run.bound("algebra.nilpotency", "the soul is nilpotent", 0.0, [&] {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const auto soul = random_element(r, n, terms, -1, r.uniform(-1, 1)).soul();
      auto power = soul;
      for (int k = 1; k <= n; ++k) power = power * soul;
      worst = std::max(worst, power.max_abs());
    }
    return worst;
  });

  run.bound("algebra.dual_leibniz", "dual numbers obey the Leibniz rule", 1e-14, [&] {
    double worst = 0.0;
    for (int i = 0; i < cases; ++i) {
      const auto a = random_element(r, n, terms, -1, r.uniform(0.5, 1.5));
      const auto da = random_element(r, n, terms, -1, r.uniform(-1, 1));
      const auto b = random_element(r, n, terms, -1, r.uniform(-1, 1));
      const auto db = random_element(r, n, terms, -1, r.uniform(-1, 1));
      const auto c = random_element(r, n, terms, -1, r.uniform(-1, 1));
      const auto dc = random_element(r, n, terms, -1, r.uniform(-1, 1));
      const DualScalar x{a, da}, y{b, db}, z{c, dc};
      const auto product = (x * y * z).eps;
      const auto expected = da * b * c + a * db * c + a * b * dc;
      const auto scale = abs_sum(abs_sum(abs_product(abs_product(da, b), c), abs_product(abs_product(a, db), c)),
                                 abs_product(abs_product(a, b), dc));
      worst = std::max(worst, relative_error(product - expected, scale));
      const auto inv = inverse(x);
      const auto inv_expected = -(inv.value * da * inv.value);
      worst = std::max(worst, relative_error(inv.eps - inv_expected,
                                             abs_product(abs_product(inv.value, da), inv.value)));
    }
    return worst;
  });

  run.bound("algebra.rational_exact", "exact rational arithmetic", 0.0, [&] {
    int mismatches = 0;
    for (int i = 0; i < cases; ++i) {
      const auto a = random_rational(r, n, 6);
      const auto b = random_rational(r, n, 6);
      const auto c = random_rational(r, n, 6);
      if (!((a * b) * c == a * (b * c))) ++mismatches;
      const auto ao = a.odd_part();
      const auto bo = b.odd_part();
      if (!(ao * bo == -(bo * ao))) ++mismatches;
    }
    return static_cast<double>(mismatches);
  });
}

// ---------------------------------------------------------------------------
// clifford

template <class R>
double to_real(const R& x) {
  if constexpr (std::is_same_v<R, double> || std::is_same_v<R, Complex>) {
    return std::abs(x);
  } else if constexpr (std::is_same_v<R, Rational>) {
    return std::abs(boost::rational_cast<double>(x));
  } else {
    return x.max_abs();
  }
}

template <class R>
double spinor_abs(const Spinor<R>& s) {
  return std::max(to_real(s[0]), to_real(s[1]));
}

template <class R>
double form_abs(const SpinorForm<R>& z) {
  return std::max(spinor_abs(z.column(0)), spinor_abs(z.column(1)));
}

// Ring-uniform random values: real doubles, exact rationals and odd
// rational Grassmann elements.
struct RingSampler {
  Random& r;
  int gens;

  double make(double*) { return r.uniform(-1, 1); }
  Rational make(Rational*) { return Rational(r.integer(-9, 9), r.integer(1, 8)); }
  RationalGrassmann make(RationalGrassmann*) {
    std::vector<RationalGrassmann::Term> t;
    for (int i = 0; i < 3; ++i)
      t.emplace_back(Monomial{1} << r.integer(0, gens - 1), Rational(r.integer(-9, 9), r.integer(1, 8)));
    return RationalGrassmann::from_terms(gens, t);
  }
  template <class R>
  R value() {
    return make(static_cast<R*>(nullptr));
  }
  template <class R>
  Spinor<R> spinor() {
    return {{value<R>(), value<R>()}};
  }
  template <class R>
  SpinorForm<R> form() {
    return SpinorForm<R>::from_columns(spinor<R>(), spinor<R>());
  }
};

template <class R>
double clifford_relation(RingSampler& rs, int cases) {
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const Spinor<R> s = rs.spinor<R>();
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) {
        Spinor<R> v = gamma(k, gamma(l, s)) + gamma(l, gamma(k, s));
        if (k == l) v = v - (s + s);
        worst = std::max(worst, spinor_abs(v));
      }
  }
  return worst;
}

// g(s, gamma(a) t) = g(gamma(a) s, t) and omega(s, gamma(a) t) = -omega(gamma(a) s, t).
template <class R>
double clifford_symrep(RingSampler& rs, int cases) {
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const Spinor<R> s = rs.spinor<R>();
    const Spinor<R> t = rs.spinor<R>();
    const std::array<R, 2> alpha{rs.value<R>(), rs.value<R>()};
    // Scalar coefficients of alpha must commute with spinor entries.
    std::array<R, 2> a = alpha;
    if constexpr (std::is_same_v<R, RationalGrassmann>) {
      a = {RationalGrassmann::scalar(rs.gens, Rational(rs.r.integer(-9, 9), rs.r.integer(1, 8))),
           RationalGrassmann::scalar(rs.gens, Rational(rs.r.integer(-9, 9), rs.r.integer(1, 8)))};
    }
    worst = std::max(worst, to_real(metric_pair(s, clifford_act(a, t)) - metric_pair(clifford_act(a, s), t)));
    worst = std::max(worst, to_real(symplectic_pair(s, clifford_act(a, t)) + symplectic_pair(clifford_act(a, s), t)));
  }
  return worst;
}

template <class R>
double clifford_projectors(RingSampler& rs, int cases) {
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const SpinorForm<R> z = rs.form<R>();
    const SpinorForm<R> w = rs.form<R>();
    const SpinorForm<R> pz = project_p(z);
    const SpinorForm<R> qz = project_q(z);
    worst = std::max({worst, form_abs(project_p(pz) - pz), form_abs(project_q(qz) - qz), form_abs(project_p(qz)),
                      form_abs(project_q(pz)), form_abs(pz + qz - z)});
    worst = std::max(worst, to_real(form_pair(PairKind::metric, pz, w) - form_pair(PairKind::metric, z, project_p(w))));
    worst = std::max(worst, to_real(form_pair(PairKind::metric, qz, w) - form_pair(PairKind::metric, z, project_q(w))));
    const auto [s, g] = decompose_form(z);
    worst = std::max({worst, spinor_abs(quantize(g)), form_abs(theta_insert(s) + g - z)});
  }
  return worst;
}

SpinorForm<Complex> tensor(const Spinor<Complex>& s, const std::array<Complex, 2>& form) {
  return SpinorForm<Complex>::from_columns({{s[0] * form[0], s[1] * form[0]}}, {{s[0] * form[1], s[1] * form[1]}});
}

Spinor<Complex> conj(const Spinor<Complex>& s) { return {{std::conj(s[0]), std::conj(s[1])}}; }

void suite_clifford(Runner& run) {
  constexpr int cases = 100;
  RingSampler rs{run.rng, run.gens()};
  run.bound("clifford.relation_rational", "Clifford relation", 0.0, [&] {
    return std::max(clifford_relation<Rational>(rs, cases), clifford_relation<RationalGrassmann>(rs, cases));
  });
  run.bound("clifford.relation_float", "Clifford relation", 1e-14, [&] { return clifford_relation<double>(rs, cases); });
  run.bound("clifford.symrep_rational", "g-symmetric is omega-skew", 0.0, [&] {
    return std::max(clifford_symrep<Rational>(rs, cases), clifford_symrep<RationalGrassmann>(rs, cases));
  });
  run.bound("clifford.symrep_float", "g-symmetric is omega-skew", 1e-14, [&] { return clifford_symrep<double>(rs, cases); });
  run.bound("clifford.projectors_rational", "spin-1/2 and spin-3/2 projectors", 0.0, [&] {
    return std::max(clifford_projectors<Rational>(rs, cases), clifford_projectors<RationalGrassmann>(rs, cases));
  });
  run.bound("clifford.projectors_float", "spin-1/2 and spin-3/2 projectors", 1e-14,
            [&] { return clifford_projectors<double>(rs, cases); });

  run.bound("clifford.projector_images", "p-image w(x)theta, q-image w(x)theta-bar", 1e-14, [&] {
    const double h = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    const Spinor<Complex> w = weyl_frame();
    const std::array<Complex, 2> theta{h, i * h};
    const std::array<Complex, 2> theta_bar{h, -i * h};
    // (spinor, form on the p side, form on the q side) for w and its conjugate.
    const std::array<std::tuple<Spinor<Complex>, std::array<Complex, 2>, std::array<Complex, 2>>, 2> cases{
        {{w, theta, theta_bar}, {conj(w), theta_bar, theta}}};
    double worst = 0.0;
    for (const auto& [s, on_p, on_q] : cases) {
      const SpinorForm<Complex> zp = tensor(s, on_p);
      const SpinorForm<Complex> zq = tensor(s, on_q);
      worst = std::max({worst, form_abs(project_p(zp) - zp), form_abs(project_q(zp)), form_abs(project_q(zq) - zq),
                        form_abs(project_p(zq)), spinor_abs(quantize(zq))});
    }
    return worst;
  });

  run.bound("clifford.frame_cover", "w (x) w covers the frame e", 1e-14, [&] {
    const Spinor<Complex> w = weyl_frame();
    const auto v = square_to_vector(w, w);
    const double h = 1.0 / std::sqrt(2.0);
    return std::max(std::abs(v[0] - Complex(h, 0.0)), std::abs(v[1] - Complex(0.0, -h)));
  });

  run.bound("clifford.weyl_split", "Weyl decomposition and complex structure", 1e-14, [&] {
    double worst = 0.0;
    const Complex i(0.0, 1.0);
    for (int c = 0; c < cases; ++c) {
      const Spinor<Complex> s{{Complex(rs.r.uniform(-1, 1), rs.r.uniform(-1, 1)),
                               Complex(rs.r.uniform(-1, 1), rs.r.uniform(-1, 1))}};
      const WeylPair p = weyl_split(s);
      const WeylPair pj = weyl_split(aci(s));
      worst = std::max({worst, spinor_abs(weyl_join(p) - s), std::abs(pj.w - i * p.w), std::abs(pj.wbar + i * p.wbar)});
      const Spinor<Complex> real{{Complex(s[0].real(), 0.0), Complex(s[1].real(), 0.0)}};
      const WeylPair pr = weyl_split(real);
      worst = std::max(worst, std::abs(pr.wbar - std::conj(pr.w)));
    }
    return worst;
  });
}

// ---------------------------------------------------------------------------
// geometry

void suite_geometry(Runner& run) {
  const GridPtr grid = run.grid();
  const int n = run.gens();
  // u = 0.1 cos(2 pi x^1 + 0.3) + 0.05 cos(2 pi (x^1 + x^2) + 1.1) on the unit torus.
  const auto u_at = [](double x, double y) {
    return 0.1 * std::cos(kTwoPi * x + 0.3) + 0.05 * std::cos(kTwoPi * (x + y) + 1.1);
  };
  const std::vector<double> u = sample(*grid, u_at);
  const auto flat = make_geometry(FrameField<ScalarField>::flat(grid, n));
  const auto curved = make_geometry(FrameField<ScalarField>::conformal(grid, n, u));

  run.bound("geometry.cartan_flat", "torsion-free Cartan structure equations", 1e-10,
            [&] { return cartan_residual(flat); });
  run.bound("geometry.cartan_conformal", "torsion-free Cartan structure equations", 1e-10,
            [&] { return cartan_residual(curved); });
  if (run.spectral()) {
    run.bound("geometry.connection_conformal", "Levi-Civita form of a conformal frame", 1e-10, [&] {
      // Gamma = (d_2 u, -d_1 u).
      const auto d1 = sample(*grid, [](double x, double y) {
        return -kTwoPi * (0.1 * std::sin(kTwoPi * x + 0.3) + 0.05 * std::sin(kTwoPi * (x + y) + 1.1));
      });
      const auto d2 = sample(*grid, [](double x, double y) { return -kTwoPi * 0.05 * std::sin(kTwoPi * (x + y) + 1.1); });
      const auto g1 = curved.connection[0].body_values();
      const auto g2 = curved.connection[1].body_values();
      double worst = 0.0;
      for (std::size_t p = 0; p < grid->size(); ++p)
        worst = std::max({worst, std::abs(g1[p] - d2[p]), std::abs(g2[p] + d1[p])});
      return worst;
    });
  }

  FieldContext ctx{grid, n, 2};
  ModeTable t;
  add_random_modes(run.rng, t, FieldKind::torsion, 2, kClassical, 2, 2, 1.0);
  add_random_modes(run.rng, t, FieldKind::map, 1, kClassical, 2, 2, 1.0);
  const OneForm<ScalarField> J = make_torsion(t, ctx);
  const ScalarField f = make_trig_field(t, ctx, FieldKind::map, 0);

  run.bound("geometry.divergence_theorem", "integral of a divergence vanishes", 1e-12,
            [&] { return max_coef(integrate(divergence(J, curved), curved)); });
  run.bound("geometry.integration_by_parts", "integration by parts on the torus", 1e-12, [&] {
    const ScalarField lhs = f * divergence(J, curved) + partial(f, 0) * J[0] + partial(f, 1) * J[1];
    return max_coef(integrate(lhs, curved));
  });
  run.bound_or_convergence("geometry.harmonic_energy_value", "energy of sin(2 pi x^1) is (2 pi)^2/2", 1e-12,
                           [&](const GridPtr& g) {
                             ModeTable m;
                             m.add({FieldKind::map, 1, 0, 1.0, -1, 0, -std::numbers::pi / 2});
                             FieldContext one{g, n, 1};
                             const auto e =
                                 harmonic_energy(make_map(m, one), make_geometry(FrameField<ScalarField>::flat(g, n)));
                             return std::abs(e.body() - kTwoPi * kTwoPi / 2.0) + e.soul().max_abs();
                           });
}

// ---------------------------------------------------------------------------
// dirac

void suite_dirac(Runner& run) {
  const GridPtr grid = run.grid();
  const int n = run.gens();
  FieldContext ctx{grid, n, 2};
  const auto geo = make_geometry(FrameField<ScalarField>::conformal(grid, n, single_mode_u(*grid, 0.1, 0.3)));
  auto& r = run.rng;
  auto random_A = [&] {
    ModeTable t;
    add_random_modes(r, t, FieldKind::torsion, 2, kClassical, 1, 2, 1.0);
    return make_torsion(t, ctx);
  };
  auto random_psi = [&](const std::vector<int>& gens) {
    ModeTable t;
    add_random_modes(r, t, FieldKind::psi, 4, gens, 1, 2, 1.0);
    return make_psi(t, ctx);
  };

  // Levi-Civita connection: with torsion the symmetric term A(e_k) psi^T J gamma^k J psi
  // survives for commuting spinors.
  const std::uint64_t majorana_seed = r.bits();
  run.bound_or_convergence("dirac.majorana_vanishing", "Dirac action vanishes on commuting Majorana spinors", 1e-12,
                           [&](const GridPtr& g) {
                             Random local(majorana_seed);
                             FieldContext c{g, n, 2};
                             const auto curved =
                                 make_geometry(FrameField<ScalarField>::conformal(g, n, single_mode_u(*g, 0.1, 0.3)));
                             double worst = 0.0;
                             for (int i = 0; i < 100; ++i) {
                               ModeTable t;
                               add_random_modes(local, t, FieldKind::psi, 4, kClassical, 1, 2, 1.0);
                               worst = std::max(worst, max_coef(dirac_action(make_psi(t, c), curved, zero_form(g, n))));
                             }
                             return worst;
                           });

  run.bound("dirac.connection_independence", "Dirac action does not depend on the metric connection", 1e-10, [&] {
    const auto psi = random_psi(kPsiGens);
    const auto ref = dirac_action(psi, geo, zero_form(grid, n));
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) worst = std::max(worst, max_coef(dirac_action(psi, geo, random_A()) - ref));
    return worst;
  });

  run.bound("dirac.super_action_connection_independence", "super action does not depend on the metric connection",
            1e-10, [&] {
              ModeTable t;
              add_random_modes(r, t, FieldKind::map, 2, kClassical, 2, 2, 0.5);
              add_random_modes(r, t, FieldKind::psi, 4, kPsiGens, 1, 2, 0.5);
              add_random_modes(r, t, FieldKind::chi, 4, kChiGens, 1, 2, 0.5);
              const auto phi = make_map(t, ctx);
              const auto psi = make_psi(t, ctx);
              const auto chi = make_chi(t, ctx);
              const auto ref = super_action(phi, psi, chi, geo, zero_form(grid, n)).total();
              double worst = 0.0;
              for (int i = 0; i < 20; ++i)
                worst = std::max(worst, max_coef(super_action(phi, psi, chi, geo, random_A()).total() - ref));
              return worst;
            });

  // Clifford connection (A = 0): the torsion lift A gamma12 / 2 contributes an
  // antisymmetric part for distinct fields.
  const std::uint64_t symmetry_seed = r.bits();
  run.bound_or_convergence("dirac.symmetry", "Dirac operator is symmetric for the graded pairing", 1e-10,
                           [&](const GridPtr& g) {
                             Random local(symmetry_seed);
                             FieldContext c{g, n, 2};
                             const auto curved =
                                 make_geometry(FrameField<ScalarField>::conformal(g, n, single_mode_u(*g, 0.1, 0.3)));
                             const auto A = zero_form(g, n);
                             double worst = 0.0;
                             for (int i = 0; i < 20; ++i) {
                               ModeTable ta, tb;
                               add_random_modes(local, ta, FieldKind::psi, 4, kPsiGens, 1, 2, 1.0);
                               add_random_modes(local, tb, FieldKind::psi, 4, kPsiGens, 1, 2, 1.0);
                               const auto a = make_psi(ta, c);
                               const auto b = make_psi(tb, c);
                               const auto lhs = integrated_pairing(dirac_apply(a, curved, A), b, curved);
                               const auto rhs = integrated_pairing(a, dirac_apply(b, curved, A), curved);
                               worst = std::max(worst, max_coef(lhs - rhs));
                             }
                             return worst;
                           });

  ModeTable tr;
  tr.add({FieldKind::psi, 1, 0, 0.7, -1, 0, 0.1}).add({FieldKind::psi, 0, 1, -0.6, -1, 1, 0.4});
  tr.add({FieldKind::psi, 1, -1, 0.5, -1, 2, 0.9}).add({FieldKind::psi, 0, 1, 0.4, -1, 3, 1.3});
  const auto real_psi = make_psi(tr, ctx);
  run.witness("dirac.symplectic_target_nontrivial", "symplectic target gives a non-trivial Dirac action", 1e-3,
              [&] { return max_coef(symplectic_target_dirac_action(real_psi, geo, zero_form(grid, n))); });
  run.bound("dirac.symplectic_target_connection_independence", "symplectic target action does not depend on A", 1e-10,
            [&] {
              const auto ref = symplectic_target_dirac_action(real_psi, geo, zero_form(grid, n));
              return max_coef(symplectic_target_dirac_action(real_psi, geo, random_A()) - ref);
            });
}

// ---------------------------------------------------------------------------
// torsion

double branch_cut_distance(double a1, double a2) {
  // The root is taken of a = a1 - i a2; the cut is the negative real axis.
  return a1 >= 0.0 ? std::hypot(a1, a2) : std::abs(a2);
}

void suite_torsion(Runner& run) {
  const GridPtr grid = run.grid();
  const int n = run.gens();
  FieldContext ctx{grid, n, 2};
  auto& r = run.rng;
  const auto geo = make_geometry(FrameField<ScalarField>::conformal(grid, n, single_mode_u(*grid, 0.1, 0.7)));

  run.bound("torsion.factorization_recovery", "torsion factorizes through a spin-1/2 and a spin-3/2 section", 1e-10,
            [&] {
              double worst = 0.0;
              for (int i = 0; i < 100;) {
                ModeTable t;
                add_random_modes(r, t, FieldKind::torsion, 2, kClassical, 1, 2, 0.1);
                const double c1 = r.uniform(-1.5, 1.5);
                const double c2 = r.uniform(-1.5, 1.5);
                const OneForm<ScalarField> A = make_torsion(t, ctx) + constant_form(grid, n, c1, c2);
                const OneForm<ScalarField> a = frame_components(A, geo);
                const auto a1 = a[0].body_values();
                const auto a2 = a[1].body_values();
                double dist = std::numeric_limits<double>::infinity();
                for (std::size_t p = 0; p < grid->size(); ++p) dist = std::min(dist, branch_cut_distance(a1[p], a2[p]));
                if (dist < 0.2) continue;
                ++i;
                const FactorizedTorsion f = factorize_torsion(A, geo);
                if (f.branch_cut_crossed) return std::numeric_limits<double>::infinity();
                const SpinorForm<ScalarField> chi = to_frame(f.chi, geo);
                std::array<std::array<std::vector<double>, 2>, 2> z;
                for (int s = 0; s < 2; ++s)
                  for (int k = 0; k < 2; ++k) z[s][k] = chi.z[s][k].body_values();
                for (std::size_t p = 0; p < grid->size(); ++p) {
                  SpinorForm<double> c;
                  for (int s = 0; s < 2; ++s)
                    for (int k = 0; k < 2; ++k) c.z[s][k] = z[s][k][p];
                  const auto rec = recover_torsion_point(c);
                  worst = std::max({worst, std::abs(rec[0] - a1[p]), std::abs(rec[1] - a2[p])});
                }
              }
              return worst;
            });

  // Rotating the frame by alpha (e'_1 = cos e_1 + sin e_2) rotates the
  // spin-1/2 factor by -alpha/2; the spin-3/2 factor additionally turns its
  // form index, 3/2 in total.
  struct Rotated {
    double half = 0.0;
    double three_half = 0.0;
  };
  const auto rotation = [&] {
    Rotated worst;
    for (int i = 0; i < 100; ++i) {
      const double rad = r.uniform(0.3, 2.0);
      const double arg = r.uniform(-std::numbers::pi + 0.6, std::numbers::pi - 0.6);
      const double alpha = r.uniform(-0.5, 0.5);
      // a = a1 - i a2 = rad e^{i arg}.
      const double a1 = rad * std::cos(arg);
      const double a2 = -rad * std::sin(arg);
      const double c = std::cos(alpha), s = std::sin(alpha);
      const TorsionFactor f = factorize_torsion_point(a1, a2);
      const TorsionFactor g = factorize_torsion_point(c * a1 + s * a2, -s * a1 + c * a2);
      const double ch = std::cos(-alpha / 2), sh = std::sin(-alpha / 2);
      const double S[2][2] = {{ch, -sh}, {sh, ch}};
      const double R[2][2] = {{c, s}, {-s, c}};
      for (int a = 0; a < 2; ++a) {
        const double v = S[a][0] * f.spin_half[0] + S[a][1] * f.spin_half[1];
        worst.half = std::max(worst.half, std::abs(v - g.spin_half[a]));
        for (int k = 0; k < 2; ++k) {
          double w = 0.0;
          for (int b = 0; b < 2; ++b)
            for (int l = 0; l < 2; ++l) w += R[k][l] * S[a][b] * f.spin_three_half.z[b][l];
          worst.three_half = std::max(worst.three_half, std::abs(w - g.spin_three_half.z[a][k]));
        }
      }
    }
    return worst;
  }();
  run.bound("torsion.rotation_spin_half", "spin-1/2 factor rotates by half the frame angle", 1e-12,
            [&] { return rotation.half; });
  run.bound("torsion.rotation_spin_three_half", "spin-3/2 factor rotates by three halves of the frame angle", 1e-12,
            [&] { return rotation.three_half; });

  const auto flat = make_geometry(FrameField<ScalarField>::flat(grid, n));
  FieldContext two{grid, n, 2};
  const auto psi = [&] {
    ModeTable t;
    add_random_modes(r, t, FieldKind::psi, 4, kPsiGens, 1, 2, 0.5);
    return make_psi(t, two);
  }();
  const MapField<ScalarField> phi = make_map(ModeTable{}, two);
  run.bound("torsion.closed_curvature", "closed torsion has vanishing curvature", 1e-12, [&] {
    const auto A = constant_form(grid, n, 0.7, -0.2);
    return max_coef(dym_dhym_action(phi, psi, flat, A).f_squared);
  });
  run.bound_or_convergence("torsion.curvature_value", "int F^2 of sin(2 pi x^2) dx^1 is (2 pi)^2/2", 1e-12,
                           [&](const GridPtr& g) {
                             FieldContext c{g, n, 2};
                             ModeTable t;
                             t.add({FieldKind::torsion, 0, 1, 1.0, -1, 0, -std::numbers::pi / 2});
                             const auto b = dym_dhym_action(make_map(ModeTable{}, c), make_psi(ModeTable{}, c),
                                                            make_geometry(FrameField<ScalarField>::flat(g, n)),
                                                            make_torsion(t, c));
                             return std::abs(b.f_squared.body() - kTwoPi * kTwoPi / 2.0) +
                                    b.f_squared.soul().max_abs() + b.scal_term.max_abs();
                           });
}

// ---------------------------------------------------------------------------
// Shared odd configurations

struct OddFields {
  SuperFields<ScalarField> f;
  Geometry<ScalarField> geo;
};

// Band-limited map and odd psi, chi on a flat frame with A = 0. The same
// seed gives the same mode table on every grid.
OddFields odd_fields(std::uint64_t seed, const GridPtr& grid, int n, double amplitude) {
  Random r(seed);
  FieldContext ctx{grid, n, 2};
  ModeTable t;
  add_random_modes(r, t, FieldKind::map, 2, kClassical, 2, 1, 0.8);
  add_random_modes(r, t, FieldKind::psi, 4, kPsiGens, 1, 1, amplitude);
  add_random_modes(r, t, FieldKind::chi, 4, kChiGens, 1, 1, amplitude);
  OddFields o;
  o.f.phi = make_map(t, ctx);
  o.f.psi = make_psi(t, ctx);
  o.f.chi = make_chi(t, ctx);
  o.f.frame = FrameField<ScalarField>::flat(grid, n);
  o.geo = make_geometry(o.f.frame);
  o.f.A = zero_form(grid, n);
  return o;
}

Spinor<ScalarField> constant_spinor(const FieldContext& ctx) {
  ModeTable t;
  t.add({FieldKind::spinor, 0, 0, 0.7, 6, 0, 0.0}).add({FieldKind::spinor, 0, 0, -0.4, 7, 1, 0.0});
  return make_spinor(t, ctx);
}

Spinor<ScalarField> wavy_spinor(const FieldContext& ctx) {
  ModeTable t;
  t.add({FieldKind::spinor, 0, 0, 0.7, 6, 0, 0.0}).add({FieldKind::spinor, 0, 0, -0.4, 7, 1, 0.0});
  t.add({FieldKind::spinor, 1, 0, 0.5, 6, 1, 0.3}).add({FieldKind::spinor, 0, 1, 0.3, 7, 0, 0.1});
  return make_spinor(t, ctx);
}

// ---------------------------------------------------------------------------
// couplings

void suite_couplings(Runner& run) {
  const GridPtr grid = run.grid();
  const int n = run.gens();
  FieldContext ctx{grid, n, 2};
  const OddFields o = odd_fields(run.rng.bits(), grid, n, 0.5);
  const auto& geo = o.geo;
  const auto& f = o.f;
  ModeTable ts;
  add_random_modes(run.rng, ts, FieldKind::spinor, 2, kSpinorGens, 1, 1, 0.5);
  const Spinor<ScalarField> s = make_spinor(ts, ctx);
  const Gravitino<ScalarField> chi_p = to_coordinates(theta_insert(s), geo);

  run.bound("couplings.p_image", "couplings vanish on the spin-1/2 part of the gravitino", 1e-14, [&] {
    return std::max({max_coef(coupling_quartic(chi_p, f.psi, geo)), max_coef(coupling_mixed(chi_p, f.phi, f.psi, geo)),
                     max_coef(coupling_ruled_out(chi_p, f.psi, geo))});
  });
  run.bound("couplings.constant_map", "mixed coupling vanishes for a constant map", 1e-14, [&] {
    const MapField<ScalarField> constant = make_map(ModeTable{}, ctx);
    return max_coef(coupling_mixed(f.chi, constant, f.psi, geo));
  });
  run.bound("couplings.ruled_out_odd_reduction", "on odd fields the ruled-out term reduces to the quartic one",
            1e-12, [&] {
              return max_coef(coupling_ruled_out(f.chi, f.psi, geo) + coupling_quartic(f.chi, f.psi, geo));
            });
  run.bound("couplings.parity", "functional values are even", 1e-14, [&] {
    const auto b = super_action(f.phi, f.psi, f.chi, geo, f.A);
    double worst = 0.0;
    for (const auto* v : {&b.harmonic, &b.dirac, &b.quartic_coupling, &b.mixed_coupling})
      worst = std::max(worst, v->odd_part().max_abs());
    return std::max(worst, coupling_ruled_out(f.chi, f.psi, geo).odd_part().max_abs());
  });
  run.bound("couplings.pairing_symmetry", "graded pairing is symmetric on odd arguments", 1e-14, [&] {
    ModeTable t;
    add_random_modes(run.rng, t, FieldKind::psi, 4, kPsiGens, 1, 1, 0.5);
    const auto other = make_psi(t, ctx);
    const ScalarField d = pairing_E(f.psi, other) - pairing_E(other, f.psi);
    return d.max_abs();
  });
  run.witness("couplings.mixed_nontrivial", "mixed coupling is non-trivial on generic fields", 1e-3,
              [&] { return max_coef(coupling_mixed(f.chi, f.phi, f.psi, geo)); });
}

// ---------------------------------------------------------------------------
// weyl

SuperFields<ScalarField> weyl_fields(Runner& run, const GridPtr& grid, std::uint64_t seed) {
  OddFields o = odd_fields(seed, grid, run.gens(), 0.4);
  o.f.A = torsion_from_gravitino(o.f.chi, o.geo);
  return o.f;
}

double weyl_drift(const SuperFields<ScalarField>& f, const GridPtr& grid) {
  const auto u = single_mode_u(*grid, 0.2, 0.4);
  return max_coef(action_value(weyl_rescale(f, u), ActionKind::srs) - action_value(f, ActionKind::srs));
}

void suite_weyl(Runner& run) {
  const GridPtr grid = run.grid();
  const std::uint64_t seed = run.rng.bits();
  const SuperFields<ScalarField> f = weyl_fields(run, grid, seed);
  if (run.spectral()) {
    run.bound("weyl.drift", "super action is conformally invariant", 1e-9, [&] { return weyl_drift(f, grid); });
  }
  run.convergence("weyl.drift_convergence", "super action is conformally invariant", [&](const GridPtr& g) {
    return weyl_drift(weyl_fields(run, g, seed), g);
  });
  run.bound("weyl.weight_table", "conformal weights (0, -1/2, 1/2) are the unique invariant table", 0.0, [&] {
    const auto u = single_mode_u(*grid, 0.2, 0.4);
    const double tol = run.spectral() ? 1e-9 : 1e-3;
    const auto found = search_weyl_weights(f, u, tol);
    const WeylWeights d;
    const bool unique = found.size() == 1 && found[0].phi == d.phi && found[0].psi == d.psi && found[0].chi == d.chi;
    return unique ? 0.0 : 1.0 + static_cast<double>(found.size());
  });
  run.bound("weyl.constant_rescaling", "constant rescaling leaves the action unchanged", 1e-9, [&] {
    const std::vector<double> u(grid->size(), 0.3);
    return max_coef(action_value(weyl_rescale(f, u), ActionKind::srs) - action_value(f, ActionKind::srs));
  });
}

// ---------------------------------------------------------------------------
// super-weyl

void suite_super_weyl(Runner& run) {
  const GridPtr grid = run.grid();
  const int n = run.gens();
  FieldContext ctx{grid, n, 2};
  const OddFields o = odd_fields(run.rng.bits(), grid, n, 0.5);
  const auto& f = o.f;
  const auto& geo = o.geo;
  const Spinor<ScalarField> s = wavy_spinor(ctx);
  const Gravitino<ScalarField> shifted = super_weyl_shift(f.chi, s, geo);

  run.bound("super_weyl.action_drift", "super action is super Weyl invariant", 1e-9, [&] {
    const auto before = super_action(f.phi, f.psi, f.chi, geo, f.A).total();
    const auto after = super_action(f.phi, f.psi, shifted, geo, f.A).total();
    return max_coef(after - before);
  });
  run.bound("super_weyl.q_part", "super Weyl shift moves only the spin-1/2 part", 1e-14, [&] {
    const auto a = q_part(f.chi, geo);
    const auto b = q_part(shifted, geo);
    double worst = 0.0;
    for (int x = 0; x < 2; ++x)
      for (int k = 0; k < 2; ++k) worst = std::max(worst, (a.z[x][k] - b.z[x][k]).max_abs());
    return worst;
  });

  // Classical real fields: the ruled-out term moves, the quartic one does not.
  ModeTable t;
  add_random_modes(run.rng, t, FieldKind::psi, 4, kClassical, 1, 1, 1.0);
  add_random_modes(run.rng, t, FieldKind::chi, 4, kClassical, 1, 1, 1.0);
  t.add({FieldKind::spinor, 0, 0, 1.2, -1, 0, 0.0}).add({FieldKind::spinor, 0, 0, -0.8, -1, 1, 0.0});
  t.add({FieldKind::spinor, 1, 0, 0.5, -1, 1, 0.3});
  const auto psi_c = make_psi(t, ctx);
  const auto chi_c = make_chi(t, ctx);
  const auto s_c = make_spinor(t, ctx);
  const auto chi_c_shifted = super_weyl_shift(chi_c, s_c, geo);
  run.witness("super_weyl.ruled_out_witness", "the ruled-out coupling is not super Weyl invariant", 1e-3, [&] {
    return max_coef(coupling_ruled_out(chi_c_shifted, psi_c, geo) - coupling_ruled_out(chi_c, psi_c, geo));
  });
  // (psi, psi)_E vanishes on commuting spinors, so the contrast is the
  // gravitino factor of the quartic coupling.
  run.bound("super_weyl.quartic_classical", "the quartic coupling is super Weyl invariant", 1e-12, [&] {
    return max_coef(integrate(gravitino_quadratic(chi_c_shifted, geo) - gravitino_quadratic(chi_c, geo), geo));
  });
}

// ---------------------------------------------------------------------------
// supersymmetry

SuperFields<ScalarField> at_step(const SuperFields<DualField>& d, double h) {
  const auto at = [h](const DualField& x) { return x.value + x.eps.scaled(h); };
  SuperFields<ScalarField> f;
  for (const auto& p : d.phi.phi) f.phi.phi.push_back(at(p));
  f.phi.winding = d.phi.winding;
  for (const auto& s : d.psi) f.psi.push_back({{at(s[0]), at(s[1])}});
  for (int k = 0; k < 2; ++k)
    for (int mu = 0; mu < 2; ++mu) {
      f.frame.e[k][mu] = at(d.frame.e[k][mu]);
      f.chi.z[k][mu] = at(d.chi.z[k][mu]);
    }
  f.A = {at(d.A[0]), at(d.A[1])};
  return f;
}

// Richardson-extrapolated central difference of the action along the
// varied fields, compared with the dual-number first variation.
double difference_quotient_gap(const SuperFields<DualField>& d, ActionKind kind) {
  constexpr double h = 1e-3;
  const auto D = [&](double step) {
    return (action_value(at_step(d, step), kind) - action_value(at_step(d, -step), kind)).scaled(0.5 / step);
  };
  const GrassmannElement richardson = (D(h / 2).scaled(4.0) - D(h)).scaled(1.0 / 3.0);
  return max_coef(richardson - first_variation(d, kind).total);
}

double divergence_integral(const OneForm<ScalarField>& J, const Geometry<ScalarField>& geo) {
  return max_coef(integrate(divergence(J, geo), geo));
}

void suite_susy_basic(Runner& run) {
  const GridPtr grid = run.grid();
  const int n = run.gens();
  FieldContext ctx{grid, n, 2};
  const std::uint64_t seed = run.rng.bits();
  OddFields o = odd_fields(seed, grid, n, 0.5);
  o.f.chi = Gravitino<ScalarField>{};
  for (int k = 0; k < 2; ++k)
    for (int mu = 0; mu < 2; ++mu) o.f.chi.z[k][mu] = ScalarField(grid, n);
  const auto& f = o.f;
  const auto& geo = o.geo;
  const Spinor<ScalarField> s0 = constant_spinor(ctx);
  const Spinor<ScalarField> sw = wavy_spinor(ctx);

  run.bound("susy_basic.stationarity", "harmonic plus Dirac action is stationary for holomorphic s", 1e-8, [&] {
    return first_variation(susy_varied_fields(f, s0, SusyKind::basic, TorsionMode::independent), ActionKind::sdh).max_abs;
  });
  run.bound("susy_basic.holomorphic_residual", "constant spinors are holomorphic", 1e-12,
            [&] { return holomorphy_residual(s0, geo); });
  run.witness("susy_basic.nonholomorphic_residual", "witness spinor is not holomorphic", 0.1,
              [&] { return holomorphy_residual(sw, geo); });
  run.witness("susy_basic.nonholomorphic_variation", "variation is non-zero for non-holomorphic s", 1e-3, [&] {
    return first_variation(susy_varied_fields(f, sw, SusyKind::basic, TorsionMode::independent), ActionKind::sdh).max_abs;
  });
  run.bound("susy_basic.difference_quotient", "dual-number variation matches a difference quotient", 1e-8, [&] {
    return difference_quotient_gap(susy_varied_fields(f, sw, SusyKind::basic, TorsionMode::independent),
                                   ActionKind::sdh);
  });

  const SusyCurrentReport cur = susy_current(f.phi, f.psi, sw, geo);
  if (run.spectral()) {
    run.bound("susy_basic.current_identity", "variation is bulk plus the divergence of the supercurrent", 1e-9,
              [&] { return cur.identity_residual; });
  }
  run.convergence("susy_basic.current_identity_convergence", "variation is bulk plus the divergence of the supercurrent",
                  [&](const GridPtr& g) {
                    const OddFields og = odd_fields(seed, g, n, 0.5);
                    FieldContext c{g, n, 2};
                    return susy_current(og.f.phi, og.f.psi, wavy_spinor(c), og.geo).identity_residual;
                  });
  run.bound("susy_basic.divergence_phi", "divergence of a current integrates to zero", 1e-12,
            [&] { return divergence_integral(cur.J_phi, geo); });
  run.bound("susy_basic.divergence_psi", "divergence of a current integrates to zero", 1e-12,
            [&] { return divergence_integral(cur.J_psi, geo); });
  run.bound("susy_basic.divergence_susy", "divergence of a current integrates to zero", 1e-12,
            [&] { return cur.divergence_integral; });
}

void suite_susy_full(Runner& run) {
  const GridPtr grid = run.grid();
  const int n = run.gens();
  FieldContext ctx{grid, n, 2};
  const std::uint64_t seed = run.rng.bits();
  OddFields o = odd_fields(seed, grid, n, 0.5);
  o.f.A = torsion_from_gravitino(o.f.chi, o.geo);
  const auto& f = o.f;
  const Spinor<ScalarField> s0 = constant_spinor(ctx);
  const Spinor<ScalarField> sw = wavy_spinor(ctx);
  // Stationarity for a varying spinor or frame relies on the product rule of
  // the derivative, exact only in spectral mode.
  const auto varying = [&](const GridPtr& g, bool conformal) {
    OddFields og = odd_fields(seed, g, n, 0.5);
    FieldContext c{g, n, 2};
    if (conformal) og.f.frame = FrameField<ScalarField>::conformal(g, n, single_mode_u(*g, 0.05, 0.2));
    og.f.A = torsion_from_gravitino(og.f.chi, make_geometry(og.f.frame));
    return first_variation(susy_varied_fields(og.f, wavy_spinor(c), SusyKind::full, TorsionMode::slaved),
                           ActionKind::srs)
        .max_abs;
  };

  run.bound("susy_full.stationarity", "super action is stationary when the torsion factorizes", 1e-8, [&] {
    return first_variation(susy_varied_fields(f, s0, SusyKind::full, TorsionMode::slaved), ActionKind::srs).max_abs;
  });
  run.bound_or_convergence("susy_full.stationarity_varying_s", "super action is stationary when the torsion factorizes",
                           1e-8, [&](const GridPtr& g) { return varying(g, false); });
  run.bound_or_convergence("susy_full.stationarity_conformal", "super action is stationary when the torsion factorizes",
                           1e-8, [&](const GridPtr& g) { return varying(g, true); });

  SuperFields<ScalarField> off = f;
  off.A = f.A + constant_form(grid, n, 0.5, 0.0);
  run.witness("susy_full.unfactorized_witness", "variation is non-zero when the torsion does not factorize", 1e-3, [&] {
    return first_variation(susy_varied_fields(off, s0, SusyKind::full, TorsionMode::independent), ActionKind::srs)
        .max_abs;
  });
  run.bound("susy_full.difference_quotient", "dual-number variation matches a difference quotient", 1e-8, [&] {
    return difference_quotient_gap(susy_varied_fields(off, sw, SusyKind::full, TorsionMode::independent),
                                   ActionKind::srs);
  });
}

// ---------------------------------------------------------------------------
// varform1

struct Varform1Fields {
  MapField<ScalarField> phi;
  TwistedSpinor<ScalarField> psi;
  Geometry<ScalarField> geo;
};

Varform1Fields varform1_fields(const GridPtr& grid, int gens) {
  FieldContext ctx{grid, gens, 2};
  ModeTable t;
  t.add({FieldKind::map, 1, 0, 0.8, -1, 0, 0.3}).add({FieldKind::map, 0, 1, 0.5, -1, 1, 1.1});
  t.add({FieldKind::map, 1, 1, 0.3, -1, 1, 0.2});
  t.add({FieldKind::psi, 1, 0, 0.7, -1, 0, 0.1}).add({FieldKind::psi, 0, 1, -0.6, -1, 1, 0.4});
  t.add({FieldKind::psi, 1, -1, 0.5, -1, 2, 0.9}).add({FieldKind::psi, 0, 1, 0.4, -1, 3, 1.3});
  return {make_map(t, ctx), make_psi(t, ctx), make_geometry(FrameField<ScalarField>::flat(grid, gens))};
}

constexpr std::array<double, 2> kVarform1Spinor{0.6, -0.3};

void suite_varform1(Runner& run) {
  const GridPtr grid = run.grid();
  const Varform1Fields v = varform1_fields(grid, run.gens());
  const Varform1Report rep = varform1_check(v.phi, v.psi, v.geo, kVarform1Spinor);
  const auto at = [&](const GridPtr& g) {
    const Varform1Fields w = varform1_fields(g, run.gens());
    return varform1_check(w.phi, w.psi, w.geo, kVarform1Spinor);
  };
  if (run.spectral()) {
    run.bound("varform1.identity_phi", "variation of the map term is a divergence", 1e-9,
              [&] { return rep.residual_phi; });
    run.bound("varform1.identity_psi", "variation of the spinor term is bulk plus a divergence", 1e-9,
              [&] { return rep.residual_psi; });
  }
  run.convergence("varform1.identity_phi_convergence", "variation of the map term is a divergence",
                  [&](const GridPtr& g) { return at(g).residual_phi; });
  run.convergence("varform1.identity_psi_convergence", "variation of the spinor term is bulk plus a divergence",
                  [&](const GridPtr& g) { return at(g).residual_psi; });
  run.bound("varform1.divergence_phi", "divergence of a current integrates to zero", 1e-12,
            [&] { return rep.divergence_phi; });
  run.bound("varform1.divergence_psi", "divergence of a current integrates to zero", 1e-12,
            [&] { return rep.divergence_psi; });
  run.witness("varform1.total_variation", "symplectic-target functional is not invariant", 1e-3,
              [&] { return rep.total_variation; });
}

using SuiteFn = void (*)(Runner&);

struct SuiteEntry {
  const char* name;
  SuiteFn fn;
};

constexpr SuiteEntry kSuites[] = {
    {"algebra", suite_algebra},       {"clifford", suite_clifford},       {"geometry", suite_geometry},
    {"dirac", suite_dirac},           {"torsion", suite_torsion},         {"couplings", suite_couplings},
    {"weyl", suite_weyl},             {"super-weyl", suite_super_weyl},   {"susy-basic", suite_susy_basic},
    {"susy-full", suite_susy_full},   {"varform1", suite_varform1},
};

std::vector<CheckRecord> run_one(std::size_t index, const SuiteConfig& config) {
  Runner runner(config, index + 1);
  kSuites[index].fn(runner);
  return runner.take();
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& s : kSuites) v.emplace_back(s.name);
    return v;
  }();
  return names;
}

std::vector<CheckRecord> run_suite(const std::string& name, const SuiteConfig& config) {
  constexpr std::size_t count = std::size(kSuites);
  if (name != "all") {
    for (std::size_t i = 0; i < count; ++i)
      if (name == kSuites[i].name) return run_one(i, config);
    fail(ErrorCode::unknown_suite, "'" + name + "'");
  }
  std::vector<std::vector<CheckRecord>> parts(count);
  const std::size_t threads = static_cast<std::size_t>(std::max(1, config.threads));
  for (std::size_t first = 0; first < count; first += threads) {
    const std::size_t last = std::min(count, first + threads);
    if (threads == 1) {
      parts[first] = run_one(first, config);
      continue;
    }
    std::vector<std::future<std::vector<CheckRecord>>> jobs;
    for (std::size_t i = first; i < last; ++i) jobs.push_back(std::async(std::launch::async, run_one, i, config));
    for (std::size_t i = first; i < last; ++i) parts[i] = jobs[i - first].get();
  }
  std::vector<CheckRecord> out;
  for (auto& p : parts) out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  return out;
}

}  // namespace shm
