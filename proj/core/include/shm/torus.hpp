#pragma once

// Discretised flat torus and Grassmann-valued scalar fields on it.
//
// A ScalarField stores one real grid per Grassmann monomial, so spectral
// derivatives act monomial by monomial and products only touch pairs of
// disjoint monomials. Grid index is i * n2 + j with i along x^1.

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "shm/grassmann.hpp"

namespace shm {

enum class DerivMode { spectral, central2, central4 };

// Antiperiodicity per direction; spinor-valued data inherits the spin
// structure, products of two spinors are periodic again.
using Twist = std::array<bool, 2>;

inline Twist combine_twist(const Twist& a, const Twist& b) {
  return {a[0] != b[0], a[1] != b[1]};
}

// Largest |wavenumber| (in units of 2*pi/L) per direction. Unknown bands are
// produced by non-polynomial operations such as pointwise inversion.
struct Band {
  std::array<double, 2> k{0.0, 0.0};
  bool known = true;

  static Band unknown() { return Band{{0.0, 0.0}, false}; }
};

Band band_product(const Band& a, const Band& b);
Band band_sum(const Band& a, const Band& b);

class TorusGrid {
 public:
  struct Options {
    int n1 = 32;
    int n2 = 32;
    double L1 = 1.0;
    double L2 = 1.0;
    DerivMode mode = DerivMode::spectral;
    Twist spin_twist{false, false};
    // Relative size of the highest resolved mode above which a spectral
    // derivative of an unbounded-band field is rejected.
    double alias_tolerance = 1e-9;
  };

  static std::shared_ptr<const TorusGrid> create(const Options& options);
  ~TorusGrid();

  TorusGrid(const TorusGrid&) = delete;
  TorusGrid& operator=(const TorusGrid&) = delete;

  int n(int mu) const { return mu == 0 ? opt_.n1 : opt_.n2; }
  double period(int mu) const { return mu == 0 ? opt_.L1 : opt_.L2; }
  double spacing(int mu) const { return period(mu) / n(mu); }
  double cell_area() const { return spacing(0) * spacing(1); }
  std::size_t size() const { return static_cast<std::size_t>(opt_.n1) * opt_.n2; }
  DerivMode mode() const { return opt_.mode; }
  const Twist& spin_twist() const { return opt_.spin_twist; }
  const Options& options() const { return opt_; }

  double coordinate(int mu, std::size_t index) const;
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * opt_.n2 + j; }

  // Largest wavenumber that the derivative engine resolves unambiguously.
  double max_resolved_band(int mu, bool antiperiodic) const;

  // d/dx^mu of one real grid. Throws AliasingDetected when the band (or,
  // for unknown bands, the spectrum tail) reaches the Nyquist limit.
  void derivative(std::span<const double> in, std::span<double> out, int mu,
                  bool antiperiodic, const Band& band) const;

  // Two-dimensional complex spectrum magnitudes, used by diagnostics.
  double spectral_tail_ratio(std::span<const double> in, int mu, bool antiperiodic) const;

 private:
  explicit TorusGrid(const Options& options);
  struct Fft;

  void spectral_derivative(std::span<const double> in, std::span<double> out, int mu,
                           bool antiperiodic, bool check_tail) const;

  Options opt_;
  std::unique_ptr<Fft> fft_;
};

using GridPtr = std::shared_ptr<const TorusGrid>;

// Fixed-order pairwise summation, so reductions are bit-reproducible.
double pairwise_sum(std::span<const double> v);

class ScalarField {
 public:
  struct Term {
    Monomial mask;
    std::vector<double> values;
  };

  ScalarField() = default;
  ScalarField(GridPtr grid, int generator_count, Twist twist = {false, false});

  static ScalarField constant(GridPtr grid, int generator_count, double value);
  static ScalarField constant(GridPtr grid, const GrassmannElement& value);
  // Real grid times a single monomial.
  static ScalarField monomial(GridPtr grid, int generator_count, Monomial mask,
                              std::vector<double> values, Band band = Band::unknown(),
                              Twist twist = {false, false});

  const GridPtr& grid() const { return grid_; }
  int generator_count() const { return gens_; }
  const Twist& twist() const { return twist_; }
  const Band& band() const { return band_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  const std::vector<double>* find(Monomial mask) const;
  std::vector<double> body_values() const;
  GrassmannElement at(std::size_t index) const;

  Parity parity() const;
  ScalarField even_part() const;
  ScalarField odd_part() const;
  double max_abs() const;

  ScalarField with_band(const Band& band) const;
  ScalarField with_twist(const Twist& twist) const;

  ScalarField operator-() const;
  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
  ScalarField scaled(double s) const;
  friend ScalarField operator*(const ScalarField& a, double s) { return a.scaled(s); }
  friend ScalarField operator*(double s, const ScalarField& a) { return a.scaled(s); }

  // Pointwise multiplication by a real grid (band of the factor supplied).
  ScalarField times_real(std::span<const double> f, const Band& band) const;

  // Inverse of an even field with nowhere-vanishing body.
  ScalarField inverse() const;

 private:
  void require_compatible(const ScalarField& o, bool additive) const;
  void accumulate(Monomial mask, std::span<const double> v, double sign);
  void prune();

  GridPtr grid_;
  int gens_ = 0;
  Twist twist_{false, false};
  Band band_{};
  std::vector<Term> terms_;  // sorted by mask, no all-zero grids
};

ScalarField partial(const ScalarField& f, int mu);
ScalarField inverse(const ScalarField& f);
inline ScalarField zero_like(const ScalarField& f) {
  return ScalarField(f.grid(), f.generator_count(), f.twist());
}
inline ScalarField scale(const ScalarField& f, std::int64_t num, std::int64_t den) {
  return f.scaled(static_cast<double>(num) / static_cast<double>(den));
}

template <class T>
Dual<T> partial(const Dual<T>& f, int mu) {
  return {partial(f.value, mu), partial(f.eps, mu)};
}

// Sum over grid cells times the cell area (no volume density).
GrassmannElement sum_cells(const ScalarField& f);
inline DualScalar sum_cells(const Dual<ScalarField>& f) {
  return {sum_cells(f.value), sum_cells(f.eps)};
}

// sqrt of the cell sum of squared coefficients over all monomials.
double l2_norm(const ScalarField& f);

// Largest coefficient over all monomials and grid points.
inline double max_abs(const ScalarField& f) { return f.max_abs(); }

// Real grid sampled from a function of the coordinates.
template <class F>
std::vector<double> sample(const TorusGrid& grid, F&& f) {
  std::vector<double> v(grid.size());
  for (int i = 0; i < grid.n(0); ++i)
    for (int j = 0; j < grid.n(1); ++j) {
      const std::size_t k = grid.index(i, j);
      v[k] = f(grid.coordinate(0, k), grid.coordinate(1, k));
    }
  return v;
}

}  // namespace shm
