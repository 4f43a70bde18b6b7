#pragma once

// Shared fixtures for the unit tests.

#include <cmath>
#include <random>
#include <vector>

#include "shm/symmetry.hpp"

namespace shm::test {

inline GridPtr unit_grid(int n = 16, DerivMode mode = DerivMode::spectral) {
  TorusGrid::Options o;
  o.n1 = n;
  o.n2 = n;
  o.mode = mode;
  return TorusGrid::create(o);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

 private:
  std::mt19937_64 gen_;
};

// Random element over `gens` generators with `terms` monomials; parity -1
// keeps every degree, 0 only even, 1 only odd.
inline GrassmannElement random_element(Rng& r, int gens, int terms, int parity = -1) {
  std::vector<GrassmannElement::Term> t;
  while (static_cast<int>(t.size()) < terms) {
    const auto m = static_cast<Monomial>(r.integer(0, (1 << gens) - 1));
    if (parity >= 0 && degree(m) % 2 != parity) continue;
    t.emplace_back(m, r.uniform(-1.0, 1.0));
  }
  return GrassmannElement::from_terms(gens, t);
}

inline double coef_distance(const GrassmannElement& a, const GrassmannElement& b) { return (a - b).max_abs(); }

// Random odd fields in the generator blocks (psi 0..2, chi 3..5).
inline ModeTable random_modes(Rng& r, FieldKind kind, int components, std::vector<int> generators, int count,
                              double amplitude) {
  ModeTable t;
  for (int c = 0; c < components; ++c)
    for (int q = 0; q < count; ++q)
      for (int g : generators)
        t.add({kind, r.integer(-2, 2), r.integer(-2, 2), amplitude * r.uniform(-1.0, 1.0), g, c,
               r.uniform(0.0, 6.28)});
  return t;
}

inline OneForm<ScalarField> zero_form(const GridPtr& grid, int gens) {
  return {ScalarField(grid, gens), ScalarField(grid, gens)};
}

// exp(-u) frame with u = amp sin(2 pi x1) + 0.5 amp cos(2 pi x2).
inline std::vector<double> conformal_factor(const GridPtr& grid, double amp) {
  const double tau = 2.0 * M_PI;
  return sample(*grid, [&](double x, double y) { return amp * std::sin(tau * x) + 0.5 * amp * std::cos(tau * y); });
}

}  // namespace shm::test
