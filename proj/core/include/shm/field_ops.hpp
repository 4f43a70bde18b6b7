#pragma once

// Uniform helpers over the two grid rings used by the geometry pipeline:
// ScalarField and Dual<ScalarField> (value plus first variation).

#include <algorithm>
#include <span>
#include <type_traits>

#include "shm/torus.hpp"

namespace shm {

using DualField = Dual<ScalarField>;

inline const ScalarField& primal(const ScalarField& f) { return f; }
inline const ScalarField& primal(const DualField& f) { return f.value; }

template <class S>
S lift(const ScalarField& f) {
  if constexpr (std::is_same_v<S, ScalarField>) {
    return f;
  } else {
    return DualField{f, zero_like(f)};
  }
}

inline ScalarField add_real(const ScalarField& f, double c) {
  if (c == 0.0) return f;
  return f + ScalarField::constant(f.grid(), f.generator_count(), c).with_band(Band{});
}
inline DualField add_real(const DualField& f, double c) { return {add_real(f.value, c), f.eps}; }

inline ScalarField times_real(const ScalarField& f, std::span<const double> g, const Band& band) {
  return f.times_real(g, band);
}
inline DualField times_real(const DualField& f, std::span<const double> g, const Band& band) {
  return {f.value.times_real(g, band), f.eps.times_real(g, band)};
}

inline ScalarField scaled(const ScalarField& f, double s) { return f.scaled(s); }
inline DualField scaled(const DualField& f, double s) { return {f.value.scaled(s), f.eps.scaled(s)}; }

inline double max_abs(const DualField& f) { return std::max(f.value.max_abs(), f.eps.max_abs()); }

}  // namespace shm
