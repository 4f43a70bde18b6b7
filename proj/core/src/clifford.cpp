#include "shm/clifford.hpp"

#include <cmath>

namespace shm {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const Complex kI{0.0, 1.0};
}  // namespace

WeylPair weyl_split(const Spinor<Complex>& s) {
  return {(s[0] + kI * s[1]) * kInvSqrt2, (s[0] - kI * s[1]) * kInvSqrt2};
}

Spinor<Complex> weyl_join(const WeylPair& p) {
  return {{(p.w + p.wbar) * kInvSqrt2, kI * (p.wbar - p.w) * kInvSqrt2}};
}

Spinor<Complex> weyl_frame() { return {{Complex(kInvSqrt2, 0.0), Complex(0.0, -kInvSqrt2)}}; }

std::array<Complex, 2> square_to_vector(const Spinor<Complex>& s, const Spinor<Complex>& t) {
  std::array<Complex, 2> v;
  for (int k = 0; k < 2; ++k) v[k] = metric_pair(s, gamma(k, t)) * kInvSqrt2;
  return v;
}

}  // namespace shm
