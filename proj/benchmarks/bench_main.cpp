#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "shm/suites.hpp"
#include "shm/symmetry.hpp"

using namespace shm;

namespace {

constexpr int N = 8;

GrassmannElement random_element(std::mt19937_64& gen, int terms) {
  std::uniform_int_distribution<int> mask(0, (1 << N) - 1);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<GrassmannElement::Term> t;
  for (int k = 0; k < terms; ++k) t.emplace_back(static_cast<Monomial>(mask(gen)), coef(gen));
  return GrassmannElement::from_terms(N, t);
}

GridPtr grid(int n) {
  TorusGrid::Options o;
  o.n1 = o.n2 = n;
  return TorusGrid::create(o);
}

struct Fields {
  FieldContext ctx;
  SuperFields<ScalarField> f;
  Spinor<ScalarField> s;
};

Fields fields(int n) {
  Fields out;
  out.ctx = FieldContext{grid(n), N, 2};
  ModeTable t;
  for (int a = 0; a < 2; ++a) t.add({FieldKind::map, 1, a, 0.7, -1, a});
  for (int c = 0; c < 4; ++c)
    for (int g = 0; g < 3; ++g) {
      t.add({FieldKind::psi, 1, 1 - c % 2, 0.3, g, c, 0.2 * g});
      t.add({FieldKind::chi, c % 2, 1, 0.2, 3 + g, c, 0.1 * c});
    }
  t.add({FieldKind::spinor, 0, 0, 0.7, 6, 0}).add({FieldKind::spinor, 1, 0, 0.4, 7, 1});
  out.f.phi = make_map(t, out.ctx);
  out.f.psi = make_psi(t, out.ctx);
  out.f.chi = make_chi(t, out.ctx);
  out.f.frame = FrameField<ScalarField>::flat(out.ctx.grid, N);
  out.f.A = slaved_torsion(out.f);
  out.s = make_spinor(t, out.ctx);
  return out;
}

void BM_GrassmannMultiply(benchmark::State& state) {
  std::mt19937_64 gen(1);
  const auto a = random_element(gen, static_cast<int>(state.range(0)));
  const auto b = random_element(gen, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_GrassmannMultiply)->Arg(8)->Arg(64)->Arg(256);

void BM_SpectralDerivative(benchmark::State& state) {
  const FieldContext ctx{grid(static_cast<int>(state.range(0))), N, 2};
  ModeTable t;
  t.add({FieldKind::map, 1, 2, 0.7, -1, 0}).add({FieldKind::map, 3, -1, 0.2, -1, 0, 0.4});
  const ScalarField f = make_trig_field(t, ctx, FieldKind::map, 0);
  for (auto _ : state) benchmark::DoNotOptimize(partial(f, 0));
}
BENCHMARK(BM_SpectralDerivative)->Arg(32)->Arg(128)->Arg(512);

void BM_SuperAction(benchmark::State& state) {
  const Fields x = fields(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(action_value(x.f, ActionKind::srs));
}
BENCHMARK(BM_SuperAction)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_FirstVariation(benchmark::State& state) {
  const Fields x = fields(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const auto d = susy_varied_fields(x.f, x.s, SusyKind::full, TorsionMode::slaved);
    benchmark::DoNotOptimize(first_variation(d, ActionKind::srs));
  }
}
BENCHMARK(BM_FirstVariation)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_RunSuite(benchmark::State& state) {
  SuiteConfig c;
  for (auto _ : state) benchmark::DoNotOptimize(run_suite("susy-full", c));
}
BENCHMARK(BM_RunSuite)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
