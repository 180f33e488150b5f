// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
//
// OpenMP kernels against their serial reference versions.

#include <benchmark/benchmark.h>

#include "mirror/coupling.hpp"
#include "mirror/domain_io.hpp"
#include "mirror/fem.hpp"
#include "mirror/hinges.hpp"
#include "mirror/mesh.hpp"

using namespace mirror;

namespace {

const Domain& example1() {
  static const Domain d = preset_domain("example1");
  return d;
}

const TriMesh& mesh() {
  static const TriMesh m = refine(triangulate(example1().curve, 0.1), example1().curve);
  return m;
}

const LyapunovSet& lset() {
  static const LyapunovSet ls = assemble(example1().curve, compute_special_points(example1().curve, kPi / 4));
  return ls;
}

void BM_Assemble(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(assemble_fem(mesh()));
}
void BM_AssembleSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(assemble_fem_serial(mesh()));
}

void BM_Matvec(benchmark::State& st) {
  const FemSystem sys = assemble_fem(mesh());
  std::vector<double> x(sys.K.n, 1.0), y;
  for (int i = 0; i < sys.K.n; ++i) x[i] = mesh().vertices[i].x;
  for (auto _ : st) {
    sys.K.matvec(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}
void BM_MatvecSerial(benchmark::State& st) {
  const FemSystem sys = assemble_fem(mesh());
  std::vector<double> x(sys.K.n, 1.0), y;
  for (int i = 0; i < sys.K.n; ++i) x[i] = mesh().vertices[i].x;
  for (auto _ : st) {
    sys.K.matvec_serial(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

void BM_Dot(benchmark::State& st) {
  std::vector<double> a(static_cast<size_t>(st.range(0)), 0.5), b(a.size(), 2.0);
  for (auto _ : st) benchmark::DoNotOptimize(dot_par(a, b));
}
void BM_DotSerial(benchmark::State& st) {
  std::vector<double> a(static_cast<size_t>(st.range(0)), 0.5), b(a.size(), 2.0);
  for (auto _ : st) benchmark::DoNotOptimize(dot_serial(a, b));
}

Chord probe_chord() { return chord_through(example1().curve, 0.3 * example1().curve.total_length(), 1.0); }

void BM_ScanHinges(benchmark::State& st) {
  const Chord c = probe_chord();
  for (auto _ : st) benchmark::DoNotOptimize(scan_hinges(example1().curve, c, 2000));
}
void BM_ScanHingesSerial(benchmark::State& st) {
  const Chord c = probe_chord();
  for (auto _ : st) benchmark::DoNotOptimize(scan_hinges_serial(example1().curve, c, 2000));
}

void BM_Invariance(benchmark::State& st) {
  const auto starts = starts_in_T(example1().curve, lset(), 4, 1);
  for (auto _ : st)
    benchmark::DoNotOptimize(invariance_mc(example1().curve, lset(), starts, {1e-3}, 1.0, 25, 1));
}
void BM_InvarianceSerial(benchmark::State& st) {
  const auto starts = starts_in_T(example1().curve, lset(), 4, 1);
  for (auto _ : st)
    benchmark::DoNotOptimize(invariance_mc_serial(example1().curve, lset(), starts, {1e-3}, 1.0, 25, 1));
}

}  // namespace

BENCHMARK(BM_Assemble)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Matvec)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MatvecSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Dot)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_DotSerial)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_ScanHinges)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanHingesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Invariance)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InvarianceSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
