// Compares the OpenMP kernels against their serial references and reports
// the apply cost of the fast map against a dense matrix at growing n.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "binembed/embedders.hpp"
#include "binembed/harness.hpp"
#include "binembed/metrics.hpp"
#include "binembed/rng.hpp"
#include "binembed/sets.hpp"

using namespace binembed;

namespace {

double time_once(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

void row(const std::string& name, double serial, double parallel, bool equal) {
  std::printf("%-28s %9.3f s %9.3f s   x%.2f   %s\n", name.c_str(), serial,
              parallel, serial / parallel, equal ? "outputs equal" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("%-28s %11s %11s  speedup\n", "kernel", "serial", "parallel");

  {
    const auto desc = SetDescriptor::subspace(256, 8);
    WidthEstimate ser, par;
    const double ts = time_once([&] { ser = gaussian_width_serial(desc, 100000, 1); });
    const double tp = time_once([&] { par = gaussian_width(desc, 100000, 1); });
    row("gaussian_width 1e5 trials", ts, tp,
        ser.estimate == par.estimate && ser.std_error == par.std_error);
  }

  {
    const auto cloud = sample_points(SetDescriptor::subspace(256, 6), 2000, 2);
    const auto op = build(OpKind::DenseGaussian, 512, 256, 3);
    std::vector<BinaryCode> ser, par;
    const double ts = time_once([&] { ser = embed_batch_serial(op, cloud.points); });
    const double tp = time_once([&] { par = embed_batch(op, cloud.points); });
    row("embed_batch 2000x512x256", ts, tp, ser == par);
  }

  {
    const auto cloud = sample_points(SetDescriptor::subspace(128, 5), 1200, 4);
    const auto op = build(OpKind::DenseGaussian, 256, 128, 5);
    PairStat ser, par;
    const double ts = time_once([&] { ser = binary_distortion_serial(cloud, op); });
    const double tp = time_once([&] { par = binary_distortion(cloud, op); });
    row("binary_distortion 1200 pts", ts, tp,
        ser.value == par.value && ser.i == par.i && ser.j == par.j);
  }

  std::printf("\napply cost per vector, fast map (SDGD*R) vs dense rows "
              "(m = 64):\n");
  std::printf("%8s %14s %14s %10s\n", "n", "fast", "dense", "dense/fast");
  double fast_prev = 0.0;
  for (int log_n = 12; log_n <= 16; log_n += 2) {
    const int n = 1 << log_n;
    const auto fast_op = build(OpKind::FastBinary, 64, n, 7);
    const auto dense_op = build(OpKind::DenseGaussian, 64, n, 7);
    Rng rng(8);
    Vec x(n);
    rng.fill_gaussian(x);

    const int reps = 1 << (20 - log_n);
    double sink = 0.0;
    const double t_fast = time_once([&] {
                            for (int r = 0; r < reps; ++r)
                              sink += apply_linear(fast_op, x)[0];
                          }) /
                          reps;
    const double t_dense = time_once([&] {
                             for (int r = 0; r < reps; ++r)
                               sink += apply_linear(dense_op, x)[0];
                           }) /
                           reps;
    std::printf("%8d %12.1f us %12.1f us %9.1fx", n, 1e6 * t_fast,
                1e6 * t_dense, t_dense / t_fast);
    if (fast_prev > 0.0)
      std::printf("   (fast grew %.1fx over previous n)", t_fast / fast_prev);
    fast_prev = t_fast;
    std::printf("\n");
    if (sink == 12345.0) std::printf(" ");  // keep the loops live
  }
  return 0;
}
