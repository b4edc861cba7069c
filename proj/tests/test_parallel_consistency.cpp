// The OpenMP kernels must agree with their serial references bit for bit:
// every stochastic unit derives its substream from (seed, index) and all
// reductions are either order-free or serialized.
#include "doctest.h"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "binembed/embedders.hpp"
#include "binembed/harness.hpp"
#include "binembed/metrics.hpp"
#include "binembed/sets.hpp"

using namespace binembed;

TEST_CASE("gaussian width matches the serial reference exactly") {
#ifdef _OPENMP
  omp_set_num_threads(2);
#endif
  for (const auto& desc :
       {SetDescriptor::subspace(64, 5), SetDescriptor::sparse(64, 3),
        SetDescriptor::low_rank(8, 8, 2)}) {
    const auto par = gaussian_width(desc, 5000, 42);
    const auto ser = gaussian_width_serial(desc, 5000, 42);
    CHECK(par.estimate == ser.estimate);
    CHECK(par.std_error == ser.std_error);
  }
}

TEST_CASE("batch embedding matches the serial reference exactly") {
  const auto cloud = sample_points(SetDescriptor::subspace(48, 3), 64, 7);
  for (OpKind kind : {OpKind::DenseGaussian, OpKind::FastBinary}) {
    const auto op = build(kind, 48, 48, 11);
    const auto par = embed_batch(op, cloud.points);
    const auto ser = embed_batch_serial(op, cloud.points);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) CHECK(par[i] == ser[i]);
  }
}

TEST_CASE("binary distortion matches the serial reference exactly") {
  const auto cloud = sample_points(SetDescriptor::subspace(48, 4), 120, 9);
  const auto op = build(OpKind::DenseGaussian, 64, 48, 13);
  const auto par = binary_distortion(cloud, op);
  const auto ser = binary_distortion_serial(cloud, op);
  CHECK(par.value == ser.value);
  CHECK(par.i == ser.i);
  CHECK(par.j == ser.j);
}

TEST_CASE("grid results are independent of the thread count") {
#ifdef _OPENMP
  const auto with_threads = [](int k) {
    omp_set_num_threads(k);
    return distortion_grid(32, {2, 3}, 24, {8, 16}, {0, 1},
                           {OpKind::DenseGaussian, OpKind::SparseGaussian});
  };
  const auto one = with_threads(1);
  const auto two = with_threads(2);
  omp_set_num_threads(2);
  REQUIRE(one.size() == two.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].report.delta_bin == two[i].report.delta_bin);
    CHECK(one[i].report.delta_lin == two[i].report.delta_lin);
    CHECK(one[i].report.delta_nlin == two[i].report.delta_nlin);
    CHECK(one[i].report.argmax_bin.i == two[i].report.argmax_bin.i);
    CHECK(one[i].report.argmax_bin.j == two[i].report.argmax_bin.j);
  }
#endif
}
