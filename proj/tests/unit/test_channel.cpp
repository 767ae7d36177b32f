// SPDX-License-Identifier: Apache-2.0
#include <complex>
#include <random>

#include "bibc/channel.hpp"
#include "bibc/error.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace bibc;
using bibc::testing::square;

namespace {

double gram_deviation(const ProbingSignal& phi) {
  const int m = phi.antennas();
  const double scale = phi.transmit_power() * phi.slot_length() / m;
  const CMatrix gram = phi.matrix() * phi.matrix().adjoint();
  return (gram - scale * CMatrix::Identity(m, m)).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("probing signal examples") {
  auto one = make_probing_signal(1, 1, 1.0);
  CHECK(std::abs(one.matrix()(0, 0) - std::complex<double>(1, 0)) < 1e-15);

  auto two = make_probing_signal(2, 2, 1.0);
  CHECK(gram_deviation(two) < 1e-12);

  auto eight = make_probing_signal(8, 8, 4.0);
  const CMatrix g = eight.matrix() * eight.matrix().adjoint();
  CHECK(std::abs(g(3, 3) - 4.0) < 1e-12);
  CHECK(gram_deviation(eight) < 1e-10);

  CHECK_THROWS_AS(make_probing_signal(4, 3, 1.0), InvalidArgument);
  CHECK_THROWS_AS(make_probing_signal(2, 4, 0.0), InvalidArgument);
}

TEST_CASE("probing signal invariants over shapes") {
  for (int m = 1; m <= 9; ++m) {
    for (int tau = m; tau <= 17; tau += 2) {
      const double p = 0.37 * tau;
      auto phi = make_probing_signal(m, tau, p);
      CHECK(gram_deviation(phi) < 1e-10 * std::max(1.0, p * tau / m));
      CHECK(phi.matrix().squaredNorm() == doctest::Approx(p * tau).epsilon(1e-12));
      CHECK(phi.energy() == doctest::Approx(p * tau));
    }
  }
  auto s = probing_signal_for_snr(4, 8, 30.0);
  CHECK(s.energy() == doctest::Approx(1000.0).epsilon(1e-12));
}

TEST_CASE("channel norms follow free-space gains") {
  const Deployment d1({{0, 0}, {50, 50}}, 4, square(25, 25, 60));
  auto r1 = synthesize_channels(d1, {1, 0}, 9);
  CHECK(r1.bd_channel(0).squaredNorm() == doctest::Approx(4.0).epsilon(1e-12));
  for (int i = 0; i < 4; ++i) CHECK(std::abs(r1.bd_channel(0)(i)) == doctest::Approx(1.0));

  const Deployment d2({{0, 0}, {3, 3}}, 8, square(0, 0, 40));
  auto r2 = synthesize_channels(d2, {10, 0}, 9);
  CHECK(r2.bd_channel(0).squaredNorm() == doctest::Approx(0.08).epsilon(1e-12));

  std::mt19937_64 eng(1);
  for (int trial = 0; trial < 20; ++trial) {
    auto dep = bibc::testing::random_deployment(6, 30.0, 5, eng);
    Point bd{13.1, 17.7};
    auto real = synthesize_channels(dep, bd, trial);
    for (std::size_t t = 0; t < dep.size(); ++t) {
      CHECK(bibc::testing::rel_err(real.bd_channel(t).squaredNorm(),
                                   5 * path_gain(dep.ap(t), bd)) < 1e-10);
      for (std::size_t r = 0; r < dep.size(); ++r) {
        if (r == t) continue;
        const CMatrix diff = real.inter_ap(r, t) - real.inter_ap(t, r).transpose();
        CHECK(diff.cwiseAbs().maxCoeff() == 0.0);
      }
    }
  }
  CHECK_THROWS_AS(synthesize_channels(d2, {3, 3}, 1), GeometryError);
}

TEST_CASE("backscatter block energy identity") {
  std::mt19937_64 eng(4);
  for (int trial = 0; trial < 30; ++trial) {
    auto dep = bibc::testing::random_deployment(4, 20.0, 3, eng);
    auto real = synthesize_channels(dep, {7.0, 9.0}, 100 + trial);
    auto phi = make_probing_signal(3, 5, 2.5);
    const auto& gt = real.bd_channel(0);
    const auto& gr = real.bd_channel(2);
    const CMatrix a = gr * gt.transpose() * phi.matrix();
    const double expect = 2.5 * 5 / 3.0 * gr.squaredNorm() * gt.squaredNorm();
    CHECK(bibc::testing::rel_err(a.squaredNorm(), expect) < 1e-8);
  }
}

TEST_CASE("channel synthesis is deterministic per seed") {
  const Deployment dep({{0, 0}, {10, 0}, {5, 8}}, 4, square(5, 5, 20));
  auto a = synthesize_channels(dep, {4, 4}, 77);
  auto b = synthesize_channels(dep, {4, 4}, 77);
  auto c = synthesize_channels(dep, {4, 4}, 78);
  for (std::size_t t = 0; t < 3; ++t) CHECK(a.bd_channel(t) == b.bd_channel(t));
  CHECK(a.inter_ap(0, 2) == b.inter_ap(0, 2));
  CHECK(a.bd_channel(1) != c.bd_channel(1));
}

TEST_CASE("orthogonal sequences") {
  auto s1 = make_orthogonal_sequences(1);
  CHECK(s1.power_coefficient == 1.0);
  CHECK(std::abs(s1.coefficients(0, 0) - std::complex<double>(1, 0)) < 1e-15);

  auto s2 = make_orthogonal_sequences(2);
  const double h = 1 / std::sqrt(2.0);
  CHECK(s2.power_coefficient == 0.5);
  CHECK(s2.coefficients(0, 0) == std::complex<double>(h, 0));
  CHECK(s2.coefficients(0, 1) == std::complex<double>(h, 0));
  CHECK(s2.coefficients(1, 0) == std::complex<double>(h, 0));
  CHECK(s2.coefficients(1, 1) == std::complex<double>(-h, 0));

  for (int t : {3, 4, 5, 7, 12}) {
    auto s = make_orthogonal_sequences(t);
    const CMatrix gram = s.coefficients * s.coefficients.adjoint();
    const CMatrix target = s.power_coefficient * t * CMatrix::Identity(t, t);
    CHECK((gram - target).cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 0; i < t; ++i)
      for (int l = 0; l < t; ++l)
        CHECK(std::norm(s.coefficients(i, l)) == doctest::Approx(1.0 / t).epsilon(1e-12));
  }
  CHECK_THROWS_AS(make_orthogonal_sequences(0), InvalidArgument);
}
