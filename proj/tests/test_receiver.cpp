// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The lsa-pdma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "lsapdma/receiver.hpp"

using namespace lsapdma;

namespace {

struct Scene {
  std::vector<ChannelMatrix> channels;
  BeamformerSet beamformer;
  RMatrix correlation;
};

Scene random_scene(RngStream& rng, std::size_t users = 5) {
  Scene s;
  for (std::size_t k = 0; k < users; ++k) s.channels.push_back(sample_channel(4, 16, 0.5 + rng.uniform(), rng));
  s.beamformer = compute_zfbf(s.channels, SelectedUserSet{{0, 1, 2}});
  const auto b = PatternMatrix::from_rows({{1, 1, 0, 1, 0}, {1, 1, 1, 0, 0}, {1, 0, 1, 0, 1}});
  RMatrix p = b.entries().cast<double>();
  for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] *= 0.5 + 2.0 * rng.uniform();
  s.correlation = correlation_matrix(PowerAllocation{p});
  return s;
}

// E||t - V^H y||^2 with y = G F t + w, E[t t^H] = A, E[w w^H] = sigma2 I.
double mse(const CMatrix& v, const CMatrix& gf, const RMatrix& a, double sigma2) {
  const CMatrix ac = a.cast<Complex>();
  CMatrix cov = gf * ac * gf.adjoint();
  cov.diagonal().array() += sigma2;
  const Complex value = ac.trace() - 2.0 * (v.adjoint() * gf * ac).trace().real() + (v.adjoint() * cov * v).trace();
  return value.real();
}

}  // namespace

TEST_CASE("MMSE filter") {
  RngStream rng(31, 0);
  const Scene s = random_scene(rng);
  const auto zero = mmse_filter(s.channels[0], s.beamformer, RMatrix::Zero(3, 3), 1.0);
  CHECK(zero.matrix.isZero(0.0));
  CHECK(zero.matrix.rows() == 4);
  CHECK(zero.matrix.cols() == 3);
  CHECK_THROWS_AS(mmse_filter(s.channels[0], s.beamformer, s.correlation, 0.0), DomainError);
  CHECK_THROWS_AS(mmse_filter(s.channels[0], s.beamformer, RMatrix::Zero(2, 2), 1.0), ShapeError);

  // Large-noise limit: V ~ G F A / sigma2.
  const CMatrix gf = s.channels[3].entries * s.beamformer.beams;
  const CMatrix gfa = gf * s.correlation.cast<Complex>();
  const double big = 1e6 * (gfa * gf.adjoint()).norm();
  const auto v_big = mmse_filter(s.channels[3], s.beamformer, s.correlation, big);
  const CMatrix approx = gfa / big;
  CHECK((v_big.matrix - approx).norm() / approx.norm() < 0.01);

  // The closed form minimizes the mean-square error.
  for (std::size_t k = 0; k < s.channels.size(); ++k) {
    const CMatrix g = s.channels[k].entries * s.beamformer.beams;
    const auto v = mmse_filter(s.channels[k], s.beamformer, s.correlation, 1.0);
    const double best = mse(v.matrix, g, s.correlation, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      CMatrix dv(4, 3);
      for (Eigen::Index i = 0; i < dv.size(); ++i) dv.data()[i] = rng.complex_normal(1.0);
      dv *= 1e-3 / dv.norm();
      CHECK(mse(v.matrix + dv, g, s.correlation, 1.0) >= best);
    }
  }
}

TEST_CASE("normalized gain closed forms") {
  ChannelMatrix g{CMatrix::Ones(1, 1), 1.0};
  BeamformerSet f;
  f.beams = CMatrix::Ones(1, 1);
  f.composite = f.beams;
  const SpatialFilter v{CMatrix::Ones(1, 1)};
  CHECK(normalized_gain(v, g, f, 1.0, 0) == doctest::Approx(1.0));
  // N = 1: h = |v G f| / (sigma ||v||).
  CHECK(normalized_gain(v, g, f, 9.0, 0) == doctest::Approx(1.0 / 3.0));
  const SpatialFilter zero{CMatrix::Zero(1, 1)};
  CHECK(normalized_gain(zero, g, f, 1.0, 0) == 0.0);
  CHECK_THROWS_AS(normalized_gain(v, g, f, 1.0, 3), ShapeError);
}

TEST_CASE("normalized gain matches an independent evaluation") {
  RngStream rng(32, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const Scene s = random_scene(rng);
    const double sigma2 = 0.1 + rng.uniform();
    for (std::size_t k = 0; k < s.channels.size(); ++k) {
      const auto v = mmse_filter(s.channels[k], s.beamformer, s.correlation, sigma2);
      for (Eigen::Index n = 0; n < 3; ++n) {
        // Numerator and denominator by explicit scalar loops.
        Complex desired = 0.0;
        double leak = 0.0;
        double vnorm = 0.0;
        for (Eigen::Index i = 0; i < 3; ++i) {
          Complex acc = 0.0;
          for (Eigen::Index r = 0; r < 4; ++r) {
            for (Eigen::Index t = 0; t < 16; ++t) {
              acc += std::conj(v.matrix(r, n)) * s.channels[k].entries(r, t) * s.beamformer.beams(t, i);
            }
          }
          if (i == n) {
            desired = acc;
          } else {
            leak += std::norm(acc);
          }
        }
        for (Eigen::Index r = 0; r < 4; ++r) vnorm += std::norm(v.matrix(r, n));
        const double oracle = std::sqrt(std::norm(desired) / (leak + sigma2 * vnorm));
        CHECK(normalized_gain(v, s.channels[k], s.beamformer, sigma2, n) == doctest::Approx(oracle).epsilon(1e-12));

        // Same ratio from the full received covariance with unit beam powers.
        const CVector vn = v.matrix.col(n);
        const CMatrix gf = s.channels[k].entries * s.beamformer.beams;
        const double total = (vn.adjoint() * (gf * gf.adjoint() + sigma2 * CMatrix::Identity(4, 4)) * vn)(0).real();
        const double signal = std::norm((vn.adjoint() * gf.col(n))(0));
        const double h = normalized_gain(v, s.channels[k], s.beamformer, sigma2, n);
        CHECK(std::abs(h * h - signal / (total - signal)) <= 1e-9 * h * h);
      }
    }
  }
}

TEST_CASE("equivalent gains cover every beam and user") {
  RngStream rng(33, 0);
  const Scene s = random_scene(rng);
  const RMatrix h = equivalent_gains(s.channels, s.beamformer, s.correlation, 1.0);
  CHECK(h.rows() == 3);
  CHECK(h.cols() == 5);
  CHECK((h.array() >= 0.0).all());
  const auto v2 = mmse_filter(s.channels[2], s.beamformer, s.correlation, 1.0);
  CHECK(h(1, 2) == normalized_gain(v2, s.channels[2], s.beamformer, 1.0, 1));
}

TEST_CASE("SIC order") {
  RVector h(3);
  h << 3, 1, 2;
  const std::vector<std::size_t> all{0, 1, 2};
  CHECK(sic_order(h, all) == std::vector<std::size_t>{1, 2, 0});
  CHECK(sic_order(RVector::Constant(4, 2.0), std::vector<std::size_t>{3, 1, 0, 2}) ==
        std::vector<std::size_t>{0, 1, 2, 3});
  RVector up(4);
  up << 0.1, 0.5, 0.5, 2.0;
  CHECK(sic_order(up, std::vector<std::size_t>{0, 1, 2, 3}) == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(sic_order(h, std::vector<std::size_t>{0, 2}) == std::vector<std::size_t>{2, 0});
}

TEST_CASE("SINR along the SIC chain") {
  const std::vector<std::size_t> one{0};
  CHECK(sinr(RVector::Ones(1), RVector::Constant(1, 10.0), one)(0) == doctest::Approx(10.0));

  RVector p(2);
  p << 4.0, 2.0;
  const std::vector<std::size_t> two{0, 1};
  const RVector g = sinr(RVector::Ones(2), p, two);
  CHECK(g(0) == doctest::Approx(4.0 / 3.0));
  CHECK(g(1) == doctest::Approx(2.0));
  CHECK(sinr(RVector::Ones(2), RVector::Zero(2), two).isZero(0.0));
  RVector neg(2);
  neg << 1.0, -1.0;
  CHECK_THROWS_AS(sinr(RVector::Ones(2), neg, two), DomainError);

  // Uncovered users get nothing.
  const RVector partial = sinr(RVector::Ones(3), RVector::Ones(3), std::vector<std::size_t>{0, 2});
  CHECK(partial(1) == 0.0);
}

TEST_CASE("sum rate") {
  LinkState zero;
  zero.rates = RMatrix::Zero(3, 5);
  CHECK(sum_rate(zero) == 0.0);

  LinkState unit;
  unit.sinrs = RMatrix::Ones(3, 5);
  unit.rates = unit.sinrs.unaryExpr([](double v) { return rate_from_sinr(v); });
  CHECK(sum_rate(unit) == doctest::Approx(15.0));

  RngStream rng(34, 0);
  LinkState random;
  random.rates = RMatrix(3, 5);
  for (Eigen::Index i = 0; i < random.rates.size(); ++i) random.rates.data()[i] = 4.0 * rng.uniform();
  double naive = 0.0;
  for (Eigen::Index n = 0; n < 3; ++n) {
    for (Eigen::Index k = 0; k < 5; ++k) naive += random.rates(n, k);
  }
  CHECK(sum_rate(random) == doctest::Approx(naive).epsilon(1e-15));
}

TEST_CASE("merged power matrix equals the separate pattern and power description") {
  RngStream rng(35, 0);
  const auto b = PatternMatrix::from_rows({{1, 1, 0, 1, 0}, {1, 1, 1, 0, 0}, {1, 0, 1, 0, 1}});
  for (int trial = 0; trial < 50; ++trial) {
    RMatrix h(3, 5), p(3, 5);
    for (Eigen::Index i = 0; i < h.size(); ++i) {
      h.data()[i] = 0.1 + 5.0 * rng.uniform();
      p.data()[i] = 0.1 + 2.0 * rng.uniform();
    }
    const RMatrix merged = b.entries().cast<double>().cwiseProduct(p);
    const LinkState link = evaluate_link(h, PowerAllocation{merged}, b.support());
    for (Eigen::Index n = 0; n < 3; ++n) {
      const auto order = sic_order(h.row(n).transpose(), b.covered_users(n));
      // P itself carries power off the pattern; the order alone decides.
      const RVector direct = sinr(h.row(n).transpose(), p.row(n).transpose(), order);
      CHECK((link.sinrs.row(n).transpose() - direct).cwiseAbs().maxCoeff() == 0.0);
      for (std::size_t j = 1; j < order.size(); ++j) {
        CHECK(h(n, static_cast<Eigen::Index>(order[j - 1])) <= h(n, static_cast<Eigen::Index>(order[j])));
      }
    }
    for (Eigen::Index i = 0; i < merged.size(); ++i) {
      if (merged.data()[i] == 0.0) CHECK(link.sinrs.data()[i] == 0.0);
      CHECK(link.rates.data()[i] == rate_from_sinr(link.sinrs.data()[i]));
    }
  }
}

TEST_CASE("relabeling users leaves the sum rate unchanged") {
  RngStream rng(36, 0);
  const SupportMask all = SupportMask::Constant(3, 6, true);
  for (int trial = 0; trial < 50; ++trial) {
    RMatrix h(3, 6), p(3, 6);
    for (Eigen::Index i = 0; i < h.size(); ++i) {
      h.data()[i] = 0.1 + 5.0 * rng.uniform();
      p.data()[i] = 2.0 * rng.uniform();
    }
    std::vector<Eigen::Index> perm(6);
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    for (Eigen::Index i = 5; i > 0; --i) std::swap(perm[static_cast<std::size_t>(i)], perm[rng.next_u32() % (i + 1)]);
    RMatrix hp(3, 6), pp(3, 6);
    for (Eigen::Index k = 0; k < 6; ++k) {
      hp.col(k) = h.col(perm[static_cast<std::size_t>(k)]);
      pp.col(k) = p.col(perm[static_cast<std::size_t>(k)]);
    }
    const double a = sum_rate(evaluate_link(h, PowerAllocation{p}, all));
    const double b = sum_rate(evaluate_link(hp, PowerAllocation{pp}, all));
    CHECK(a == doctest::Approx(b).epsilon(1e-13));
  }
}

TEST_CASE("diversity-one pattern matches a two-user power-domain NOMA oracle") {
  RngStream rng(37, 0);
  std::vector<std::size_t> order(6);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto b = diversity_one_pattern(3, 6, order);
  for (int trial = 0; trial < 100; ++trial) {
    RMatrix h(3, 6);
    for (Eigen::Index i = 0; i < h.size(); ++i) h.data()[i] = 0.1 + 5.0 * rng.uniform();
    RMatrix p = RMatrix::Zero(3, 6);
    for (Eigen::Index k = 0; k < 6; ++k) p(k % 3, k) = 0.1 + 3.0 * rng.uniform();
    const LinkState link = evaluate_link(h, PowerAllocation{p}, b.support());
    for (Eigen::Index n = 0; n < 3; ++n) {
      // Users n and n + 3 share beam n; the weaker one sees the stronger one's power.
      Eigen::Index weak = n;
      Eigen::Index strong = n + 3;
      if (h(n, strong) < h(n, weak)) std::swap(weak, strong);
      const double hw = h(n, weak) * h(n, weak);
      const double hs = h(n, strong) * h(n, strong);
      CHECK(link.sinrs(n, weak) == hw * p(n, weak) / (1.0 + hw * p(n, strong)));
      CHECK(link.sinrs(n, strong) == hs * p(n, strong) / (1.0 + hs * 0.0));
    }
  }
}

TEST_CASE("more power for the last user raises its rate") {
  RVector h(3);
  h << 0.5, 1.0, 2.0;
  const std::vector<std::size_t> order{0, 1, 2};
  RVector p(3);
  p << 1.0, 1.0, 0.1;
  double previous = -1.0;
  for (int step = 0; step < 20; ++step) {
    const double r = rate_from_sinr(sinr(h, p, order)(2));
    CHECK(r > previous);
    previous = r;
    p(2) *= 1.5;
  }
}
