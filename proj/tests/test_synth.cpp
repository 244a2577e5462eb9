#include <doctest.h>

#include <Eigen/Dense>

#include "sdr/linalg.hpp"
#include "sdr/synth.hpp"

using Eigen::MatrixXd;

TEST_CASE("generate: zero noise linear model reproduces the index exactly") {
  sdr::SynthSpec spec;
  spec.n = 50;
  spec.p = 4;
  spec.model = sdr::SynthModel::kLinear;
  spec.noise_sd = 0.0;
  spec.seed = 2;
  const auto gen = sdr::generate(spec);
  const MatrixXd expected = gen.data.X * gen.true_basis;
  CHECK((gen.data.Y.col(0) - expected.col(0)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("generate: fixed seed is bitwise reproducible") {
  sdr::SynthSpec spec;
  spec.n = 30;
  spec.p = 3;
  spec.seed = 99;
  const auto a = sdr::generate(spec);
  const auto b = sdr::generate(spec);
  CHECK((a.data.X - b.data.X).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.data.Y - b.data.Y).cwiseAbs().maxCoeff() == 0.0);
  spec.seed = 100;
  const auto c = sdr::generate(spec);
  CHECK((a.data.X - c.data.X).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("generate: large-sample covariance near identity for all x_dists") {
  for (auto dist : {sdr::XDist::kNormal, sdr::XDist::kEllipticT,
                    sdr::XDist::kUniform}) {
    sdr::SynthSpec spec;
    spec.n = 10000;
    spec.p = 3;
    spec.x_dist = dist;
    spec.seed = 123;
    const auto gen = sdr::generate(spec);
    const MatrixXd cov = sdr::sample_covariance(gen.data.X);
    CHECK((cov - MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 0.05 * 3);
  }
}

TEST_CASE("generate: sparse support model depends only on x1 + x2") {
  sdr::SynthSpec spec;
  spec.n = 20;
  spec.p = 10;
  spec.model = sdr::SynthModel::kSparseSupport;
  spec.noise_sd = 0.0;
  spec.seed = 4;
  const auto gen = sdr::generate(spec);
  for (int j = 2; j < 10; ++j) CHECK(gen.true_basis(j, 0) == 0.0);
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < spec.n; ++i) {
    const double idx = s * (gen.data.X(i, 0) + gen.data.X(i, 1));
    CHECK(gen.data.Y(i, 0) == doctest::Approx(idx * idx * idx));
  }
}
