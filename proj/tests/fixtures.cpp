#include "fixtures.hpp"

#include <cmath>
#include <random>

namespace fixtures {

using erlangtail::TransformRole;
using erlangtail::TransformSpec;
using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd example_matrix() {
  MatrixXd a(10, 10);
  a << -3, 0, 0, 1, 0, 3, 0, 0, 0, 0,
        0, 1, 0, 0, 0, 0, 0, 0, 0, 4,
        0, 1, 0, 0, 0, 0, 1, 0, 0, 0,
       12, 0, 0, 1, 0, 0, 4, 0, 0, 0,
        0, 0, 0, 0, 1, 0, 0, 1, 0, 0,
        0, 0, 0, 0, 0, 0, 1, 0, 7, 0,
        0, 0, 1, 0, 0, 1, 0, 0, 0, 0,
        0, 0, 0, 0, 5, 0, 0, -3, 0, 0,
        0, 0, 0, 0, 0, 0, 0, 0, 3, 0,
        0, 2, 0, 0, 0, 0, 0, 2, 0, -1;
  return a;
}

std::vector<std::vector<std::size_t>> example_classes() {
  return {{0, 3}, {2, 5, 6}, {1, 9}, {8}, {4, 7}};
}

std::vector<MatrixXd> baseline_pencil() {
  std::vector<MatrixXd> c(3, MatrixXd::Zero(3, 3));
  c[0](0, 1) = 1;
  c[0](1, 2) = 1;
  c[1] = MatrixXd::Identity(3, 3);
  c[2](0, 2) = 1;
  return c;
}

std::vector<MatrixXd> bottom_left_pencil() {
  auto c = baseline_pencil();
  c[2](2, 0) = 1;
  return c;
}

std::vector<MatrixXd> top_left_pencil() {
  auto c = baseline_pencil();
  c[1](0, 0) = 0;
  c[2](0, 0) = 1;
  return c;
}

std::vector<MatrixXd> mixed_sign_pencil() {
  std::vector<MatrixXd> c(2, MatrixXd::Zero(4, 4));
  c[0](0, 1) = 1;
  c[0](0, 2) = 1;
  c[0](1, 3) = 1;
  c[0](2, 3) = 1;
  c[1].diagonal() << 1, 1, -1, 1;
  return c;
}

ContinuousModelSpec reed_model() {
  return erlangtail::gaussian_chain_model({{0.0}, {2.0}, {}, {1.0}});
}

GaussianChainParams zero_drift_chain(double theta1) { return {{0.0, 0.0}, {2.0, 2.0}, {theta1}, {0.0, 1.0}}; }

GaussianChainParams drift_chain(double theta1) { return {{1.0, 1.0}, {0.25, 0.25}, {theta1}, {0.0, 1.0}}; }

GaussianChainParams three_state_chain() { return {{0.0, 0.0, 0.0}, {2.0, 2.0, 2.0}, {1.0, 3.0}, {0.0, 0.0, 1.0}}; }

DiscreteModelSpec geometric_model(double u) {
  DiscreteModelSpec spec;
  spec.transition = MatrixXd::Ones(1, 1);
  spec.survival = MatrixXd::Constant(1, 1, u);
  spec.initial_law = VectorXd::Ones(1);
  spec.increments = {{TransformSpec::constant_shift(1.0)}};
  return spec;
}

DiscreteModelSpec two_state_discrete() {
  DiscreteModelSpec spec;
  spec.transition.resize(2, 2);
  spec.transition << 0.6, 0.4, 0.3, 0.7;
  spec.survival.resize(2, 2);
  spec.survival << 0.9, 0.8, 0.95, 0.85;
  spec.initial_law = VectorXd::Constant(2, 0.5);
  spec.increments = {{TransformSpec::gaussian(0.1, 0.2), TransformSpec::exponential_right(3.0)},
                     {TransformSpec::asymmetric_laplace(2.0, 1.0, 0.4), TransformSpec::gaussian(-0.1, 0.3)}};
  return spec;
}

DiscreteModelSpec reducible_discrete() {
  DiscreteModelSpec spec;
  spec.transition.resize(2, 2);
  spec.transition << 0.5, 0.5, 0.0, 1.0;
  spec.survival.resize(2, 2);
  spec.survival << 0.9, 0.9, 0.0, 0.45;
  spec.initial_law.resize(2);
  spec.initial_law << 1.0, 0.0;
  spec.increments = {{TransformSpec::gaussian(0.0, 1.0), TransformSpec::constant_shift(0.0)},
                     {TransformSpec::unit(), TransformSpec::gaussian(0.0, 1.0)}};
  return spec;
}

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

TransformSpec random_jump(Rng& rng) {
  switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
    case 0: return TransformSpec::unit();
    case 1: return TransformSpec::constant_shift(uniform(rng, -0.5, 0.5));
    case 2: return TransformSpec::gaussian(uniform(rng, -0.5, 0.5), uniform(rng, 0.05, 0.5));
    case 3: return TransformSpec::exponential_right(uniform(rng, 2.0, 5.0));
    default: return TransformSpec::asymmetric_laplace(uniform(rng, 2.0, 5.0), uniform(rng, 2.0, 5.0), uniform(rng, 0.2, 0.8));
  }
}

}  // namespace

ContinuousModelSpec random_continuous_model(Rng& rng, std::size_t n, bool irreducible) {
  const auto size = static_cast<Eigen::Index>(n);
  ContinuousModelSpec spec;
  spec.generator = MatrixXd::Zero(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j < size; ++j) {
      if (i == j) continue;
      const bool cycle_edge = irreducible && j == (i + 1) % size;
      if (cycle_edge || uniform(rng, 0, 1) < (irreducible ? 0.4 : 0.3)) spec.generator(i, j) = uniform(rng, 0.2, 2.0);
    }
    spec.generator(i, i) = -spec.generator.row(i).sum();
  }
  spec.initial_law = VectorXd::Constant(size, 1.0 / static_cast<double>(n));
  spec.intensities.resize(size);
  for (Eigen::Index i = 0; i < size; ++i) spec.intensities(i) = uniform(rng, 0.2, 1.5);
  for (std::size_t i = 0; i < n; ++i) {
    auto levy = TransformSpec::gaussian(uniform(rng, -1.0, 1.0), uniform(rng, 0.2, 2.0), TransformRole::levy_exponent);
    if (uniform(rng, 0, 1) < 0.3) levy = levy.with_compound_poisson(uniform(rng, 0.1, 1.0), random_jump(rng));
    spec.levy.push_back(levy);
  }
  spec.jumps.assign(n, std::vector<TransformSpec>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && spec.generator(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0) {
        spec.jumps[i][j] = random_jump(rng);
      }
    }
  }
  return spec;
}

DiscreteModelSpec random_discrete_model(Rng& rng, std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  DiscreteModelSpec spec;
  spec.transition.resize(size, size);
  spec.survival.resize(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j < size; ++j) {
      spec.transition(i, j) = uniform(rng, 0.1, 1.0);
      spec.survival(i, j) = uniform(rng, 0.3, 0.95);
    }
    spec.transition.row(i) /= spec.transition.row(i).sum();
  }
  spec.initial_law = VectorXd::Constant(size, 1.0 / static_cast<double>(n));
  spec.increments.assign(n, std::vector<TransformSpec>(n));
  for (auto& row : spec.increments) {
    for (auto& inc : row) inc = random_jump(rng);
  }
  return spec;
}

GaussianChainParams random_chain(Rng& rng, std::size_t n, bool tie) {
  GaussianChainParams p;
  for (std::size_t k = 0; k < n; ++k) {
    p.mean.push_back(uniform(rng, -1.0, 1.0));
    p.variance.push_back(uniform(rng, 0.2, 3.0));
    if (k + 1 < n) p.theta.push_back(uniform(rng, 0.2, 3.0));
    p.lambda.push_back(k + 1 < n && uniform(rng, 0, 1) < 0.5 ? 0.0 : uniform(rng, 0.2, 2.0));
  }
  if (tie && n >= 2) {
    // Give the last state the same mean, variance and total rate as the first.
    p.mean.back() = p.mean.front();
    p.variance.back() = p.variance.front();
    p.lambda.back() = p.theta.front() + p.lambda.front();
  }
  return p;
}

std::string data_file(const std::string& name) { return std::string(ERLANGTAIL_DATA_DIR) + "/" + name; }

}  // namespace fixtures
