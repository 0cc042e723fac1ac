#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "erlangtail/models.hpp"
#include "erlangtail/transforms.hpp"

namespace fixtures {

using erlangtail::ContinuousModelSpec;
using erlangtail::DiscreteModelSpec;
using erlangtail::GaussianChainParams;
using erlangtail::Rng;

// The ten-state reducible matrix; classes {1,4},{3,6,7},{2,10},{9},{5,8}.
Eigen::MatrixXd example_matrix();

// Classes of example_matrix() as 0-based vertex sets, in the order
// gamma_1 .. gamma_5 of the reference numbering.
std::vector<std::vector<std::size_t>> example_classes();

// Polynomial pencils, coefficient k multiplies z^k.
std::vector<Eigen::MatrixXd> baseline_pencil();     // [[z,1,z^2],[0,z,1],[0,0,z]]
std::vector<Eigen::MatrixXd> bottom_left_pencil();  // baseline with z^2 in (3,1)
std::vector<Eigen::MatrixXd> top_left_pencil();     // baseline with z^2 in (1,1)
std::vector<Eigen::MatrixXd> mixed_sign_pencil();   // [[z,1,1,0],[0,z,0,1],[0,0,-z,1],[0,0,0,z]]

// N = 1, gaussian(0, 2), lambda = 1: W_T is standard Laplace.
ContinuousModelSpec reed_model();

// mu = (0,0), sigma^2 = (2,2), theta = theta1, lambda = (0,1).
GaussianChainParams zero_drift_chain(double theta1 = 1.0);

// mu = (1,1), sigma^2 = (1/4,1/4), theta = theta1, lambda = (0,1).
GaussianChainParams drift_chain(double theta1 = 1.0);

// Chain 1 -> 2 -> 3 with equal rates in states 1 and 3 and a faster middle state.
GaussianChainParams three_state_chain();

// N = 1, survival u, unit increments: stationary W is geometric.
DiscreteModelSpec geometric_model(double u);
DiscreteModelSpec two_state_discrete();
DiscreteModelSpec reducible_discrete();  // two classes with equal rates

ContinuousModelSpec random_continuous_model(Rng& rng, std::size_t n, bool irreducible);
DiscreteModelSpec random_discrete_model(Rng& rng, std::size_t n);

// Random chain parameters; with `tie`, states 0 and n-1 share the same alpha_n.
GaussianChainParams random_chain(Rng& rng, std::size_t n, bool tie);

std::string data_file(const std::string& name);

}  // namespace fixtures
