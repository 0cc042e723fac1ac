#pragma once

// Markov-modulated models of a stopped or regenerating additive process W,
// their assumption checks, and the tail report built from the pencil.

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "erlangtail/class_structure.hpp"
#include "erlangtail/pencil.hpp"
#include "erlangtail/transforms.hpp"

namespace erlangtail {

/// W runs as a Markov-modulated Levy process and is stopped at the first
/// event of a state-dependent Poisson clock.
struct ContinuousModelSpec {
  Eigen::MatrixXd generator;     // Pi
  Eigen::VectorXd initial_law;   // varpi
  Eigen::VectorXd intensities;   // lambda
  std::vector<TransformSpec> levy;
  TransformMatrix jumps;         // psi_{m,n}; unit where pi_{m,n} = 0

  std::size_t size() const { return static_cast<std::size_t>(generator.rows()); }
};

/// W accumulates increments along a Markov chain and resets to zero when
/// the survival coin fails.
struct DiscreteModelSpec {
  Eigen::MatrixXd transition;    // Pi, row-stochastic
  Eigen::MatrixXd survival;      // Upsilon
  Eigen::VectorXd initial_law;   // varpi, law of J after a reset
  TransformMatrix increments;

  std::size_t size() const { return static_cast<std::size_t>(transition.rows()); }
};

struct ClauseResult {
  std::string id;
  std::string text;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  bool valid = false;
  std::vector<ClauseResult> clauses;
  double zeta_at_zero = 0.0;

  std::vector<std::string> failed_ids() const;
};

/// Shape errors throw InputError; assumption failures go into the report.
ValidationReport validate(const ContinuousModelSpec& spec);
ValidationReport validate(const DiscreteModelSpec& spec);

MetzlerPencil build_pencil(const ContinuousModelSpec& spec);
MetzlerPencil build_pencil(const DiscreteModelSpec& spec);

struct TailSide {
  bool exists = false;
  double rate = 0.0;       // alpha for the upper tail, beta for the lower tail
  std::size_t d = 0;
  std::size_t d_weighted = 0;
  RootResult root;
  std::vector<bool> basic_flags;
  SignCondition sign_condition = SignCondition::satisfied;
  PoleStatus pole_status = PoleStatus::ok;
  int numeric_order = 0;
  bool numeric_order_stable = false;
};

struct TailReport {
  PencilKind kind = PencilKind::continuous;
  TailSide upper;
  TailSide lower;
  ClassPartition classes;
  InitialFinal initial_final;
  double zeta_at_zero = 0.0;
  Strip strip;
};

/// Throws DomainError if the spec fails validation.
TailReport analyze(const ContinuousModelSpec& spec, const PencilTolerances& tol = {});
TailReport analyze(const DiscreteModelSpec& spec, const PencilTolerances& tol = {});

struct GaussianChainParams {
  std::vector<double> mean;      // mu_n
  std::vector<double> variance;  // sigma_n^2
  std::vector<double> theta;     // rate n -> n+1, length N-1
  std::vector<double> lambda;    // stopping intensities
};

struct ClosedFormTails {
  double alpha = 0.0;
  std::size_t d_alpha = 0;
  double beta = 0.0;
  std::size_t d_beta = 0;
};

/// Tails of the Gaussian chain 1 -> 2 -> ... -> N started in state 1.
ClosedFormTails closed_form_gaussian_chain(const GaussianChainParams& params, double tie_tol = 1e-9);

/// The continuous model of that chain (no transition jumps).
ContinuousModelSpec gaussian_chain_model(const GaussianChainParams& params);

}  // namespace erlangtail
