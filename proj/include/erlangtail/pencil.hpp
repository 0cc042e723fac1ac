#pragma once

// Holomorphic Metzler-valued pencils z -> A(z), their spectral abscissa along
// the real axis, roots of s -> zeta(A(s)), and the pole structure of A(z)^-1.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "erlangtail/class_structure.hpp"
#include "erlangtail/spectral.hpp"
#include "erlangtail/transforms.hpp"

namespace erlangtail {

using TransformMatrix = std::vector<std::vector<TransformSpec>>;

enum class PencilKind { continuous, discrete, polynomial };

std::string to_string(PencilKind kind);

class MetzlerPencil {
 public:
  /// A(z) = Phi(z) + Pi (.) Psi(z) - Lambda. `levy` holds N Levy exponents,
  /// `jumps` an N x N grid of Laplace transforms (diagonal must be unit).
  static MetzlerPencil continuous(Eigen::MatrixXd generator, Eigen::VectorXd intensities,
                                  std::vector<TransformSpec> levy, TransformMatrix jumps);

  /// A(z) = Pi (.) Upsilon (.) Phi(z) - I.
  static MetzlerPencil discrete(Eigen::MatrixXd transition, Eigen::MatrixXd survival, TransformMatrix increments);

  /// A(z) = sum_k C_k z^k with at most five coefficient matrices.
  static MetzlerPencil polynomial(std::vector<Eigen::MatrixXd> coefficients);

  PencilKind kind() const { return kind_; }
  std::size_t size() const { return size_; }
  const Strip& domain() const { return domain_; }

  Eigen::MatrixXcd evaluate(Complex z) const;
  Eigen::MatrixXcd derivative(Complex z) const;
  Eigen::MatrixXd evaluate_real(double s) const;

  /// Off-diagonal pattern shared by A(s) for every real s in the domain
  /// (models), or the union of coefficient patterns (polynomial).
  const Digraph& symbolic_pattern() const { return pattern_; }

  /// Classes used for analysis at a real point: the symbolic pattern for
  /// model pencils, the pattern of A(s) itself for polynomial pencils.
  ClassPartition partition_at(double s) const;

  const Eigen::MatrixXd& generator() const { return generator_; }
  const Eigen::VectorXd& intensities() const { return intensities_; }
  const Eigen::MatrixXd& survival() const { return survival_; }
  const std::vector<Eigen::MatrixXd>& coefficients() const { return coefficients_; }

 private:
  MetzlerPencil() = default;
  void require_inside(Complex z) const;

  PencilKind kind_ = PencilKind::polynomial;
  std::size_t size_ = 0;
  Strip domain_;
  Digraph pattern_{0};
  ClassPartition symbolic_partition_;

  Eigen::MatrixXd generator_;    // Pi for both model kinds
  Eigen::VectorXd intensities_;  // continuous
  Eigen::MatrixXd survival_;     // discrete
  std::vector<TransformSpec> levy_;
  TransformMatrix transforms_;   // jumps (continuous) or increments (discrete)
  std::vector<Eigen::MatrixXd> coefficients_;
};

struct PencilTolerances {
  double root = 1e-10;          // |zeta(A(root))|, scaled by max(1, slope)
  double root_x = 1e-12;        // final bracket width
  double edge = 1e-6;           // boundary margin relative to strip width
  double basic = 1e-8;          // |zeta(A_gg(root))| for a basic class
  double derivative_step = 1e-5;
  double derivative_sign = 1e-8;
  SpectralTolerances spectral{};
};

/// Throws DomainError if s is outside the open domain.
double zeta_at(const MetzlerPencil& pencil, double s);

enum class Side { positive, negative };

enum class RootAbsence { none, zeta_negative_throughout_domain, domain_side_empty, zeta_positive_at_boundary_unreachable };

std::string to_string(RootAbsence reason);

struct RootResult {
  bool exists = false;
  double value = 0.0;
  double zeta_residual = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  RootAbsence reason = RootAbsence::none;
};

/// Root of s -> zeta(A(s)) on the requested side of zero. Requires
/// zeta(A(0)) < 0 (DomainError otherwise).
RootResult find_root(const MetzlerPencil& pencil, Side side, const PencilTolerances& tol = {});

std::vector<bool> basic_flags_at_root(const MetzlerPencil& pencil, double root, const PencilTolerances& tol = {});

struct LaurentProbe {
  std::vector<double> radii;
  std::vector<double> log_max;  // log max |g| on each circle
  std::vector<double> slopes;   // order estimate from each consecutive pair of radii
  double order_estimate = 0.0;
  int order = 0;
  bool stable = false;
  Eigen::MatrixXcd leading;     // coefficient of (z - root)^(-order); 1x1 when weighted
};

/// Numerical pole order of A(z)^-1 (entrywise) or of v^T A(z)^-1 w at root.
LaurentProbe laurent_probe(const MetzlerPencil& pencil, double root,
                           const std::optional<Eigen::VectorXd>& v = std::nullopt,
                           const std::optional<Eigen::VectorXd>& w = std::nullopt, int max_order = 8);

enum class SignCondition { satisfied, zero_derivative, mixed_signs };

std::string to_string(SignCondition c);

struct SignConditionReport {
  SignCondition status = SignCondition::satisfied;
  int eta = 0;                         // +1 or -1 when satisfied
  std::vector<double> left_derivative;  // per class; NaN for nonbasic classes
  std::vector<double> right_derivative;
};

/// One-sided derivatives of zeta(A_gg(s)) at root over the basic classes.
SignConditionReport check_sign_condition(const MetzlerPencil& pencil, double root, const ClassPartition& partition,
                                         const std::vector<bool>& basic_flags, const PencilTolerances& tol = {});

enum class PoleStatus { ok, condition_v_violated, condition_vi_violated };

std::string to_string(PoleStatus s);

/// Block sign codes for the leading Laurent coefficient.
enum BlockSign : int { block_zero = 0, block_positive = 1, block_negative = -1, block_mixed = 2 };

struct PoleReport {
  double root = 0.0;
  ClassPartition partition;
  std::vector<bool> basic_flags;
  std::size_t d = 0;
  std::optional<std::size_t> d_weighted;
  bool condition_v_ok = true;
  std::vector<std::pair<std::size_t, std::size_t>> condition_v_offenders;  // vertex pairs
  SignConditionReport sign_condition;
  PoleStatus status = PoleStatus::ok;
  std::string diagnosis;
  LaurentProbe probe;
  std::optional<LaurentProbe> weighted_probe;
  double numeric_order_estimate = 0.0;
  std::vector<std::vector<int>> block_signs;  // BlockSign per class pair
  bool block_signs_ok = false;                // matches the predicted sign pattern
};

/// Structural and numerical pole analysis at a root. Condition failures are
/// reported in `status`; with strict = true they throw DomainError instead.
PoleReport pole_order(const MetzlerPencil& pencil, double root, const std::optional<Eigen::VectorXd>& v = std::nullopt,
                      const std::optional<Eigen::VectorXd>& w = std::nullopt, bool strict = false,
                      const PencilTolerances& tol = {});

/// Sign codes of each class block of a matrix, relative cutoff `zero_tol`.
std::vector<std::vector<int>> class_block_signs(const Eigen::MatrixXd& matrix, const ClassPartition& partition,
                                                double zero_tol = 1e-8);

/// (y^T A'(root) x)^-1 x y^T from the Perron data of an irreducible A(root).
Eigen::MatrixXd residue_simple(const MetzlerPencil& pencil, double root, const PencilTolerances& tol = {});

/// -v^T A(z)^-1 w by an LU solve. Requires zeta(A(Re z)) < 0.
Complex transform_value(const MetzlerPencil& pencil, Complex z, const Eigen::VectorXd& v, const Eigen::VectorXd& w);

}  // namespace erlangtail
