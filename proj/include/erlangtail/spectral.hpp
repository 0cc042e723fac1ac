#pragma once

// Dense eigenstructure routines for small real matrices.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "erlangtail/class_structure.hpp"

namespace erlangtail {

struct SpectralTolerances {
  double eig = 1e-9;     // relative eigen-residual
  double rank = 1e-8;    // singular-value cutoff relative to the largest one
  double basic = 1e-8;   // basic-class test, scaled by max(1, |zeta|)
};

/// Maximum real part over the full spectrum (dense general eigensolver).
double spectral_abscissa(const Eigen::MatrixXd& matrix);

/// Maximum modulus over the full spectrum.
double spectral_radius(const Eigen::MatrixXd& matrix);

/// Principal submatrix on the given vertex set.
Eigen::MatrixXd principal_block(const Eigen::MatrixXd& matrix, const std::vector<std::size_t>& vertices);

/// Spectral abscissa of each diagonal class block.
std::vector<double> block_abscissae(const Eigen::MatrixXd& matrix, const ClassPartition& partition);

/// zeta(A) as the maximum over diagonal class blocks. Equal to
/// spectral_abscissa(A) whenever `partition` is the class partition of A,
/// but each block has a simple Perron root so the result stays accurate
/// when A itself has a defective eigenvalue at zeta(A).
double spectral_abscissa_blockwise(const Eigen::MatrixXd& matrix, const ClassPartition& partition);

bool is_metzler(const Eigen::MatrixXd& matrix);

/// Perron root with positive right/left eigenvectors, each summing to one.
struct PerronData {
  double root = 0.0;
  Eigen::VectorXd right;
  Eigen::VectorXd left;
};

/// Perron data of an irreducible Metzler matrix, computed on the nonnegative
/// shift A + cI with c = 1 + max|diagonal|.
PerronData perron_data(const Eigen::MatrixXd& matrix, bool assert_irreducible = true,
                       const SpectralTolerances& tol = {});

struct IndexResult {
  double eigenvalue = 0.0;
  std::size_t index = 0;
  std::vector<std::size_t> rank_sequence;  // rank of (B - lambda I)^k, k = 0..index+1
};

/// Index of lambda from numerical ranks of powers of (B - lambda I).
IndexResult eigenvalue_index(const Eigen::MatrixXd& matrix, double lambda, const SpectralTolerances& tol = {});

struct RothblumResult {
  double abscissa = 0.0;
  std::size_t index = 0;
  std::size_t chain_length = 0;
  bool agree = false;
  std::vector<bool> basic_flags;
};

/// Index of zeta(B) versus the longest chain of classes of B.
RothblumResult rothblum_check(const Eigen::MatrixXd& matrix, const SpectralTolerances& tol = {});

}  // namespace erlangtail
