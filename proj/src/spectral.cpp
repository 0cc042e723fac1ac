#include "erlangtail/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "erlangtail/errors.hpp"

namespace erlangtail {

namespace {

Eigen::VectorXcd eigenvalues_of(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) throw InputError("matrix must be square and nonempty");
  if (!matrix.allFinite()) throw InputError("matrix has non-finite entries");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(matrix, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericError("eigensolver did not converge");
  return solver.eigenvalues();
}

std::size_t numerical_rank_absolute(const Eigen::MatrixXd& matrix, double cutoff) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix);
  const auto& sv = svd.singularValues();
  return static_cast<std::size_t>((sv.array() > cutoff).count());
}

}  // namespace

double spectral_abscissa(const Eigen::MatrixXd& matrix) {
  const auto values = eigenvalues_of(matrix);
  double best = values(0).real();
  for (Eigen::Index i = 1; i < values.size(); ++i) best = std::max(best, values(i).real());
  return best;
}

double spectral_radius(const Eigen::MatrixXd& matrix) {
  const auto values = eigenvalues_of(matrix);
  double best = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) best = std::max(best, std::abs(values(i)));
  return best;
}

Eigen::MatrixXd principal_block(const Eigen::MatrixXd& matrix, const std::vector<std::size_t>& vertices) {
  const auto n = static_cast<Eigen::Index>(vertices.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = matrix(static_cast<Eigen::Index>(vertices[i]), static_cast<Eigen::Index>(vertices[j]));
    }
  }
  return out;
}

std::vector<double> block_abscissae(const Eigen::MatrixXd& matrix, const ClassPartition& partition) {
  if (static_cast<std::size_t>(matrix.rows()) != partition.vertex_count()) {
    throw InputError("matrix does not match the class partition");
  }
  std::vector<double> out;
  out.reserve(partition.class_count());
  for (const auto& members : partition.classes()) {
    if (members.size() == 1) {
      const auto v = static_cast<Eigen::Index>(members.front());
      out.push_back(matrix(v, v));
    } else {
      out.push_back(spectral_abscissa(principal_block(matrix, members)));
    }
  }
  return out;
}

double spectral_abscissa_blockwise(const Eigen::MatrixXd& matrix, const ClassPartition& partition) {
  const auto values = block_abscissae(matrix, partition);
  return *std::max_element(values.begin(), values.end());
}

bool is_metzler(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols()) return false;
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (i != j && !(matrix(i, j) >= 0.0)) return false;
    }
  }
  return true;
}

PerronData perron_data(const Eigen::MatrixXd& matrix, bool assert_irreducible, const SpectralTolerances& tol) {
  if (!is_metzler(matrix)) throw InputError("Perron data requires a Metzler matrix");
  if (assert_irreducible && !is_irreducible(digraph_of_matrix(matrix))) {
    throw DomainError("Perron data requires an irreducible matrix");
  }
  const Eigen::Index n = matrix.rows();
  const double shift = 1.0 + matrix.diagonal().cwiseAbs().maxCoeff();
  const Eigen::MatrixXd shifted = matrix + shift * Eigen::MatrixXd::Identity(n, n);

  PerronData out;
  out.root = spectral_abscissa(shifted) - shift;
  if (n == 1) {
    out.right = out.left = Eigen::VectorXd::Ones(1);
    return out;
  }

  // Null vectors of the shifted matrix minus its Perron root.
  const Eigen::MatrixXd singular = shifted - (out.root + shift) * Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(singular, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd right = svd.matrixV().col(n - 1);
  Eigen::VectorXd left = svd.matrixU().col(n - 1);
  right /= right.sum();
  left /= left.sum();
  if (!(right.minCoeff() > 0.0) || !(left.minCoeff() > 0.0)) {
    throw NumericError("Perron vector has nonpositive entries");
  }
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  const double right_residual = (matrix * right - out.root * right).norm() / right.norm();
  const double left_residual = (matrix.transpose() * left - out.root * left).norm() / left.norm();
  if (right_residual > tol.eig * scale || left_residual > tol.eig * scale) {
    throw NumericError("Perron eigen-residual above tolerance (" + std::to_string(std::max(right_residual, left_residual)) +
                       ")");
  }
  out.right = std::move(right);
  out.left = std::move(left);
  return out;
}

IndexResult eigenvalue_index(const Eigen::MatrixXd& matrix, double lambda, const SpectralTolerances& tol) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) throw InputError("matrix must be square and nonempty");
  const Eigen::Index n = matrix.rows();
  const auto size = static_cast<std::size_t>(n);
  const Eigen::MatrixXd shifted = matrix - lambda * Eigen::MatrixXd::Identity(n, n);

  IndexResult out;
  out.eigenvalue = lambda;
  out.rank_sequence.push_back(size);
  // Scale once so that roundoff in a nilpotent part stays below the cutoff;
  // renormalizing every power would amplify it back to O(1).
  const double scale = std::max(1.0, shifted.cwiseAbs().maxCoeff());
  const Eigen::MatrixXd step = shifted / scale;
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t k = 1; k <= size + 1; ++k) {
    power = power * step;
    out.rank_sequence.push_back(numerical_rank_absolute(power, tol.rank));
    if (out.rank_sequence[k] == out.rank_sequence[k - 1]) {
      if (k == 1) throw DomainError("lambda is not an eigenvalue at the configured rank tolerance");
      out.index = k - 1;
      return out;
    }
    if (out.rank_sequence[k] > out.rank_sequence[k - 1]) {
      throw NumericError("rank sequence increased; rank tolerance is misconfigured");
    }
  }
  throw NumericError("rank sequence did not plateau");
}

RothblumResult rothblum_check(const Eigen::MatrixXd& matrix, const SpectralTolerances& tol) {
  if (!is_metzler(matrix)) throw InputError("Rothblum check requires a Metzler matrix");
  const auto partition = scc_partition(digraph_of_matrix(matrix));
  const auto abscissae = block_abscissae(matrix, partition);

  RothblumResult out;
  out.abscissa = *std::max_element(abscissae.begin(), abscissae.end());
  const double cutoff = tol.basic * std::max(1.0, std::abs(out.abscissa));
  for (double a : abscissae) out.basic_flags.push_back(std::abs(a - out.abscissa) <= cutoff);
  out.index = eigenvalue_index(matrix, out.abscissa, tol).index;
  out.chain_length = longest_chain_length(partition, ChainQuery{out.basic_flags, std::nullopt, std::nullopt});
  out.agree = out.index == out.chain_length;
  return out;
}

}  // namespace erlangtail
