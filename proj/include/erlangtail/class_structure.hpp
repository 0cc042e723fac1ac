#pragma once

// Combinatorial structure of square matrices: digraphs, strongly connected
// classes, the access order between classes, and chains of classes.
//
// Vertices and classes are 0-based throughout the API. Reports that face
// users (CLI output) convert vertices to 1-based labels.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace erlangtail {

/// Directed graph on vertices {0, ..., N-1} without self-loops.
class Digraph {
 public:
  explicit Digraph(std::size_t vertex_count);

  /// Adds the edge (from, to). Self-loops and duplicates are ignored.
  void add_edge(std::size_t from, std::size_t to);

  std::size_t vertex_count() const { return successors_.size(); }
  const std::vector<std::size_t>& successors(std::size_t v) const { return successors_.at(v); }
  bool has_edge(std::size_t from, std::size_t to) const;
  std::size_t edge_count() const;

 private:
  std::vector<std::vector<std::size_t>> successors_;
};

/// Edge (m, n), m != n, is present iff |matrix(m, n)| > threshold.
/// The diagonal never contributes.
Digraph digraph_of_matrix(const Eigen::MatrixXd& matrix, double threshold = 0.0);

/// Same, from an explicit boolean sparsity pattern.
Digraph digraph_of_pattern(const std::vector<std::vector<bool>>& pattern);

/// Strongly connected components listed in a topological order of the access
/// relation, together with the reflexive-transitive access relation.
class ClassPartition {
 public:
  ClassPartition() = default;
  ClassPartition(std::vector<std::vector<std::size_t>> classes,
                 std::vector<std::vector<bool>> class_edges);

  std::size_t class_count() const { return classes_.size(); }
  std::size_t vertex_count() const { return class_of_.size(); }
  const std::vector<std::vector<std::size_t>>& classes() const { return classes_; }
  const std::vector<std::size_t>& members(std::size_t k) const { return classes_.at(k); }
  std::size_t class_of(std::size_t vertex) const { return class_of_.at(vertex); }

  /// gamma_j has access to gamma_k (reflexive).
  bool accesses(std::size_t j, std::size_t k) const { return access_[j][k]; }
  /// gamma_j strictly precedes gamma_k.
  bool precedes(std::size_t j, std::size_t k) const { return j != k && access_[j][k]; }
  /// Some vertex of gamma_j has a direct edge into gamma_k (j != k).
  bool has_direct_edge(std::size_t j, std::size_t k) const { return class_edges_[j][k]; }

  bool is_irreducible() const { return classes_.size() == 1; }

 private:
  std::vector<std::vector<std::size_t>> classes_;
  std::vector<std::size_t> class_of_;
  std::vector<std::vector<bool>> class_edges_;
  std::vector<std::vector<bool>> access_;
};

/// SCC decomposition (Tarjan). Ties in the topological order are broken by the
/// smallest vertex label in each class, so the output is deterministic.
ClassPartition scc_partition(const Digraph& graph);

bool is_irreducible(const Digraph& graph);

struct InitialFinal {
  std::vector<std::size_t> initial;
  std::vector<std::size_t> final_classes;
};

InitialFinal initial_and_final_classes(const ClassPartition& partition);

/// perm[new_position] = old vertex. Applying it to rows and columns gives a
/// block upper triangular matrix with the classes in listed order.
std::vector<std::size_t> block_permutation(const ClassPartition& partition);

/// B(i, j) = A(perm[i], perm[j]).
Eigen::MatrixXd permute_symmetric(const Eigen::MatrixXd& matrix, const std::vector<std::size_t>& perm);

/// Checks that `matrix` permuted by `perm` is block upper triangular with
/// irreducible diagonal blocks, where consecutive blocks have the given sizes.
bool is_block_upper_triangular(const Eigen::MatrixXd& matrix, const std::vector<std::size_t>& perm,
                               const std::vector<std::size_t>& block_sizes, double threshold = 0.0);

/// Selects which classes count towards chain length and, optionally, which
/// vertices the first and last class of a chain must meet.
struct ChainQuery {
  std::vector<bool> basic_flags;
  std::optional<std::vector<std::size_t>> source_support;
  std::optional<std::vector<std::size_t>> target_support;
};

/// Maximum number of basic classes over all (support-restricted) chains.
/// Weighted longest path on the condensation DAG; 0 if no chain qualifies.
std::size_t longest_chain_length(const ClassPartition& partition, const ChainQuery& query);

/// Longest chain lengths between every ordered pair of classes:
/// result[j][k] = max basic-class count over chains from gamma_j to gamma_k,
/// or 0 when gamma_j does not access gamma_k.
std::vector<std::vector<std::size_t>> pairwise_chain_lengths(const ClassPartition& partition,
                                                             const std::vector<bool>& basic_flags);

bool is_valid_chain(const ClassPartition& partition, const std::vector<std::size_t>& chain);

/// A chain whose consecutive connecting blocks are semipositive.
/// Throws InputError if `chain` is not a valid chain.
bool is_direct_chain(const ClassPartition& partition, const Eigen::MatrixXd& matrix,
                     const std::vector<std::size_t>& chain);

/// Debug utility: all chains, each as an increasing list of class indices.
/// Refuses partitions with more than 12 classes.
std::vector<std::vector<std::size_t>> enumerate_chains(const ClassPartition& partition);

/// Vertex indices of nonzero entries of a nonnegative vector.
std::vector<std::size_t> support_of(const Eigen::VectorXd& v);

}  // namespace erlangtail
