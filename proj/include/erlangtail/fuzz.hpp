#pragma once

// Random reducible Metzler matrices with a controlled basic set, for
// exercising the index-versus-chain-length property.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace erlangtail {

struct FuzzInstance {
  Eigen::MatrixXd matrix;
  std::vector<std::vector<std::size_t>> planted_classes;  // vertex sets after the hiding permutation
  std::vector<bool> planted_basic;
};

struct FuzzOptions {
  std::size_t max_size = 8;
  std::size_t max_classes = 5;
  std::size_t max_class_size = 3;
  double upper_block_probability = 0.5;
  double min_gap = 0.5;  // nonbasic classes sit at least this far below the top
};

/// Deterministic in `seed`. Each class block is irreducible; every class is
/// shifted so that its abscissa is 0 (basic) or at most -min_gap.
FuzzInstance random_reducible_metzler(std::uint64_t seed, const FuzzOptions& options = {});

}  // namespace erlangtail
