#include "erlangtail/fuzz.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "erlangtail/errors.hpp"
#include "erlangtail/simulator.hpp"
#include "erlangtail/spectral.hpp"

namespace erlangtail {

FuzzInstance random_reducible_metzler(std::uint64_t seed, const FuzzOptions& options) {
  if (options.max_size == 0 || options.max_classes == 0 || options.max_class_size == 0) {
    throw InputError("fuzz sizes must be positive");
  }
  Rng rng = derive_stream(seed, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform_int = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };

  const std::size_t wanted = uniform_int(1, options.max_classes);
  std::vector<std::size_t> sizes;
  std::size_t total = 0;
  for (std::size_t k = 0; k < wanted; ++k) {
    const std::size_t room = options.max_size - total;
    if (room == 0) break;
    const std::size_t size = uniform_int(1, std::min(options.max_class_size, room));
    sizes.push_back(size);
    total += size;
  }
  const std::size_t m = sizes.size();
  std::vector<std::size_t> offset(m + 1, 0);
  std::partial_sum(sizes.begin(), sizes.end(), offset.begin() + 1);

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
  auto at = [&](std::size_t i, std::size_t j) -> double& {
    return a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };

  // Irreducible diagonal blocks: a cycle through the class plus random chords.
  for (std::size_t g = 0; g < m; ++g) {
    const std::size_t base = offset[g];
    const std::size_t k = sizes[g];
    for (std::size_t i = 0; i < k; ++i) {
      at(base + i, base + i) = 2.0 * unit(rng) - 1.0;
      if (k > 1) at(base + i, base + (i + 1) % k) = 0.5 + unit(rng);
      for (std::size_t j = 0; j < k; ++j) {
        if (j != i && j != (i + 1) % k && unit(rng) < 0.3) at(base + i, base + j) = 0.5 + unit(rng);
      }
    }
  }

  // Upper off-diagonal blocks, each nonzero block semipositive.
  for (std::size_t g = 0; g < m; ++g) {
    for (std::size_t h = g + 1; h < m; ++h) {
      if (unit(rng) >= options.upper_block_probability) continue;
      bool any = false;
      for (std::size_t i = 0; i < sizes[g]; ++i) {
        for (std::size_t j = 0; j < sizes[h]; ++j) {
          if (unit(rng) < 0.5) {
            at(offset[g] + i, offset[h] + j) = 0.25 + unit(rng);
            any = true;
          }
        }
      }
      if (!any) at(offset[g] + uniform_int(0, sizes[g] - 1), offset[h] + uniform_int(0, sizes[h] - 1)) = 0.25 + unit(rng);
    }
  }

  std::vector<bool> basic(m);
  for (std::size_t g = 0; g < m; ++g) basic[g] = unit(rng) < 0.5;
  basic[uniform_int(0, m - 1)] = true;

  for (std::size_t g = 0; g < m; ++g) {
    const Eigen::MatrixXd block = a.block(static_cast<Eigen::Index>(offset[g]), static_cast<Eigen::Index>(offset[g]),
                                          static_cast<Eigen::Index>(sizes[g]), static_cast<Eigen::Index>(sizes[g]));
    const double zeta = sizes[g] == 1 ? block(0, 0) : perron_data(block).root;
    const double target = basic[g] ? 0.0 : -(options.min_gap + 1.5 * unit(rng));
    for (std::size_t i = 0; i < sizes[g]; ++i) at(offset[g] + i, offset[g] + i) += target - zeta;
  }

  std::vector<std::size_t> perm(total);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  // perm[i] is the new label of vertex i.
  FuzzInstance out;
  out.matrix.resize(a.rows(), a.cols());
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) {
      out.matrix(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(perm[j])) = at(i, j);
    }
  }
  for (std::size_t g = 0; g < m; ++g) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < sizes[g]; ++i) members.push_back(perm[offset[g] + i]);
    std::sort(members.begin(), members.end());
    out.planted_classes.push_back(std::move(members));
  }
  out.planted_basic = std::move(basic);
  return out;
}

}  // namespace erlangtail
