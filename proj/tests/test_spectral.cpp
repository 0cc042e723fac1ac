#include <doctest.h>

#include <cmath>
#include <random>

#include "erlangtail/errors.hpp"
#include "erlangtail/fuzz.hpp"
#include "erlangtail/simulator.hpp"
#include "erlangtail/spectral.hpp"
#include "fixtures.hpp"

using namespace erlangtail;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd random_metzler(Rng& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = i == j ? 4.0 * u(rng) - 2.0 : (u(rng) < 0.5 ? u(rng) : 0.0);
  return a;
}

}  // namespace

TEST_CASE("spectral abscissa of small blocks") {
  MatrixXd a(2, 2);
  a << -3, 1, 12, 1;
  CHECK(spectral_abscissa(a) == doctest::Approx(3.0).epsilon(1e-12));
  MatrixXd b(3, 3);
  b << 0, 0, 1, 0, 0, 1, 1, 1, 0;
  CHECK(spectral_abscissa(b) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  MatrixXd c(2, 2);
  c << 1, 1, 5, -3;
  CHECK(spectral_abscissa(c) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(spectral_abscissa(MatrixXd::Zero(2, 3)), InputError);
}

TEST_CASE("spectral radius") {
  CHECK(spectral_radius(MatrixXd::Identity(4, 4)) == doctest::Approx(1.0));
  MatrixXd a(2, 2);
  a << 0, 2, 2, 0;
  CHECK(spectral_radius(a) == doctest::Approx(2.0));
  CHECK(spectral_abscissa(a) == doctest::Approx(2.0));
  MatrixXd b(2, 2);
  b << -3, 1, 12, 1;
  CHECK(spectral_radius(b) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("block abscissae of the example") {
  const MatrixXd a = fixtures::example_matrix();
  const auto p = scc_partition(digraph_of_matrix(a));
  const auto z = block_abscissae(a, p);
  const double expected[] = {3.0, std::sqrt(2.0), 3.0, 3.0, 2.0};
  const auto classes = fixtures::example_classes();
  for (std::size_t k = 0; k < 5; ++k) CHECK(std::abs(z[p.class_of(classes[k].front())] - expected[k]) < 1e-9);
  CHECK(spectral_abscissa_blockwise(a, p) == doctest::Approx(3.0));
}

TEST_CASE("shift and monotonicity of the abscissa") {
  Rng rng = derive_stream(21, 0);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<Eigen::Index>(1 + trial % 6);
    const MatrixXd a = random_metzler(rng, n);
    const double c = u(rng);
    CHECK(std::abs(spectral_abscissa(a + c * MatrixXd::Identity(n, n)) - spectral_abscissa(a) - c) < 1e-10);
    MatrixXd e = MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (unit(rng) < 0.3) e(i, j) = unit(rng);
    CHECK(spectral_abscissa(a) <= spectral_abscissa(a + e) + 1e-10);
  }
}

TEST_CASE("Perron data") {
  MatrixXd a(2, 2);
  a << -3, 1, 12, 1;
  const auto pd = perron_data(a);
  CHECK(pd.root == doctest::Approx(3.0));
  CHECK(pd.right(0) == doctest::Approx(1.0 / 7.0));
  CHECK(pd.right(1) == doctest::Approx(6.0 / 7.0));

  const auto one = perron_data(MatrixXd::Constant(1, 1, -2.5));
  CHECK(one.root == doctest::Approx(-2.5));
  CHECK(one.right(0) == doctest::Approx(1.0));
  CHECK(one.left(0) == doctest::Approx(1.0));

  MatrixXd s(2, 2);
  s << 0, 2, 2, 0;
  const auto ps = perron_data(s);
  CHECK(ps.root == doctest::Approx(2.0));
  CHECK(ps.right(0) == doctest::Approx(0.5));
  CHECK(ps.left(1) == doctest::Approx(0.5));

  MatrixXd reducible(2, 2);
  reducible << 1, 1, 0, 1;
  CHECK_THROWS_AS(perron_data(reducible), DomainError);
}

TEST_CASE("Perron data residuals, positivity and shift invariance") {
  Rng rng = derive_stream(22, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    MatrixXd a = random_metzler(rng, n);
    for (Eigen::Index i = 0; i < n; ++i) a(i, (i + 1) % n) = 0.5 + u(rng);  // irreducible
    const auto pd = perron_data(a);
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    CHECK((a * pd.right - pd.root * pd.right).norm() <= 1e-9 * scale);
    CHECK((pd.left.transpose() * a - pd.root * pd.left.transpose()).norm() <= 1e-9 * scale);
    CHECK(pd.right.minCoeff() > 0.0);
    CHECK(pd.left.minCoeff() > 0.0);
    CHECK(pd.right.sum() == doctest::Approx(1.0));
    CHECK(pd.root == doctest::Approx(spectral_abscissa(a)).epsilon(1e-10));

    const double c = 4.0 * u(rng) - 2.0;
    const auto shifted = perron_data(a + c * MatrixXd::Identity(n, n));
    CHECK(shifted.root == doctest::Approx(pd.root + c).epsilon(1e-10));
    CHECK((shifted.right - pd.right).norm() < 1e-9);
    CHECK((shifted.left - pd.left).norm() < 1e-9);
  }
}

TEST_CASE("eigenvalue index") {
  MatrixXd j3 = MatrixXd::Zero(3, 3);
  j3(0, 1) = j3(1, 2) = 1;
  const auto r = eigenvalue_index(j3, 0.0);
  CHECK(r.index == 3);
  CHECK(r.rank_sequence == std::vector<std::size_t>{3, 2, 1, 0, 0});

  Eigen::VectorXd d(3);
  d << 1, 1, 2;
  CHECK(eigenvalue_index(d.asDiagonal().toDenseMatrix(), 1.0).index == 1);
  CHECK_THROWS_AS(eigenvalue_index(d.asDiagonal().toDenseMatrix(), 1.5), DomainError);

  CHECK(eigenvalue_index(fixtures::example_matrix(), 3.0).index == 2);
}

TEST_CASE("eigenvalue index of companion matrices") {
  // Companion matrices are nonderogatory: the index of a root equals its multiplicity.
  for (int k = 1; k <= 4; ++k) {
    for (int other = 0; other <= 2; ++other) {
      // Coefficients of (x - 1)^k (x - 2)^other, highest degree first.
      std::vector<double> poly{1.0};
      auto times = [&](double root) {
        std::vector<double> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
          next[i] += poly[i];
          next[i + 1] -= root * poly[i];
        }
        poly = next;
      };
      for (int i = 0; i < k; ++i) times(1.0);
      for (int i = 0; i < other; ++i) times(2.0);
      const auto n = static_cast<Eigen::Index>(poly.size() - 1);
      MatrixXd c = MatrixXd::Zero(n, n);
      for (Eigen::Index i = 0; i + 1 < n; ++i) c(i + 1, i) = 1.0;
      for (Eigen::Index i = 0; i < n; ++i) c(i, n - 1) = -poly[static_cast<std::size_t>(n - i)];
      CHECK_MESSAGE(eigenvalue_index(c, 1.0).index == static_cast<std::size_t>(k), "k=" << k << " other=" << other);
    }
  }
}

TEST_CASE("Rothblum identity on fixed examples") {
  const auto ex = rothblum_check(fixtures::example_matrix());
  CHECK(ex.abscissa == doctest::Approx(3.0));
  CHECK(ex.index == 2);
  CHECK(ex.chain_length == 2);
  CHECK(ex.agree);

  MatrixXd irreducible(2, 2);
  irreducible << -1, 2, 1, -3;
  const auto ir = rothblum_check(irreducible);
  CHECK(ir.index == 1);
  CHECK(ir.chain_length == 1);
  CHECK(ir.agree);

  const auto zeros = rothblum_check(MatrixXd::Zero(2, 2));
  CHECK(zeros.index == 1);
  CHECK(zeros.chain_length == 1);
  CHECK(zeros.agree);

  CHECK_THROWS_AS(rothblum_check(-fixtures::example_matrix()), InputError);
}

TEST_CASE("Rothblum identity on the random corpus") {
  std::size_t deepest = 0;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    const auto inst = random_reducible_metzler(seed);
    const auto r = rothblum_check(inst.matrix);
    CHECK_MESSAGE(r.agree, "seed " << seed);
    deepest = std::max(deepest, r.chain_length);
  }
  CHECK(deepest >= 3);
}

TEST_CASE("fuzz instances have the planted structure") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto inst = random_reducible_metzler(seed);
    CHECK(inst.matrix.rows() <= 8);
    CHECK(is_metzler(inst.matrix));
    const auto p = scc_partition(digraph_of_matrix(inst.matrix));
    REQUIRE(p.class_count() == inst.planted_classes.size());
    const auto zetas = block_abscissae(inst.matrix, p);
    for (std::size_t g = 0; g < inst.planted_classes.size(); ++g) {
      const auto k = p.class_of(inst.planted_classes[g].front());
      CHECK(p.members(k) == inst.planted_classes[g]);
      if (inst.planted_basic[g]) {
        CHECK(std::abs(zetas[k]) < 1e-12);
      } else {
        CHECK(zetas[k] <= -0.5 + 1e-12);
      }
    }
  }
  CHECK(random_reducible_metzler(7).matrix == random_reducible_metzler(7).matrix);
}
