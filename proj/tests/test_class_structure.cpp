#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "erlangtail/class_structure.hpp"
#include "erlangtail/errors.hpp"
#include "erlangtail/simulator.hpp"
#include "fixtures.hpp"

using namespace erlangtail;
using Eigen::MatrixXd;

namespace {

// Class index of each reference class in our partition.
std::vector<std::size_t> example_labels(const ClassPartition& p) {
  std::vector<std::size_t> out;
  for (const auto& members : fixtures::example_classes()) out.push_back(p.class_of(members.front()));
  return out;
}

// Reachability by Floyd-Warshall on the raw adjacency, independent of the SCC code.
std::vector<std::vector<bool>> reachability(const MatrixXd& a) {
  const auto n = static_cast<std::size_t>(a.rows());
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    r[i][i] = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0) r[i][j] = true;
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = true;
  return r;
}

MatrixXd random_sparse(Rng& rng, std::size_t n, double density) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MatrixXd a = MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (u(rng) < density) a(i, j) = 1.0 + u(rng);
  return a;
}

// Maximum basic count over all subsets of classes that form a chain, by brute force.
std::size_t brute_force_longest(const std::vector<std::vector<bool>>& precedes, const std::vector<bool>& basic,
                                const std::vector<bool>& may_start, const std::vector<bool>& may_end) {
  const std::size_t m = basic.size();
  std::size_t best = 0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
    std::vector<std::size_t> members;
    for (std::size_t k = 0; k < m; ++k)
      if (mask & (std::size_t{1} << k)) members.push_back(k);
    // In a chain the number of predecessors inside the set is a total order.
    std::vector<std::pair<std::size_t, std::size_t>> ranked;
    for (auto k : members) {
      std::size_t below = 0;
      for (auto j : members) below += precedes[j][k] ? 1 : 0;
      ranked.push_back({below, k});
    }
    std::sort(ranked.begin(), ranked.end());
    for (std::size_t i = 0; i < ranked.size(); ++i) members[i] = ranked[i].second;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < members.size(); ++i) ok = ok && precedes[members[i]][members[i + 1]];
    if (!ok || !may_start[members.front()] || !may_end[members.back()]) continue;
    std::size_t count = 0;
    for (auto k : members) count += basic[k] ? 1 : 0;
    best = std::max(best, count);
  }
  return best;
}

}  // namespace

TEST_CASE("digraph of the example matrix") {
  const auto g = digraph_of_matrix(fixtures::example_matrix());
  CHECK(g.vertex_count() == 10);
  CHECK(g.has_edge(0, 3));
  CHECK(g.has_edge(3, 0));
  CHECK(g.has_edge(0, 5));
  CHECK(g.has_edge(5, 8));
  CHECK(g.has_edge(9, 7));
  CHECK(g.successors(8).empty());
  for (std::size_t v = 0; v < 10; ++v) CHECK_FALSE(g.has_edge(v, v));
}

TEST_CASE("digraph ignores the diagonal") {
  CHECK(digraph_of_matrix(MatrixXd::Zero(3, 3)).edge_count() == 0);
  CHECK(digraph_of_matrix(MatrixXd::Identity(5, 5)).edge_count() == 0);
  CHECK_THROWS_AS(digraph_of_matrix(MatrixXd::Zero(2, 3)), InputError);
}

TEST_CASE("digraph threshold drops small entries") {
  MatrixXd a = MatrixXd::Zero(2, 2);
  a(0, 1) = 1e-14;
  a(1, 0) = 0.5;
  CHECK(digraph_of_matrix(a).edge_count() == 2);
  CHECK(digraph_of_matrix(a, 1e-12).edge_count() == 1);
}

TEST_CASE("classes and access order of the example") {
  const auto p = scc_partition(digraph_of_matrix(fixtures::example_matrix()));
  REQUIRE(p.class_count() == 5);
  std::set<std::vector<std::size_t>> found(p.classes().begin(), p.classes().end());
  for (const auto& members : fixtures::example_classes()) CHECK(found.count(members) == 1);

  const auto g = example_labels(p);
  // The four generating relations and their transitive consequences, nothing else.
  const std::set<std::pair<int, int>> expected = {{0, 1}, {1, 2}, {1, 3}, {2, 4}, {0, 2}, {0, 3}, {0, 4}, {1, 4}};
  for (int j = 0; j < 5; ++j) {
    for (int k = 0; k < 5; ++k) {
      CHECK_MESSAGE(p.precedes(g[j], g[k]) == (expected.count({j, k}) == 1), "pair " << j + 1 << "," << k + 1);
    }
  }
  CHECK_FALSE(p.accesses(g[3], g[2]));
  CHECK_FALSE(p.accesses(g[2], g[3]));
  CHECK_FALSE(p.accesses(g[3], g[4]));
  CHECK_FALSE(p.accesses(g[4], g[3]));
}

TEST_CASE("class listing is a linearization") {
  Rng rng = derive_stream(11, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = scc_partition(digraph_of_matrix(random_sparse(rng, 8, 0.15)));
    for (std::size_t j = 0; j < p.class_count(); ++j)
      for (std::size_t k = j + 1; k < p.class_count(); ++k) CHECK_FALSE(p.precedes(k, j));
  }
}

TEST_CASE("complete and empty digraphs") {
  MatrixXd complete = MatrixXd::Ones(6, 6);
  CHECK(scc_partition(digraph_of_matrix(complete)).class_count() == 1);
  const auto empty = scc_partition(Digraph(4));
  CHECK(empty.class_count() == 4);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t k = 0; k < 4; ++k) CHECK_FALSE(empty.precedes(j, k));
  CHECK_THROWS_AS(scc_partition(Digraph(0)), InputError);
}

TEST_CASE("irreducibility") {
  CHECK_FALSE(is_irreducible(digraph_of_matrix(fixtures::example_matrix())));
  MatrixXd two_cycle(2, 2);
  two_cycle << 0, 1, 1, 0;
  CHECK(is_irreducible(digraph_of_matrix(two_cycle)));
  CHECK(is_irreducible(Digraph(1)));
}

TEST_CASE("initial and final classes") {
  const auto p = scc_partition(digraph_of_matrix(fixtures::example_matrix()));
  const auto g = example_labels(p);
  const auto ends = initial_and_final_classes(p);
  CHECK(ends.initial == std::vector<std::size_t>{g[0]});
  std::vector<std::size_t> finals = ends.final_classes;
  std::sort(finals.begin(), finals.end());
  std::vector<std::size_t> expected{g[3], g[4]};
  std::sort(expected.begin(), expected.end());
  CHECK(finals == expected);

  const auto single = initial_and_final_classes(scc_partition(digraph_of_matrix(MatrixXd::Ones(3, 3))));
  CHECK(single.initial == std::vector<std::size_t>{0});
  CHECK(single.final_classes == std::vector<std::size_t>{0});

  MatrixXd chain = MatrixXd::Zero(3, 3);
  chain(0, 1) = 1;
  chain(1, 2) = 1;
  const auto c = initial_and_final_classes(scc_partition(digraph_of_matrix(chain)));
  CHECK(c.initial == std::vector<std::size_t>{0});
  CHECK(c.final_classes == std::vector<std::size_t>{2});
}

TEST_CASE("block permutation triangularizes") {
  const MatrixXd a = fixtures::example_matrix();
  const auto p = scc_partition(digraph_of_matrix(a));
  std::vector<std::size_t> sizes;
  for (const auto& c : p.classes()) sizes.push_back(c.size());
  CHECK(is_block_upper_triangular(a, block_permutation(p), sizes));

  // Reference ordering 1,4,3,6,7,2,10,9,5,8 (0-based below).
  const std::vector<std::size_t> by_example{0, 3, 2, 5, 6, 1, 9, 8, 4, 7};
  CHECK(is_block_upper_triangular(a, by_example, {2, 3, 2, 1, 2}));

  // Identity order of a reducible matrix is not triangular.
  std::vector<std::size_t> identity(10);
  for (std::size_t i = 0; i < 10; ++i) identity[i] = i;
  CHECK_FALSE(is_block_upper_triangular(a, identity, sizes));

  const MatrixXd d = MatrixXd::Identity(4, 4) * 3.0;
  const auto pd = scc_partition(digraph_of_matrix(d));
  CHECK(is_block_upper_triangular(d, block_permutation(pd), {1, 1, 1, 1}));

  Rng rng = derive_stream(12, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const MatrixXd r = random_sparse(rng, 7, 0.2);
    const auto pr = scc_partition(digraph_of_matrix(r));
    std::vector<std::size_t> s;
    for (const auto& c : pr.classes()) s.push_back(c.size());
    CHECK(is_block_upper_triangular(r, block_permutation(pr), s));
  }
}

TEST_CASE("longest chain of the example") {
  const auto p = scc_partition(digraph_of_matrix(fixtures::example_matrix()));
  const auto g = example_labels(p);
  ChainQuery q;
  q.basic_flags.assign(5, false);
  q.basic_flags[g[0]] = q.basic_flags[g[2]] = q.basic_flags[g[3]] = true;
  CHECK(longest_chain_length(p, q) == 2);

  // Chains starting in gamma_2 and ending in gamma_4.
  q.source_support = std::vector<std::size_t>{2};
  q.target_support = std::vector<std::size_t>{8};
  CHECK(longest_chain_length(p, q) == 1);

  ChainQuery wrong;
  wrong.basic_flags.assign(3, true);
  CHECK_THROWS_AS(longest_chain_length(p, wrong), InputError);
}

TEST_CASE("longest chain on a chain DAG and with no basic class") {
  MatrixXd chain = MatrixXd::Zero(5, 5);
  for (Eigen::Index i = 0; i + 1 < 5; ++i) chain(i, i + 1) = 1;
  const auto p = scc_partition(digraph_of_matrix(chain));
  CHECK(longest_chain_length(p, {std::vector<bool>(5, true), std::nullopt, std::nullopt}) == 5);
  CHECK(longest_chain_length(p, {std::vector<bool>(5, false), std::nullopt, std::nullopt}) == 0);
}

TEST_CASE("longest chain agrees with brute force") {
  Rng rng = derive_stream(13, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const MatrixXd a = random_sparse(rng, 7, 0.12);
    const auto p = scc_partition(digraph_of_matrix(a));
    const auto reach = reachability(a);
    const std::size_t m = p.class_count();
    std::vector<std::vector<bool>> precedes(m, std::vector<bool>(m, false));
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        precedes[j][k] = j != k && reach[p.members(j).front()][p.members(k).front()];
    std::vector<bool> basic(m);
    for (std::size_t k = 0; k < m; ++k) basic[k] = u(rng) < 0.5;

    ChainQuery q{basic, std::nullopt, std::nullopt};
    const std::vector<bool> all(m, true);
    CHECK(longest_chain_length(p, q) == brute_force_longest(precedes, basic, all, all));

    // Support-restricted variant.
    std::vector<std::size_t> src;
    std::vector<std::size_t> dst;
    for (std::size_t v = 0; v < 7; ++v) {
      if (u(rng) < 0.3) src.push_back(v);
      if (u(rng) < 0.3) dst.push_back(v);
    }
    std::vector<bool> may_start(m, false);
    std::vector<bool> may_end(m, false);
    for (auto v : src) may_start[p.class_of(v)] = true;
    for (auto v : dst) may_end[p.class_of(v)] = true;
    q.source_support = src;
    q.target_support = dst;
    CHECK(longest_chain_length(p, q) == brute_force_longest(precedes, basic, may_start, may_end));
  }
}

TEST_CASE("access order agrees with path search") {
  Rng rng = derive_stream(14, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const MatrixXd a = random_sparse(rng, 8, 0.15);
    const auto p = scc_partition(digraph_of_matrix(a));
    const auto reach = reachability(a);
    for (std::size_t m = 0; m < 8; ++m) {
      for (std::size_t n = 0; n < 8; ++n) {
        const bool same = reach[m][n] && reach[n][m];
        CHECK((p.class_of(m) == p.class_of(n)) == same);
        CHECK(p.accesses(p.class_of(m), p.class_of(n)) == reach[m][n]);
      }
    }
  }
}

TEST_CASE("class structure ignores diagonal entries") {
  Rng rng = derive_stream(15, 0);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    MatrixXd a = random_sparse(rng, 6, 0.2);
    const auto before = scc_partition(digraph_of_matrix(a)).classes();
    for (Eigen::Index i = 0; i < 6; ++i) a(i, i) = normal(rng);
    CHECK(scc_partition(digraph_of_matrix(a)).classes() == before);
  }
}

TEST_CASE("direct chains of the example") {
  const MatrixXd a = fixtures::example_matrix();
  const auto p = scc_partition(digraph_of_matrix(a));
  const auto g = example_labels(p);
  CHECK(is_direct_chain(p, a, {g[0], g[1], g[3]}));
  CHECK_FALSE(is_direct_chain(p, a, {g[0], g[2]}));
  CHECK(is_direct_chain(p, a, {g[0]}));
  CHECK_FALSE(is_valid_chain(p, {g[3], g[2]}));
  CHECK_THROWS_AS(is_direct_chain(p, a, {g[2], g[3]}), InputError);
}

TEST_CASE("every chain is nested in a direct chain") {
  Rng rng = derive_stream(16, 0);
  for (int trial = 0; trial < 60; ++trial) {
    const MatrixXd a = random_sparse(rng, 6, 0.15);
    const auto p = scc_partition(digraph_of_matrix(a));
    if (p.class_count() > 6) continue;
    const auto chains = enumerate_chains(p);
    std::vector<std::vector<std::size_t>> direct;
    for (const auto& c : chains)
      if (is_direct_chain(p, a, c)) direct.push_back(c);
    for (const auto& c : chains) {
      const bool nested = std::any_of(direct.begin(), direct.end(), [&](const auto& d) {
        return std::includes(d.begin(), d.end(), c.begin(), c.end());
      });
      CHECK(nested);
    }
  }
}

TEST_CASE("pairwise chain lengths") {
  const auto p = scc_partition(digraph_of_matrix(fixtures::example_matrix()));
  const auto g = example_labels(p);
  std::vector<bool> basic(5, false);
  basic[g[0]] = basic[g[2]] = basic[g[3]] = true;
  const auto d = pairwise_chain_lengths(p, basic);
  CHECK(d[g[0]][g[4]] == 2);
  CHECK(d[g[0]][g[3]] == 2);
  CHECK(d[g[1]][g[3]] == 1);
  CHECK(d[g[3]][g[0]] == 0);
  CHECK(d[g[0]][g[0]] == 1);
}

TEST_CASE("support of a vector") {
  Eigen::VectorXd v(4);
  v << 0.0, 0.5, 0.0, 2.0;
  CHECK(support_of(v) == std::vector<std::size_t>{1, 3});
}
