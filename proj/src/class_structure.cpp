#include "erlangtail/class_structure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <string>

#include "erlangtail/errors.hpp"

namespace erlangtail {

Digraph::Digraph(std::size_t vertex_count) : successors_(vertex_count) {}

void Digraph::add_edge(std::size_t from, std::size_t to) {
  if (from >= vertex_count() || to >= vertex_count()) {
    throw InputError("edge endpoint out of range");
  }
  if (from == to) return;
  auto& out = successors_[from];
  if (std::find(out.begin(), out.end(), to) == out.end()) out.push_back(to);
}

bool Digraph::has_edge(std::size_t from, std::size_t to) const {
  const auto& out = successors_.at(from);
  return std::find(out.begin(), out.end(), to) != out.end();
}

std::size_t Digraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& out : successors_) total += out.size();
  return total;
}

Digraph digraph_of_matrix(const Eigen::MatrixXd& matrix, double threshold) {
  if (matrix.rows() != matrix.cols()) throw InputError("matrix must be square");
  if (threshold < 0.0) throw InputError("edge threshold must be nonnegative");
  const auto n = static_cast<std::size_t>(matrix.rows());
  Digraph graph(n);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = 0; k < n; ++k) {
      if (m != k && std::abs(matrix(m, k)) > threshold) graph.add_edge(m, k);
    }
  }
  return graph;
}

Digraph digraph_of_pattern(const std::vector<std::vector<bool>>& pattern) {
  const std::size_t n = pattern.size();
  Digraph graph(n);
  for (std::size_t m = 0; m < n; ++m) {
    if (pattern[m].size() != n) throw InputError("pattern must be square");
    for (std::size_t k = 0; k < n; ++k) {
      if (m != k && pattern[m][k]) graph.add_edge(m, k);
    }
  }
  return graph;
}

ClassPartition::ClassPartition(std::vector<std::vector<std::size_t>> classes,
                               std::vector<std::vector<bool>> class_edges)
    : classes_(std::move(classes)), class_edges_(std::move(class_edges)) {
  const std::size_t count = classes_.size();
  std::size_t vertices = 0;
  for (const auto& c : classes_) vertices += c.size();
  class_of_.assign(vertices, count);
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t v : classes_[k]) {
      if (v >= vertices || class_of_[v] != count) throw InputError("classes must partition the vertices");
      class_of_[v] = k;
    }
  }
  // Classes are listed topologically, so edges only point forwards and the
  // closure can be built back to front.
  access_.assign(count, std::vector<bool>(count, false));
  for (std::size_t j = count; j-- > 0;) {
    access_[j][j] = true;
    for (std::size_t k = j + 1; k < count; ++k) {
      if (!class_edges_[j][k]) continue;
      for (std::size_t l = k; l < count; ++l) {
        if (access_[k][l]) access_[j][l] = true;
      }
    }
    for (std::size_t k = 0; k < j; ++k) {
      if (class_edges_[j][k]) throw InputError("class listing is not a topological order");
    }
  }
}

namespace {

// Tarjan's algorithm; returns the component id of every vertex.
std::vector<std::size_t> tarjan_components(const Digraph& graph, std::size_t& component_count) {
  const std::size_t n = graph.vertex_count();
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unvisited), lowlink(n, 0), component(n, unvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t next_index = 0;
  component_count = 0;

  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = lowlink[v] = next_index++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : graph.successors(v)) {
      if (index[w] == unvisited) {
        visit(w);
        lowlink[v] = std::min(lowlink[v], lowlink[w]);
      } else if (on_stack[w]) {
        lowlink[v] = std::min(lowlink[v], index[w]);
      }
    }
    if (lowlink[v] == index[v]) {
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component[w] = component_count;
      } while (w != v);
      ++component_count;
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] == unvisited) visit(v);
  }
  return component;
}

}  // namespace

ClassPartition scc_partition(const Digraph& graph) {
  if (graph.vertex_count() == 0) throw InputError("digraph must have at least one vertex");
  std::size_t count = 0;
  const auto component = tarjan_components(graph, count);
  const std::size_t n = graph.vertex_count();

  std::vector<std::vector<std::size_t>> members(count);
  for (std::size_t v = 0; v < n; ++v) members[component[v]].push_back(v);  // sorted by construction

  std::vector<std::vector<bool>> edges(count, std::vector<bool>(count, false));
  std::vector<std::size_t> indegree(count, 0);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w : graph.successors(v)) {
      const std::size_t a = component[v], b = component[w];
      if (a != b && !edges[a][b]) {
        edges[a][b] = true;
        ++indegree[b];
      }
    }
  }

  // Kahn's algorithm keyed on the smallest vertex label of each component.
  using Entry = std::pair<std::size_t, std::size_t>;  // (min vertex, component)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> ready;
  for (std::size_t c = 0; c < count; ++c) {
    if (indegree[c] == 0) ready.emplace(members[c].front(), c);
  }
  std::vector<std::size_t> order;
  order.reserve(count);
  while (!ready.empty()) {
    const auto [label, c] = ready.top();
    ready.pop();
    order.push_back(c);
    for (std::size_t d = 0; d < count; ++d) {
      if (edges[c][d] && --indegree[d] == 0) ready.emplace(members[d].front(), d);
    }
  }

  std::vector<std::size_t> position(count);
  for (std::size_t i = 0; i < count; ++i) position[order[i]] = i;
  std::vector<std::vector<std::size_t>> classes(count);
  std::vector<std::vector<bool>> class_edges(count, std::vector<bool>(count, false));
  for (std::size_t c = 0; c < count; ++c) {
    classes[position[c]] = std::move(members[c]);
    for (std::size_t d = 0; d < count; ++d) {
      if (edges[c][d]) class_edges[position[c]][position[d]] = true;
    }
  }
  return ClassPartition(std::move(classes), std::move(class_edges));
}

bool is_irreducible(const Digraph& graph) { return scc_partition(graph).is_irreducible(); }

InitialFinal initial_and_final_classes(const ClassPartition& partition) {
  InitialFinal out;
  const std::size_t count = partition.class_count();
  for (std::size_t k = 0; k < count; ++k) {
    bool initial = true, final_class = true;
    for (std::size_t j = 0; j < count; ++j) {
      if (partition.precedes(j, k)) initial = false;
      if (partition.precedes(k, j)) final_class = false;
    }
    if (initial) out.initial.push_back(k);
    if (final_class) out.final_classes.push_back(k);
  }
  return out;
}

std::vector<std::size_t> block_permutation(const ClassPartition& partition) {
  std::vector<std::size_t> perm;
  perm.reserve(partition.vertex_count());
  for (const auto& c : partition.classes()) perm.insert(perm.end(), c.begin(), c.end());
  return perm;
}

Eigen::MatrixXd permute_symmetric(const Eigen::MatrixXd& matrix, const std::vector<std::size_t>& perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  if (matrix.rows() != n || matrix.cols() != n) throw InputError("permutation size mismatch");
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = matrix(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(perm[j]));
    }
  }
  return out;
}

bool is_block_upper_triangular(const Eigen::MatrixXd& matrix, const std::vector<std::size_t>& perm,
                               const std::vector<std::size_t>& block_sizes, double threshold) {
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t p : perm) {
    if (p >= perm.size() || seen[p]) return false;
    seen[p] = true;
  }
  std::size_t total = 0;
  for (std::size_t s : block_sizes) {
    if (s == 0) return false;
    total += s;
  }
  if (total != perm.size()) return false;

  const Eigen::MatrixXd permuted = permute_symmetric(matrix, perm);
  std::vector<std::size_t> block_of(total);
  std::vector<std::size_t> start;
  for (std::size_t b = 0, pos = 0; b < block_sizes.size(); pos += block_sizes[b], ++b) {
    start.push_back(pos);
    for (std::size_t i = 0; i < block_sizes[b]; ++i) block_of[pos + i] = b;
  }
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) {
      if (block_of[i] > block_of[j] && std::abs(permuted(i, j)) > threshold) return false;
    }
  }
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    const auto s = static_cast<Eigen::Index>(start[b]);
    const auto len = static_cast<Eigen::Index>(block_sizes[b]);
    if (!is_irreducible(digraph_of_matrix(permuted.block(s, s, len, len), threshold))) return false;
  }
  return true;
}

namespace {

std::vector<bool> meets(const ClassPartition& partition, const std::optional<std::vector<std::size_t>>& support) {
  std::vector<bool> out(partition.class_count(), !support.has_value());
  if (support) {
    for (std::size_t v : *support) {
      if (v >= partition.vertex_count()) throw InputError("support vertex out of range");
      out[partition.class_of(v)] = true;
    }
  }
  return out;
}

}  // namespace

std::size_t longest_chain_length(const ClassPartition& partition, const ChainQuery& query) {
  const std::size_t count = partition.class_count();
  if (query.basic_flags.size() != count) {
    throw InputError("basic_flags has " + std::to_string(query.basic_flags.size()) + " entries for " +
                     std::to_string(count) + " classes");
  }
  const auto source = meets(partition, query.source_support);
  const auto target = meets(partition, query.target_support);

  // best[k]: heaviest path ending in class k that starts in a source class, -1 if none.
  std::vector<long> best(count, -1);
  long answer = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const long weight = query.basic_flags[k] ? 1 : 0;
    long value = source[k] ? weight : -1;
    for (std::size_t i = 0; i < k; ++i) {
      if (partition.has_direct_edge(i, k) && best[i] >= 0) value = std::max(value, best[i] + weight);
    }
    best[k] = value;
    if (target[k]) answer = std::max(answer, value);
  }
  return static_cast<std::size_t>(answer);
}

std::vector<std::vector<std::size_t>> pairwise_chain_lengths(const ClassPartition& partition,
                                                             const std::vector<bool>& basic_flags) {
  const std::size_t count = partition.class_count();
  if (basic_flags.size() != count) throw InputError("basic_flags length mismatch");
  std::vector<std::vector<std::size_t>> out(count, std::vector<std::size_t>(count, 0));
  for (std::size_t j = 0; j < count; ++j) {
    std::vector<long> best(count, -1);
    best[j] = basic_flags[j] ? 1 : 0;
    for (std::size_t k = j + 1; k < count; ++k) {
      for (std::size_t i = j; i < k; ++i) {
        if (best[i] >= 0 && partition.has_direct_edge(i, k)) {
          best[k] = std::max(best[k], best[i] + (basic_flags[k] ? 1 : 0));
        }
      }
    }
    for (std::size_t k = j; k < count; ++k) out[j][k] = best[k] < 0 ? 0 : static_cast<std::size_t>(best[k]);
  }
  return out;
}

bool is_valid_chain(const ClassPartition& partition, const std::vector<std::size_t>& chain) {
  if (chain.empty()) return false;
  for (std::size_t c : chain) {
    if (c >= partition.class_count()) return false;
  }
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (!partition.precedes(chain[i], chain[i + 1])) return false;
  }
  return true;
}

bool is_direct_chain(const ClassPartition& partition, const Eigen::MatrixXd& matrix,
                     const std::vector<std::size_t>& chain) {
  if (!is_valid_chain(partition, chain)) throw InputError("not a valid chain of classes");
  if (matrix.rows() != static_cast<Eigen::Index>(partition.vertex_count()) || matrix.cols() != matrix.rows()) {
    throw InputError("matrix does not match the partition");
  }
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    bool semipositive = false;
    for (std::size_t m : partition.members(chain[i])) {
      for (std::size_t n : partition.members(chain[i + 1])) {
        const double entry = matrix(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
        if (entry < 0.0) return false;
        if (entry > 0.0) semipositive = true;
      }
    }
    if (!semipositive) return false;
  }
  return true;
}

std::vector<std::vector<std::size_t>> enumerate_chains(const ClassPartition& partition) {
  const std::size_t count = partition.class_count();
  if (count > 12) throw InputError("chain enumeration is limited to 12 classes");
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> current;
  std::function<void(std::size_t)> extend = [&](std::size_t last) {
    out.push_back(current);
    for (std::size_t next = last + 1; next < count; ++next) {
      if (partition.precedes(last, next)) {
        current.push_back(next);
        extend(next);
        current.pop_back();
      }
    }
  };
  for (std::size_t first = 0; first < count; ++first) {
    current.assign(1, first);
    extend(first);
  }
  return out;
}

std::vector<std::size_t> support_of(const Eigen::VectorXd& v) {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) > 0.0) out.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

}  // namespace erlangtail
