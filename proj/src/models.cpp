#include "erlangtail/models.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "erlangtail/errors.hpp"
#include "erlangtail/spectral.hpp"

namespace erlangtail {

std::vector<std::string> ValidationReport::failed_ids() const {
  std::vector<std::string> out;
  for (const auto& c : clauses) {
    if (!c.passed) out.push_back(c.id);
  }
  return out;
}

namespace {

constexpr double kSumTol = 1e-9;

void require_shapes(std::size_t n, const Eigen::MatrixXd& square, const Eigen::VectorXd& initial_law,
                    const char* square_name) {
  if (n == 0) throw InputError("model has no states");
  if (static_cast<std::size_t>(square.cols()) != n) throw InputError(std::string(square_name) + " must be square");
  if (static_cast<std::size_t>(initial_law.size()) != n) throw InputError("initial_law must have length N");
  if (!square.allFinite() || !initial_law.allFinite()) throw InputError("model has non-finite entries");
}

void require_grid_shape(const TransformMatrix& grid, std::size_t n, const char* name) {
  if (grid.size() != n) throw InputError(std::string(name) + " must have N rows");
  for (const auto& row : grid) {
    if (row.size() != n) throw InputError(std::string(name) + " must have N columns");
  }
}

std::string format_class(const std::vector<std::size_t>& members) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < members.size(); ++i) os << (i ? "," : "") << members[i] + 1;
  os << '}';
  return os.str();
}

ClauseResult probability_vector_clause(const Eigen::VectorXd& law) {
  ClauseResult c{"initial_law", "varpi is a probability vector", true, ""};
  if (law.minCoeff() < 0.0) {
    c.passed = false;
    c.detail = "negative entry";
  } else if (std::abs(law.sum() - 1.0) > kSumTol) {
    c.passed = false;
    c.detail = "entries sum to " + std::to_string(law.sum());
  }
  return c;
}

// Every class in `which` must satisfy `covered`; failures are listed in the detail.
template <typename Pred>
void require_classes(ClauseResult& clause, const ClassPartition& partition, const std::vector<std::size_t>& which,
                     Pred covered) {
  for (auto k : which) {
    if (!covered(partition.members(k))) {
      clause.passed = false;
      clause.detail += (clause.detail.empty() ? "violated by class " : ", ") + format_class(partition.members(k));
    }
  }
}

void finish(ValidationReport& report, const std::function<MetzlerPencil()>& make_pencil) {
  ClauseResult zeta{"zeta_at_zero", "zeta(A(0)) < 0", false, ""};
  // The pencil needs well-formed parameters; the class clauses do not matter for it.
  const bool metzler_ready = std::all_of(report.clauses.begin(), report.clauses.end(), [](const ClauseResult& c) {
    return c.passed || c.id == "(iv)" || c.id == "(v)";
  });
  if (metzler_ready) {
    const auto pencil = make_pencil();
    report.zeta_at_zero = zeta_at(pencil, 0.0);
    zeta.passed = report.zeta_at_zero < 0.0;
    zeta.detail = "zeta(A(0)) = " + std::to_string(report.zeta_at_zero);
  } else {
    report.zeta_at_zero = std::numeric_limits<double>::quiet_NaN();
    zeta.detail = "not evaluated: parameter clauses failed";
  }
  report.clauses.push_back(zeta);
  report.valid = std::all_of(report.clauses.begin(), report.clauses.end(), [](const ClauseResult& c) { return c.passed; });
}

}  // namespace

ValidationReport validate(const ContinuousModelSpec& spec) {
  const std::size_t n = spec.size();
  require_shapes(n, spec.generator, spec.initial_law, "generator");
  if (static_cast<std::size_t>(spec.intensities.size()) != n) throw InputError("intensities must have length N");
  if (spec.levy.size() != n) throw InputError("levy must have N entries");
  require_grid_shape(spec.jumps, n, "jumps");
  for (const auto& l : spec.levy) check_spec(l);
  for (const auto& row : spec.jumps) {
    for (const auto& j : row) check_spec(j);
  }

  ValidationReport report;
  ClauseResult generator{"generator", "Pi is an infinitesimal generator (off-diagonal entries >= 0, rows sum to 0)",
                         true, ""};
  for (std::size_t m = 0; m < n; ++m) {
    const auto row = spec.generator.row(static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < n; ++k) {
      if (k != m && row(static_cast<Eigen::Index>(k)) < 0.0) {
        generator.passed = false;
        generator.detail = "negative off-diagonal entry in row " + std::to_string(m + 1);
      }
    }
    const double scale = std::max(1.0, row.cwiseAbs().maxCoeff());
    if (std::abs(row.sum()) > kSumTol * scale) {
      generator.passed = false;
      generator.detail = "row " + std::to_string(m + 1) + " sums to " + std::to_string(row.sum());
    }
  }
  report.clauses.push_back(generator);
  report.clauses.push_back(probability_vector_clause(spec.initial_law));

  ClauseResult intensities{"intensities", "lambda is nonnegative", spec.intensities.minCoeff() >= 0.0, ""};
  report.clauses.push_back(intensities);

  ClauseResult roles{"roles", "phi_n are Levy exponents and psi_{m,n} Laplace transforms", true, ""};
  for (const auto& l : spec.levy) roles.passed = roles.passed && l.role == TransformRole::levy_exponent;
  for (const auto& row : spec.jumps) {
    for (const auto& j : row) roles.passed = roles.passed && j.role == TransformRole::laplace_transform;
  }
  report.clauses.push_back(roles);

  ClauseResult jumps{"jumps", "psi_{m,n} is identically one wherever pi_{m,n} = 0", true, ""};
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = 0; k < n; ++k) {
      const bool absent = m == k || spec.generator(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) == 0.0;
      if (absent && !spec.jumps[m][k].is_unit()) {
        jumps.passed = false;
        jumps.detail = "non-unit jump on absent transition (" + std::to_string(m + 1) + "," + std::to_string(k + 1) + ")";
      }
    }
  }
  report.clauses.push_back(jumps);

  Digraph graph(n);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = 0; k < n; ++k) {
      if (spec.generator(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) > 0.0) graph.add_edge(m, k);
    }
  }
  const auto partition = scc_partition(graph);
  const auto ends = initial_and_final_classes(partition);

  ClauseResult initial{"(iv)", "each initial class of Pi contains a state n with varpi_n > 0", true, ""};
  require_classes(initial, partition, ends.initial, [&](const std::vector<std::size_t>& members) {
    return std::any_of(members.begin(), members.end(),
                       [&](std::size_t v) { return spec.initial_law(static_cast<Eigen::Index>(v)) > 0.0; });
  });
  report.clauses.push_back(initial);

  ClauseResult final_clause{"(v)", "each final class of Pi contains a state n with lambda_n > 0", true, ""};
  require_classes(final_clause, partition, ends.final_classes, [&](const std::vector<std::size_t>& members) {
    return std::any_of(members.begin(), members.end(),
                       [&](std::size_t v) { return spec.intensities(static_cast<Eigen::Index>(v)) > 0.0; });
  });
  report.clauses.push_back(final_clause);

  finish(report, [&] { return build_pencil(spec); });
  return report;
}

ValidationReport validate(const DiscreteModelSpec& spec) {
  const std::size_t n = spec.size();
  require_shapes(n, spec.transition, spec.initial_law, "transition");
  if (static_cast<std::size_t>(spec.survival.rows()) != n || static_cast<std::size_t>(spec.survival.cols()) != n) {
    throw InputError("survival must be N x N");
  }
  if (!spec.survival.allFinite()) throw InputError("survival has non-finite entries");
  require_grid_shape(spec.increments, n, "increments");
  for (const auto& row : spec.increments) {
    for (const auto& e : row) check_spec(e);
  }

  ValidationReport report;
  ClauseResult transition{"transition", "Pi is nonnegative with rows summing to one", true, ""};
  if (spec.transition.minCoeff() < 0.0) {
    transition.passed = false;
    transition.detail = "negative entry";
  }
  for (std::size_t m = 0; m < n; ++m) {
    const double sum = spec.transition.row(static_cast<Eigen::Index>(m)).sum();
    if (std::abs(sum - 1.0) > kSumTol) {
      transition.passed = false;
      transition.detail = "row " + std::to_string(m + 1) + " sums to " + std::to_string(sum);
    }
  }
  report.clauses.push_back(transition);

  ClauseResult survival{"survival", "Upsilon has entries in [0, 1]",
                        spec.survival.minCoeff() >= 0.0 && spec.survival.maxCoeff() <= 1.0, ""};
  report.clauses.push_back(survival);
  report.clauses.push_back(probability_vector_clause(spec.initial_law));

  ClauseResult roles{"roles", "increment laws are Laplace transforms", true, ""};
  for (const auto& row : spec.increments) {
    for (const auto& e : row) roles.passed = roles.passed && e.role == TransformRole::laplace_transform;
  }
  report.clauses.push_back(roles);

  Digraph product(n);
  Digraph plain(n);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = 0; k < n; ++k) {
      const auto i = static_cast<Eigen::Index>(m);
      const auto j = static_cast<Eigen::Index>(k);
      if (spec.transition(i, j) > 0.0) plain.add_edge(m, k);
      if (spec.transition(i, j) * spec.survival(i, j) > 0.0) product.add_edge(m, k);
    }
  }
  const auto product_classes = scc_partition(product);
  const auto plain_classes = scc_partition(plain);

  ClauseResult initial{"(iv)", "each initial class of Pi (.) Upsilon contains a state n with varpi_n > 0", true, ""};
  require_classes(initial, product_classes, initial_and_final_classes(product_classes).initial,
                  [&](const std::vector<std::size_t>& members) {
                    return std::any_of(members.begin(), members.end(), [&](std::size_t v) {
                      return spec.initial_law(static_cast<Eigen::Index>(v)) > 0.0;
                    });
                  });
  report.clauses.push_back(initial);

  ClauseResult final_clause{"(v)",
                            "each final class of Pi contains states m, n with pi_{m,n} > 0 and upsilon_{m,n} < 1",
                            true, ""};
  require_classes(final_clause, plain_classes, initial_and_final_classes(plain_classes).final_classes,
                  [&](const std::vector<std::size_t>& members) {
                    for (auto m : members) {
                      for (auto k : members) {
                        const auto i = static_cast<Eigen::Index>(m);
                        const auto j = static_cast<Eigen::Index>(k);
                        if (spec.transition(i, j) > 0.0 && spec.survival(i, j) < 1.0) return true;
                      }
                    }
                    return false;
                  });
  report.clauses.push_back(final_clause);

  finish(report, [&] { return build_pencil(spec); });
  return report;
}

MetzlerPencil build_pencil(const ContinuousModelSpec& spec) {
  return MetzlerPencil::continuous(spec.generator, spec.intensities, spec.levy, spec.jumps);
}

MetzlerPencil build_pencil(const DiscreteModelSpec& spec) {
  return MetzlerPencil::discrete(spec.transition, spec.survival, spec.increments);
}

namespace {

TailSide analyze_side(const MetzlerPencil& pencil, Side side, const Eigen::VectorXd& v, const Eigen::VectorXd& w,
                      const PencilTolerances& tol) {
  TailSide out;
  out.root = find_root(pencil, side, tol);
  if (!out.root.exists) return out;
  out.exists = true;
  out.rate = std::abs(out.root.value);
  const auto pole = pole_order(pencil, out.root.value, v, w, false, tol);
  out.d = pole.d;
  out.d_weighted = pole.d_weighted.value_or(pole.d);
  out.basic_flags = pole.basic_flags;
  out.sign_condition = pole.sign_condition.status;
  out.pole_status = pole.status;
  out.numeric_order = pole.probe.order;
  out.numeric_order_stable = pole.probe.stable;
  return out;
}

template <typename Spec>
TailReport analyze_model(const Spec& spec, PencilKind kind, const Eigen::VectorXd& w, const PencilTolerances& tol) {
  const auto validation = validate(spec);
  if (!validation.valid) {
    std::string ids;
    for (const auto& id : validation.failed_ids()) ids += (ids.empty() ? "" : ", ") + id;
    throw DomainError("model fails validation: " + ids);
  }
  const auto pencil = build_pencil(spec);
  TailReport report;
  report.kind = kind;
  report.classes = pencil.partition_at(0.0);
  report.initial_final = initial_and_final_classes(report.classes);
  report.zeta_at_zero = validation.zeta_at_zero;
  report.strip = pencil.domain();
  report.upper = analyze_side(pencil, Side::positive, spec.initial_law, w, tol);
  report.lower = analyze_side(pencil, Side::negative, spec.initial_law, w, tol);
  return report;
}

}  // namespace

TailReport analyze(const ContinuousModelSpec& spec, const PencilTolerances& tol) {
  return analyze_model(spec, PencilKind::continuous, spec.intensities, tol);
}

TailReport analyze(const DiscreteModelSpec& spec, const PencilTolerances& tol) {
  return analyze_model(spec, PencilKind::discrete, Eigen::VectorXd::Ones(static_cast<Eigen::Index>(spec.size())), tol);
}

namespace {

void check_chain(const GaussianChainParams& p) {
  const std::size_t n = p.mean.size();
  if (n == 0) throw InputError("chain needs at least one state");
  if (p.variance.size() != n || p.lambda.size() != n || p.theta.size() + 1 != n) {
    throw InputError("chain parameter lengths must be N, N, N-1, N");
  }
  for (double t : p.theta) {
    if (!(t > 0.0)) throw InputError("theta_n must be positive");
  }
  for (double s : p.variance) {
    if (!(s > 0.0)) throw InputError("sigma_n^2 must be positive");
  }
  for (double l : p.lambda) {
    if (!(l >= 0.0)) throw InputError("lambda_n must be nonnegative");
  }
  if (!(p.lambda.back() > 0.0)) throw InputError("lambda_N must be positive");
}

}  // namespace

ClosedFormTails closed_form_gaussian_chain(const GaussianChainParams& params, double tie_tol) {
  check_chain(params);
  const std::size_t n = params.mean.size();
  std::vector<double> alpha(n);
  std::vector<double> beta(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = params.lambda[i] + (i + 1 < n ? params.theta[i] : 0.0);
    const double mu = params.mean[i];
    const double s2 = params.variance[i];
    const double root = std::sqrt(mu * mu + 2.0 * s2 * c);
    alpha[i] = (-mu + root) / s2;
    beta[i] = (mu + root) / s2;
  }
  auto tally = [tie_tol](const std::vector<double>& values, double& best, std::size_t& count) {
    best = *std::min_element(values.begin(), values.end());
    count = 0;
    for (double v : values) {
      if (std::abs(v - best) <= tie_tol * std::abs(best)) ++count;
    }
  };
  ClosedFormTails out;
  tally(alpha, out.alpha, out.d_alpha);
  tally(beta, out.beta, out.d_beta);
  return out;
}

ContinuousModelSpec gaussian_chain_model(const GaussianChainParams& params) {
  check_chain(params);
  const auto n = static_cast<Eigen::Index>(params.mean.size());
  ContinuousModelSpec spec;
  spec.generator = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    spec.generator(i, i) = -params.theta[static_cast<std::size_t>(i)];
    spec.generator(i, i + 1) = params.theta[static_cast<std::size_t>(i)];
  }
  spec.initial_law = Eigen::VectorXd::Zero(n);
  spec.initial_law(0) = 1.0;
  spec.intensities = Eigen::Map<const Eigen::VectorXd>(params.lambda.data(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    spec.levy.push_back(TransformSpec::gaussian(params.mean[k], params.variance[k], TransformRole::levy_exponent));
  }
  spec.jumps.assign(static_cast<std::size_t>(n), std::vector<TransformSpec>(static_cast<std::size_t>(n)));
  return spec;
}

}  // namespace erlangtail
