#include "erlangtail/pencil.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/LU>

#include "erlangtail/errors.hpp"

namespace erlangtail {

std::string to_string(PencilKind kind) {
  switch (kind) {
    case PencilKind::continuous: return "continuous";
    case PencilKind::discrete: return "discrete";
    case PencilKind::polynomial: return "polynomial";
  }
  return "unknown";
}

std::string to_string(RootAbsence reason) {
  switch (reason) {
    case RootAbsence::none: return "none";
    case RootAbsence::zeta_negative_throughout_domain: return "zeta_negative_throughout_domain";
    case RootAbsence::domain_side_empty: return "domain_side_empty";
    case RootAbsence::zeta_positive_at_boundary_unreachable: return "zeta_positive_at_boundary_unreachable";
  }
  return "unknown";
}

std::string to_string(SignCondition c) {
  switch (c) {
    case SignCondition::satisfied: return "satisfied";
    case SignCondition::zero_derivative: return "zero_derivative";
    case SignCondition::mixed_signs: return "mixed_signs";
  }
  return "unknown";
}

std::string to_string(PoleStatus s) {
  switch (s) {
    case PoleStatus::ok: return "ok";
    case PoleStatus::condition_v_violated: return "condition_v_violated";
    case PoleStatus::condition_vi_violated: return "condition_vi_violated";
  }
  return "unknown";
}

namespace {

void require_square(const Eigen::MatrixXd& m, std::size_t n, const char* what) {
  if (static_cast<std::size_t>(m.rows()) != n || static_cast<std::size_t>(m.cols()) != n) {
    throw InputError(std::string(what) + " must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (!m.allFinite()) throw InputError(std::string(what) + " has non-finite entries");
}

void require_grid(const TransformMatrix& grid, std::size_t n, TransformRole role, const char* what) {
  if (grid.size() != n) throw InputError(std::string(what) + " must have " + std::to_string(n) + " rows");
  for (const auto& row : grid) {
    if (row.size() != n) throw InputError(std::string(what) + " must have " + std::to_string(n) + " columns");
    for (const auto& spec : row) {
      if (spec.role != role) throw InputError(std::string(what) + " entries must have role " + to_string(role));
      check_spec(spec);
    }
  }
}

}  // namespace

MetzlerPencil MetzlerPencil::continuous(Eigen::MatrixXd generator, Eigen::VectorXd intensities,
                                        std::vector<TransformSpec> levy, TransformMatrix jumps) {
  const auto n = static_cast<std::size_t>(generator.rows());
  if (n == 0) throw InputError("generator is empty");
  require_square(generator, n, "generator");
  if (static_cast<std::size_t>(intensities.size()) != n) throw InputError("intensities length mismatch");
  if (levy.size() != n) throw InputError("need one Levy exponent per state");
  for (const auto& spec : levy) {
    if (spec.role != TransformRole::levy_exponent) throw InputError("levy entries must have role levy_exponent");
    check_spec(spec);
  }
  require_grid(jumps, n, TransformRole::laplace_transform, "jumps");

  MetzlerPencil p;
  p.kind_ = PencilKind::continuous;
  p.size_ = n;
  p.pattern_ = Digraph(n);
  for (std::size_t m = 0; m < n; ++m) {
    if (!(intensities(m) >= 0.0) || !std::isfinite(intensities(m))) throw InputError("intensities must be >= 0");
    if (!jumps[m][m].is_unit()) throw InputError("diagonal jump transforms must be unit");
    p.domain_ = p.domain_.intersect(strip_of(levy[m]));
    for (std::size_t k = 0; k < n; ++k) {
      if (k == m) continue;
      const double rate = generator(m, k);
      if (rate < 0.0) throw InputError("generator off-diagonal entries must be >= 0");
      if (rate > 0.0) {
        p.pattern_.add_edge(m, k);
        p.domain_ = p.domain_.intersect(strip_of(jumps[m][k]));
      }
    }
  }
  p.symbolic_partition_ = scc_partition(p.pattern_);
  p.generator_ = std::move(generator);
  p.intensities_ = std::move(intensities);
  p.levy_ = std::move(levy);
  p.transforms_ = std::move(jumps);
  return p;
}

MetzlerPencil MetzlerPencil::discrete(Eigen::MatrixXd transition, Eigen::MatrixXd survival, TransformMatrix increments) {
  const auto n = static_cast<std::size_t>(transition.rows());
  if (n == 0) throw InputError("transition matrix is empty");
  require_square(transition, n, "transition");
  require_square(survival, n, "survival");
  require_grid(increments, n, TransformRole::laplace_transform, "increments");

  MetzlerPencil p;
  p.kind_ = PencilKind::discrete;
  p.size_ = n;
  p.pattern_ = Digraph(n);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = 0; k < n; ++k) {
      if (transition(m, k) < 0.0) throw InputError("transition entries must be >= 0");
      if (survival(m, k) < 0.0 || survival(m, k) > 1.0) throw InputError("survival entries must lie in [0, 1]");
      if (transition(m, k) * survival(m, k) > 0.0) {
        p.pattern_.add_edge(m, k);
        p.domain_ = p.domain_.intersect(strip_of(increments[m][k]));
      }
    }
  }
  p.symbolic_partition_ = scc_partition(p.pattern_);
  p.generator_ = std::move(transition);
  p.survival_ = std::move(survival);
  p.transforms_ = std::move(increments);
  return p;
}

MetzlerPencil MetzlerPencil::polynomial(std::vector<Eigen::MatrixXd> coefficients) {
  if (coefficients.empty() || coefficients.size() > 5) throw InputError("polynomial pencils take 1 to 5 coefficients");
  const auto n = static_cast<std::size_t>(coefficients.front().rows());
  if (n == 0) throw InputError("coefficient matrices are empty");
  MetzlerPencil p;
  p.kind_ = PencilKind::polynomial;
  p.size_ = n;
  p.pattern_ = Digraph(n);
  for (const auto& c : coefficients) {
    require_square(c, n, "coefficient");
    for (std::size_t m = 0; m < n; ++m) {
      for (std::size_t k = 0; k < n; ++k) {
        if (m != k && c(m, k) != 0.0) p.pattern_.add_edge(m, k);
      }
    }
  }
  p.symbolic_partition_ = scc_partition(p.pattern_);
  p.coefficients_ = std::move(coefficients);
  return p;
}

void MetzlerPencil::require_inside(Complex z) const {
  if (!domain_.contains_open(z.real())) {
    throw DomainError("Re(z) = " + std::to_string(z.real()) + " is outside the pencil domain");
  }
}

Eigen::MatrixXcd MetzlerPencil::evaluate(Complex z) const {
  require_inside(z);
  const auto n = static_cast<Eigen::Index>(size_);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  switch (kind_) {
    case PencilKind::continuous:
      for (Eigen::Index m = 0; m < n; ++m) {
        a(m, m) = erlangtail::evaluate(levy_[m], z) + generator_(m, m) - intensities_(m);
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k != m && generator_(m, k) > 0.0) a(m, k) = generator_(m, k) * erlangtail::evaluate(transforms_[m][k], z);
        }
      }
      break;
    case PencilKind::discrete:
      for (Eigen::Index m = 0; m < n; ++m) {
        for (Eigen::Index k = 0; k < n; ++k) {
          const double weight = generator_(m, k) * survival_(m, k);
          if (weight > 0.0) a(m, k) = weight * erlangtail::evaluate(transforms_[m][k], z);
        }
        a(m, m) -= 1.0;
      }
      break;
    case PencilKind::polynomial: {
      Complex power = 1.0;
      for (const auto& c : coefficients_) {
        a += power * c.cast<Complex>();
        power *= z;
      }
      break;
    }
  }
  return a;
}

Eigen::MatrixXcd MetzlerPencil::derivative(Complex z) const {
  require_inside(z);
  const auto n = static_cast<Eigen::Index>(size_);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  switch (kind_) {
    case PencilKind::continuous:
      for (Eigen::Index m = 0; m < n; ++m) {
        a(m, m) = erlangtail::derivative(levy_[m], z);
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k != m && generator_(m, k) > 0.0) {
            a(m, k) = generator_(m, k) * erlangtail::derivative(transforms_[m][k], z);
          }
        }
      }
      break;
    case PencilKind::discrete:
      for (Eigen::Index m = 0; m < n; ++m) {
        for (Eigen::Index k = 0; k < n; ++k) {
          const double weight = generator_(m, k) * survival_(m, k);
          if (weight > 0.0) a(m, k) = weight * erlangtail::derivative(transforms_[m][k], z);
        }
      }
      break;
    case PencilKind::polynomial: {
      Complex power = 1.0;
      for (std::size_t k = 1; k < coefficients_.size(); ++k) {
        a += (static_cast<double>(k) * power) * coefficients_[k].cast<Complex>();
        power *= z;
      }
      break;
    }
  }
  return a;
}

Eigen::MatrixXd MetzlerPencil::evaluate_real(double s) const { return evaluate(Complex(s, 0.0)).real(); }

ClassPartition MetzlerPencil::partition_at(double s) const {
  if (kind_ != PencilKind::polynomial) return symbolic_partition_;
  return scc_partition(digraph_of_matrix(evaluate_real(s)));
}

double zeta_at(const MetzlerPencil& pencil, double s) {
  const Eigen::MatrixXd a = pencil.evaluate_real(s);
  return spectral_abscissa_blockwise(a, scc_partition(digraph_of_matrix(a)));
}

RootResult find_root(const MetzlerPencil& pencil, Side side, const PencilTolerances& tol) {
  const double zeta0 = zeta_at(pencil, 0.0);
  if (!(zeta0 < 0.0)) {
    throw DomainError("zeta(A(0)) = " + std::to_string(zeta0) + " is not negative");
  }
  const double sign = side == Side::positive ? 1.0 : -1.0;
  const Strip& strip = pencil.domain();
  const double boundary = side == Side::positive ? strip.right : -strip.left;

  RootResult out;
  double limit = 0.0;
  if (std::isfinite(boundary)) {
    const double width = strip.width();
    const double margin = std::isfinite(width) ? tol.edge * width : tol.edge * std::max(1.0, std::abs(boundary));
    limit = boundary - margin;
  } else {
    limit = 1e6;
  }
  if (!(limit > 0.0)) {
    out.reason = RootAbsence::domain_side_empty;
    return out;
  }

  auto f = [&](double t) { return zeta_at(pencil, sign * t); };

  // Geometric outward scan until zeta turns nonnegative.
  double lo = 0.0;
  double f_lo = zeta0;
  double hi = std::min(0.1, limit / 16.0);
  double f_hi = 0.0;
  for (;;) {
    hi = std::min(hi, limit);
    try {
      f_hi = f(hi);
    } catch (const NumericError&) {
      out.reason = RootAbsence::zeta_positive_at_boundary_unreachable;
      out.bracket_lo = sign * lo;
      out.bracket_hi = sign * hi;
      return out;
    }
    if (f_hi >= 0.0) break;
    if (hi >= limit) {
      out.reason = RootAbsence::zeta_negative_throughout_domain;
      out.bracket_lo = sign * lo;
      out.bracket_hi = sign * hi;
      return out;
    }
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
  }

  while (f_hi != 0.0 && hi - lo > tol.root_x * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (f_mid >= 0.0) {
      hi = mid;
      f_hi = f_mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
  }

  double best = hi;
  double f_best = f_hi;
  if (f_hi != 0.0 && f_hi != f_lo) {
    const double secant = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    if (secant > lo && secant < hi) {
      const double f_secant = f(secant);
      if (std::abs(f_secant) < std::abs(f_best)) {
        best = secant;
        f_best = f_secant;
      }
    }
  }
  if (std::abs(f_lo) < std::abs(f_best)) {
    best = lo;
    f_best = f_lo;
  }

  const double slope = hi > lo ? std::abs((f_hi - f_lo) / (hi - lo)) : 1.0;
  out.zeta_residual = std::abs(f_best);
  out.bracket_lo = side == Side::positive ? lo : -hi;
  out.bracket_hi = side == Side::positive ? hi : -lo;
  if (out.zeta_residual > tol.root * std::max(1.0, slope)) {
    throw NumericError("root residual " + std::to_string(out.zeta_residual) + " above tolerance");
  }
  out.exists = true;
  out.value = sign * best;
  return out;
}

std::vector<bool> basic_flags_at_root(const MetzlerPencil& pencil, double root, const PencilTolerances& tol) {
  const Eigen::MatrixXd a = pencil.evaluate_real(root);
  const auto partition = pencil.partition_at(root);
  const auto abscissae = block_abscissae(a, partition);
  const double zeta = *std::max_element(abscissae.begin(), abscissae.end());
  if (std::abs(zeta) > tol.basic) {
    throw DomainError("zeta(A(" + std::to_string(root) + ")) = " + std::to_string(zeta) + " is not zero");
  }
  std::vector<bool> flags;
  flags.reserve(abscissae.size());
  bool any = false;
  for (double value : abscissae) {
    flags.push_back(std::abs(value) <= tol.basic);
    any = any || flags.back();
  }
  if (!any) throw NumericError("no basic class at the configured tolerance");
  return flags;
}

LaurentProbe laurent_probe(const MetzlerPencil& pencil, double root, const std::optional<Eigen::VectorXd>& v,
                           const std::optional<Eigen::VectorXd>& w, int max_order) {
  if (v.has_value() != w.has_value()) throw InputError("v and w must be given together");
  const auto n = static_cast<Eigen::Index>(pencil.size());
  if (v && (v->size() != n || w->size() != n)) throw InputError("v and w must have length N");
  const bool weighted = v.has_value();

  constexpr int nodes = 64;
  LaurentProbe out;
  out.radii = {1e-2, 1e-3, 1e-4};
  if (!pencil.domain().contains_open(root - out.radii.front()) || !pencil.domain().contains_open(root + out.radii.front())) {
    throw DomainError("probe circle leaves the pencil domain");
  }

  // g(z) on each circle; the first (widest) circle is kept for the contour integral.
  std::vector<Eigen::MatrixXcd> first_values;
  std::vector<Complex> first_offsets;
  for (std::size_t r = 0; r < out.radii.size(); ++r) {
    const double eps = out.radii[r];
    double max_abs = 0.0;
    for (int k = 0; k < nodes; ++k) {
      const Complex offset = std::polar(eps, 2.0 * std::numbers::pi * k / nodes);
      const Eigen::MatrixXcd a = pencil.evaluate(root + offset);
      Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
      Eigen::MatrixXcd g;
      if (weighted) {
        const Eigen::VectorXcd x = lu.solve(w->cast<Complex>());
        g = Eigen::MatrixXcd::Constant(1, 1, v->cast<Complex>().dot(x));
      } else {
        g = lu.inverse();
      }
      if (!g.allFinite()) throw NumericError("A(z) is singular on the probe circle");
      max_abs = std::max(max_abs, g.cwiseAbs().maxCoeff());
      if (r == 0) {
        first_values.push_back(std::move(g));
        first_offsets.push_back(offset);
      }
    }
    out.log_max.push_back(max_abs > 0.0 ? std::log(max_abs) : -std::numeric_limits<double>::infinity());
  }

  const bool all_zero = std::all_of(out.log_max.begin(), out.log_max.end(), [](double x) { return std::isinf(x); });
  if (all_zero) {
    out.slopes.assign(out.radii.size() - 1, 0.0);
    out.stable = true;
    out.leading = Eigen::MatrixXcd::Zero(first_values.front().rows(), first_values.front().cols());
    return out;
  }
  for (std::size_t r = 0; r + 1 < out.radii.size(); ++r) {
    out.slopes.push_back((out.log_max[r + 1] - out.log_max[r]) / (std::log(out.radii[r]) - std::log(out.radii[r + 1])));
  }
  double sum = 0.0;
  for (double s : out.slopes) sum += s;
  out.order_estimate = sum / static_cast<double>(out.slopes.size());
  out.order = static_cast<int>(std::lround(out.slopes.front()));
  out.stable = std::isfinite(out.order_estimate) && out.order <= max_order;
  for (double s : out.slopes) out.stable = out.stable && std::lround(s) == out.order;

  // Mean of g(z_k) (z_k - root)^order is the coefficient of (z - root)^(-order).
  out.leading = Eigen::MatrixXcd::Zero(first_values.front().rows(), first_values.front().cols());
  for (std::size_t k = 0; k < first_values.size(); ++k) {
    out.leading += first_values[k] * std::pow(first_offsets[k], out.order);
  }
  out.leading /= static_cast<double>(nodes);
  return out;
}

SignConditionReport check_sign_condition(const MetzlerPencil& pencil, double root, const ClassPartition& partition,
                                         const std::vector<bool>& basic_flags, const PencilTolerances& tol) {
  double h = tol.derivative_step;
  const Strip& strip = pencil.domain();
  const double room = std::min(root - strip.left, strip.right - root);
  if (room <= 2.0 * h) h = room / 4.0;
  if (!(h > 0.0)) throw DomainError("root is on the domain boundary");

  const std::size_t count = partition.class_count();
  SignConditionReport out;
  out.left_derivative.assign(count, std::numeric_limits<double>::quiet_NaN());
  out.right_derivative.assign(count, std::numeric_limits<double>::quiet_NaN());

  const std::array<double, 5> points{root - 2.0 * h, root - h, root, root + h, root + 2.0 * h};
  std::array<Eigen::MatrixXd, 5> values;
  for (std::size_t i = 0; i < points.size(); ++i) values[i] = pencil.evaluate_real(points[i]);

  bool all_positive = true;
  bool all_negative = true;
  bool any_flat = false;
  for (std::size_t c = 0; c < count; ++c) {
    if (!basic_flags[c]) continue;
    std::array<double, 5> f{};
    for (std::size_t i = 0; i < points.size(); ++i) f[i] = spectral_abscissa(principal_block(values[i], partition.members(c)));
    // Second-order one-sided differences.
    const double right = (-3.0 * f[2] + 4.0 * f[3] - f[4]) / (2.0 * h);
    const double left = (3.0 * f[2] - 4.0 * f[1] + f[0]) / (2.0 * h);
    out.left_derivative[c] = left;
    out.right_derivative[c] = right;
    const bool positive = left > tol.derivative_sign || right > tol.derivative_sign;
    const bool negative = left < -tol.derivative_sign || right < -tol.derivative_sign;
    if (!positive && !negative) any_flat = true;
    all_positive = all_positive && positive;
    all_negative = all_negative && negative;
  }
  if (all_positive) {
    out.eta = 1;
  } else if (all_negative) {
    out.eta = -1;
  } else {
    out.status = any_flat ? SignCondition::zero_derivative : SignCondition::mixed_signs;
  }
  return out;
}

std::vector<std::vector<int>> class_block_signs(const Eigen::MatrixXd& matrix, const ClassPartition& partition,
                                                double zero_tol) {
  const std::size_t count = partition.class_count();
  std::vector<std::vector<int>> out(count, std::vector<int>(count, block_zero));
  const double scale = matrix.cwiseAbs().maxCoeff();
  if (scale == 0.0) return out;
  const double cutoff = zero_tol * scale;
  for (std::size_t j = 0; j < count; ++j) {
    for (std::size_t k = 0; k < count; ++k) {
      std::size_t positive = 0;
      std::size_t negative = 0;
      std::size_t total = 0;
      for (auto r : partition.members(j)) {
        for (auto c : partition.members(k)) {
          const double x = matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
          ++total;
          if (x > cutoff) ++positive;
          if (x < -cutoff) ++negative;
        }
      }
      if (positive == 0 && negative == 0) continue;
      if (positive == total) {
        out[j][k] = block_positive;
      } else if (negative == total) {
        out[j][k] = block_negative;
      } else {
        out[j][k] = block_mixed;
      }
    }
  }
  return out;
}

PoleReport pole_order(const MetzlerPencil& pencil, double root, const std::optional<Eigen::VectorXd>& v,
                      const std::optional<Eigen::VectorXd>& w, bool strict, const PencilTolerances& tol) {
  if (v.has_value() != w.has_value()) throw InputError("v and w must be given together");
  const Eigen::MatrixXd at_root = pencil.evaluate_real(root);
  if (!is_metzler(at_root)) throw InputError("A(root) is not Metzler");

  PoleReport report;
  report.root = root;
  report.partition = pencil.partition_at(root);
  report.basic_flags = basic_flags_at_root(pencil, root, tol);
  const auto& partition = report.partition;
  report.d = longest_chain_length(partition, ChainQuery{report.basic_flags, std::nullopt, std::nullopt});
  if (v) {
    for (Eigen::Index i = 0; i < v->size(); ++i) {
      if ((*v)(i) < 0.0 || (*w)(i) < 0.0) throw InputError("v and w must be nonnegative");
    }
    report.d_weighted = longest_chain_length(partition, ChainQuery{report.basic_flags, support_of(*v), support_of(*w)});
  }

  // Every symbolically nonzero off-diagonal entry must follow the access order at the root.
  const Digraph& symbolic = pencil.symbolic_pattern();
  for (std::size_t m = 0; m < symbolic.vertex_count(); ++m) {
    for (auto k : symbolic.successors(m)) {
      if (!partition.accesses(partition.class_of(m), partition.class_of(k))) {
        report.condition_v_ok = false;
        report.condition_v_offenders.emplace_back(m, k);
      }
    }
  }

  report.sign_condition = check_sign_condition(pencil, root, partition, report.basic_flags, tol);

  if (!report.condition_v_ok) {
    report.status = PoleStatus::condition_v_violated;
    const auto [m, k] = report.condition_v_offenders.front();
    report.diagnosis = "entry (" + std::to_string(m + 1) + "," + std::to_string(k + 1) +
                       ") connects classes against the access order at the root";
  } else if (report.sign_condition.status != SignCondition::satisfied) {
    report.status = PoleStatus::condition_vi_violated;
    report.diagnosis = report.sign_condition.status == SignCondition::zero_derivative
                           ? "a basic class has zero one-sided derivatives of its spectral abscissa"
                           : "basic classes have spectral-abscissa derivatives of mixed sign";
  }
  if (strict && report.status != PoleStatus::ok) throw DomainError(report.diagnosis);

  try {
    report.probe = laurent_probe(pencil, root);
    if (v) report.weighted_probe = laurent_probe(pencil, root, v, w);
  } catch (const DomainError& e) {
    report.diagnosis += (report.diagnosis.empty() ? "" : "; ") + std::string("numeric probe unavailable: ") + e.what();
    return report;
  }
  report.numeric_order_estimate = report.probe.order_estimate;

  report.block_signs = class_block_signs(report.probe.leading.real(), partition);
  if (report.status == PoleStatus::ok && report.probe.stable && report.probe.order == static_cast<int>(report.d)) {
    const auto lengths = pairwise_chain_lengths(partition, report.basic_flags);
    const int eta = report.sign_condition.eta;
    int power = 1;
    for (std::size_t i = 0; i < report.d; ++i) power *= -eta;
    const int expected = -power;  // sign of the (z - root)^-d coefficient blocks
    bool ok = true;
    for (std::size_t j = 0; j < partition.class_count(); ++j) {
      for (std::size_t k = 0; k < partition.class_count(); ++k) {
        const bool full = partition.accesses(j, k) && lengths[j][k] == report.d;
        ok = ok && report.block_signs[j][k] == (full ? expected : static_cast<int>(block_zero));
      }
    }
    report.block_signs_ok = ok;
  }
  return report;
}

Eigen::MatrixXd residue_simple(const MetzlerPencil& pencil, double root, const PencilTolerances& tol) {
  const auto partition = pencil.partition_at(root);
  if (!partition.is_irreducible()) throw DomainError("A(root) is reducible; the simple residue formula does not apply");
  const Eigen::MatrixXd a = pencil.evaluate_real(root);
  const auto perron = perron_data(a, true, tol.spectral);
  if (std::abs(perron.root) > tol.basic) throw DomainError("zeta(A(root)) is not zero");
  const Eigen::MatrixXd slope = pencil.derivative(Complex(root, 0.0)).real();
  const double denominator = perron.left.dot(slope * perron.right);
  const double scale = std::max(1.0, slope.cwiseAbs().maxCoeff());
  if (std::abs(denominator) <= 1e-12 * scale) throw DomainError("y^T A'(root) x vanishes");
  return perron.right * perron.left.transpose() / denominator;
}

Complex transform_value(const MetzlerPencil& pencil, Complex z, const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
  const auto n = static_cast<Eigen::Index>(pencil.size());
  if (v.size() != n || w.size() != n) throw InputError("v and w must have length N");
  const double zeta = zeta_at(pencil, z.real());
  if (!(zeta < 0.0)) throw DomainError("zeta(A(Re z)) = " + std::to_string(zeta) + " is not negative");
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(pencil.evaluate(z));
  const Eigen::VectorXcd x = lu.solve(w.cast<Complex>());
  if (!x.allFinite()) throw NumericError("singular solve in transform_value");
  return -v.cast<Complex>().dot(x);
}

}  // namespace erlangtail
