#include "erlangtail/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include <Eigen/QR>

#include "erlangtail/errors.hpp"
#include "erlangtail/io.hpp"

namespace erlangtail {

std::string to_string(SampleKind kind) {
  return kind == SampleKind::stopped_W_T ? "stopped_W_T" : "stationary_W";
}

Rng derive_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x6572u};
  return Rng(seq);
}

double pairwise_sum(const double* data, std::size_t n) {
  if (n <= 64) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

namespace {

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

// Index of the first cumulative weight exceeding u; the last positive entry otherwise.
std::size_t pick(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it != cumulative.end()) return static_cast<std::size_t>(it - cumulative.begin());
  std::size_t k = cumulative.size() - 1;
  while (k > 0 && cumulative[k] == cumulative[k - 1]) --k;
  return k;
}

std::vector<double> cumulative_of(const Eigen::VectorXd& weights) {
  std::vector<double> out(static_cast<std::size_t>(weights.size()));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    acc += weights(i);
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

unsigned resolve_workers(unsigned requested) {
  if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

// Runs body(chunk) for chunk in [first, last) with static round-robin assignment.
template <typename Body>
void run_chunks(std::size_t first, std::size_t last, unsigned workers, Body body) {
  const std::size_t count = last - first;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t c = first; c < last; ++c) body(c);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t c = first + w; c < last; c += workers) body(c);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct ContinuousState {
  double total_rate = 0.0;
  double stop_rate = 0.0;
  std::vector<double> move_cumulative;  // over all targets, zero on the diagonal
};

}  // namespace

SampleSet simulate_continuous(const ContinuousModelSpec& spec, std::size_t n_paths, std::uint64_t seed,
                              const SimulationOptions& options) {
  const auto validation = validate(spec);
  if (!validation.valid) throw DomainError("model fails validation");
  const std::size_t n = spec.size();

  std::vector<ContinuousState> states(n);
  for (std::size_t m = 0; m < n; ++m) {
    Eigen::VectorXd moves = spec.generator.row(static_cast<Eigen::Index>(m)).transpose();
    moves(static_cast<Eigen::Index>(m)) = 0.0;
    states[m].move_cumulative = cumulative_of(moves);
    states[m].stop_rate = spec.intensities(static_cast<Eigen::Index>(m));
    states[m].total_rate = states[m].move_cumulative.back() + states[m].stop_rate;
  }
  const auto initial = cumulative_of(spec.initial_law);

  SampleSet out;
  out.values.resize(n_paths);
  out.final_states.resize(n_paths);
  out.n_paths = n_paths;
  out.seed = seed;
  out.model_digest = model_digest(spec);
  out.kind = SampleKind::stopped_W_T;

  const std::size_t chunks = (n_paths + options.chunk - 1) / options.chunk;
  run_chunks(0, chunks, resolve_workers(options.workers), [&](std::size_t c) {
    Rng rng = derive_stream(seed, c);
    const std::size_t end = std::min(n_paths, (c + 1) * options.chunk);
    for (std::size_t i = c * options.chunk; i < end; ++i) {
      std::size_t state = pick(initial, uniform01(rng) * initial.back());
      double w = 0.0;
      for (std::size_t events = 0;; ++events) {
        const auto& st = states[state];
        if (st.total_rate <= 0.0) throw DomainError("state " + std::to_string(state + 1) + " can neither move nor stop");
        if (events >= options.max_events) throw NumericError("path exceeded the event limit");
        const double tau = std::exponential_distribution<double>(st.total_rate)(rng);
        w += sample(spec.levy[state], rng, tau);
        const double u = uniform01(rng) * st.total_rate;
        if (u < st.stop_rate) break;
        const std::size_t next = pick(st.move_cumulative, u - st.stop_rate);
        w += sample(spec.jumps[state][next], rng);
        state = next;
      }
      out.values[i] = w;
      out.final_states[i] = static_cast<int>(state);
    }
  });
  return out;
}

namespace {

struct DiscreteTables {
  std::vector<std::vector<double>> survive_cumulative;  // per state, over targets
  std::vector<double> initial;
};

DiscreteTables discrete_tables(const DiscreteModelSpec& spec) {
  DiscreteTables t;
  for (Eigen::Index m = 0; m < spec.transition.rows(); ++m) {
    const Eigen::VectorXd weights = spec.transition.row(m).cwiseProduct(spec.survival.row(m)).transpose();
    t.survive_cumulative.push_back(cumulative_of(weights));
  }
  t.initial = cumulative_of(spec.initial_law);
  return t;
}

// One step from `state`; returns false on a reset.
bool discrete_step(const DiscreteModelSpec& spec, const DiscreteTables& t, Rng& rng, std::size_t& state, double& w) {
  const auto& cum = t.survive_cumulative[state];
  const double u = uniform01(rng);
  if (u < cum.back()) {
    const std::size_t next = pick(cum, u);
    w += sample(spec.increments[state][next], rng);
    state = next;
    return true;
  }
  w = 0.0;
  state = pick(t.initial, uniform01(rng) * t.initial.back());
  return false;
}

struct CycleBatch {
  std::vector<double> values;
  std::vector<std::size_t> lengths;
};

CycleBatch simulate_cycles(const DiscreteModelSpec& spec, const DiscreteTables& t, Rng& rng, std::size_t cycles,
                           std::size_t max_events) {
  CycleBatch batch;
  batch.lengths.reserve(cycles);
  for (std::size_t c = 0; c < cycles; ++c) {
    std::size_t state = pick(t.initial, uniform01(rng) * t.initial.back());
    double w = 0.0;
    std::size_t length = 1;
    batch.values.push_back(w);
    while (discrete_step(spec, t, rng, state, w)) {
      batch.values.push_back(w);
      if (++length > max_events) throw DomainError("no reset within the step limit; check the final-class clause");
    }
    batch.lengths.push_back(length);
  }
  return batch;
}

}  // namespace

SampleSet simulate_discrete(const DiscreteModelSpec& spec, std::size_t n, std::uint64_t seed,
                            const DiscreteOptions& mode, const SimulationOptions& options) {
  const auto validation = validate(spec);
  if (!validation.valid) throw DomainError("model fails validation");
  if (n == 0) throw InputError("need at least one draw");
  const auto tables = discrete_tables(spec);

  SampleSet out;
  out.n_paths = n;
  out.seed = seed;
  out.model_digest = model_digest(spec);
  out.kind = SampleKind::stationary_W;

  if (mode.mode == StationaryMode::long_run) {
    if (mode.thinning == 0) throw InputError("thinning must be positive");
    Rng rng = derive_stream(seed, 0);
    std::size_t state = pick(tables.initial, uniform01(rng) * tables.initial.back());
    double w = 0.0;
    // The path starts at a reset; a pilot run estimates the mean cycle length.
    std::size_t steps = 0;
    std::size_t resets = 0;
    std::size_t since_reset = 0;
    while (resets < mode.pilot_cycles) {
      ++steps;
      if (!discrete_step(spec, tables, rng, state, w)) {
        ++resets;
        since_reset = 0;
      } else if (++since_reset > options.max_events) {
        throw DomainError("no reset within the step limit; check the final-class clause");
      }
    }
    const double mean_cycle = static_cast<double>(steps) / static_cast<double>(resets);
    const auto burn_in = static_cast<std::size_t>(std::ceil(10.0 * mean_cycle));
    for (; steps < burn_in; ++steps) discrete_step(spec, tables, rng, state, w);
    out.values.reserve(n);
    while (out.values.size() < n) {
      for (std::size_t k = 0; k < mode.thinning; ++k) discrete_step(spec, tables, rng, state, w);
      out.values.push_back(w);
    }
    return out;
  }

  const std::size_t target = mode.pool_factor == 0 ? n : mode.pool_factor * n;
  const unsigned workers = resolve_workers(options.workers);
  const std::size_t round = std::max<std::size_t>(4, 2 * static_cast<std::size_t>(workers));
  std::vector<double> pool;
  std::vector<std::size_t> lengths;
  std::size_t next_chunk = 0;
  bool done = false;
  while (!done) {
    std::vector<CycleBatch> batches(round);
    run_chunks(next_chunk, next_chunk + round, workers, [&](std::size_t c) {
      Rng rng = derive_stream(seed, c);
      batches[c - next_chunk] = simulate_cycles(spec, tables, rng, options.chunk, options.max_events);
    });
    next_chunk += round;
    // Append whole cycles in chunk order until the target is covered.
    for (const auto& batch : batches) {
      std::size_t offset = 0;
      for (auto len : batch.lengths) {
        pool.insert(pool.end(), batch.values.begin() + static_cast<std::ptrdiff_t>(offset),
                    batch.values.begin() + static_cast<std::ptrdiff_t>(offset + len));
        lengths.push_back(len);
        offset += len;
        if (pool.size() >= target) {
          done = true;
          break;
        }
      }
      if (done) break;
    }
  }

  if (mode.pool_factor == 0) {
    out.values = std::move(pool);
    out.cycle_lengths = std::move(lengths);
    return out;
  }
  // A uniform position over the pool is a length-biased cycle with a uniform offset.
  Rng rng = derive_stream(seed, ~std::uint64_t{0});
  std::uniform_int_distribution<std::size_t> position(0, pool.size() - 1);
  out.values.resize(n);
  for (auto& v : out.values) v = pool[position(rng)];
  return out;
}

namespace {

struct RatioParts {
  double total = 0.0;
  double std_error = 0.0;
};

// Per-cycle sums of f(W) and the ratio-estimator standard error of total/ΣL.
std::vector<double> cycle_sums(const std::vector<double>& terms, const std::vector<std::size_t>& lengths) {
  std::vector<double> sums;
  sums.reserve(lengths.size());
  std::size_t offset = 0;
  for (auto len : lengths) {
    sums.push_back(pairwise_sum(terms.data() + offset, len));
    offset += len;
  }
  return sums;
}

double sample_sd(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  const double mean = pairwise_sum(x.data(), x.size()) / static_cast<double>(x.size());
  std::vector<double> sq(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - mean) * (x[i] - mean);
  return std::sqrt(pairwise_sum(sq.data(), sq.size()) / static_cast<double>(x.size() - 1));
}

bool has_cycles(const SampleSet& samples) {
  if (samples.cycle_lengths.empty()) return false;
  const auto total = std::accumulate(samples.cycle_lengths.begin(), samples.cycle_lengths.end(), std::size_t{0});
  if (total != samples.values.size()) throw InputError("cycle lengths do not cover the sample");
  return true;
}

}  // namespace

std::vector<LaplaceEstimate> empirical_laplace(const SampleSet& samples, const std::vector<double>& s_points,
                                               std::optional<std::pair<double, double>> strip) {
  if (samples.values.empty()) throw InputError("empty sample");
  const bool cycles = has_cycles(samples);
  std::vector<LaplaceEstimate> out;
  std::vector<double> terms(samples.values.size());
  for (double s : s_points) {
    if (strip) {
      const auto [lower, upper] = *strip;
      if (s > 0.6 * upper || s < 0.6 * lower) {
        throw DomainError("s = " + std::to_string(s) + " is outside the finite-variance guard band");
      }
    }
    for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::exp(s * samples.values[i]);
    const double n = static_cast<double>(terms.size());
    LaplaceEstimate e;
    e.s = s;
    e.mean = pairwise_sum(terms.data(), terms.size()) / n;
    if (cycles) {
      auto sums = cycle_sums(terms, samples.cycle_lengths);
      for (std::size_t c = 0; c < sums.size(); ++c) sums[c] -= e.mean * static_cast<double>(samples.cycle_lengths[c]);
      e.std_error = sample_sd(sums) * std::sqrt(static_cast<double>(sums.size())) / n;
    } else {
      e.std_error = sample_sd(terms) / std::sqrt(n);
    }
    out.push_back(e);
  }
  return out;
}

namespace {

double z_score(double diff, double se) {
  if (se > 0.0) return diff / se;
  return diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
}

}  // namespace

std::vector<LaplaceComparison> compare_laplace(const SampleSet& samples, const ContinuousModelSpec& spec,
                                               const std::vector<double>& s_points) {
  const auto pencil = build_pencil(spec);
  std::vector<LaplaceComparison> out;
  for (const auto& e : empirical_laplace(samples, s_points)) {
    LaplaceComparison c;
    c.s = e.s;
    c.empirical = e.mean;
    c.std_error = e.std_error;
    c.predicted = transform_value(pencil, e.s, spec.initial_law, spec.intensities).real();
    c.z = z_score(c.empirical - c.predicted, c.std_error);
    out.push_back(c);
  }
  return out;
}

std::vector<LaplaceComparison> compare_laplace(const SampleSet& samples, const DiscreteModelSpec& spec,
                                               const std::vector<double>& s_points) {
  if (!has_cycles(samples)) throw InputError("discrete comparison needs enumerated regenerative cycles");
  const auto pencil = build_pencil(spec);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(spec.size()));
  const double total_length = static_cast<double>(samples.values.size());
  const double cycles = static_cast<double>(samples.cycle_lengths.size());
  std::vector<double> terms(samples.values.size());
  std::vector<LaplaceComparison> out;
  for (double s : s_points) {
    // E[cycle sum of e^{sW}] equals -varpi^T A(s)^-1 1.
    const double per_cycle = transform_value(pencil, s, spec.initial_law, ones).real();
    for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::exp(s * samples.values[i]);
    auto sums = cycle_sums(terms, samples.cycle_lengths);
    LaplaceComparison c;
    c.s = s;
    c.empirical = pairwise_sum(sums.data(), sums.size()) / total_length;
    c.predicted = cycles / total_length * per_cycle;
    for (auto& x : sums) x -= per_cycle;
    c.std_error = sample_sd(sums) * std::sqrt(cycles) / total_length;
    c.z = z_score(c.empirical - c.predicted, c.std_error);
    out.push_back(c);
  }
  return out;
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::size_t count_above(const std::vector<double>& sorted, double w) {
  return static_cast<std::size_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), w));
}

}  // namespace

TailFit fit_tail(const std::vector<double>& values, const TailWindow& window) {
  if (!(window.q_lo >= 0.0 && window.q_lo < window.q_hi && window.q_hi <= 1.0)) throw InputError("bad quantile window");
  if (window.points < 8) throw InputError("need at least 8 grid points");
  const double sign = window.side == TailSideChoice::upper ? 1.0 : -1.0;
  std::vector<double> tail;
  for (double v : values) {
    if (sign * v > 0.0) tail.push_back(sign * v);
  }
  if (tail.size() < 2) throw DomainError("insufficient tail mass");
  std::sort(tail.begin(), tail.end());

  TailFit fit;
  fit.w_lo = quantile_sorted(tail, window.q_lo);
  fit.w_hi = quantile_sorted(tail, window.q_hi);
  fit.tail_count = count_above(tail, fit.w_lo);
  if (fit.tail_count < window.min_tail || !(fit.w_hi > fit.w_lo)) {
    throw DomainError("insufficient tail mass: " + std::to_string(fit.tail_count) + " samples above the window start");
  }

  const std::size_t p = window.inverse_term ? 4 : 3;
  const double total = static_cast<double>(values.size());
  std::vector<double> ws;
  std::vector<double> ys;
  std::vector<double> weights;
  for (std::size_t i = 0; i < window.points; ++i) {
    const double w = fit.w_lo + (fit.w_hi - fit.w_lo) * static_cast<double>(i) / static_cast<double>(window.points - 1);
    const auto count = count_above(tail, w);
    if (count == 0) continue;
    ws.push_back(w);
    ys.push_back(std::log(static_cast<double>(count) / total));
    weights.push_back(static_cast<double>(count));  // var(log S) ~ 1 / count
  }
  const auto m = static_cast<Eigen::Index>(ws.size());
  if (m <= static_cast<Eigen::Index>(p)) throw DomainError("insufficient tail mass: too few grid points with data");

  Eigen::MatrixXd x(m, static_cast<Eigen::Index>(p));
  Eigen::VectorXd y(m);
  Eigen::VectorXd root_w(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double w = ws[static_cast<std::size_t>(i)];
    x(i, 0) = 1.0;
    x(i, 1) = w;
    x(i, 2) = std::log(w);
    if (p == 4) x(i, 3) = 1.0 / w;
    y(i) = ys[static_cast<std::size_t>(i)];
    root_w(i) = std::sqrt(weights[static_cast<std::size_t>(i)]);
  }
  const Eigen::MatrixXd xw = root_w.asDiagonal() * x;
  const Eigen::VectorXd yw = root_w.asDiagonal() * y;
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xw);
  const Eigen::VectorXd beta = qr.solve(yw);
  const Eigen::VectorXd resid = yw - xw * beta;

  const double ssr = resid.squaredNorm();
  const double weight_sum = root_w.squaredNorm();
  const double y_bar = root_w.cwiseAbs2().dot(y) / weight_sum;
  const double sst = root_w.cwiseAbs2().dot((y.array() - y_bar).square().matrix());
  fit.r_squared = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
  const double sigma2 = ssr / static_cast<double>(m - static_cast<Eigen::Index>(p));
  const Eigen::MatrixXd cov = sigma2 * (xw.transpose() * xw).inverse();

  fit.alpha_hat = -beta(1);
  fit.stderr_alpha = std::sqrt(std::max(0.0, cov(1, 1)));
  fit.log_coefficient = beta(2);
  fit.d_raw = 1.0 + beta(2);
  fit.d_hat = 1 + static_cast<int>(std::lround(beta(2)));
  if (!(fit.alpha_hat > 0.0)) throw DomainError("fitted decay rate is not positive; heavy tail or bad window");
  return fit;
}

std::vector<SurvivalPoint> survival_curve(const std::vector<double>& values, std::size_t points) {
  if (values.empty()) throw InputError("empty sample");
  if (points < 2) throw InputError("need at least two survival points");
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front();
  const double hi = sorted.back();
  const double total = static_cast<double>(sorted.size());
  std::vector<SurvivalPoint> out;
  out.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double w = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    const auto count = count_above(sorted, w);
    out.push_back({w, static_cast<double>(count) / total, count});
  }
  return out;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InputError("empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical(std::size_t n, std::size_t m, double level) {
  const double c = std::sqrt(-0.5 * std::log(level / 2.0));
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return c * std::sqrt((nn + mm) / (nn * mm));
}

}  // namespace erlangtail
