#pragma once

// Exact Monte Carlo for both model kinds and the estimators used to compare
// simulation with the analytic tail report.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "erlangtail/models.hpp"
#include "erlangtail/transforms.hpp"

namespace erlangtail {

enum class SampleKind { stopped_W_T, stationary_W };

std::string to_string(SampleKind kind);

struct SampleSet {
  std::vector<double> values;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
  std::uint64_t model_digest = 0;
  SampleKind kind = SampleKind::stopped_W_T;
  std::vector<int> final_states;           // continuous: state at the stopping time
  std::vector<std::size_t> cycle_lengths;  // discrete, when values enumerate whole cycles
};

/// Independent stream `stream` derived from a root seed.
Rng derive_stream(std::uint64_t seed, std::uint64_t stream);

struct SimulationOptions {
  unsigned workers = 1;        // 0 = hardware concurrency; never changes results
  std::size_t chunk = 4096;    // paths (or cycles) per RNG stream
  std::size_t max_events = 100'000'000;  // per path / per cycle guard
};

SampleSet simulate_continuous(const ContinuousModelSpec& spec, std::size_t n_paths, std::uint64_t seed,
                              const SimulationOptions& options = {});

enum class StationaryMode { regenerative, long_run };

struct DiscreteOptions {
  StationaryMode mode = StationaryMode::regenerative;
  // Regenerative: 0 keeps every position of whole cycles (at least n points,
  // cycle_lengths filled). k > 0 simulates cycles covering k*n positions and
  // draws n positions from them by length-biased cycle choice.
  std::size_t pool_factor = 0;
  std::size_t thinning = 1;    // long_run: keep every k-th step
  std::size_t pilot_cycles = 100;
};

SampleSet simulate_discrete(const DiscreteModelSpec& spec, std::size_t n, std::uint64_t seed,
                            const DiscreteOptions& mode = {}, const SimulationOptions& options = {});

struct LaplaceEstimate {
  double s = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
};

/// Mean and standard error of exp(s W). Enumerated regenerative samples use
/// the cycle-level ratio estimator for the standard error. If `strip` holds
/// (-beta, alpha), points beyond 0.6 of the way to either root are refused.
std::vector<LaplaceEstimate> empirical_laplace(const SampleSet& samples, const std::vector<double>& s_points,
                                               std::optional<std::pair<double, double>> strip = std::nullopt);

struct LaplaceComparison {
  double s = 0.0;
  double empirical = 0.0;
  double predicted = 0.0;
  double std_error = 0.0;
  double z = 0.0;  // (empirical - predicted) / std_error
};

/// Continuous: predicted value -varpi^T A(s)^-1 lambda.
std::vector<LaplaceComparison> compare_laplace(const SampleSet& samples, const ContinuousModelSpec& spec,
                                               const std::vector<double>& s_points);

/// Discrete: predicted value -p varpi^T A(s)^-1 1 with p the empirical reset
/// frequency; needs enumerated cycles. The standard error covers both
/// estimated quantities through the cycle-level ratio estimator.
std::vector<LaplaceComparison> compare_laplace(const SampleSet& samples, const DiscreteModelSpec& spec,
                                               const std::vector<double>& s_points);

enum class TailSideChoice { upper, lower };

struct TailWindow {
  double q_lo = 0.5;       // quantiles of the positive part on the chosen side
  double q_hi = 0.9999;
  std::size_t points = 100;
  bool inverse_term = true;  // include 1/w as a regressor
  TailSideChoice side = TailSideChoice::upper;
  std::size_t min_tail = 10'000;
};

struct TailFit {
  double alpha_hat = 0.0;
  double stderr_alpha = 0.0;
  double log_coefficient = 0.0;  // raw estimate of d - 1
  double d_raw = 0.0;
  int d_hat = 0;
  double w_lo = 0.0;
  double w_hi = 0.0;
  double r_squared = 0.0;
  std::size_t tail_count = 0;
};

/// Weighted least squares of log S(w) on (1, w, log w[, 1/w]).
TailFit fit_tail(const std::vector<double>& values, const TailWindow& window = {});

struct SurvivalPoint {
  double w = 0.0;
  double survival = 0.0;
  std::size_t count = 0;
};

/// Empirical Pr(W > w) at `points` evenly spaced w over the sample range.
std::vector<SurvivalPoint> survival_curve(const std::vector<double>& values, std::size_t points = 512);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Asymptotic critical value of the two-sample statistic at level `level`.
double ks_critical(std::size_t n, std::size_t m, double level = 1e-3);

/// Pairwise (cascade) summation.
double pairwise_sum(const double* data, std::size_t n);

}  // namespace erlangtail
