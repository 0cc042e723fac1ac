#pragma once

// Closed catalog of light-tailed building blocks: Laplace transforms of jump
// variables and Levy exponents of state-wise additive dynamics.

#include <complex>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>

namespace erlangtail {

using Complex = std::complex<double>;
using Rng = std::mt19937_64;

/// Real interval of convergence; a complex z belongs iff Re(z) does.
struct Strip {
  double left = -std::numeric_limits<double>::infinity();
  double right = std::numeric_limits<double>::infinity();
  bool left_closed = false;
  bool right_closed = false;

  static Strip whole_line() { return {}; }

  bool contains(double re) const;
  bool contains_open(double re) const { return re > left && re < right; }
  bool contains(Complex z) const { return contains(z.real()); }
  Strip intersect(const Strip& other) const;
  double width() const { return right - left; }
};

enum class TransformKind { unit, constant_shift, gaussian, exponential_right, exponential_left, asymmetric_laplace };
enum class TransformRole { laplace_transform, levy_exponent };

std::string to_string(TransformKind kind);
std::string to_string(TransformRole role);

struct TransformSpec;

/// intensity * (jump(z) - 1), attached to a Levy exponent.
struct CompoundPoisson {
  double intensity = 0.0;
  std::shared_ptr<const TransformSpec> jump;
};

struct TransformSpec {
  TransformKind kind = TransformKind::unit;
  TransformRole role = TransformRole::laplace_transform;
  double shift = 0.0;        // constant_shift (a drift rate for Levy exponents)
  double mean = 0.0;         // gaussian
  double variance = 0.0;     // gaussian
  double rate = 0.0;         // exponential_right / exponential_left
  double rate_right = 0.0;   // asymmetric_laplace
  double rate_left = 0.0;    // asymmetric_laplace
  double weight_right = 0.0; // asymmetric_laplace, Pr(X > 0)
  std::optional<CompoundPoisson> compound_poisson;  // Levy role only

  static TransformSpec unit(TransformRole role = TransformRole::laplace_transform);
  static TransformSpec constant_shift(double c, TransformRole role = TransformRole::laplace_transform);
  static TransformSpec gaussian(double mean, double variance, TransformRole role = TransformRole::laplace_transform);
  static TransformSpec exponential_right(double rate);
  static TransformSpec exponential_left(double rate);
  static TransformSpec asymmetric_laplace(double rate_right, double rate_left, double weight_right);

  TransformSpec with_compound_poisson(double intensity, const TransformSpec& jump) const;

  bool is_unit() const { return kind == TransformKind::unit && !compound_poisson; }
};

/// Throws InputError when parameters are out of range or the kind is not
/// admissible for the role.
void check_spec(const TransformSpec& spec);

Strip strip_of(const TransformSpec& spec);

/// Throws DomainError outside the open strip.
Complex evaluate(const TransformSpec& spec, Complex z);
Complex derivative(const TransformSpec& spec, Complex z);

/// Laplace role: one draw of the jump variable (elapsed must be empty).
/// Levy role: the increment over `elapsed` time units.
double sample(const TransformSpec& spec, Rng& rng, std::optional<double> elapsed = std::nullopt);

}  // namespace erlangtail
