#include "erlangtail/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "erlangtail/errors.hpp"

namespace erlangtail {

bool Strip::contains(double re) const {
  const bool above = left_closed ? re >= left : re > left;
  const bool below = right_closed ? re <= right : re < right;
  return above && below;
}

Strip Strip::intersect(const Strip& other) const {
  Strip out;
  if (left > other.left) {
    out.left = left;
    out.left_closed = left_closed;
  } else if (other.left > left) {
    out.left = other.left;
    out.left_closed = other.left_closed;
  } else {
    out.left = left;
    out.left_closed = left_closed && other.left_closed;
  }
  if (right < other.right) {
    out.right = right;
    out.right_closed = right_closed;
  } else if (other.right < right) {
    out.right = other.right;
    out.right_closed = other.right_closed;
  } else {
    out.right = right;
    out.right_closed = right_closed && other.right_closed;
  }
  return out;
}

std::string to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::unit: return "unit";
    case TransformKind::constant_shift: return "constant_shift";
    case TransformKind::gaussian: return "gaussian";
    case TransformKind::exponential_right: return "exponential_right";
    case TransformKind::exponential_left: return "exponential_left";
    case TransformKind::asymmetric_laplace: return "asymmetric_laplace";
  }
  return "unknown";
}

std::string to_string(TransformRole role) {
  return role == TransformRole::laplace_transform ? "laplace_transform" : "levy_exponent";
}

TransformSpec TransformSpec::unit(TransformRole role) {
  TransformSpec s;
  s.role = role;
  return s;
}

TransformSpec TransformSpec::constant_shift(double c, TransformRole role) {
  TransformSpec s;
  s.kind = TransformKind::constant_shift;
  s.role = role;
  s.shift = c;
  check_spec(s);
  return s;
}

TransformSpec TransformSpec::gaussian(double mean, double variance, TransformRole role) {
  TransformSpec s;
  s.kind = TransformKind::gaussian;
  s.role = role;
  s.mean = mean;
  s.variance = variance;
  check_spec(s);
  return s;
}

TransformSpec TransformSpec::exponential_right(double rate) {
  TransformSpec s;
  s.kind = TransformKind::exponential_right;
  s.rate = rate;
  check_spec(s);
  return s;
}

TransformSpec TransformSpec::exponential_left(double rate) {
  TransformSpec s;
  s.kind = TransformKind::exponential_left;
  s.rate = rate;
  check_spec(s);
  return s;
}

TransformSpec TransformSpec::asymmetric_laplace(double rate_right, double rate_left, double weight_right) {
  TransformSpec s;
  s.kind = TransformKind::asymmetric_laplace;
  s.rate_right = rate_right;
  s.rate_left = rate_left;
  s.weight_right = weight_right;
  check_spec(s);
  return s;
}

TransformSpec TransformSpec::with_compound_poisson(double intensity, const TransformSpec& jump) const {
  TransformSpec s = *this;
  s.compound_poisson = CompoundPoisson{intensity, std::make_shared<const TransformSpec>(jump)};
  check_spec(s);
  return s;
}

void check_spec(const TransformSpec& spec) {
  auto finite = [](double x) { return std::isfinite(x); };
  switch (spec.kind) {
    case TransformKind::unit:
      break;
    case TransformKind::constant_shift:
      if (!finite(spec.shift)) throw InputError("constant_shift: shift must be finite");
      break;
    case TransformKind::gaussian:
      if (!finite(spec.mean) || !finite(spec.variance) || spec.variance < 0.0) {
        throw InputError("gaussian: need finite mean and variance >= 0");
      }
      break;
    case TransformKind::exponential_right:
    case TransformKind::exponential_left:
      if (!(spec.rate > 0.0) || !finite(spec.rate)) throw InputError(to_string(spec.kind) + ": rate must be positive");
      break;
    case TransformKind::asymmetric_laplace:
      if (!(spec.rate_right > 0.0) || !(spec.rate_left > 0.0) || !finite(spec.rate_right) || !finite(spec.rate_left)) {
        throw InputError("asymmetric_laplace: rates must be positive");
      }
      if (!(spec.weight_right >= 0.0 && spec.weight_right <= 1.0)) {
        throw InputError("asymmetric_laplace: weight_right must lie in [0, 1]");
      }
      break;
  }
  if (spec.role == TransformRole::levy_exponent) {
    const bool allowed = spec.kind == TransformKind::unit || spec.kind == TransformKind::constant_shift ||
                         spec.kind == TransformKind::gaussian;
    if (!allowed) throw InputError("Levy exponents must be unit, constant_shift or gaussian, got " + to_string(spec.kind));
    if (spec.compound_poisson) {
      const auto& cp = *spec.compound_poisson;
      if (!(cp.intensity >= 0.0) || !finite(cp.intensity)) throw InputError("compound Poisson intensity must be >= 0");
      if (!cp.jump) throw InputError("compound Poisson jump law missing");
      if (cp.jump->role != TransformRole::laplace_transform || cp.jump->compound_poisson) {
        throw InputError("compound Poisson jump must be a plain Laplace transform");
      }
      check_spec(*cp.jump);
    }
  } else if (spec.compound_poisson) {
    throw InputError("compound Poisson terms only attach to Levy exponents");
  }
}

Strip strip_of(const TransformSpec& spec) {
  Strip s;
  switch (spec.kind) {
    case TransformKind::exponential_right:
      s.right = spec.rate;
      break;
    case TransformKind::exponential_left:
      s.left = -spec.rate;
      break;
    case TransformKind::asymmetric_laplace:
      s.left = -spec.rate_left;
      s.right = spec.rate_right;
      break;
    default:
      break;
  }
  if (spec.compound_poisson && spec.compound_poisson->intensity > 0.0) {
    s = s.intersect(strip_of(*spec.compound_poisson->jump));
  }
  return s;
}

namespace {

void require_inside(const TransformSpec& spec, Complex z) {
  if (!strip_of(spec).contains_open(z.real())) {
    throw DomainError(to_string(spec.kind) + ": Re(z) = " + std::to_string(z.real()) + " outside the strip");
  }
}

// Value of the Laplace transform (role-independent part).
Complex laplace_value(const TransformSpec& spec, Complex z) {
  switch (spec.kind) {
    case TransformKind::unit: return 1.0;
    case TransformKind::constant_shift: return std::exp(spec.shift * z);
    case TransformKind::gaussian: return std::exp(spec.mean * z + 0.5 * spec.variance * z * z);
    case TransformKind::exponential_right: return spec.rate / (spec.rate - z);
    case TransformKind::exponential_left: return spec.rate / (spec.rate + z);
    case TransformKind::asymmetric_laplace:
      return spec.weight_right * spec.rate_right / (spec.rate_right - z) +
             (1.0 - spec.weight_right) * spec.rate_left / (spec.rate_left + z);
  }
  return 1.0;
}

Complex laplace_derivative(const TransformSpec& spec, Complex z) {
  switch (spec.kind) {
    case TransformKind::unit: return 0.0;
    case TransformKind::constant_shift: return spec.shift * std::exp(spec.shift * z);
    case TransformKind::gaussian:
      return (spec.mean + spec.variance * z) * std::exp(spec.mean * z + 0.5 * spec.variance * z * z);
    case TransformKind::exponential_right: return spec.rate / ((spec.rate - z) * (spec.rate - z));
    case TransformKind::exponential_left: return -spec.rate / ((spec.rate + z) * (spec.rate + z));
    case TransformKind::asymmetric_laplace:
      return spec.weight_right * spec.rate_right / ((spec.rate_right - z) * (spec.rate_right - z)) -
             (1.0 - spec.weight_right) * spec.rate_left / ((spec.rate_left + z) * (spec.rate_left + z));
  }
  return 0.0;
}

double laplace_sample(const TransformSpec& spec, Rng& rng) {
  switch (spec.kind) {
    case TransformKind::unit: return 0.0;
    case TransformKind::constant_shift: return spec.shift;
    case TransformKind::gaussian:
      if (spec.variance == 0.0) return spec.mean;
      return std::normal_distribution<double>(spec.mean, std::sqrt(spec.variance))(rng);
    case TransformKind::exponential_right: return std::exponential_distribution<double>(spec.rate)(rng);
    case TransformKind::exponential_left: return -std::exponential_distribution<double>(spec.rate)(rng);
    case TransformKind::asymmetric_laplace: {
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      if (u < spec.weight_right) return std::exponential_distribution<double>(spec.rate_right)(rng);
      return -std::exponential_distribution<double>(spec.rate_left)(rng);
    }
  }
  return 0.0;
}

}  // namespace

Complex evaluate(const TransformSpec& spec, Complex z) {
  require_inside(spec, z);
  if (spec.role == TransformRole::laplace_transform) return laplace_value(spec, z);

  Complex out = 0.0;
  switch (spec.kind) {
    case TransformKind::constant_shift: out = spec.shift * z; break;
    case TransformKind::gaussian: out = spec.mean * z + 0.5 * spec.variance * z * z; break;
    default: break;
  }
  if (spec.compound_poisson) {
    const auto& cp = *spec.compound_poisson;
    out += cp.intensity * (laplace_value(*cp.jump, z) - 1.0);
  }
  return out;
}

Complex derivative(const TransformSpec& spec, Complex z) {
  require_inside(spec, z);
  if (spec.role == TransformRole::laplace_transform) return laplace_derivative(spec, z);

  Complex out = 0.0;
  switch (spec.kind) {
    case TransformKind::constant_shift: out = spec.shift; break;
    case TransformKind::gaussian: out = spec.mean + spec.variance * z; break;
    default: break;
  }
  if (spec.compound_poisson) {
    const auto& cp = *spec.compound_poisson;
    out += cp.intensity * laplace_derivative(*cp.jump, z);
  }
  return out;
}

double sample(const TransformSpec& spec, Rng& rng, std::optional<double> elapsed) {
  if (spec.role == TransformRole::laplace_transform) {
    if (elapsed) throw InputError("elapsed time given for a Laplace-transform sampler");
    return laplace_sample(spec, rng);
  }
  if (!elapsed) throw InputError("Levy increment needs an elapsed time");
  const double t = *elapsed;
  if (!(t >= 0.0)) throw InputError("elapsed time must be nonnegative");

  double out = 0.0;
  switch (spec.kind) {
    case TransformKind::constant_shift: out = spec.shift * t; break;
    case TransformKind::gaussian:
      out = spec.mean * t;
      if (spec.variance > 0.0 && t > 0.0) out += std::normal_distribution<double>(0.0, std::sqrt(spec.variance * t))(rng);
      break;
    default: break;
  }
  if (spec.compound_poisson && spec.compound_poisson->intensity > 0.0 && t > 0.0) {
    const auto& cp = *spec.compound_poisson;
    const auto count = std::poisson_distribution<long>(cp.intensity * t)(rng);
    for (long i = 0; i < count; ++i) out += laplace_sample(*cp.jump, rng);
  }
  return out;
}

}  // namespace erlangtail
