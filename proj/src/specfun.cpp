#include "fracdiff/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fracdiff/errors.hpp"
#include "fracdiff/laplace.hpp"

namespace fracdiff::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

constexpr int kLanczosG = 7;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Above this the power series for J loses too many digits; the Hankel
// expansion is accurate to ~exp(-2x) there.
constexpr double kBesselSwitch = 15.0;

// Relative estimate accepted when the preferred strategy misses its goal.
constexpr double kFallbackTolerance = 1e-6;

bool is_pole(double x) { return x <= 0.0 && x == std::floor(x); }

// sin(pi x) with the argument reduced exactly, so integers give 0.
double sinpi(double x) {
  double r = std::fmod(x, 2.0);
  if (r < 0.0) r += 2.0;
  double sign = 1.0;
  if (r >= 1.0) {
    r -= 1.0;
    sign = -1.0;
  }
  if (r == 0.0) return 0.0;
  if (r > 0.5) r = 1.0 - r;
  return sign * std::sin(kPi * r);
}

long double stirling_log_gamma(long double x) {
  // x >= 15; the first omitted term is below 1e-17 there.
  const long double x2 = 1.0L / (x * x);
  const long double series =
      (1.0L / 12.0L -
       x2 * (1.0L / 360.0L - x2 * (1.0L / 1260.0L - x2 * (1.0L / 1680.0L - x2 / 1188.0L)))) /
      x;
  return (x - 0.5L) * std::log(x) - x + 0.5L * std::log(2.0L * std::numbers::pi_v<long double>) +
         series;
}

// Gamma for x >= 0.5 in long double, whose range holds Gamma(171) and beyond.
long double gamma_ld(double x) {
  if (x == std::floor(x) && x <= 23.0) {
    long double f = 1.0L;
    for (int k = 2; k < static_cast<int>(x); ++k) f *= k;
    return f;
  }
  if (x >= 15.0) return std::exp(stirling_log_gamma(x));
  const long double xm = static_cast<long double>(x) - 1.0L;
  long double acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (xm + i);
  const long double t = xm + kLanczosG + 0.5L;
  return std::sqrt(2.0L * std::numbers::pi_v<long double>) * acc * std::pow(t, xm + 0.5L) *
         std::exp(-t);
}

long double bessel_series(double nu, double x) {
  const long double h = 0.5L * x;
  const long double h2 = -h * h;
  long double term = std::pow(h, static_cast<long double>(nu)) * rgamma(nu + 1.0);
  long double sum = term;
  for (int k = 1; k < 300; ++k) {
    term *= h2 / (static_cast<long double>(k) * (k + nu));
    sum += term;
    if (std::fabs(term) <= 1e-21L * std::fabs(sum) && k > h) break;
  }
  return sum;
}

double bessel_hankel(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 0.0;
  double q = 0.0;
  double a = 1.0;  // a_k / x^k
  double last = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 60; ++k) {
    const double mag = std::abs(a);
    if (mag > last) break;  // optimal truncation
    switch (k % 4) {
      case 0: p += a; break;
      case 1: q += a; break;
      case 2: p -= a; break;
      default: q -= a; break;
    }
    if (mag < 1e-17 * (std::abs(p) + std::abs(q))) break;
    last = mag;
    const double odd = 2.0 * k + 1.0;
    a *= (mu - odd * odd) / ((k + 1.0) * 8.0 * x);
  }
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double series_tolerance_scale(double value) { return std::max(std::abs(value), 1e-3); }

}  // namespace

double gamma_fn(double x) {
  if (std::isnan(x)) throw DomainError("gamma_fn: NaN argument");
  if (is_pole(x)) throw DomainError("gamma_fn: pole at non-positive integer");
  if (x < 0.5) {
    return static_cast<double>(std::numbers::pi_v<long double> / (sinpi(x) * gamma_ld(1.0 - x)));
  }
  return static_cast<double>(gamma_ld(x));
}

double log_abs_gamma(double x, int* sign) {
  if (std::isnan(x) || is_pole(x)) throw DomainError("log_abs_gamma: pole or NaN");
  int sg = 1;
  double value;
  if (x < 0.5) {
    const double sp = sinpi(x);
    sg = sp < 0.0 ? -1 : 1;
    value = std::log(kPi / std::abs(sp)) - log_abs_gamma(1.0 - x);
  } else if (x < 15.0) {
    value = static_cast<double>(std::log(gamma_ld(x)));
  } else {
    value = static_cast<double>(stirling_log_gamma(x));
  }
  if (sign) *sign = sg;
  return value;
}

double rgamma(double x) {
  if (is_pole(x)) return 0.0;
  if (x > 171.0) {
    return std::exp(-log_abs_gamma(x));
  }
  if (x < -170.0) {
    int sg = 1;
    const double l = log_abs_gamma(x, &sg);
    return sg * std::exp(-l);
  }
  return 1.0 / gamma_fn(x);
}

double bessel_j(double nu, double x) {
  if (!(nu >= -0.5)) throw DomainError("bessel_j: order must be >= -1/2");
  if (!(x >= 0.0)) throw DomainError("bessel_j: argument must be >= 0");
  if (x == 0.0) return nu == 0.0 ? 1.0 : (nu > 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  if (x <= kBesselSwitch) return static_cast<double>(bessel_series(nu, x));
  return bessel_hankel(nu, x);
}

MLParams::MLParams(double alpha_, double beta_, double gamma_)
    : alpha(alpha_), beta(beta_), gamma_p(gamma_) {
  validate();
}

void MLParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("MLParams: alpha must be > 0");
  if (!std::isfinite(beta)) throw DomainError("MLParams: beta must be finite");
  if (!(gamma_p >= 0.0) || !std::isfinite(gamma_p)) throw DomainError("MLParams: gamma must be >= 0");
}

void EvalPoint::validate() const {
  if (!std::isfinite(z)) throw DomainError("EvalPoint: z must be finite");
  if (!(precision_goal > 1e-15 && precision_goal < 1e-2)) {
    throw DomainError("EvalPoint: precision goal must lie in (1e-15, 1e-2)");
  }
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::exact: return "exact";
    case Strategy::series: return "series";
    case Strategy::contour: return "contour";
  }
  return "unknown";
}

Evaluation prabhakar_series(const MLParams& p, const EvalPoint& pt, const MLOptions& opt) {
  p.validate();
  pt.validate();
  const double z = pt.z;
  Evaluation out;
  out.strategy = Strategy::series;
  if (p.gamma_p == 0.0 || z == 0.0) {
    out.value = rgamma(p.beta);
    out.strategy = Strategy::exact;
    return out;
  }
  const double log_z = std::log(std::abs(z));
  // c_n = (g)_n z^n / n! carried both directly and as a logarithm; the
  // direct product is used while it and 1/Gamma stay representable.
  double c = 1.0;
  double log_c = 0.0;
  int sign_c = 1;
  long double sum = 0.0L;
  double abs_sum = 0.0;
  double term = 0.0;
  int small_run = 0;
  int n = 0;
  for (; n < opt.max_terms; ++n) {
    const double arg = p.alpha * n + p.beta;
    if (std::abs(c) < 1e300 && std::abs(c) > 1e-300 && arg < 170.0) {
      term = c * rgamma(arg);
    } else if (is_pole(arg)) {
      term = 0.0;
    } else {
      int sg = 1;
      const double lg = log_abs_gamma(arg, &sg);
      term = sign_c * sg * std::exp(log_c - lg);
    }
    sum += term;
    abs_sum += std::abs(term);
    if (std::abs(term) <= pt.precision_goal * std::abs(static_cast<double>(sum))) {
      if (++small_run >= 3) break;
    } else {
      small_run = 0;
    }
    const double ratio = (p.gamma_p + n) / (n + 1.0);
    c *= ratio * z;
    log_c += std::log(ratio) + log_z;
    if (z < 0.0) sign_c = -sign_c;
  }
  out.value = static_cast<double>(sum);
  out.error_estimate = 4.0 * kEps * abs_sum + std::abs(term);
  if (n >= opt.max_terms) {
    // Truncated without meeting the stopping rule.
    out.error_estimate = std::max(out.error_estimate, 10.0 * std::abs(term));
  }
  if (!std::isfinite(out.value)) out.error_estimate = std::numeric_limits<double>::infinity();
  return out;
}

Evaluation prabhakar_contour(const MLParams& p, const EvalPoint& pt, const MLOptions& opt) {
  p.validate();
  pt.validate();
  if (!(p.alpha <= 1.0)) {
    throw DomainError("prabhakar_contour: needs alpha <= 1");
  }
  const double a = p.alpha;
  const double b = p.beta;
  const double g = p.gamma_p;
  const double z = pt.z;
  laplace::LaplaceImage image{[a, b, g, z](laplace::Complex s) {
                                const laplace::Complex sa = laplace::cpow(s, a);
                                return laplace::cpow(s, a * g - b) * laplace::cpow(sa - z, -g);
                              },
                              z > 0.0 ? std::pow(z, 1.0 / a) : 0.0};
  Evaluation out;
  out.strategy = Strategy::contour;
  const double v1 = laplace::talbot_sum(image, 1.0, opt.talbot_nodes);
  const double v2 = laplace::talbot_sum(image, 1.0, laplace::companion_nodes(opt.talbot_nodes));
  out.value = v1;
  out.error_estimate = std::abs(v1 - v2);
  if (!std::isfinite(v1)) out.error_estimate = std::numeric_limits<double>::infinity();
  return out;
}

Evaluation prabhakar_eval(const MLParams& p, const EvalPoint& pt, const MLOptions& opt) {
  p.validate();
  pt.validate();
  if (p.gamma_p == 0.0 || pt.z == 0.0) {
    return {rgamma(p.beta), 0.0, Strategy::exact};
  }
  const bool contour_ok = p.alpha <= 1.0;
  auto accept = [&](const Evaluation& e, double tol) {
    return std::isfinite(e.value) && e.error_estimate <= tol * series_tolerance_scale(e.value);
  };
  Evaluation series;
  bool have_series = false;
  if (!(contour_ok && pt.z < -opt.z_switch)) {
    series = prabhakar_series(p, pt, opt);
    have_series = true;
    if (accept(series, pt.precision_goal)) return series;
  }
  if (contour_ok) {
    const Evaluation contour = prabhakar_contour(p, pt, opt);
    const bool contour_good = accept(contour, kFallbackTolerance);
    if (contour_good && (!have_series || contour.error_estimate <= series.error_estimate)) {
      return contour;
    }
    if (have_series && accept(series, kFallbackTolerance)) return series;
    if (contour_good) return contour;
    std::ostringstream msg;
    msg.precision(17);
    msg << "prabhakar: no strategy converged (alpha=" << p.alpha << ", beta=" << p.beta
        << ", gamma=" << p.gamma_p << ", z=" << pt.z << ")";
    throw EvaluationError(msg.str(), have_series ? std::min(series.error_estimate, contour.error_estimate)
                                                 : contour.error_estimate);
  }
  if (accept(series, kFallbackTolerance)) return series;
  std::ostringstream msg;
  msg.precision(17);
  msg << "prabhakar: series did not converge (alpha=" << p.alpha << ", beta=" << p.beta
      << ", gamma=" << p.gamma_p << ", z=" << pt.z << ")";
  throw EvaluationError(msg.str(), series.error_estimate);
}

double prabhakar(const MLParams& p, const EvalPoint& pt, const MLOptions& opt) {
  return prabhakar_eval(p, pt, opt).value;
}

double prabhakar(double alpha, double beta, double gamma, double z) {
  return prabhakar(MLParams(alpha, beta, gamma), EvalPoint{z});
}

double mittag_leffler(const MLParams& p, const EvalPoint& pt, const MLOptions& opt) {
  if (p.gamma_p != 1.0) throw DomainError("mittag_leffler: gamma must be 1");
  return prabhakar_eval(p, pt, opt).value;
}

double mittag_leffler(double alpha, double beta, double z) {
  return mittag_leffler(MLParams(alpha, beta, 1.0), EvalPoint{z});
}

double ml_kernel_derivative(double alpha, double t) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("ml_kernel_derivative: alpha must lie in (0, 1)");
  if (!(t > 0.0)) throw DomainError("ml_kernel_derivative: t must be > 0");
  const double a = 1.0 - alpha;
  return -std::pow(t, -alpha) * mittag_leffler(a, a, -std::pow(t, a));
}

}  // namespace fracdiff::specfun
