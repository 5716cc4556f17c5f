#pragma once

#include <string>

namespace fracdiff::specfun {

/// Gamma function for real x away from the poles 0, -1, -2, ...
/// Lanczos (g = 7, 9 terms) below 15, Stirling above, reflection for x < 1/2.
double gamma_fn(double x);

/// log|Gamma(x)|; *sign receives the sign of Gamma(x) when non-null.
double log_abs_gamma(double x, int* sign = nullptr);

/// 1 / Gamma(x), entire: returns 0 at the poles.
double rgamma(double x);

/// Bessel function of the first kind J_nu(x), nu >= -1/2, x >= 0.
double bessel_j(double nu, double x);

/// (alpha, beta, gamma) of E^gamma_{alpha,beta}. gamma_p is the Pochhammer
/// parameter; gamma_p = 1 gives the two-parameter function.
struct MLParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma_p = 1.0;

  MLParams() = default;
  MLParams(double alpha_, double beta_, double gamma_ = 1.0);
  void validate() const;
};

struct EvalPoint {
  double z = 0.0;
  double precision_goal = 1e-12;

  void validate() const;
};

struct MLOptions {
  /// Real arguments below -z_switch go straight to the contour.
  double z_switch = 5.0;
  int max_terms = 400;
  int talbot_nodes = 32;
};

enum class Strategy { exact, series, contour };

std::string to_string(Strategy s);

struct Evaluation {
  double value = 0.0;
  double error_estimate = 0.0;  ///< absolute
  Strategy strategy = Strategy::series;
};

/// Power series sum_n (g)_n z^n / (n! Gamma(a n + b)). Never throws on
/// slow convergence; the estimate reports cancellation and truncation.
Evaluation prabhakar_series(const MLParams& p, const EvalPoint& pt, const MLOptions& opt = {});

/// Inverse Laplace transform of s^{a g - b} / (s^a - z)^g at t = 1.
/// Requires 0 < a <= 1; for z > 0 the contour is shifted past the pole z^{1/a}.
Evaluation prabhakar_contour(const MLParams& p, const EvalPoint& pt, const MLOptions& opt = {});

/// Dual strategy: series for moderate |z|, contour for z < -z_switch or when
/// the series loses the precision goal to cancellation.
Evaluation prabhakar_eval(const MLParams& p, const EvalPoint& pt, const MLOptions& opt = {});

double prabhakar(const MLParams& p, const EvalPoint& pt, const MLOptions& opt = {});
double prabhakar(double alpha, double beta, double gamma, double z);

/// Two-parameter function; p.gamma_p must be 1.
double mittag_leffler(const MLParams& p, const EvalPoint& pt, const MLOptions& opt = {});
double mittag_leffler(double alpha, double beta, double z);

/// d/dt E_{1-a}(-t^{1-a}) = -t^{-a} E_{1-a,1-a}(-t^{1-a}), t > 0.
double ml_kernel_derivative(double alpha, double t);

}  // namespace fracdiff::specfun
