#pragma once

#include <complex>
#include <functional>

namespace fracdiff::laplace {

using Complex = std::complex<double>;

/// A Laplace-domain function F(s) together with the abscissa s0 to the right
/// of which it is analytic. Evaluators must be immutable after construction.
struct LaplaceImage {
  std::function<Complex(Complex)> evaluator;
  double abscissa = 0.0;

  Complex operator()(Complex s) const { return evaluator(s); }
};

/// Contour settings for talbot_invert.
struct TalbotParams {
  /// Node count M on the contour; even, 16 <= M <= 256.
  int node_count = 32;
  /// Time the contour is scaled to; 0 means "scale to the evaluation time".
  double t_scale = 0.0;
  /// Estimates above this (relative to max(1, |f|)) raise EvaluationError.
  double max_error = 1e-6;

  void validate() const;
};

struct TalbotResult {
  double value = 0.0;            ///< inversion with M nodes
  double error_estimate = 0.0;   ///< |f_M - f_M'|
  double value_companion = 0.0;  ///< inversion with M' = companion_nodes(M)
};

/// Node count of the coarser companion sum used for the error estimate.
/// Doubling M is no use here: round-off on this contour grows like
/// eps e^{0.17 M}, so f_2M is less accurate than f_M.
int companion_nodes(int m);

/// Cotangent-contour quadrature with a fixed node count and no error check.
double talbot_sum(const LaplaceImage& image, double t, int nodes, double t_scale = 0.0);

/// Numerical inverse Laplace transform on a Talbot-type cotangent contour
/// (Weideman-Trefethen parameters) wrapped around the negative real axis.
/// The a-posteriori estimate compares M and companion_nodes(M) nodes.
TalbotResult talbot_invert(const LaplaceImage& image, double t, const TalbotParams& params = {});

struct ForwardOptions {
  /// sigma in f(t) ~ c t^{-sigma} near 0; drives the weighted first panel.
  double singular_exponent = 0.0;
  /// Truncation point T; 0 selects T with Re(s) T = 40.
  double horizon = 0.0;
  int order = 20;
};

struct ForwardResult {
  Complex value;
  double tail_bound = 0.0;        ///< |f(T)| e^{-Re(s) T} / Re(s)
  bool accuracy_warning = false;  ///< tail_bound exceeds 1e-12 |value|
};

/// Composite Gauss-Legendre approximation of int_0^T e^{-st} f(t) dt with
/// geometric grading towards t = 0 for integrably singular f. Test instrument
/// for closed-form images; production paths never need it.
ForwardResult laplace_forward(const std::function<double(double)>& f, Complex s,
                              const ForwardOptions& options = {});

/// Principal-branch power s^a = exp(a log s).
Complex cpow(Complex s, double a);

/// (1 + s^{a-1}) / (s + s^a + xi2): Fourier-Laplace symbol of the initial-value part.
LaplaceImage symbol_homogeneous(double xi2, double alpha);

/// 1 / (s + s^a + xi2): transfer function of the forcing part.
LaplaceImage symbol_forcing(double xi2, double alpha);

}  // namespace fracdiff::laplace
