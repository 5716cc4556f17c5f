#pragma once

#include <functional>
#include <vector>

#include "fracdiff/specfun.hpp"

namespace fracdiff::fracops {

/// Uniform grid t_k = k T / N, k = 0..N.
class TimeGrid {
 public:
  TimeGrid(double horizon, int steps);

  double horizon() const { return horizon_; }
  int steps() const { return steps_; }
  double dt() const { return dt_; }
  double t(int k) const { return k * dt_; }
  std::vector<double> nodes() const;
  /// Index of the node nearest to time t (clamped to the grid).
  int nearest(double time) const;

 private:
  double horizon_;
  int steps_;
  double dt_;
};

/// Kernel t^{beta-1} E^gamma_{alpha,beta}(omega t^alpha).
struct PrabhakarKernelSpec {
  specfun::MLParams p;
  double omega = 0.0;

  void validate() const;
};

enum class Scheme {
  exact_cumulative,  ///< weights from the kernel's first and second antiderivatives
  powerlaw,          ///< exact t^{beta-1} moments, smooth factor frozen at panel midpoints
  l1_caputo,         ///< L1 difference weights b_k
};

/// Product-integration weights for sum_{j} [near_{m-j} phi_j + far_{m-j} phi_{j-1}].
/// Lag l covers sigma in [l dt, (l+1) dt]; near multiplies the sample at the
/// lag-l end of the panel, far the sample at lag l+1. For l1_caputo only
/// near holds b_k and scale = dt^{-alpha} / Gamma(2 - alpha).
struct ConvolutionWeights {
  Scheme scheme = Scheme::exact_cumulative;
  double scale = 1.0;
  std::vector<double> near;
  std::vector<double> far;

  /// Integral of the kernel over lag panel l, i.e. near[l] + far[l].
  double panel_mass(int l) const { return near[l] + far[l]; }
};

/// Weights of int_0^t k(t - s) phi(s) ds for piecewise-linear phi, given
/// K1 = int_0^t k and K2 = int_0^t K1 sampled at the grid nodes.
ConvolutionWeights weights_from_cumulatives(const std::vector<double>& k1,
                                            const std::vector<double>& k2, double dt);

/// (k * phi)(t_m) for m = 0..N using product-integration weights.
std::vector<double> convolve(const ConvolutionWeights& w, const std::vector<double>& phi);

ConvolutionWeights prabhakar_weights(const PrabhakarKernelSpec& spec, const TimeGrid& grid,
                                     Scheme scheme = Scheme::exact_cumulative);

/// int_0^t (t-s)^{beta-1} E^gamma_{alpha,beta}(omega (t-s)^alpha) phi(s) ds at every node.
std::vector<double> prabhakar_integral(const PrabhakarKernelSpec& spec, const TimeGrid& grid,
                                       const std::vector<double>& phi,
                                       Scheme scheme = Scheme::exact_cumulative);

/// b_k = (k+1)^{1-a} - k^{1-a}, k = 0..N-1.
ConvolutionWeights caputo_l1_weights(double alpha, const TimeGrid& grid);

/// dt^{-a}/Gamma(2-a) sum_{k<n} b_k (u_{n-k} - u_{n-k-1}) at n = 0..N.
std::vector<double> caputo_l1_apply(const ConvolutionWeights& w, const std::vector<double>& u);

ConvolutionWeights riemann_liouville_weights(double alpha, const TimeGrid& grid);

/// Convolution with t^{a-1}/Gamma(a); exact for piecewise-linear phi.
std::vector<double> riemann_liouville_integral(double alpha, const TimeGrid& grid,
                                               const std::vector<double>& phi);

}  // namespace fracdiff::fracops
