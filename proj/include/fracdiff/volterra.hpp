#pragma once

#include <functional>
#include <vector>

#include "fracdiff/fracops.hpp"

namespace fracdiff::volterra {

/// A convolution kernel on a time grid: node values, exact cumulative
/// K(t_k) = int_0^{t_k} k, and the product-integration weights derived from
/// it. values[0] is +inf for kernels singular at the origin.
struct KernelSamples {
  fracops::TimeGrid grid{1.0, 2};
  std::vector<double> values;
  std::vector<double> cumulative;
  fracops::ConvolutionWeights weights;
  double singular_exponent = 0.0;

  /// Samples k, K1 = int k and K2 = int K1 on the grid and builds the weights.
  static KernelSamples from_antiderivatives(const fracops::TimeGrid& grid,
                                            const std::function<double(double)>& k,
                                            const std::function<double(double)>& k1,
                                            const std::function<double(double)>& k2,
                                            double singular_exponent = 0.0);

  /// max_l |cumulative[l+1] - cumulative[l] - panel mass l|.
  double cumulative_mismatch() const;
};

/// c k: values, cumulative and weights multiplied by c.
KernelSamples scaled(const KernelSamples& k, double c);

/// k(t) = t^{-a} E_{1-a,1-a}(-t^{1-a}) with K(t) = 1 - E_{1-a}(-t^{1-a}).
KernelSamples memory_kernel(double alpha, const fracops::TimeGrid& grid);

/// Resolvent r of k, r = k + k * r, as the exact discrete resolvent of the
/// product-integration scheme: volterra_apply(k, f) and
/// resolvent_representation(r, f) then agree to round-off. Node values are
/// recovered from r = k + k * r by product integration that treats the
/// singular end of each factor with that factor's own weights.
KernelSamples resolvent_solve(const KernelSamples& k);

/// Solves phi = f + k * phi by forward substitution.
std::vector<double> volterra_apply(const KernelSamples& k, const std::vector<double>& f);

/// phi = f + r * f; no linear solve.
std::vector<double> resolvent_representation(const KernelSamples& r, const std::vector<double>& f);

}  // namespace fracdiff::volterra
