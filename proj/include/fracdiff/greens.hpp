#pragma once

#include <functional>
#include <vector>

#include "fracdiff/fracops.hpp"

namespace fracdiff::greens {

struct GreenSeriesParams {
  double alpha = 0.5;
  int j_max = 120;
  double tol = 1e-12;
  /// Fall back to Talbot when max |partial sum| exceeds this times |result|.
  double cancellation_limit = 1e8;
  /// The series is attempted only for t^{1-a} <= tau_limit and |xi2 t| <= series_reach.
  double tau_limit = 2.0;
  double series_reach = 60.0;
  /// Accumulated absolute error estimate above which the series is rejected.
  double max_error = 1e-10;

  void validate() const;
};

struct SymbolEvaluation {
  double value = 0.0;
  double error_estimate = 0.0;
  bool used_series = false;
  int terms = 0;
};

/// Fourier symbol of the Green function, the inverse Laplace transform of
/// (1 + s^{a-1}) / (s + s^a + xi2), through the series
///   e^z + z sum_{j>=1} (-t^{1-a})^j E^{j+1}_{1,(1-a)j+2}(z),  z = -xi2 t,
/// with Talbot inversion of the symbol as the fallback.
SymbolEvaluation green_symbol_eval(double xi2, double t, const GreenSeriesParams& p);
double green_symbol(double xi2, double t, const GreenSeriesParams& p);

/// Talbot inversion of the symbol, bypassing the series.
double green_symbol_talbot(double xi2, double t, double alpha);

/// Inverse Laplace transform of 1 / (s + s^a + xi2).
double forcing_impulse(double xi2, double t, double alpha);

struct ForcingResult {
  std::vector<double> values;
  int terms = 0;               ///< largest series index used at any node
  bool truncated = false;      ///< j_max reached before the tolerance
  double tail_estimate = 0.0;  ///< last series term at truncation
  double fallback_fraction = 0.0;
};

/// int_0^t F(t - s) f(s) ds with F = forcing_impulse, i.e. the sum over j of
/// (-1)^j Prabhakar integrals with kernel t^{(1-a)j} E^{j+1}_{1,(1-a)j+1}(-xi2 t).
/// By linearity the series is summed at the level of the kernel's first and
/// second antiderivatives and applied once with exact product weights.
ForcingResult forcing_kernel(double xi2, const fracops::TimeGrid& grid, const std::vector<double>& f_mode,
                             const GreenSeriesParams& p);

/// Product-integration weights of forcing_impulse on a grid (see forcing_kernel).
fracops::ConvolutionWeights forcing_weights(double xi2, const fracops::TimeGrid& grid,
                                            const GreenSeriesParams& p, ForcingResult* info = nullptr);

struct RadialProfile {
  int dimension = 1;
  std::vector<double> radii;
  std::vector<double> values;

  void validate() const;
};

struct RadialResult {
  RadialProfile profile;
  double cutoff = 0.0;
  double tail_bound = 0.0;
  bool truncation_warning = false;
};

/// f(r) = (2 pi)^{-n/2} r^{1-n/2} int_0^cutoff k^{n/2} F(k) J_{n/2-1}(r k) dk,
/// the inverse Fourier transform of a radial function in n dimensions.
/// F is evaluated once per quadrature node and shared across radii.
RadialResult radial_inverse_fourier(const std::function<double(double)>& F, double cutoff,
                                    const std::vector<double>& x_radii, int n);

struct GreenProfile {
  RadialProfile profile;
  double cutoff = 0.0;
  double series_fraction = 0.0;
  double tail_bound = 0.0;
  bool truncation_warning = false;
};

/// Physical-space Green function G(|x|, t). The algebraic tail of the symbol
/// is removed with a rational model whose transform is known in closed form,
/// and the smooth remainder goes through radial_inverse_fourier.
GreenProfile green_physical(const std::vector<double>& x_radii, double t, int n, const GreenSeriesParams& p);

/// int_{R^n} G(|x|, t) dx by Gauss-Legendre panels in the radius over [0, reach].
double green_mass(double t, int n, const GreenSeriesParams& p, double reach);

}  // namespace fracdiff::greens
