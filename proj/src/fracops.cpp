#include "fracdiff/fracops.hpp"

#include <cmath>

#include "fracdiff/errors.hpp"
#include "fracdiff/quadrature.hpp"

namespace fracdiff::fracops {

TimeGrid::TimeGrid(double horizon, int steps) : horizon_(horizon), steps_(steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("TimeGrid: horizon must be > 0");
  if (steps < 2) throw DomainError("TimeGrid: at least 2 steps required");
  dt_ = horizon / steps;
}

std::vector<double> TimeGrid::nodes() const {
  std::vector<double> out(steps_ + 1);
  for (int k = 0; k <= steps_; ++k) out[k] = t(k);
  return out;
}

int TimeGrid::nearest(double time) const {
  const long k = std::lround(time / dt_);
  if (k < 0) return 0;
  if (k > steps_) return steps_;
  return static_cast<int>(k);
}

void PrabhakarKernelSpec::validate() const {
  p.validate();
  if (!(p.beta > 0.0)) throw DomainError("PrabhakarKernelSpec: beta must be > 0");
  if (!std::isfinite(omega)) throw DomainError("PrabhakarKernelSpec: omega must be finite");
}

ConvolutionWeights weights_from_cumulatives(const std::vector<double>& k1,
                                            const std::vector<double>& k2, double dt) {
  if (k1.size() != k2.size() || k1.size() < 2) {
    throw DomainError("weights_from_cumulatives: size mismatch");
  }
  const std::size_t n = k1.size() - 1;
  ConvolutionWeights w;
  w.scheme = Scheme::exact_cumulative;
  w.near.resize(n);
  w.far.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    const double avg = (k2[l + 1] - k2[l]) / dt;
    w.near[l] = avg - k1[l];
    w.far[l] = k1[l + 1] - avg;
  }
  return w;
}

std::vector<double> convolve(const ConvolutionWeights& w, const std::vector<double>& phi) {
  if (w.scheme == Scheme::l1_caputo) throw DomainError("convolve: L1 weights are not a convolution kernel");
  const std::size_t n = phi.size() - 1;
  if (phi.empty() || w.near.size() < n) throw DomainError("convolve: weights shorter than samples");
  std::vector<double> out(phi.size(), 0.0);
  for (std::size_t m = 1; m <= n; ++m) {
    double acc = 0.0;
    for (std::size_t l = 0; l < m; ++l) {
      acc += w.near[l] * phi[m - l] + w.far[l] * phi[m - l - 1];
    }
    out[m] = acc * w.scale;
  }
  return out;
}

ConvolutionWeights prabhakar_weights(const PrabhakarKernelSpec& spec, const TimeGrid& grid,
                                     Scheme scheme) {
  spec.validate();
  const int n = grid.steps();
  const double dt = grid.dt();
  const double a = spec.p.alpha;
  const double b = spec.p.beta;
  const double g = spec.p.gamma_p;
  if (scheme == Scheme::exact_cumulative) {
    // int_0^t s^{b-1} E^g_{a,b}(w s^a) ds = t^b E^g_{a,b+1}(w t^a), and once more.
    std::vector<double> k1(n + 1, 0.0), k2(n + 1, 0.0);
    for (int k = 1; k <= n; ++k) {
      const double t = grid.t(k);
      const double z = spec.omega * std::pow(t, a);
      k1[k] = std::pow(t, b) * specfun::prabhakar(specfun::MLParams(a, b + 1.0, g), {z});
      k2[k] = std::pow(t, b + 1.0) * specfun::prabhakar(specfun::MLParams(a, b + 2.0, g), {z});
    }
    return weights_from_cumulatives(k1, k2, dt);
  }
  if (scheme != Scheme::powerlaw) throw DomainError("prabhakar_weights: unsupported scheme");
  ConvolutionWeights w;
  w.scheme = Scheme::powerlaw;
  w.near.resize(n);
  w.far.resize(n);
  const GaussRule& rule = gauss_legendre(16);
  const double dtb = std::pow(dt, b);
  for (int l = 0; l < n; ++l) {
    const double mid = (l + 0.5) * dt;
    const double e = specfun::prabhakar(specfun::MLParams(a, b, g), {spec.omega * std::pow(mid, a)});
    double near_moment;
    double far_moment;
    if (l == 0) {
      // int_0^1 v^{b-1}(1-v) dv and int_0^1 v^b dv
      near_moment = 1.0 / (b * (b + 1.0));
      far_moment = 1.0 / (b + 1.0);
    } else {
      const double lo = l;
      const double hi = l + 1.0;
      near_moment = integrate_panel([&](double v) { return std::pow(v, b - 1.0) * (hi - v); }, lo, hi, rule);
      far_moment = integrate_panel([&](double v) { return std::pow(v, b - 1.0) * (v - lo); }, lo, hi, rule);
    }
    w.near[l] = dtb * e * near_moment;
    w.far[l] = dtb * e * far_moment;
  }
  return w;
}

std::vector<double> prabhakar_integral(const PrabhakarKernelSpec& spec, const TimeGrid& grid,
                                       const std::vector<double>& phi, Scheme scheme) {
  if (static_cast<int>(phi.size()) != grid.steps() + 1) {
    throw DomainError("prabhakar_integral: samples do not match the grid");
  }
  return convolve(prabhakar_weights(spec, grid, scheme), phi);
}

ConvolutionWeights caputo_l1_weights(double alpha, const TimeGrid& grid) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("caputo_l1_weights: alpha must lie in (0, 1)");
  const int n = grid.steps();
  ConvolutionWeights w;
  w.scheme = Scheme::l1_caputo;
  w.scale = std::pow(grid.dt(), -alpha) * specfun::rgamma(2.0 - alpha);
  w.near.resize(n);
  const double e = 1.0 - alpha;
  for (int k = 0; k < n; ++k) {
    w.near[k] = std::pow(k + 1.0, e) - std::pow(static_cast<double>(k), e);
  }
  return w;
}

std::vector<double> caputo_l1_apply(const ConvolutionWeights& w, const std::vector<double>& u) {
  if (w.scheme != Scheme::l1_caputo) throw DomainError("caputo_l1_apply: needs L1 weights");
  const std::size_t n = u.size() - 1;
  if (u.empty() || w.near.size() < n) throw DomainError("caputo_l1_apply: weights shorter than samples");
  std::vector<double> out(u.size(), 0.0);
  for (std::size_t m = 1; m <= n; ++m) {
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) acc += w.near[k] * (u[m - k] - u[m - k - 1]);
    out[m] = w.scale * acc;
  }
  return out;
}

ConvolutionWeights riemann_liouville_weights(double alpha, const TimeGrid& grid) {
  if (!(alpha > 0.0)) throw DomainError("riemann_liouville_weights: alpha must be > 0");
  const int n = grid.steps();
  const double dt = grid.dt();
  const double c1 = std::pow(dt, alpha) * specfun::rgamma(alpha + 1.0);
  const double c2 = std::pow(dt, alpha + 1.0) * specfun::rgamma(alpha + 2.0);
  std::vector<double> k1(n + 1), k2(n + 1);
  for (int k = 0; k <= n; ++k) {
    k1[k] = c1 * std::pow(static_cast<double>(k), alpha);
    k2[k] = c2 * std::pow(static_cast<double>(k), alpha + 1.0);
  }
  ConvolutionWeights w = weights_from_cumulatives(k1, k2, dt);
  w.scheme = Scheme::powerlaw;
  return w;
}

std::vector<double> riemann_liouville_integral(double alpha, const TimeGrid& grid,
                                               const std::vector<double>& phi) {
  if (static_cast<int>(phi.size()) != grid.steps() + 1) {
    throw DomainError("riemann_liouville_integral: samples do not match the grid");
  }
  return convolve(riemann_liouville_weights(alpha, grid), phi);
}

}  // namespace fracdiff::fracops
