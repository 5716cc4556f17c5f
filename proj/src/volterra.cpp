#include "fracdiff/volterra.hpp"

#include <cmath>
#include <limits>

#include "fracdiff/errors.hpp"
#include "fracdiff/specfun.hpp"

namespace fracdiff::volterra {

namespace {

constexpr double kMinPivot = 1e-12;

// Hat-function form of the weights: (k * phi)_m = sum_{i=1}^m c_{m-i} phi_i + b_m phi_0.
struct HatWeights {
  std::vector<double> c;  // c_0 .. c_{N-1}
  std::vector<double> b;  // b_0 (unused) .. b_N
};

HatWeights hat_form(const fracops::ConvolutionWeights& w, int n) {
  HatWeights h;
  h.c.resize(n);
  h.b.assign(n + 1, 0.0);
  for (int l = 0; l < n; ++l) {
    h.c[l] = w.near[l] * w.scale + (l > 0 ? w.far[l - 1] * w.scale : 0.0);
    h.b[l + 1] = w.far[l] * w.scale;
  }
  return h;
}

void check_samples(const KernelSamples& k, const std::vector<double>& f, const char* who) {
  if (static_cast<int>(f.size()) != k.grid.steps() + 1) {
    throw DomainError(std::string(who) + ": samples do not match the kernel grid");
  }
  for (double v : f) {
    if (!std::isfinite(v)) throw DomainError(std::string(who) + ": non-finite sample");
  }
}

double pivot(const HatWeights& h) {
  const double p = 1.0 - h.c[0];
  if (std::abs(p) < kMinPivot) {
    throw EvaluationError("volterra: diagonal weight 1 - c_0 is numerically zero", std::abs(p));
  }
  return p;
}

}  // namespace

KernelSamples KernelSamples::from_antiderivatives(const fracops::TimeGrid& grid,
                                                  const std::function<double(double)>& k,
                                                  const std::function<double(double)>& k1,
                                                  const std::function<double(double)>& k2,
                                                  double singular_exponent) {
  if (!(singular_exponent >= 0.0 && singular_exponent < 1.0)) {
    throw DomainError("KernelSamples: singular exponent must lie in [0, 1)");
  }
  const int n = grid.steps();
  KernelSamples out;
  out.grid = grid;
  out.singular_exponent = singular_exponent;
  out.values.resize(n + 1);
  out.cumulative.resize(n + 1);
  std::vector<double> second(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = grid.t(i);
    out.values[i] = (i == 0 && singular_exponent > 0.0) ? std::numeric_limits<double>::infinity() : k(t);
    out.cumulative[i] = i == 0 ? 0.0 : k1(t);
    second[i] = i == 0 ? 0.0 : k2(t);
  }
  out.weights = fracops::weights_from_cumulatives(out.cumulative, second, grid.dt());
  return out;
}

double KernelSamples::cumulative_mismatch() const {
  double worst = 0.0;
  for (int l = 0; l < grid.steps(); ++l) {
    const double mass = weights.panel_mass(l) * weights.scale;
    worst = std::max(worst, std::abs(cumulative[l + 1] - cumulative[l] - mass));
  }
  return worst;
}

KernelSamples scaled(const KernelSamples& k, double c) {
  KernelSamples out = k;
  for (double& v : out.values) v *= c;
  for (double& v : out.cumulative) v *= c;
  out.weights.scale *= c;
  return out;
}

KernelSamples memory_kernel(double alpha, const fracops::TimeGrid& grid) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("memory_kernel: alpha must lie in (0, 1)");
  const double a = 1.0 - alpha;
  auto ml = [a](double beta, double t) { return specfun::mittag_leffler(a, beta, -std::pow(t, a)); };
  return KernelSamples::from_antiderivatives(
      grid, [=](double t) { return std::pow(t, -alpha) * ml(a, t); },
      [=](double t) { return std::pow(t, a) * ml(1.0 + a, t); },
      [=](double t) { return std::pow(t, 1.0 + a) * ml(2.0 + a, t); }, alpha);
}

KernelSamples resolvent_solve(const KernelSamples& k) {
  const int n = k.grid.steps();
  const HatWeights h = hat_form(k.weights, n);
  const double p = pivot(h);

  std::vector<double> rho(n);
  for (int l = 0; l < n; ++l) {
    double acc = h.c[l];
    for (int i = 0; i < l; ++i) acc += h.c[l - i] * rho[i];
    rho[l] = acc / p;
  }
  std::vector<double> beta(n + 1, 0.0);
  for (int m = 1; m <= n; ++m) {
    double acc = h.b[m];
    for (int i = 1; i <= m; ++i) acc += rho[m - i] * h.b[i];
    beta[m] = acc;
  }

  KernelSamples r;
  r.grid = k.grid;
  r.singular_exponent = k.singular_exponent;
  r.weights.scheme = fracops::Scheme::exact_cumulative;
  r.weights.near.resize(n);
  r.weights.far.resize(n);
  for (int l = 0; l < n; ++l) {
    r.weights.near[l] = rho[l] - beta[l];
    r.weights.far[l] = beta[l + 1];
  }
  r.cumulative.assign(n + 1, 0.0);
  for (int l = 0; l < n; ++l) r.cumulative[l + 1] = r.cumulative[l] + r.weights.panel_mass(l);

  // Node values from r(t_m) = k(t_m) + int_0^{t_m} k(t_m - s) r(s) ds.
  // Each factor is singular at its own end of the interval, so the first
  // half uses r's product weights against linear k and the second half uses
  // k's product weights against linear r, implicit in r_m.
  const double kscale = k.weights.scale;
  const double a0 = k.weights.near[0] * kscale;
  r.values.resize(n + 1);
  r.values[0] = k.values[0];
  for (int m = 1; m <= n; ++m) {
    double acc = k.values[m];
    const int split = m / 2;  // s-panels [l dt, (l+1) dt] with l < split use r's weights
    for (int l = 0; l < split; ++l) {
      acc += r.weights.near[l] * k.values[m - l] + r.weights.far[l] * k.values[m - l - 1];
    }
    if (m == 1) {
      // Both factors singular on the one panel: mass of r times the mean of k.
      r.values[1] = acc + r.weights.panel_mass(0) * k.cumulative[1] / k.grid.dt();
      continue;
    }
    for (int l = split; l < m; ++l) {
      const int lag = m - 1 - l;  // kernel lag panel of s-panel l
      if (l + 1 < m) acc += kscale * k.weights.near[lag] * r.values[l + 1];
      acc += kscale * k.weights.far[lag] * r.values[l];
    }
    r.values[m] = acc / (1.0 - a0);
  }
  return r;
}

std::vector<double> volterra_apply(const KernelSamples& k, const std::vector<double>& f) {
  check_samples(k, f, "volterra_apply");
  const int n = k.grid.steps();
  const HatWeights h = hat_form(k.weights, n);
  const double p = pivot(h);
  std::vector<double> phi(n + 1);
  phi[0] = f[0];
  for (int m = 1; m <= n; ++m) {
    double acc = f[m] + h.b[m] * phi[0];
    for (int i = 1; i < m; ++i) acc += h.c[m - i] * phi[i];
    phi[m] = acc / p;
  }
  return phi;
}

std::vector<double> resolvent_representation(const KernelSamples& r, const std::vector<double>& f) {
  check_samples(r, f, "resolvent_representation");
  std::vector<double> out = fracops::convolve(r.weights, f);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += f[i];
  return out;
}

}  // namespace fracdiff::volterra
