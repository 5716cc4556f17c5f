#include "fracdiff/greens.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracdiff/errors.hpp"
#include "fracdiff/laplace.hpp"
#include "fracdiff/parallel.hpp"
#include "fracdiff/quadrature.hpp"
#include "fracdiff/specfun.hpp"

namespace fracdiff::greens {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Rational tail model order and the largest spectral cutoff we accept.
constexpr int kTailOrder = 4;
constexpr double kMaxCutoff = 4000.0;

// Series terms below tol * max|partial| this many times in a row end the sum.
constexpr int kQuietTerms = 2;

void check_args(double xi2, double t) {
  if (!(xi2 >= 0.0) || !std::isfinite(xi2)) throw DomainError("green symbol: xi2 must be >= 0");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("green symbol: t must be >= 0");
}

struct SeriesSum {
  double value = 0.0;
  double error = 0.0;
  int terms = 0;
  bool ok = false;
};

// sum_{j>=0} (-tau)^j term(j) with convergence and cancellation monitoring.
// term(j) returns an Evaluation already scaled by everything but (-tau)^j.
template <class Term>
SeriesSum monitored_series(double tau, const GreenSeriesParams& p, double first, double first_error,
                           const Term& term) {
  SeriesSum s;
  s.value = first;
  s.error = first_error;
  double peak = std::abs(first);
  double power = 1.0;
  int quiet = 0;
  for (int j = 1; j <= p.j_max; ++j) {
    power *= -tau;
    specfun::Evaluation e;
    try {
      e = term(j);
    } catch (const EvaluationError&) {
      return s;
    }
    const double contribution = power * e.value;
    s.value += contribution;
    s.error += std::abs(power) * e.error_estimate;
    s.terms = j;
    peak = std::max(peak, std::abs(s.value));
    if (!std::isfinite(s.value)) return s;
    if (std::abs(contribution) <= p.tol * std::max(std::abs(s.value), 1e-300)) {
      if (++quiet >= kQuietTerms) {
        s.error += std::numeric_limits<double>::epsilon() * peak + std::abs(contribution);
        s.ok = peak <= p.cancellation_limit * std::abs(s.value) && s.error <= p.max_error;
        return s;
      }
    } else {
      quiet = 0;
    }
  }
  return s;
}

double talbot_value(const laplace::LaplaceImage& image, double t) {
  return laplace::talbot_invert(image, t).value;
}

// Asymptotic coefficient of xi^{-2k} in the symbol at fixed t > 0:
//   c_k = (-1)^{k-1} sum_m C(k,m) t^{-ak-(1-a)m} / Gamma(1-ak-(1-a)m).
double tail_coefficient(int k, double t, double alpha) {
  double acc = 0.0;
  double binom = 1.0;
  for (int m = 0; m <= k; ++m) {
    const double p = alpha * k + (1.0 - alpha) * m;
    acc += binom * std::pow(t, -p) * specfun::rgamma(1.0 - p);
    binom = binom * (k - m) / (m + 1.0);
  }
  return (k % 2 == 1) ? acc : -acc;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace

void GreenSeriesParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("GreenSeriesParams: alpha must lie in (0, 1)");
  if (j_max < 8) throw DomainError("GreenSeriesParams: j_max must be >= 8");
  if (!(tol > 0.0 && tol < 1.0)) throw DomainError("GreenSeriesParams: tol must lie in (0, 1)");
  if (!(cancellation_limit > 1.0)) throw DomainError("GreenSeriesParams: cancellation limit must exceed 1");
  if (!(tau_limit > 0.0) || !(series_reach > 0.0) || !(max_error > 0.0)) {
    throw DomainError("GreenSeriesParams: reach limits must be positive");
  }
}

double green_symbol_talbot(double xi2, double t, double alpha) {
  check_args(xi2, t);
  if (t == 0.0) return 1.0;
  return talbot_value(laplace::symbol_homogeneous(xi2, alpha), t);
}

SymbolEvaluation green_symbol_eval(double xi2, double t, const GreenSeriesParams& p) {
  p.validate();
  check_args(xi2, t);
  SymbolEvaluation out;
  if (t == 0.0 || xi2 == 0.0) {
    out.value = 1.0;
    out.used_series = true;
    return out;
  }
  const double a = p.alpha;
  const double tau = std::pow(t, 1.0 - a);
  const double z = -xi2 * t;
  if (tau <= p.tau_limit && -z <= p.series_reach) {
    const specfun::EvalPoint pt{z};
    const SeriesSum s = monitored_series(tau, p, std::exp(z), 0.0, [&](int j) {
      specfun::Evaluation e = specfun::prabhakar_eval(specfun::MLParams(1.0, (1.0 - a) * j + 2.0, j + 1.0), pt);
      e.value *= z;
      e.error_estimate *= -z;
      return e;
    });
    if (s.ok) {
      out.value = s.value;
      out.error_estimate = s.error;
      out.used_series = true;
      out.terms = s.terms;
      return out;
    }
  }
  const laplace::TalbotResult r = laplace::talbot_invert(laplace::symbol_homogeneous(xi2, a), t);
  out.value = r.value;
  out.error_estimate = r.error_estimate;
  return out;
}

double green_symbol(double xi2, double t, const GreenSeriesParams& p) {
  return green_symbol_eval(xi2, t, p).value;
}

double forcing_impulse(double xi2, double t, double alpha) {
  check_args(xi2, t);
  if (t == 0.0) return 1.0;
  return talbot_value(laplace::symbol_forcing(xi2, alpha), t);
}

fracops::ConvolutionWeights forcing_weights(double xi2, const fracops::TimeGrid& grid,
                                            const GreenSeriesParams& p, ForcingResult* info) {
  p.validate();
  check_args(xi2, 0.0);
  const double a = p.alpha;
  const int n = grid.steps();
  std::vector<double> k1(n + 1, 0.0), k2(n + 1, 0.0);
  std::vector<int> terms(n + 1, 0), fallback(n + 1, 0), truncated(n + 1, 0);
  std::vector<double> tails(n + 1, 0.0);
  const laplace::LaplaceImage once{[xi2, a](laplace::Complex s) {
                                     return 1.0 / (s * (s + laplace::cpow(s, a) + xi2));
                                   },
                                   0.0};
  const laplace::LaplaceImage twice{[xi2, a](laplace::Complex s) {
                                      return 1.0 / (s * s * (s + laplace::cpow(s, a) + xi2));
                                    },
                                    0.0};
  parallel_for(n, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) + 1;
    const double t = grid.t(i);
    const double tau = std::pow(t, 1.0 - a);
    const double z = -xi2 * t;
    // Cumulatives of the kernel: sum_j (-tau)^j t^{1+q} E^{j+1}_{1,(1-a)j+1+q+1}(z), q = 0, 1.
    bool done = false;
    if (tau <= p.tau_limit && -z <= p.series_reach) {
      const specfun::EvalPoint pt{z};
      std::array<SeriesSum, 2> sums;
      for (int q = 0; q < 2; ++q) {
        const double scale = std::pow(t, 1.0 + q);
        const specfun::Evaluation first =
            specfun::prabhakar_eval(specfun::MLParams(1.0, 2.0 + q, 1.0), pt);
        sums[q] = monitored_series(tau, p, scale * first.value, scale * first.error_estimate, [&](int j) {
          specfun::Evaluation e =
              specfun::prabhakar_eval(specfun::MLParams(1.0, (1.0 - a) * j + 2.0 + q, j + 1.0), pt);
          e.value *= scale;
          e.error_estimate *= scale;
          return e;
        });
      }
      if (sums[0].ok && sums[1].ok) {
        k1[i] = sums[0].value;
        k2[i] = sums[1].value;
        terms[i] = std::max(sums[0].terms, sums[1].terms);
        done = true;
      } else if (std::max(sums[0].terms, sums[1].terms) >= p.j_max) {
        truncated[i] = 1;
        tails[i] = std::max(sums[0].error, sums[1].error);
      }
    }
    if (!done) {
      k1[i] = talbot_value(once, t);
      k2[i] = talbot_value(twice, t);
      fallback[i] = 1;
    }
  });
  if (info) {
    info->terms = *std::max_element(terms.begin(), terms.end());
    int fb = 0;
    for (int i = 1; i <= n; ++i) {
      fb += fallback[i];
      // A truncated series that the Talbot route then resolved is not a failure.
      if (truncated[i] && !fallback[i]) {
        info->truncated = true;
        info->tail_estimate = std::max(info->tail_estimate, tails[i]);
      }
    }
    info->fallback_fraction = static_cast<double>(fb) / n;
  }
  return fracops::weights_from_cumulatives(k1, k2, grid.dt());
}

ForcingResult forcing_kernel(double xi2, const fracops::TimeGrid& grid, const std::vector<double>& f_mode,
                             const GreenSeriesParams& p) {
  if (static_cast<int>(f_mode.size()) != grid.steps() + 1) {
    throw DomainError("forcing_kernel: samples do not match the grid");
  }
  ForcingResult out;
  const fracops::ConvolutionWeights w = forcing_weights(xi2, grid, p, &out);
  out.values = fracops::convolve(w, f_mode);
  return out;
}

void RadialProfile::validate() const {
  if (dimension < 1 || dimension > 3) throw DomainError("RadialProfile: dimension must be 1, 2 or 3");
  if (radii.size() != values.size()) throw DomainError("RadialProfile: radii and values differ in length");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 0.0)) throw DomainError("RadialProfile: radii must be >= 0");
    if (i > 0 && radii[i] < radii[i - 1]) throw DomainError("RadialProfile: radii must be sorted");
  }
}

RadialResult radial_inverse_fourier(const std::function<double(double)>& F, double cutoff,
                                    const std::vector<double>& x_radii, int n) {
  if (n < 1 || n > 3) throw DomainError("radial_inverse_fourier: dimension must be 1, 2 or 3");
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw DomainError("radial_inverse_fourier: cutoff must be > 0");
  RadialResult out;
  out.profile.dimension = n;
  out.profile.radii = x_radii;
  out.profile.values.assign(x_radii.size(), 0.0);
  out.profile.validate();
  out.cutoff = cutoff;
  if (x_radii.empty()) return out;

  const double r_max = x_radii.back();
  double h = cutoff / 64.0;
  if (r_max > 0.0) h = std::min(h, std::numbers::pi / (2.0 * r_max));
  const int panels = static_cast<int>(std::ceil(cutoff / h));
  h = cutoff / panels;
  const GaussRule& rule = gauss_legendre(16);
  const std::size_t per = rule.nodes.size();
  std::vector<double> k(panels * per), wk(panels * per), fk(panels * per);
  const double nu = 0.5 * n - 1.0;
  for (int p = 0; p < panels; ++p) {
    for (std::size_t q = 0; q < per; ++q) {
      const double x = (p + 0.5) * h + 0.5 * h * rule.nodes[q];
      k[p * per + q] = x;
      wk[p * per + q] = 0.5 * h * rule.weights[q] * std::pow(x, 0.5 * n);
    }
  }
  parallel_for(k.size(), [&](std::size_t i) { fk[i] = F(k[i]); });

  const double norm = std::pow(kTwoPi, -0.5 * n);
  const double at_origin = specfun::rgamma(nu + 1.0);
  parallel_for(x_radii.size(), [&](std::size_t ir) {
    const double r = x_radii[ir];
    double acc = 0.0;
    if (r == 0.0) {
      for (std::size_t i = 0; i < k.size(); ++i) acc += wk[i] * fk[i] * std::pow(0.5 * k[i], nu) * at_origin;
    } else {
      for (std::size_t i = 0; i < k.size(); ++i) acc += wk[i] * fk[i] * specfun::bessel_j(nu, r * k[i]);
      acc *= std::pow(r, -nu);
    }
    out.profile.values[ir] = norm * acc;
  });

  double peak = 0.0;
  for (double v : fk) peak = std::max(peak, std::abs(v));
  const double edge = std::abs(F(cutoff));
  // |J_nu(x) x^{-nu}| <= 1 / (2^nu Gamma(nu + 1)) for nu >= -1/2.
  out.tail_bound = norm * std::pow(cutoff, n) * edge * at_origin * std::pow(2.0, -nu);
  out.truncation_warning = edge > 1e-12 * peak;
  return out;
}

GreenProfile green_physical(const std::vector<double>& x_radii, double t, int n, const GreenSeriesParams& p) {
  p.validate();
  if (!(t > 0.0)) throw DomainError("green_physical: t must be > 0");
  if (n < 1 || n > 3) throw DomainError("green_physical: dimension must be 1, 2 or 3");
  for (double r : x_radii) {
    if (r == 0.0 && n > 1) throw DomainError("green_physical: G is singular at the origin for n > 1");
  }
  const double a = p.alpha;

  // Rational model sum_m d_m / (mu^2 + xi^2)^m sharing the first kTailOrder
  // terms of the symbol's expansion in xi^{-2}.
  const double mu2 = 1.0 / t;
  std::array<double, kTailOrder + 2> c{}, d{};
  for (int k = 1; k <= kTailOrder + 1; ++k) c[k] = tail_coefficient(k, t, a);
  auto model_coefficient = [&](int k, int upto) {
    double acc = 0.0;
    for (int m = 1; m <= std::min(k - 1, upto); ++m) {
      const int i = k - m;
      acc += d[m] * ((i % 2) ? -1.0 : 1.0) * binomial(k - 1, i) * std::pow(mu2, i);
    }
    return acc;
  };
  for (int k = 1; k <= kTailOrder; ++k) d[k] = c[k] - model_coefficient(k, kTailOrder);
  const double residual = std::abs(c[kTailOrder + 1] - model_coefficient(kTailOrder + 1, kTailOrder));

  // Cutoff: the exponential part is below e^{-28}, and the algebraic
  // remainder's integrated tail is below 1e-10.
  const double nu = 0.5 * n - 1.0;
  const double norm = std::pow(kTwoPi, -0.5 * n);
  const double jbound = specfun::rgamma(nu + 1.0) * std::pow(2.0, -nu);
  const int decay = 2 * kTailOrder + 2 - n;
  double cutoff = std::sqrt(28.0 / t);
  cutoff = std::max(cutoff, std::pow(norm * jbound * residual / (decay * 1e-10), 1.0 / decay));
  bool capped = false;
  if (cutoff > kMaxCutoff) {
    cutoff = kMaxCutoff;
    capped = true;
  }

  std::atomic<long> series_hits{0};
  std::atomic<long> evaluations{0};
  auto model = [&](double k) {
    double acc = 0.0;
    const double denom = mu2 + k * k;
    double pw = 1.0;
    for (int m = 1; m <= kTailOrder; ++m) {
      pw *= denom;
      acc += d[m] / pw;
    }
    return acc;
  };
  auto remainder = [&](double k) {
    const SymbolEvaluation e = green_symbol_eval(k * k, t, p);
    evaluations.fetch_add(1, std::memory_order_relaxed);
    if (e.used_series) series_hits.fetch_add(1, std::memory_order_relaxed);
    return e.value - model(k);
  };
  const RadialResult smooth = radial_inverse_fourier(remainder, cutoff, x_radii, n);

  GreenProfile out;
  out.profile = smooth.profile;
  out.cutoff = cutoff;
  const double mu = std::sqrt(mu2);
  for (std::size_t i = 0; i < x_radii.size(); ++i) {
    const double r = x_radii[i];
    double acc = 0.0;
    for (int m = 1; m <= kTailOrder; ++m) {
      // Inverse transform of (mu^2 + |xi|^2)^{-m} in n dimensions.
      const double order = m - 0.5 * n;
      const double pref = std::pow(mu, n - 2.0 * m) * norm * std::pow(2.0, 1.0 - m) * specfun::rgamma(m);
      double shape;
      if (r == 0.0) {
        shape = std::pow(2.0, order - 1.0) * specfun::gamma_fn(order);  // order > 0 here (n = 1)
      } else {
        const double x = mu * r;
        shape = std::pow(x, order) * std::cyl_bessel_k(std::abs(order), x);
      }
      acc += d[m] * pref * shape;
    }
    out.profile.values[i] += acc;
  }
  const double tail = norm * jbound * residual * std::pow(cutoff, -decay) / decay;
  out.tail_bound = tail + smooth.tail_bound;
  out.truncation_warning = capped || out.tail_bound > 1e-8;
  out.series_fraction = evaluations > 0 ? static_cast<double>(series_hits) / evaluations : 0.0;
  return out;
}

double green_mass(double t, int n, const GreenSeriesParams& p, double reach) {
  if (!(reach > 0.0)) throw DomainError("green_mass: reach must be > 0");
  const GaussRule& rule = gauss_legendre(16);
  const double h = 0.25;
  const int panels = static_cast<int>(std::ceil(reach / h));
  std::vector<double> radii, weights;
  for (int k = 0; k < panels; ++k) {
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      radii.push_back((k + 0.5) * h + 0.5 * h * rule.nodes[q]);
      weights.push_back(0.5 * h * rule.weights[q]);
    }
  }
  const GreenProfile g = green_physical(radii, t, n, p);
  const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * n) * specfun::rgamma(0.5 * n);
  double acc = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) acc += weights[i] * std::pow(radii[i], n - 1) * g.profile.values[i];
  return sphere * acc;
}

}  // namespace fracdiff::greens
