#include "fracdiff/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>

#include "fracdiff/errors.hpp"
#include "fracdiff/greens.hpp"
#include "fracdiff/laplace.hpp"
#include "fracdiff/solvers.hpp"
#include "fracdiff/specfun.hpp"
#include "fracdiff/volterra.hpp"

namespace fracdiff::verify {

namespace {

using laplace::Complex;
using Clock = std::chrono::steady_clock;

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

// Accumulates named checks as ratios to their tolerances.
class Tally {
 public:
  void add(const std::string& label, double value, double tolerance) {
    ratio_ = std::max(ratio_, value / tolerance);
    if (!(value <= tolerance)) failed_ = true;
    append(label + "=" + fmt("%.3g", value) + " (<= " + fmt("%.3g", tolerance) + ")");
  }
  void require(const std::string& label, bool ok) {
    if (!ok) failed_ = true;
    append(label + (ok ? " ok" : " FAILED"));
  }
  SuiteResult result(const std::string& name) const {
    SuiteResult r;
    r.name = name;
    r.passed = !failed_;
    r.metric_name = "worst ratio to tolerance";
    r.metric = ratio_;
    r.threshold = 1.0;
    r.detail = detail_;
    return r;
  }

 private:
  void append(const std::string& s) { detail_ += (detail_.empty() ? "" : "; ") + s; }
  double ratio_ = 0.0;
  bool failed_ = false;
  std::string detail_;
};

SuiteResult single(const std::string& name, const std::string& metric_name, double metric, double threshold,
                   const std::string& detail = {}) {
  SuiteResult r;
  r.name = name;
  r.metric_name = metric_name;
  r.metric = metric;
  r.threshold = threshold;
  r.passed = metric <= threshold;
  r.detail = detail;
  return r;
}

double rel(double v, double ref) { return std::abs(v - ref) / std::abs(ref); }

SuiteResult identities(bool) {
  Tally t;
  const double e = std::numbers::e;
  t.add("E_1(1) rel", rel(specfun::mittag_leffler(1.0, 1.0, 1.0), e), 1e-12);
  const double q = std::numbers::pi / 2.0;
  t.add("|E_2(-(pi/2)^2)|", std::abs(specfun::mittag_leffler(2.0, 1.0, -q * q)), 1e-12);
  t.add("E_{1,2}(1) rel", rel(specfun::mittag_leffler(1.0, 2.0, 1.0), e - 1.0), 1e-12);
  double one = 0.0, zero = 0.0;
  for (double a : {0.3, 0.5, 0.9, 1.5}) {
    for (double b : {0.5, 1.0, 2.5}) {
      for (double z : {-8.0, -2.0, -0.5, 0.0, 0.7, 2.0}) {
        const double ml = specfun::mittag_leffler(a, b, z);
        one = std::max(one, std::abs(specfun::prabhakar(a, b, 1.0, z) - ml) / std::max(std::abs(ml), 1e-300));
        zero = std::max(zero, rel(specfun::prabhakar(a, b, 0.0, z), specfun::rgamma(b)));
      }
    }
  }
  t.add("E^1 vs E rel", one, 1e-12);
  t.add("E^0 vs 1/Gamma rel", zero, 1e-12);
  return t.result("identities");
}

// Forward-quadrature Laplace transforms of the (optionally damped) kernel
// t^{b-1} E^g_{a,b}(w t^a) against their closed-form images.
SuiteResult laplace_sweep(const std::string& name, bool full, const std::vector<double>& lambdas) {
  const std::vector<double> as = full ? std::vector<double>{0.3, 0.5, 0.8} : std::vector<double>{0.3, 0.8};
  const std::vector<double> bs = full ? std::vector<double>{0.5, 1.0, 2.0} : std::vector<double>{0.5, 2.0};
  const std::vector<double> gs = full ? std::vector<double>{1.0, 2.0, 3.0} : std::vector<double>{1.0, 3.0};
  const std::vector<double> ws = full ? std::vector<double>{-1.0, -2.0} : std::vector<double>{-1.0};
  const std::vector<double> ss = full ? std::vector<double>{1.0, 2.0, 5.0} : std::vector<double>{1.0, 5.0};
  double worst = 0.0;
  int count = 0;
  std::string where;
  for (double a : as)
    for (double b : bs)
      for (double g : gs)
        for (double w : ws)
          for (double lam : lambdas) {
            const specfun::MLParams p(a, b, g);
            auto f = [=](double t) {
              return std::exp(-lam * t) * std::pow(t, b - 1.0) * specfun::prabhakar(p, specfun::EvalPoint{w * std::pow(t, a)});
            };
            laplace::ForwardOptions opt;
            opt.singular_exponent = std::max(0.0, 1.0 - b);
            for (double s : ss) {
              const Complex sl(s + lam, 0.0);
              const Complex ref = laplace::cpow(sl, a * g - b) / std::pow(laplace::cpow(sl, a) - w, g);
              const Complex v = laplace::laplace_forward(f, Complex(s, 0.0), opt).value;
              const double err = std::abs(v - ref) / std::abs(ref);
              ++count;
              if (err > worst) {
                worst = err;
                where = "a=" + fmt("%g", a) + " b=" + fmt("%g", b) + " g=" + fmt("%g", g) + " w=" + fmt("%g", w) +
                        " lambda=" + fmt("%g", lam) + " s=" + fmt("%g", s);
              }
            }
          }
  return single(name, "max relative error", worst, 1e-6,
                std::to_string(count) + " transforms; worst at " + where);
}

SuiteResult radial_pairs(bool) {
  std::vector<double> radii;
  for (int i = 0; i < 30; ++i) radii.push_back(0.1 * i);
  double worst = 0.0;
  for (int n : {1, 3}) {
    const auto r = greens::radial_inverse_fourier([](double k) { return std::exp(-0.5 * k * k); }, 12.0, radii, n);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double ref = std::pow(2.0 * std::numbers::pi, -0.5 * n) * std::exp(-0.5 * radii[i] * radii[i]);
      worst = std::max(worst, rel(r.profile.values[i], ref));
    }
  }
  return single("lemma3-gaussian", "max relative error", worst, 1e-7, "n in {1,3}, 30 radii in [0, 2.9]");
}

volterra::KernelSamples poly_kernel(const fracops::TimeGrid& g, double c0, double c1, double c2) {
  return volterra::KernelSamples::from_antiderivatives(
      g, [=](double t) { return c0 + c1 * t + c2 * t * t; },
      [=](double t) { return c0 * t + c1 * t * t / 2.0 + c2 * t * t * t / 3.0; },
      [=](double t) { return c0 * t * t / 2.0 + c1 * t * t * t / 6.0 + c2 * t * t * t * t / 12.0; });
}

SuiteResult volterra_pairs(bool, unsigned seed) {
  const fracops::TimeGrid g(1.0, 512);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto k = poly_kernel(g, u(rng), u(rng), u(rng));
    const double a = u(rng), b = u(rng), w = 1.0 + 4.0 * std::abs(u(rng));
    std::vector<double> f(g.steps() + 1);
    for (int i = 0; i <= g.steps(); ++i) f[i] = a * std::sin(w * g.t(i)) + b * std::cos(w * g.t(i));
    const auto x = volterra::volterra_apply(k, f);
    const auto y = volterra::resolvent_representation(volterra::resolvent_solve(k), f);
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
  }
  return single("lemma4", "max-norm difference", worst, 1e-8, "20 polynomial/trigonometric pairs, N=512");
}

SuiteResult kernel_pair(bool full) {
  Tally t;
  const int n = full ? 2048 : 512;
  for (double a : {0.3, 0.5, 0.7}) {
    const fracops::TimeGrid g(1.0, n);
    const auto r = volterra::resolvent_solve(volterra::memory_kernel(a, g));
    double worst = 0.0;
    for (int m = 10; m <= n; ++m) {
      worst = std::max(worst, rel(r.values[m], std::pow(g.t(m), -a) * specfun::rgamma(1.0 - a)));
    }
    t.add("a=" + fmt("%g", a) + " pointwise rel", worst, 5e-3);

    const fracops::TimeGrid lg(8.0, full ? 4096 : 1024);
    const auto k = volterra::memory_kernel(a, lg);
    const auto rr = volterra::resolvent_solve(k);
    auto transform = [&](const volterra::KernelSamples& ks, double s) {
      double acc = 0.0;
      for (int l = 0; l < lg.steps(); ++l) {
        acc += ks.weights.scale *
               (ks.weights.near[l] * std::exp(-s * lg.t(l)) + ks.weights.far[l] * std::exp(-s * lg.t(l + 1)));
      }
      return acc;
    };
    double lap = 0.0;
    for (double s : {2.0, 5.0, 10.0}) {
      const double kk = 1.0 / (std::pow(s, 1.0 - a) + 1.0);
      const double rk = std::pow(s, a - 1.0);
      lap = std::max({lap, rel(transform(k, s), kk), rel(transform(rr, s), rk)});
    }
    t.add("a=" + fmt("%g", a) + " Laplace rel", lap, 1e-4);
  }
  return t.result("theorem2-equivalence");
}

SuiteResult symbol_oracle(bool full) {
  const int pts = full ? 10 : 5;
  double worst = 0.0;
  int series = 0, total = 0;
  for (double a : {0.3, 0.5, 0.7}) {
    greens::GreenSeriesParams p;
    p.alpha = a;
    for (int i = 0; i < pts; ++i) {
      for (int j = 0; j < pts; ++j) {
        const double xi2 = 25.0 * i / (pts - 1);
        const double t = 0.05 + 1.95 * j / (pts - 1);
        const auto e = greens::green_symbol_eval(xi2, t, p);
        worst = std::max(worst, std::abs(e.value - greens::green_symbol_talbot(xi2, t, a)));
        series += e.used_series;
        ++total;
      }
    }
  }
  return single("theorem1-oracle", "max absolute error", worst, 1e-8,
                std::to_string(total) + " points, series used at " + std::to_string(series));
}

solvers::ProblemSpec gaussian(double alpha, int modes, int steps) {
  solvers::ProblemSpec ps;
  ps.alpha = alpha;
  ps.dimension = 1;
  ps.half_width = 10.0;
  ps.modes = modes;
  ps.horizon = 1.0;
  ps.steps = steps;
  ps.initial = [](const solvers::Point& x) { return std::exp(-x[0] * x[0]); };
  return ps;
}

double pair_difference(const solvers::ComparisonReport& rep, solvers::Solver a, solvers::Solver b) {
  for (const auto& p : rep.pairs) {
    if (p.a == a && p.b == b) return *std::max_element(p.max_norm.begin(), p.max_norm.end());
  }
  throw DomainError("pair not present in report");
}

SuiteResult cross_solver(bool full) {
  using solvers::Solver;
  Tally t;
  const int modes = full ? 256 : 128;
  const std::vector<int> ladder = full ? std::vector<int>{256, 512, 1024} : std::vector<int>{64, 128, 256};
  std::vector<double> spread;
  for (int n : ladder) {
    const auto rep = solvers::compare_solvers(gaussian(0.5, modes, n), {1.0});
    spread.push_back(rep.max_difference());
    if (n == ladder.back()) {
      t.add("explicit-l1", pair_difference(rep, Solver::explicit_green, Solver::l1), 1e-2);
      t.add("l1-memory", pair_difference(rep, Solver::l1, Solver::memory), 1e-2);
      t.add("explicit mass drift", rep.mass_drift[0], 1e-8);
      t.add("l1 mass drift", rep.mass_drift[1], 1e-6);
      t.add("memory mass drift", rep.mass_drift[2], 1e-6);
    }
  }
  bool monotone = true;
  std::string ladder_text;
  for (std::size_t i = 0; i < spread.size(); ++i) {
    if (i > 0 && !(spread[i] < spread[i - 1])) monotone = false;
    ladder_text += (i ? "," : "") + fmt("%.3g", spread[i]);
  }
  t.require("three-way difference decreasing [" + ladder_text + "]", monotone);
  return t.result("cross-solver");
}

SuiteResult classical_limit(bool full) {
  const auto ps = gaussian(0.999, full ? 256 : 128, 64);
  const auto u = solvers::solve_explicit(ps, {1.0});
  double worst = 0.0, peak = 0.0;
  for (int j = 0; j < ps.modes; ++j) {
    const double x = ps.coordinate(j);
    // e^{-x^2} under u_t = u_xx / 2 at t = 1.
    const double ref = std::exp(-x * x / 3.0) / std::sqrt(3.0);
    worst = std::max(worst, std::abs(u.values[0][j] - ref));
    peak = std::max(peak, ref);
  }
  return single("classical-limit", "max-norm relative difference", worst / peak, 2e-2,
                "alpha=0.999 against the heat solution with diffusivity 1/2");
}

SuiteResult forcing(bool full) {
  Tally t;
  const double a = 0.5;
  const fracops::TimeGrid g(2.0, full ? 1024 : 512);
  greens::GreenSeriesParams p;
  p.alpha = a;
  std::vector<double> expo(g.steps() + 1), ones(g.steps() + 1, 1.0);
  for (int i = 0; i <= g.steps(); ++i) expo[i] = std::exp(-g.t(i));
  for (double xi2 : {0.0, 1.0, 4.0}) {
    const auto u = greens::forcing_kernel(xi2, g, expo, p);
    const auto w = greens::forcing_kernel(xi2, g, ones, p);
    const laplace::LaplaceImage damped{
        [=](Complex s) { return 1.0 / ((s + 1.0) * (s + laplace::cpow(s, a) + xi2)); }, 0.0};
    const laplace::LaplaceImage step{[=](Complex s) { return 1.0 / (s * (s + laplace::cpow(s, a) + xi2)); }, 0.0};
    double e1 = 0.0, e2 = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const int i = g.steps() * k / 20;
      e1 = std::max(e1, std::abs(u.values[i] - laplace::talbot_invert(damped, g.t(i)).value));
      e2 = std::max(e2, std::abs(w.values[i] - laplace::talbot_invert(step, g.t(i)).value));
    }
    t.add("xi2=" + fmt("%g", xi2) + " f=e^-t", e1, 1e-6);
    t.add("xi2=" + fmt("%g", xi2) + " f=1", e2, 1e-6);
  }
  return t.result("forcing");
}

SuiteResult mass(bool full) {
  Tally t;
  const auto rep = solvers::compare_solvers(gaussian(0.5, full ? 256 : 128, full ? 1024 : 256), {0.25, 0.5, 1.0});
  t.add("explicit drift", rep.mass_drift[0], 1e-8);
  t.add("l1 drift", rep.mass_drift[1], 1e-6);
  t.add("memory drift", rep.mass_drift[2], 1e-6);
  t.add("symbol at xi=0", std::abs(greens::green_symbol(0.0, 1.0, greens::GreenSeriesParams{}) - 1.0), 1e-15);
  for (double tt : full ? std::vector<double>{0.1, 1.0} : std::vector<double>{1.0}) {
    greens::GreenSeriesParams p;
    p.alpha = 0.5;
    t.add("Green mass n=1 t=" + fmt("%g", tt), std::abs(greens::green_mass(tt, 1, p, 30.0) - 1.0), 1e-4);
  }
  return t.result("mass");
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "identities",      "lemma1",       "lemma2",          "lemma3-gaussian", "lemma4", "theorem2-equivalence",
      "theorem1-oracle", "cross-solver", "classical-limit", "forcing",         "mass"};
  return names;
}

SuiteResult run_suite(const std::string& name, bool full, unsigned seed) {
  const auto start = Clock::now();
  SuiteResult r;
  if (name == "identities") {
    r = identities(full);
  } else if (name == "lemma1") {
    r = laplace_sweep(name, full, {0.0});
  } else if (name == "lemma2") {
    r = laplace_sweep(name, full, {0.5, 1.0});
  } else if (name == "lemma3-gaussian") {
    r = radial_pairs(full);
  } else if (name == "lemma4") {
    r = volterra_pairs(full, seed);
  } else if (name == "theorem2-equivalence") {
    r = kernel_pair(full);
  } else if (name == "theorem1-oracle") {
    r = symbol_oracle(full);
  } else if (name == "cross-solver") {
    r = cross_solver(full);
  } else if (name == "classical-limit") {
    r = classical_limit(full);
  } else if (name == "forcing") {
    r = forcing(full);
  } else if (name == "mass") {
    r = mass(full);
  } else {
    throw DomainError("unknown suite '" + name + "'");
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

}  // namespace fracdiff::verify
