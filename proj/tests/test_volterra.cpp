#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fracdiff/errors.hpp"
#include "fracdiff/laplace.hpp"
#include "fracdiff/volterra.hpp"

using namespace fracdiff;
using namespace fracdiff::volterra;
using fracops::TimeGrid;

namespace {

KernelSamples constant_kernel(const TimeGrid& g, double lambda) {
  return KernelSamples::from_antiderivatives(
      g, [=](double) { return lambda; }, [=](double t) { return lambda * t; },
      [=](double t) { return 0.5 * lambda * t * t; });
}

KernelSamples poly_kernel(const TimeGrid& g, double c0, double c1, double c2) {
  return KernelSamples::from_antiderivatives(
      g, [=](double t) { return c0 + c1 * t + c2 * t * t; },
      [=](double t) { return c0 * t + c1 * t * t / 2.0 + c2 * t * t * t / 3.0; },
      [=](double t) { return c0 * t * t / 2.0 + c1 * t * t * t / 6.0 + c2 * t * t * t * t / 12.0; });
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("constant kernel resolvent is lambda e^{lambda t}") {
  const TimeGrid g(1.0, 512);
  const KernelSamples r = resolvent_solve(constant_kernel(g, 1.0));
  CHECK(std::abs(r.values.back() - std::exp(1.0)) < 1e-5);
  CHECK(std::abs(r.cumulative.back() - (std::exp(1.0) - 1.0)) < 1e-5);
  const KernelSamples zero = resolvent_solve(constant_kernel(g, 0.0));
  CHECK(max_abs_diff(zero.values, std::vector<double>(513, 0.0)) == 0.0);
}

TEST_CASE("volterra_apply closed forms") {
  const TimeGrid g(1.0, 512);
  const std::vector<double> ones(513, 1.0);
  const auto phi = volterra_apply(constant_kernel(g, 1.0), ones);
  double worst = 0.0;
  for (int k = 0; k <= 512; ++k) worst = std::max(worst, std::abs(phi[k] - std::exp(g.t(k))));
  CHECK(worst < 1e-5);
  std::vector<double> f(513);
  for (int k = 0; k <= 512; ++k) f[k] = std::sin(3.0 * g.t(k));
  CHECK(max_abs_diff(volterra_apply(constant_kernel(g, 0.0), f), f) == 0.0);
  const auto rep = resolvent_representation(resolvent_solve(constant_kernel(g, 1.0)), ones);
  CHECK(max_abs_diff(rep, phi) < 1e-12);
  CHECK_THROWS_AS(volterra_apply(constant_kernel(g, 1.0), std::vector<double>(10, 1.0)), DomainError);
}

TEST_CASE("resolvent representation reproduces the Volterra solve") {
  const TimeGrid g(1.0, 512);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const KernelSamples k = poly_kernel(g, u(rng), u(rng), u(rng));
    const double a = u(rng), b = u(rng), w = 1.0 + 4.0 * std::abs(u(rng));
    std::vector<double> f(513);
    for (int i = 0; i <= 512; ++i) f[i] = a * std::sin(w * g.t(i)) + b * std::cos(w * g.t(i));
    worst = std::max(worst, max_abs_diff(volterra_apply(k, f), resolvent_representation(resolvent_solve(k), f)));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("resolvent symmetry") {
  // k = r - r * k: the Volterra equation with kernel -r and forcing r returns k.
  const TimeGrid g(1.0, 1024);
  const KernelSamples k = poly_kernel(g, 0.7, -0.4, 0.3);
  const KernelSamples r = resolvent_solve(k);
  const auto back = volterra_apply(scaled(r, -1.0), r.values);
  CHECK(max_abs_diff(back, k.values) <= 1e-6);
}

TEST_CASE("memory kernel") {
  const TimeGrid g(1.0, 64);
  const KernelSamples k = memory_kernel(0.5, g);
  CHECK(std::isinf(k.values[0]));
  CHECK(k.cumulative[0] == 0.0);
  CHECK(std::abs(k.values.back() - 0.136606007391949) < 1e-12);
  CHECK(k.cumulative_mismatch() < 1e-10);
  double total = 0.0;
  for (int l = 0; l < 64; ++l) total += k.weights.panel_mass(l);
  CHECK(std::abs(total - k.cumulative.back()) < 1e-10);
  CHECK(std::abs(k.cumulative.back() - (1.0 - specfun::mittag_leffler(0.5, 1.0, -1.0))) < 1e-12);
  const KernelSamples far = memory_kernel(0.5, TimeGrid(1000.0, 4));
  CHECK(std::abs(far.cumulative.back() - 1.0) < 2e-2);
}

TEST_CASE("memory kernel resolvent is the power kernel") {
  const TimeGrid g(1.0, 2048);
  const KernelSamples r = resolvent_solve(memory_kernel(0.5, g));
  const double ref = 1.0 / std::sqrt(std::numbers::pi);
  CHECK(std::abs(r.values.back() - ref) < 5e-3 * ref);
  // Integrated comparison near the origin: R(t) = t^{1-a}/Gamma(2-a).
  for (int m : {1, 2, 5, 10}) {
    const double cum = std::pow(g.t(m), 0.5) / std::tgamma(1.5);
    CHECK(std::abs(r.cumulative[m] - cum) < 5e-3 * cum);
  }
}

TEST_CASE("discrete Laplace transforms of the kernel pair") {
  const double alpha = 0.5;
  const TimeGrid g(8.0, 4096);
  const KernelSamples k = memory_kernel(alpha, g);
  const KernelSamples r = resolvent_solve(k);
  auto transform = [&](const KernelSamples& ks, double s) {
    double acc = 0.0;
    for (int l = 0; l < g.steps(); ++l) {
      acc += ks.weights.scale *
             (ks.weights.near[l] * std::exp(-s * g.t(l)) + ks.weights.far[l] * std::exp(-s * g.t(l + 1)));
    }
    return acc;
  };
  for (double s : {2.0, 5.0, 10.0}) {
    const double kk = 1.0 / (std::pow(s, 1.0 - alpha) + 1.0);
    const double rr = std::pow(s, alpha - 1.0);
    CHECK(std::abs(rr - (kk + kk * rr)) < 1e-15);
    CHECK(std::abs(transform(k, s) - kk) < 1e-4 * kk);
    CHECK(std::abs(transform(r, s) - rr) < 1e-4 * rr);
  }
}
