#include <cmath>
#include <functional>
#include <numbers>

#include "doctest.h"
#include "fracdiff/errors.hpp"
#include "fracdiff/greens.hpp"
#include "fracdiff/laplace.hpp"

using namespace fracdiff;
using namespace fracdiff::greens;
using fracops::TimeGrid;

namespace {

GreenSeriesParams with_alpha(double a) {
  GreenSeriesParams p;
  p.alpha = a;
  return p;
}

double talbot(const std::function<laplace::Complex(laplace::Complex)>& f, double t) {
  return laplace::talbot_invert(laplace::LaplaceImage{f, 0.0}, t).value;
}

}  // namespace

TEST_CASE("symbol boundary values") {
  const GreenSeriesParams p = with_alpha(0.5);
  CHECK(green_symbol(0.0, 2.0, p) == 1.0);
  CHECK(green_symbol(3.0, 0.0, p) == 1.0);
  CHECK(green_symbol_talbot(0.0, 2.0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(green_symbol(-1.0, 1.0, p), DomainError);
  CHECK_THROWS_AS(green_symbol(1.0, -1.0, p), DomainError);
  CHECK_THROWS_AS(green_symbol(1.0, 1.0, with_alpha(1.0)), DomainError);
}

TEST_CASE("symbol series agrees with Talbot") {
  double worst = 0.0;
  int series_used = 0, total = 0;
  for (double a : {0.2, 0.5, 0.8}) {
    for (double t : {0.01, 0.3, 1.0, 2.0}) {
      for (double xi2 : {0.1, 1.0, 4.0, 20.0}) {
        const SymbolEvaluation e = green_symbol_eval(xi2, t, with_alpha(a));
        const double ref = green_symbol_talbot(xi2, t, a);
        worst = std::max(worst, std::abs(e.value - ref));
        series_used += e.used_series;
        ++total;
      }
    }
  }
  CHECK(worst <= 1e-8);
  CHECK(series_used > total / 2);
}

TEST_CASE("symbol sweep over the lattice of test points") {
  double worst = 0.0, peak = 0.0;
  for (double a : {0.3, 0.5, 0.7}) {
    for (int i = 0; i < 10; ++i) {
      const double xi2 = 25.0 * i / 9.0;
      for (int j = 0; j < 10; ++j) {
        const double t = 0.05 + 1.95 * j / 9.0;
        const double v = green_symbol(xi2, t, with_alpha(a));
        worst = std::max(worst, std::abs(v - green_symbol_talbot(xi2, t, a)));
        peak = std::max(peak, v);
      }
    }
  }
  CHECK(worst <= 1e-8);
  CHECK(peak <= 1.0 + 1e-9);
}

TEST_CASE("symbol decays in xi2 and stays in (0, 1]") {
  for (double a : {0.3, 0.7}) {
    for (double t : {0.5, 3.0}) {
      double prev = 1.0;
      for (double xi2 = 0.25; xi2 <= 64.0; xi2 *= 2.0) {
        const double v = green_symbol(xi2, t, with_alpha(a));
        CHECK(v > 0.0);
        CHECK(v < prev + 1e-12);
        prev = v;
      }
    }
  }
}

TEST_CASE("forcing kernel against Talbot") {
  const double a = 0.5;
  const TimeGrid g(2.0, 1024);
  std::vector<double> ones(1025, 1.0), expo(1025);
  for (int i = 0; i <= 1024; ++i) expo[i] = std::exp(-g.t(i));
  for (double xi2 : {0.0, 1.0, 9.0}) {
    const ForcingResult r1 = forcing_kernel(xi2, g, ones, with_alpha(a));
    const ForcingResult r2 = forcing_kernel(xi2, g, expo, with_alpha(a));
    CHECK(r1.values[0] == 0.0);
    CHECK_FALSE(r1.truncated);
    for (int i : {16, 128, 500, 1024}) {
      const double t = g.t(i);
      const double ref1 = talbot(
          [=](laplace::Complex s) { return 1.0 / (s * (s + laplace::cpow(s, a) + xi2)); }, t);
      const double ref2 = talbot(
          [=](laplace::Complex s) { return 1.0 / ((s + 1.0) * (s + laplace::cpow(s, a) + xi2)); }, t);
      CHECK(std::abs(r1.values[i] - ref1) < 1e-6);
      CHECK(std::abs(r2.values[i] - ref2) < 1e-6);
    }
  }
}

TEST_CASE("forcing kernel is linear in the forcing") {
  const TimeGrid g(1.0, 64);
  std::vector<double> f(65), h(65), mix(65);
  for (int i = 0; i <= 64; ++i) {
    f[i] = std::sin(2.0 * g.t(i));
    h[i] = g.t(i) * g.t(i);
    mix[i] = 2.0 * f[i] - 3.0 * h[i];
  }
  const auto p = with_alpha(0.4);
  const auto uf = forcing_kernel(2.0, g, f, p).values;
  const auto uh = forcing_kernel(2.0, g, h, p).values;
  const auto um = forcing_kernel(2.0, g, mix, p).values;
  for (int i = 0; i <= 64; ++i) CHECK(std::abs(um[i] - (2.0 * uf[i] - 3.0 * uh[i])) < 1e-13);
  CHECK_THROWS_AS(forcing_kernel(2.0, g, std::vector<double>(3, 0.0), p), DomainError);
}

TEST_CASE("forcing impulse at small times") {
  // 1 / (s + s^a + xi2) ~ 1/s - s^{a-2} as s grows, so F(t) ~ 1 - t^{1-a}/Gamma(2-a).
  const double a = 0.5, t = 1e-4;
  const double approx = 1.0 - std::pow(t, 1.0 - a) / std::tgamma(2.0 - a);
  CHECK(std::abs(forcing_impulse(1.0, t, a) - approx) < 1e-4);
  CHECK(forcing_impulse(1.0, 0.0, a) == 1.0);
}

TEST_CASE("radial inverse Fourier of Gaussians") {
  const std::vector<double> radii{0.0, 0.5, 1.0, 2.0};
  for (int n : {1, 2, 3}) {
    const RadialResult r = radial_inverse_fourier([](double k) { return std::exp(-0.5 * k * k); }, 12.0, radii, n);
    CHECK_FALSE(r.truncation_warning);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double ref = std::pow(2.0 * std::numbers::pi, -0.5 * n) * std::exp(-0.5 * radii[i] * radii[i]);
      CHECK(std::abs(r.profile.values[i] - ref) < 1e-12);
    }
  }
  const RadialResult cut = radial_inverse_fourier([](double k) { return std::exp(-0.5 * k * k); }, 2.0, radii, 1);
  CHECK(cut.truncation_warning);
  CHECK_THROWS_AS(radial_inverse_fourier([](double) { return 0.0; }, 1.0, {1.0, 0.5}, 1), DomainError);
  CHECK_THROWS_AS(radial_inverse_fourier([](double) { return 0.0; }, 1.0, {1.0}, 4), DomainError);
}

TEST_CASE("radial inverse Fourier is linear") {
  const std::vector<double> radii{0.0, 0.7, 1.9};
  auto f = [](double k) { return std::exp(-k * k); };
  auto h = [](double k) { return 1.0 / (1.0 + k * k * k * k); };
  const auto a = radial_inverse_fourier(f, 20.0, radii, 3).profile.values;
  const auto b = radial_inverse_fourier(h, 20.0, radii, 3).profile.values;
  const auto c = radial_inverse_fourier([&](double k) { return 0.5 * f(k) + 4.0 * h(k); }, 20.0, radii, 3)
                     .profile.values;
  for (std::size_t i = 0; i < radii.size(); ++i) CHECK(std::abs(c[i] - (0.5 * a[i] + 4.0 * b[i])) < 1e-13);
}

TEST_CASE("physical Green function carries unit mass in one dimension") {
  const double t = 1.0;
  std::vector<double> radii;
  const double h = 0.05;
  for (int i = 0; i <= 600; ++i) radii.push_back(i * h);
  const GreenProfile g = green_physical(radii, t, 1, with_alpha(0.5));
  CHECK_FALSE(g.truncation_warning);
  // Trapezoid on [0, 30] doubled; the profile has a kink only at r = 0.
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) mass += 0.5 * h * (g.profile.values[i] + g.profile.values[i + 1]);
  mass *= 2.0;
  CHECK(std::abs(mass - 1.0) < 1e-3);
  for (double v : g.profile.values) CHECK(v > -1e-10);
}

TEST_CASE("physical Green function near the classical limit") {
  const GreenProfile g = green_physical({0.0, 1.0}, 1.0, 1, with_alpha(0.999));
  // With a -> 1 the symbol becomes 2/(2s + xi2): heat kernel at time t/2.
  const double heat0 = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  CHECK(std::abs(g.profile.values[0] - heat0) < 2e-2);
  CHECK_THROWS_AS(green_physical({0.0}, 1.0, 2, with_alpha(0.5)), DomainError);
  CHECK_THROWS_AS(green_physical({1.0}, 1.0, 4, with_alpha(0.5)), DomainError);
  CHECK_THROWS_AS(green_physical({1.0}, 0.0, 1, with_alpha(0.5)), DomainError);
}

TEST_CASE("physical Green function is nonnegative") {
  std::vector<double> radii;
  for (int i = 1; i <= 24; ++i) radii.push_back(0.25 * i);
  for (double a : {0.3, 0.5, 0.7}) {
    for (double t : {0.1, 1.0}) {
      for (int n : {1, 3}) {
        const GreenProfile g = green_physical(radii, t, n, with_alpha(a));
        for (double v : g.profile.values) CHECK(v >= -1e-6);
      }
    }
  }
}
