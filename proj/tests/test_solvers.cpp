#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fracdiff/errors.hpp"
#include "fracdiff/solvers.hpp"

using namespace fracdiff;
using namespace fracdiff::solvers;

namespace {

ProblemSpec gaussian_1d(int modes, int steps) {
  ProblemSpec ps;
  ps.alpha = 0.5;
  ps.dimension = 1;
  ps.half_width = 10.0;
  ps.modes = modes;
  ps.horizon = 1.0;
  ps.steps = steps;
  ps.initial = [](const Point& x) { return std::exp(-x[0] * x[0]); };
  return ps;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("initial snapshot reproduces the datum") {
  const ProblemSpec ps = gaussian_1d(128, 64);
  const auto g = initial_field(ps);
  for (Solver s : {Solver::explicit_green, Solver::l1, Solver::memory}) {
    const SolutionField u = solve(s, ps, {0.0});
    CHECK(u.time_indices[0] == 0);
    CHECK(max_abs_diff(u.values[0], g) < 1e-10);
  }
}

TEST_CASE("mass is conserved without forcing") {
  const ProblemSpec ps = gaussian_1d(128, 128);
  const double m0 = lattice_mass(ps, initial_field(ps));
  CHECK(m0 == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
  const std::vector<double> times{0.25, 0.5, 1.0};
  CHECK(solve_explicit(ps, times).mass_drift(m0) <= 1e-8);
  CHECK(solve_l1(ps, times).mass_drift(m0) <= 1e-6);
  CHECK(solve_memory(ps, times).mass_drift(m0) <= 1e-6);
}

TEST_CASE("explicit mode responses match Talbot inversion") {
  const ProblemSpec ps = gaussian_1d(256, 1024);
  double worst = 0.0;
  for (int k = 0; k <= 128; k += 4) {
    const double xi = std::numbers::pi * k / ps.half_width;
    const double v = homogeneous_response(Solver::explicit_green, ps, xi * xi, {1024})[0];
    const double ref = greens::green_symbol_talbot(xi * xi, 1.0, 0.5);
    worst = std::max(worst, std::abs(v - ref) / std::max(std::abs(ref), 1e-300));
  }
  CHECK(worst <= 1e-7);
}

TEST_CASE("solvers agree on the one dimensional Gaussian") {
  const ProblemSpec ps = gaussian_1d(128, 256);
  const ComparisonReport rep = compare_solvers(ps, {0.5, 1.0});
  REQUIRE(rep.fields.size() == 3);
  REQUIRE(rep.pairs.size() == 3);
  CHECK(rep.max_difference() <= 1e-2);
  for (const auto& f : rep.fields) {
    CHECK(f.imaginary_residue <= 1e-10);
    CHECK(f.boundary_amplitude <= 1e-6);
    CHECK(f.minimum >= -1e-4);
  }
  CHECK(rep.mass_drift[0] <= 1e-8);
}

TEST_CASE("repeated solves are identical") {
  const ProblemSpec ps = gaussian_1d(64, 64);
  const auto a = solve_l1(ps, {1.0});
  const auto b = solve_l1(ps, {1.0});
  CHECK(max_abs_diff(a.values[0], b.values[0]) == 0.0);
}

TEST_CASE("zero data gives zero") {
  ProblemSpec ps = gaussian_1d(32, 32);
  ps.initial = [](const Point&) { return 0.0; };
  for (Solver s : {Solver::explicit_green, Solver::l1, Solver::memory}) {
    const SolutionField u = solve(s, ps, {1.0});
    for (double v : u.values[0]) CHECK(v == 0.0);
  }
}

TEST_CASE("forced problems") {
  ProblemSpec ps = gaussian_1d(64, 256);
  ps.initial = [](const Point&) { return 0.0; };
  ps.forcing_space = [](const Point& x) { return std::exp(-2.0 * x[0] * x[0]); };
  ps.forcing_time = [](double t) { return std::exp(-t); };
  CHECK_THROWS_AS(solve_memory(ps, {1.0}), DomainError);
  const ComparisonReport rep = compare_solvers(ps, {1.0});
  REQUIRE(rep.fields.size() == 2);
  CHECK(rep.pairs[0].max_norm[0] <= 1e-2);
  // The zero mode sees u_t + D^a u = q with zero data: mass grows.
  CHECK(rep.fields[0].mass[0] > 0.1);
}

TEST_CASE("two and three dimensions") {
  for (int n : {2, 3}) {
    ProblemSpec ps;
    ps.dimension = n;
    ps.half_width = 10.0;
    ps.modes = n == 2 ? 64 : 32;
    ps.steps = 64;
    ps.initial = [](const Point& x) { return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])); };
    const ComparisonReport rep = compare_solvers(ps, {1.0});
    CHECK(rep.mass_drift[0] <= 1e-8);
    CHECK(rep.mass_drift[1] <= 1e-6);
    CHECK(rep.mass_drift[2] <= 1e-6);
    CHECK(rep.max_difference() <= 2e-2);
    CHECK(rep.fields[0].imaginary_residue <= 1e-10);
  }
}

TEST_CASE("problem validation") {
  ProblemSpec ps = gaussian_1d(64, 64);
  ps.initial = [](const Point& x) { return std::exp(-0.01 * x[0] * x[0]); };
  CHECK_THROWS_AS(solve_explicit(ps, {1.0}), DomainError);
  ps = gaussian_1d(48, 64);
  CHECK_THROWS_AS(ps.validate(), DomainError);
  ps = gaussian_1d(64, 8);
  CHECK_THROWS_AS(ps.validate(), DomainError);
  ps = gaussian_1d(64, 64);
  CHECK_THROWS_AS(solve_l1(ps, {2.0}), DomainError);
  ps.initial_samples.assign(10, 0.0);
  CHECK_THROWS_AS(ps.validate(), DomainError);
  CHECK_THROWS_AS(solver_from_string("euler"), DomainError);
  CHECK(solver_from_string(to_string(Solver::memory)) == Solver::memory);
}
