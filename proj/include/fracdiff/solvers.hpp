#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "fracdiff/greens.hpp"

namespace fracdiff::solvers {

using Point = std::array<double, 3>;  ///< unused trailing coordinates are 0
using SpatialField = std::function<double(const Point&)>;

/// u_t + D^a u - Laplacian u = f on the periodic box [-L, L)^n, f = p(x) q(t).
struct ProblemSpec {
  double alpha = 0.5;
  int dimension = 1;
  double half_width = 10.0;
  int modes = 256;  ///< per axis, power of two
  double horizon = 1.0;
  int steps = 1024;
  SpatialField initial;               ///< g; ignored when initial_samples is set
  std::vector<double> initial_samples;  ///< g on the lattice, row-major
  SpatialField forcing_space;         ///< p; empty means f = 0
  std::vector<double> forcing_samples;
  std::function<double(double)> forcing_time;  ///< q; defaults to 1 when p is set
  greens::GreenSeriesParams series;   ///< its alpha is replaced by ProblemSpec::alpha

  bool has_forcing() const { return static_cast<bool>(forcing_space) || !forcing_samples.empty(); }
  /// Shape checks plus the decay requirement: |g|, |p| <= 1e-10 of their peak
  /// wherever some |x_i| >= L/2.
  void validate() const;
  fracops::TimeGrid grid() const { return fracops::TimeGrid(horizon, steps); }
  std::size_t lattice_size() const;
  /// Coordinate of lattice index j along one axis: -L + 2 L j / M.
  double coordinate(int j) const { return -half_width + 2.0 * half_width * j / modes; }
};

enum class Solver { explicit_green, l1, memory };
std::string to_string(Solver s);
Solver solver_from_string(const std::string& name);

struct SolutionField {
  Solver solver = Solver::explicit_green;
  int dimension = 1;
  int modes = 0;
  double half_width = 0.0;
  double dt = 0.0;
  std::vector<double> times;  ///< requested times snapped to grid nodes
  std::vector<int> time_indices;
  std::vector<std::vector<double>> values;  ///< one lattice field per time
  std::vector<double> mass;
  double imaginary_residue = 0.0;   ///< max |Im u| / max |u| over all snapshots
  double boundary_amplitude = 0.0;  ///< max |u| on the box faces / max |u|
  double minimum = 0.0;             ///< min u over all snapshots

  /// Largest |mass / initial_mass - 1| over the snapshots.
  double mass_drift(double initial_mass) const;
};

/// Periodic complex FFT over the lattice; plans are made once per object.
class Fft {
 public:
  Fft(int modes, int dimension);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  void forward(std::vector<std::complex<double>>& data) const;
  /// Unnormalized inverse.
  void backward(std::vector<std::complex<double>>& data) const;
  std::size_t size() const { return size_; }

 private:
  std::size_t size_;
  void* buffer_;
  void* forward_plan_;
  void* backward_plan_;
};

/// Scalar response of a single Fourier mode with |xi|^2 = xi2 to unit initial
/// data (f = 0), at the given time indices.
std::vector<double> homogeneous_response(Solver s, const ProblemSpec& ps, double xi2,
                                         const std::vector<int>& indices);

SolutionField solve(Solver s, const ProblemSpec& ps, const std::vector<double>& out_times);
SolutionField solve_explicit(const ProblemSpec& ps, const std::vector<double>& out_times);
SolutionField solve_l1(const ProblemSpec& ps, const std::vector<double>& out_times);
/// Memory-kernel form u_t - Laplacian u + k * Laplacian u = 0; requires f = 0.
SolutionField solve_memory(const ProblemSpec& ps, const std::vector<double>& out_times);

struct PairDifference {
  Solver a = Solver::explicit_green;
  Solver b = Solver::l1;
  std::vector<double> max_norm;  ///< per output time
  std::vector<double> l2_norm;   ///< discrete L2 with the lattice cell volume
  double worst_mode_xi2 = 0.0;   ///< mode with the largest spectral difference
  double worst_mode_difference = 0.0;
};

struct ComparisonReport {
  std::vector<double> times;
  std::vector<SolutionField> fields;
  std::vector<double> mass_drift;  ///< per field
  std::vector<PairDifference> pairs;
  double initial_mass = 0.0;

  /// Largest max-norm difference over all pairs and times.
  double max_difference() const;
};

/// Runs every applicable solver (memory only when f = 0) and compares them.
ComparisonReport compare_solvers(const ProblemSpec& ps, const std::vector<double>& out_times);

/// Samples of g on the lattice (initial_samples if set).
std::vector<double> initial_field(const ProblemSpec& ps);
double lattice_mass(const ProblemSpec& ps, const std::vector<double>& values);

}  // namespace fracdiff::solvers
