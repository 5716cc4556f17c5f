#include "fracdiff/solvers.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

#include "fracdiff/errors.hpp"
#include "fracdiff/fracops.hpp"
#include "fracdiff/parallel.hpp"
#include "fracdiff/volterra.hpp"

namespace fracdiff::solvers {

namespace {

using Complex = std::complex<double>;

constexpr double kDecayRatio = 1e-10;
constexpr std::size_t kMaxLattice = std::size_t{1} << 24;

bool power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

// Splits a row-major lattice index into per-axis indices.
std::array<int, 3> axes(const ProblemSpec& ps, std::size_t idx) {
  std::array<int, 3> j{0, 0, 0};
  for (int d = ps.dimension - 1; d >= 0; --d) {
    j[d] = static_cast<int>(idx % ps.modes);
    idx /= ps.modes;
  }
  return j;
}

Point position(const ProblemSpec& ps, std::size_t idx) {
  const auto j = axes(ps, idx);
  Point x{0.0, 0.0, 0.0};
  for (int d = 0; d < ps.dimension; ++d) x[d] = ps.coordinate(j[d]);
  return x;
}

std::vector<double> sample(const ProblemSpec& ps, const SpatialField& f, const std::vector<double>& samples) {
  if (!samples.empty()) return samples;
  std::vector<double> out(ps.lattice_size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(position(ps, i));
  return out;
}

void check_decay(const ProblemSpec& ps, const std::vector<double>& v, const char* name) {
  double peak = 0.0, outer = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw DomainError(std::string("ProblemSpec: non-finite ") + name);
    peak = std::max(peak, std::abs(v[i]));
    const Point x = position(ps, i);
    bool far = false;
    for (int d = 0; d < ps.dimension; ++d) far = far || std::abs(x[d]) >= 0.5 * ps.half_width;
    if (far) outer = std::max(outer, std::abs(v[i]));
  }
  if (outer > kDecayRatio * peak) {
    char ratio[32];
    std::snprintf(ratio, sizeof ratio, "%.3g", peak > 0 ? outer / peak : 0.0);
    throw DomainError(std::string("ProblemSpec: ") + name + " does not decay within half the box (ratio " + ratio +
                      "); enlarge L");
  }
}

// Lattice modes grouped by the integer sum of squared signed wave numbers;
// every mode in a class shares the same scalar evolution.
struct ModeClasses {
  std::vector<int> class_of;
  std::vector<double> xi2;
};

ModeClasses classify(const ProblemSpec& ps) {
  ModeClasses mc;
  mc.class_of.resize(ps.lattice_size());
  std::map<long, int> index;
  for (std::size_t i = 0; i < mc.class_of.size(); ++i) {
    const auto j = axes(ps, i);
    long q = 0;
    for (int d = 0; d < ps.dimension; ++d) {
      const long k = j[d] < ps.modes / 2 ? j[d] : j[d] - ps.modes;
      q += k * k;
    }
    index.emplace(q, 0);
    mc.class_of[i] = static_cast<int>(q);
  }
  const double unit = std::numbers::pi / ps.half_width;
  int c = 0;
  for (auto& [q, slot] : index) {
    slot = c++;
    mc.xi2.push_back(unit * unit * static_cast<double>(q));
  }
  for (int& q : mc.class_of) q = index.at(q);
  return mc;
}

// Per-class scalar responses at the output indices: to unit initial data and
// to the forcing q(t) with unit spatial coefficient.
struct ResponseTable {
  std::vector<std::vector<double>> homogeneous;
  std::vector<std::vector<double>> forced;
};

ResponseTable responses(Solver s, const ProblemSpec& ps, const std::vector<double>& xi2,
                        const std::vector<int>& indices) {
  const fracops::TimeGrid grid = ps.grid();
  const int n = grid.steps();
  const double dt = grid.dt();
  const bool forced = ps.has_forcing();
  if (s == Solver::memory && forced) throw DomainError("solve_memory: the memory form has no forcing term");
  std::vector<double> q(n + 1, 1.0);
  if (forced && ps.forcing_time) {
    for (int m = 0; m <= n; ++m) q[m] = ps.forcing_time(grid.t(m));
  }
  greens::GreenSeriesParams gp = ps.series;
  gp.alpha = ps.alpha;

  fracops::ConvolutionWeights l1;
  std::vector<double> hat_c, hat_b;
  if (s == Solver::l1) l1 = fracops::caputo_l1_weights(ps.alpha, grid);
  if (s == Solver::memory) {
    const volterra::KernelSamples k = volterra::memory_kernel(ps.alpha, grid);
    const auto& w = k.weights;
    hat_c.resize(n);
    hat_b.assign(n + 1, 0.0);
    for (int l = 0; l < n; ++l) {
      hat_c[l] = w.scale * (w.near[l] + (l > 0 ? w.far[l - 1] : 0.0));
      hat_b[l + 1] = w.scale * w.far[l];
    }
  }

  ResponseTable table;
  table.homogeneous.assign(xi2.size(), std::vector<double>(indices.size(), 0.0));
  table.forced.assign(xi2.size(), std::vector<double>(indices.size(), 0.0));
  parallel_for(xi2.size(), [&](std::size_t c) {
    const double x2 = xi2[c];
    auto& h = table.homogeneous[c];
    auto& f = table.forced[c];
    switch (s) {
      case Solver::explicit_green: {
        for (std::size_t i = 0; i < indices.size(); ++i) h[i] = greens::green_symbol(x2, grid.t(indices[i]), gp);
        if (forced) {
          const auto v = greens::forcing_kernel(x2, grid, q, gp).values;
          for (std::size_t i = 0; i < indices.size(); ++i) f[i] = v[indices[i]];
        }
        break;
      }
      case Solver::l1: {
        const double c0 = l1.scale * l1.near[0];
        const double denom = 1.0 / dt + c0 + x2;
        std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), du(n + 1, 0.0), dv(n + 1, 0.0);
        u[0] = 1.0;
        for (int m = 1; m <= n; ++m) {
          double hu = 0.0, hv = 0.0;
          for (int k = 1; k < m; ++k) {
            hu += l1.near[k] * du[m - k];
            hv += l1.near[k] * dv[m - k];
          }
          u[m] = (u[m - 1] * (1.0 / dt + c0) - l1.scale * hu) / denom;
          du[m] = u[m] - u[m - 1];
          if (forced) {
            v[m] = (v[m - 1] * (1.0 / dt + c0) - l1.scale * hv + q[m]) / denom;
            dv[m] = v[m] - v[m - 1];
          }
        }
        for (std::size_t i = 0; i < indices.size(); ++i) {
          h[i] = u[indices[i]];
          f[i] = v[indices[i]];
        }
        break;
      }
      case Solver::memory: {
        const double denom = 1.0 / dt + x2 * (1.0 - hat_c[0]);
        std::vector<double> u(n + 1, 0.0);
        u[0] = 1.0;
        for (int m = 1; m <= n; ++m) {
          double hist = hat_b[m] * u[0];
          for (int i = 1; i < m; ++i) hist += hat_c[m - i] * u[i];
          u[m] = (u[m - 1] / dt + x2 * hist) / denom;
        }
        for (std::size_t i = 0; i < indices.size(); ++i) h[i] = u[indices[i]];
        break;
      }
    }
  });
  return table;
}

std::vector<int> snap(const fracops::TimeGrid& grid, const std::vector<double>& out_times) {
  std::vector<int> idx;
  for (double t : out_times) {
    if (!(t >= 0.0 && t <= grid.horizon() * (1.0 + 1e-12))) {
      throw DomainError("solve: output time outside [0, T]");
    }
    idx.push_back(grid.nearest(t));
  }
  return idx;
}

std::vector<Complex> to_spectrum(const Fft& fft, const std::vector<double>& v) {
  std::vector<Complex> out(v.begin(), v.end());
  fft.forward(out);
  return out;
}

struct Solved {
  SolutionField field;
  ResponseTable table;
  ModeClasses classes;
  std::vector<Complex> g_hat, p_hat;
};

Solved solve_impl(Solver s, const ProblemSpec& ps, const std::vector<double>& out_times) {
  ps.validate();
  const fracops::TimeGrid grid = ps.grid();
  Solved out;
  SolutionField& field = out.field;
  field.solver = s;
  field.dimension = ps.dimension;
  field.modes = ps.modes;
  field.half_width = ps.half_width;
  field.dt = grid.dt();
  field.time_indices = snap(grid, out_times.empty() ? std::vector<double>{ps.horizon} : out_times);
  for (int i : field.time_indices) field.times.push_back(grid.t(i));

  out.classes = classify(ps);
  out.table = responses(s, ps, out.classes.xi2, field.time_indices);

  const Fft fft(ps.modes, ps.dimension);
  out.g_hat = to_spectrum(fft, initial_field(ps));
  if (ps.has_forcing()) out.p_hat = to_spectrum(fft, sample(ps, ps.forcing_space, ps.forcing_samples));
  const std::size_t size = ps.lattice_size();
  double peak = 0.0, imag = 0.0, edge = 0.0;
  field.minimum = std::numeric_limits<double>::infinity();
  std::vector<Complex> work(size);
  for (std::size_t it = 0; it < field.time_indices.size(); ++it) {
    for (std::size_t i = 0; i < size; ++i) {
      const int c = out.classes.class_of[i];
      work[i] = out.table.homogeneous[c][it] * out.g_hat[i];
      if (!out.p_hat.empty()) work[i] += out.table.forced[c][it] * out.p_hat[i];
    }
    fft.backward(work);
    std::vector<double> u(size);
    for (std::size_t i = 0; i < size; ++i) {
      const Complex v = work[i] / static_cast<double>(size);
      u[i] = v.real();
      peak = std::max(peak, std::abs(v.real()));
      imag = std::max(imag, std::abs(v.imag()));
      field.minimum = std::min(field.minimum, v.real());
      const auto j = axes(ps, i);
      for (int d = 0; d < ps.dimension; ++d) {
        if (j[d] == 0 || j[d] == ps.modes - 1) edge = std::max(edge, std::abs(v.real()));
      }
    }
    field.mass.push_back(lattice_mass(ps, u));
    field.values.push_back(std::move(u));
  }
  field.imaginary_residue = peak > 0 ? imag / peak : imag;
  field.boundary_amplitude = peak > 0 ? edge / peak : edge;
  return out;
}

}  // namespace

void ProblemSpec::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("ProblemSpec: alpha must lie in (0, 1)");
  if (dimension < 1 || dimension > 3) throw DomainError("ProblemSpec: dimension must be 1, 2 or 3");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw DomainError("ProblemSpec: L must be > 0");
  if (modes < 16 || !power_of_two(modes)) throw DomainError("ProblemSpec: modes must be a power of two >= 16");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("ProblemSpec: T must be > 0");
  if (steps < 16) throw DomainError("ProblemSpec: steps must be >= 16");
  if (std::pow(static_cast<double>(modes), dimension) > static_cast<double>(kMaxLattice)) {
    throw DomainError("ProblemSpec: lattice too large");
  }
  if (!initial && initial_samples.empty()) throw DomainError("ProblemSpec: initial datum missing");
  if (!initial_samples.empty() && initial_samples.size() != lattice_size()) {
    throw DomainError("ProblemSpec: initial samples do not match the lattice");
  }
  if (!forcing_samples.empty() && forcing_samples.size() != lattice_size()) {
    throw DomainError("ProblemSpec: forcing samples do not match the lattice");
  }
  check_decay(*this, initial_field(*this), "initial datum");
  if (has_forcing()) check_decay(*this, sample(*this, forcing_space, forcing_samples), "forcing");
}

std::size_t ProblemSpec::lattice_size() const {
  std::size_t n = 1;
  for (int d = 0; d < dimension; ++d) n *= static_cast<std::size_t>(modes);
  return n;
}

std::string to_string(Solver s) {
  switch (s) {
    case Solver::explicit_green:
      return "explicit";
    case Solver::l1:
      return "l1";
    case Solver::memory:
      return "memory";
  }
  return "unknown";
}

Solver solver_from_string(const std::string& name) {
  if (name == "explicit") return Solver::explicit_green;
  if (name == "l1") return Solver::l1;
  if (name == "memory") return Solver::memory;
  throw DomainError("unknown solver '" + name + "'");
}

double SolutionField::mass_drift(double initial_mass) const {
  double worst = 0.0;
  for (double m : mass) {
    worst = std::max(worst, initial_mass != 0.0 ? std::abs(m / initial_mass - 1.0) : std::abs(m));
  }
  return worst;
}

Fft::Fft(int modes, int dimension) {
  std::vector<int> dims(dimension, modes);
  size_ = 1;
  for (int d : dims) size_ *= static_cast<std::size_t>(d);
  auto* buf = fftw_alloc_complex(size_);
  if (!buf) throw std::bad_alloc();
  buffer_ = buf;
  forward_plan_ = fftw_plan_dft(dimension, dims.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft(dimension, dims.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft() {
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  fftw_free(buffer_);
}

namespace {
void run_plan(void* plan, void* buffer, std::vector<Complex>& data, std::size_t size) {
  if (data.size() != size) throw DomainError("Fft: data size does not match the plan");
  auto* buf = static_cast<fftw_complex*>(buffer);
  std::copy(data.begin(), data.end(), reinterpret_cast<Complex*>(buf));
  fftw_execute(static_cast<fftw_plan>(plan));
  std::copy(reinterpret_cast<Complex*>(buf), reinterpret_cast<Complex*>(buf) + size, data.begin());
}
}  // namespace

void Fft::forward(std::vector<Complex>& data) const { run_plan(forward_plan_, buffer_, data, size_); }
void Fft::backward(std::vector<Complex>& data) const { run_plan(backward_plan_, buffer_, data, size_); }

std::vector<double> homogeneous_response(Solver s, const ProblemSpec& ps, double xi2,
                                         const std::vector<int>& indices) {
  ProblemSpec bare = ps;
  bare.forcing_space = nullptr;
  bare.forcing_samples.clear();
  for (int i : indices) {
    if (i < 0 || i > ps.steps) throw DomainError("homogeneous_response: index outside the grid");
  }
  return responses(s, bare, {xi2}, indices).homogeneous[0];
}

SolutionField solve(Solver s, const ProblemSpec& ps, const std::vector<double>& out_times) {
  return solve_impl(s, ps, out_times).field;
}

SolutionField solve_explicit(const ProblemSpec& ps, const std::vector<double>& out_times) {
  return solve(Solver::explicit_green, ps, out_times);
}

SolutionField solve_l1(const ProblemSpec& ps, const std::vector<double>& out_times) {
  return solve(Solver::l1, ps, out_times);
}

SolutionField solve_memory(const ProblemSpec& ps, const std::vector<double>& out_times) {
  return solve(Solver::memory, ps, out_times);
}

double ComparisonReport::max_difference() const {
  double worst = 0.0;
  for (const auto& p : pairs) {
    for (double v : p.max_norm) worst = std::max(worst, v);
  }
  return worst;
}

ComparisonReport compare_solvers(const ProblemSpec& ps, const std::vector<double>& out_times) {
  std::vector<Solver> kinds{Solver::explicit_green, Solver::l1};
  if (!ps.has_forcing()) kinds.push_back(Solver::memory);
  std::vector<Solved> runs;
  for (Solver s : kinds) runs.push_back(solve_impl(s, ps, out_times));

  ComparisonReport rep;
  rep.times = runs.front().field.times;
  rep.initial_mass = lattice_mass(ps, initial_field(ps));
  for (const auto& r : runs) {
    rep.fields.push_back(r.field);
    rep.mass_drift.push_back(r.field.mass_drift(rep.initial_mass));
  }
  const double cell = std::pow(2.0 * ps.half_width / ps.modes, ps.dimension);
  const std::size_t size = ps.lattice_size();
  // Largest normalized Fourier amplitude per class, to rank mode differences.
  const ModeClasses& mc = runs.front().classes;
  std::vector<double> g_amp(mc.xi2.size(), 0.0), p_amp(mc.xi2.size(), 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    const int c = mc.class_of[i];
    g_amp[c] = std::max(g_amp[c], std::abs(runs.front().g_hat[i]) / size);
    if (!runs.front().p_hat.empty()) p_amp[c] = std::max(p_amp[c], std::abs(runs.front().p_hat[i]) / size);
  }
  for (std::size_t a = 0; a < runs.size(); ++a) {
    for (std::size_t b = a + 1; b < runs.size(); ++b) {
      PairDifference pd;
      pd.a = kinds[a];
      pd.b = kinds[b];
      for (std::size_t it = 0; it < rep.times.size(); ++it) {
        const auto& u = runs[a].field.values[it];
        const auto& v = runs[b].field.values[it];
        double mx = 0.0, l2 = 0.0;
        for (std::size_t i = 0; i < size; ++i) {
          const double d = u[i] - v[i];
          mx = std::max(mx, std::abs(d));
          l2 += d * d;
        }
        pd.max_norm.push_back(mx);
        pd.l2_norm.push_back(std::sqrt(l2 * cell));
        for (std::size_t c = 0; c < mc.xi2.size(); ++c) {
          const double diff =
              std::abs(runs[a].table.homogeneous[c][it] - runs[b].table.homogeneous[c][it]) * g_amp[c] +
              std::abs(runs[a].table.forced[c][it] - runs[b].table.forced[c][it]) * p_amp[c];
          if (diff > pd.worst_mode_difference) {
            pd.worst_mode_difference = diff;
            pd.worst_mode_xi2 = mc.xi2[c];
          }
        }
      }
      rep.pairs.push_back(std::move(pd));
    }
  }
  return rep;
}

std::vector<double> initial_field(const ProblemSpec& ps) { return sample(ps, ps.initial, ps.initial_samples); }

double lattice_mass(const ProblemSpec& ps, const std::vector<double>& values) {
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc * std::pow(2.0 * ps.half_width / ps.modes, ps.dimension);
}

}  // namespace fracdiff::solvers
