#include "fracdiff/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fracdiff/errors.hpp"
#include "fracdiff/greens.hpp"
#include "fracdiff/laplace.hpp"
#include "fracdiff/solvers.hpp"
#include "fracdiff/specfun.hpp"
#include "fracdiff/verify.hpp"
#include "fracdiff/volterra.hpp"

namespace fracdiff::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Param {
  std::string name;
  json fallback;  // also fixes the parameter's type
  std::string help;
};

struct Command {
  std::string name;
  std::string help;
  std::vector<Param> params;
};

const std::vector<Command>& commands() {
  static const std::vector<Command> table{
      {"mlf",
       "Two-parameter Mittag-Leffler function E_{a,b}(z)",
       {{"alpha", 0.5, "alpha > 0"}, {"beta", 1.0, "beta"}, {"z", 0.0, "real argument"},
        {"precision", 1e-12, "relative precision goal"}}},
      {"prabhakar",
       "Three-parameter Mittag-Leffler function E^g_{a,b}(z)",
       {{"alpha", 0.5, "alpha > 0"}, {"beta", 1.0, "beta"}, {"gamma", 1.0, "gamma"}, {"z", 0.0, "real argument"},
        {"precision", 1e-12, "relative precision goal"}}},
      {"invert",
       "Talbot inversion of the Fourier-Laplace symbols",
       {{"alpha", 0.5, "fractional order in (0, 1)"}, {"xi2", 1.0, "squared wave number"}, {"t", 1.0, "time"},
        {"term", "homogeneous", "homogeneous or forcing"}, {"nodes", 32, "contour nodes"}}},
      {"resolvent",
       "Resolvent of the memory kernel on a uniform grid",
       {{"alpha", 0.5, "fractional order in (0, 1)"}, {"T", 1.0, "horizon"}, {"steps", 2048, "time steps"}}},
      {"green",
       "Physical-space Green function G(r, t)",
       {{"alpha", 0.5, "fractional order in (0, 1)"}, {"dim", 1, "dimension 1, 2 or 3"}, {"t", 1.0, "time"},
        {"rmax", 5.0, "largest radius"}, {"points", 101, "number of radii"}}},
      {"solve",
       "Solve on a periodic box with the explicit, L1 or memory solver",
       {{"solver", "explicit", "explicit, l1, memory or all"},
        {"alpha", 0.5, "fractional order in (0, 1)"},
        {"dim", 1, "dimension 1, 2 or 3"},
        {"L", 10.0, "box half-width"},
        {"modes", 256, "modes per axis (power of two)"},
        {"T", 1.0, "horizon"},
        {"steps", 1024, "time steps"},
        {"g", "gaussian", "initial datum: gaussian, ring or file"},
        {"g-file", "", "lattice samples of g (one value per row, last CSV column)"},
        {"f", "none", "forcing: none, gaussian-pulse or file"},
        {"f-file", "", "lattice samples of the forcing profile"},
        {"times", "", "comma-separated output times (default T)"},
        {"out", "solution", "output file prefix"}}},
      {"verify",
       "Run named invariant suites",
       {{"suite", "all", "suite name or all"}, {"sweep", "small", "small or full"}}},
  };
  return table;
}

// Parameter values after defaults, config file and flags, in that order.
class Resolved {
 public:
  explicit Resolved(json values) : values_(std::move(values)) {}
  double num(const std::string& k) const { return values_.at(k).get<double>(); }
  int integer(const std::string& k) const { return values_.at(k).get<int>(); }
  std::string str(const std::string& k) const { return values_.at(k).get<std::string>(); }
  const json& all() const { return values_; }

 private:
  json values_;
};

json coerce(const Param& p, const json& v, const std::string& origin) {
  const auto bad = [&] { return DomainError(origin + ": '" + p.name + "' has the wrong type"); };
  if (p.fallback.is_string()) {
    if (!v.is_string()) throw bad();
    return v;
  }
  if (p.fallback.is_number_integer()) {
    if (v.is_number_integer()) return v;
    if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) return static_cast<long>(v.get<double>());
    throw bad();
  }
  if (!v.is_number()) throw bad();
  return v.get<double>();
}

json parse_flag(const Param& p, const std::string& text) {
  if (p.fallback.is_string()) return text;
  std::size_t used = 0;
  try {
    if (p.fallback.is_number_integer()) {
      const long v = std::stol(text, &used);
      if (used == text.size()) return v;
    } else {
      const double v = std::stod(text, &used);
      if (used == text.size()) return v;
    }
  } catch (const std::exception&) {
  }
  throw DomainError("--" + p.name + ": cannot parse '" + text + "'");
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
  f << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) f << (c ? "," : "") << csv_number(columns[c][r]);
    f << '\n';
  }
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

std::vector<double> read_samples(const std::string& path, std::size_t expected) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot read samples from '" + path + "'");
  std::vector<double> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    const std::string last = line.substr(line.rfind(',') == std::string::npos ? 0 : line.rfind(',') + 1);
    try {
      std::size_t used = 0;
      const double v = std::stod(last, &used);
      out.push_back(v);
    } catch (const std::exception&) {
      if (out.empty()) continue;  // header row
      throw DomainError("'" + path + "': unparseable value '" + last + "'");
    }
  }
  if (out.size() != expected) {
    throw DomainError("'" + path + "': expected " + std::to_string(expected) + " samples, found " +
                      std::to_string(out.size()));
  }
  return out;
}

std::vector<double> parse_times(const std::string& text, double horizon) {
  if (text.empty()) return {horizon};
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0) throw DomainError("--times: cannot parse '" + item + "'");
    out.push_back(v);
  }
  return out;
}

json evaluation_json(const specfun::Evaluation& e) {
  return {{"value", e.value}, {"error_estimate", e.error_estimate}, {"strategy", specfun::to_string(e.strategy)}};
}

json cmd_mlf(const Resolved& r, const fs::path&, std::ostream&) {
  const specfun::MLParams p(r.num("alpha"), r.num("beta"), 1.0);
  specfun::EvalPoint pt{r.num("z"), r.num("precision")};
  pt.validate();
  return evaluation_json(specfun::prabhakar_eval(p, pt));
}

json cmd_prabhakar(const Resolved& r, const fs::path&, std::ostream&) {
  const specfun::MLParams p(r.num("alpha"), r.num("beta"), r.num("gamma"));
  specfun::EvalPoint pt{r.num("z"), r.num("precision")};
  pt.validate();
  return evaluation_json(specfun::prabhakar_eval(p, pt));
}

json cmd_invert(const Resolved& r, const fs::path&, std::ostream&) {
  const std::string term = r.str("term");
  laplace::LaplaceImage img;
  if (term == "homogeneous") {
    img = laplace::symbol_homogeneous(r.num("xi2"), r.num("alpha"));
  } else if (term == "forcing") {
    img = laplace::symbol_forcing(r.num("xi2"), r.num("alpha"));
  } else {
    throw DomainError("--term must be homogeneous or forcing");
  }
  laplace::TalbotParams tp;
  tp.node_count = r.integer("nodes");
  const auto res = laplace::talbot_invert(img, r.num("t"), tp);
  return {{"value", res.value},
          {"error_estimate", res.error_estimate},
          {"nodes", tp.node_count},
          {"companion_nodes", laplace::companion_nodes(tp.node_count)}};
}

json cmd_resolvent(const Resolved& r, const fs::path& dir, std::ostream&) {
  const double a = r.num("alpha");
  const fracops::TimeGrid grid(r.num("T"), r.integer("steps"));
  const auto k = volterra::memory_kernel(a, grid);
  const auto res = volterra::resolvent_solve(k);
  std::vector<double> t, kv, rv, ref;
  double worst = 0.0;
  for (int m = 1; m <= grid.steps(); ++m) {
    t.push_back(grid.t(m));
    kv.push_back(k.values[m]);
    rv.push_back(res.values[m]);
    ref.push_back(std::pow(grid.t(m), -a) * specfun::rgamma(1.0 - a));
    if (m >= 10) worst = std::max(worst, std::abs(rv.back() - ref.back()) / ref.back());
  }
  const fs::path csv = dir / "resolvent.csv";
  write_csv(csv, {"t [time]", "k [1/time]", "r [1/time]", "r_power_law [1/time]"}, {t, kv, rv, ref});
  return {{"max_relative_error", worst},
          {"relative_error_from_step", 10},
          {"cumulative_mismatch", k.cumulative_mismatch()},
          {"csv", csv.string()}};
}

json cmd_green(const Resolved& r, const fs::path& dir, std::ostream& err) {
  greens::GreenSeriesParams p;
  p.alpha = r.num("alpha");
  const int n = r.integer("dim");
  const double t = r.num("t");
  const double rmax = r.num("rmax");
  const int points = r.integer("points");
  if (!(rmax > 0.0)) throw DomainError("--rmax must be > 0");
  if (points < 2) throw DomainError("--points must be >= 2");
  std::vector<double> radii;
  // G is singular at the origin for n > 1, so the grid starts one step out.
  for (int i = 0; i < points; ++i) radii.push_back(n == 1 ? rmax * i / (points - 1) : rmax * (i + 1) / points);
  const auto g = greens::green_physical(radii, t, n, p);
  err << "green: profile done, computing mass\n";
  const double reach = 30.0 * std::max(1.0, std::sqrt(t));
  const double mass = greens::green_mass(t, n, p, reach);
  const fs::path csv = dir / "green.csv";
  write_csv(csv, {"r [length]", "G [1/length^" + std::to_string(n) + "]"}, {radii, g.profile.values});
  json sidecar = {{"mass_symbol", greens::green_symbol(0.0, t, p)},
                  {"mass_quadrature", mass},
                  {"mass_error", std::abs(mass - 1.0)},
                  {"mass_reach", reach},
                  {"series_fraction", g.series_fraction},
                  {"talbot_fraction", 1.0 - g.series_fraction},
                  {"cutoff", g.cutoff},
                  {"tail_bound", g.tail_bound},
                  {"truncation_warning", g.truncation_warning}};
  const fs::path side = dir / "green.json";
  write_json(side, sidecar);
  sidecar["csv"] = csv.string();
  sidecar["sidecar"] = side.string();
  if (g.truncation_warning) err << "green: warning: spectral truncation tail " << g.tail_bound << '\n';
  return sidecar;
}

double radius(const solvers::Point& x) { return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); }

json field_json(const solvers::SolutionField& f, double initial_mass) {
  return {{"solver", solvers::to_string(f.solver)},
          {"times", f.times},
          {"mass", f.mass},
          {"mass_drift", f.mass_drift(initial_mass)},
          {"imaginary_residue", f.imaginary_residue},
          {"boundary_amplitude", f.boundary_amplitude},
          {"minimum", f.minimum}};
}

std::vector<fs::path> write_snapshots(const solvers::ProblemSpec& ps, const solvers::SolutionField& f,
                                      const fs::path& dir, const std::string& prefix) {
  std::vector<fs::path> files;
  const std::size_t size = ps.lattice_size();
  std::vector<std::vector<double>> coords(ps.dimension, std::vector<double>(size));
  for (std::size_t i = 0; i < size; ++i) {
    std::size_t rest = i;
    for (int d = ps.dimension - 1; d >= 0; --d) {
      coords[d][i] = ps.coordinate(static_cast<int>(rest % ps.modes));
      rest /= ps.modes;
    }
  }
  const char* axis[] = {"x [length]", "y [length]", "z [length]"};
  std::vector<std::string> header(axis, axis + ps.dimension);
  header.push_back("u [1]");
  const std::string tag = prefix + "_" + solvers::to_string(f.solver);
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    auto cols = coords;
    cols.push_back(f.values[k]);
    files.push_back(dir / (tag + "_t" + std::to_string(k) + ".csv"));
    write_csv(files.back(), header, cols);
  }
  if (ps.dimension == 1) {
    files.push_back(dir / (tag + ".xy"));
    std::ofstream xy(files.back());
    if (!xy) throw std::runtime_error("cannot write " + files.back().string());
    for (std::size_t k = 0; k < f.values.size(); ++k) {
      if (k) xy << "\n\n";
      xy << "# x u at t=" << csv_number(f.times[k]) << '\n';
      for (int j = 0; j < ps.modes; ++j) xy << csv_number(coords[0][j]) << ' ' << csv_number(f.values[k][j]) << '\n';
    }
  }
  return files;
}

json cmd_solve(const Resolved& r, const fs::path& dir, std::ostream& err) {
  solvers::ProblemSpec ps;
  ps.alpha = r.num("alpha");
  ps.dimension = r.integer("dim");
  ps.half_width = r.num("L");
  ps.modes = r.integer("modes");
  ps.horizon = r.num("T");
  ps.steps = r.integer("steps");
  if (ps.dimension < 1 || ps.dimension > 3) throw DomainError("--dim must be 1, 2 or 3");
  if (ps.modes < 16 || (ps.modes & (ps.modes - 1)) != 0) throw DomainError("--modes must be a power of two >= 16");
  const std::string g = r.str("g"), f = r.str("f");
  if (g == "gaussian") {
    ps.initial = [](const solvers::Point& x) { return std::exp(-radius(x) * radius(x)); };
  } else if (g == "ring") {
    ps.initial = [](const solvers::Point& x) { return std::exp(-4.0 * (radius(x) - 1.5) * (radius(x) - 1.5)); };
  } else if (g == "file") {
    ps.initial_samples = read_samples(r.str("g-file"), ps.lattice_size());
  } else {
    throw DomainError("--g must be gaussian, ring or file");
  }
  if (f == "gaussian-pulse") {
    ps.forcing_space = [](const solvers::Point& x) { return std::exp(-2.0 * radius(x) * radius(x)); };
    ps.forcing_time = [](double t) { return std::exp(-t); };
  } else if (f == "file") {
    ps.forcing_samples = read_samples(r.str("f-file"), ps.lattice_size());
  } else if (f != "none") {
    throw DomainError("--f must be none, gaussian-pulse or file");
  }
  const auto times = parse_times(r.str("times"), ps.horizon);
  const std::string which = r.str("solver");
  const std::string prefix = r.str("out");
  ps.validate();
  const double m0 = solvers::lattice_mass(ps, solvers::initial_field(ps));

  json report = {{"initial_mass", m0}};
  std::vector<solvers::SolutionField> fields;
  if (which == "all") {
    const auto rep = solvers::compare_solvers(ps, times);
    fields = rep.fields;
    json pairs = json::array();
    for (const auto& p : rep.pairs) {
      pairs.push_back({{"a", solvers::to_string(p.a)},
                       {"b", solvers::to_string(p.b)},
                       {"max_norm", p.max_norm},
                       {"l2_norm", p.l2_norm},
                       {"worst_mode_xi2", p.worst_mode_xi2},
                       {"worst_mode_difference", p.worst_mode_difference}});
    }
    report["pairs"] = pairs;
    report["max_pairwise_difference"] = rep.max_difference();
  } else {
    fields.push_back(solvers::solve(solvers::solver_from_string(which), ps, times));
  }
  json field_list = json::array();
  std::vector<std::string> files;
  for (const auto& fld : fields) {
    err << "solve: " << solvers::to_string(fld.solver) << " done\n";
    field_list.push_back(field_json(fld, m0));
    if (fld.boundary_amplitude > 1e-6) {
      err << "solve: warning: " << solvers::to_string(fld.solver) << " boundary amplitude "
          << fld.boundary_amplitude << " exceeds 1e-6; enlarge L\n";
    }
    for (const auto& p : write_snapshots(ps, fld, dir, prefix)) files.push_back(p.string());
  }
  report["fields"] = field_list;
  report["files"] = files;
  const fs::path report_path = dir / (prefix + "_report.json");
  report["report"] = report_path.string();
  return report;
}

json cmd_verify(const Resolved& r, const fs::path&, std::ostream& err, unsigned seed, bool& failed) {
  const std::string suite = r.str("suite"), sweep = r.str("sweep");
  if (sweep != "small" && sweep != "full") throw DomainError("--sweep must be small or full");
  std::vector<std::string> names;
  if (suite == "all") {
    names = verify::suite_names();
  } else {
    const auto& known = verify::suite_names();
    if (std::find(known.begin(), known.end(), suite) == known.end()) {
      throw DomainError("unknown suite '" + suite + "'");
    }
    names = {suite};
  }
  json results = json::array();
  for (const auto& name : names) {
    const auto res = verify::run_suite(name, sweep == "full", seed);
    err << "verify: " << name << (res.passed ? " pass" : " FAIL") << '\n';
    failed = failed || !res.passed;
    results.push_back({{"suite", res.name},
                       {"passed", res.passed},
                       {"metric_name", res.metric_name},
                       {"metric", res.metric},
                       {"threshold", res.threshold},
                       {"detail", res.detail}});
  }
  return {{"results", results}, {"passed", !failed}};
}

json error_json(const std::string& command, const std::string& kind, const std::string& message) {
  return {{"command", command}, {"status", "error"}, {"error", kind}, {"message", message}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Anomalous diffusion toolkit: special functions, kernels, Green functions and solvers", "fracdiff"};
  app.require_subcommand(1, 1);
  std::string config_path, out_dir = ".";
  unsigned seed = 2024;
  app.add_option("--config", config_path, "JSON config; flags override it");
  auto* out_dir_opt = app.add_option("--out-dir", out_dir, "directory for CSV and JSON artifacts");
  auto* seed_opt = app.add_option("--seed", seed, "seed for randomly sampled verification cases");

  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, std::map<std::string, CLI::Option*>> opts;
  for (const auto& c : commands()) {
    auto* sub = app.add_subcommand(c.name, c.help);
    for (const auto& p : c.params) {
      std::string& slot = raw[c.name][p.name];
      const char* type = p.fallback.is_string() ? "TEXT" : p.fallback.is_number_integer() ? "INT" : "FLOAT";
      opts[c.name][p.name] =
          sub->add_option("--" + p.name, slot, p.help + " (default " + p.fallback.dump() + ")")->type_name(type);
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ExitCode::ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ExitCode::ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    out << error_json("", "validation", e.what()).dump() << '\n';
    return ExitCode::validation;
  }

  const Command* cmd = nullptr;
  for (const auto& c : commands()) {
    if (app.got_subcommand(c.name)) cmd = &c;
  }
  try {
    json values = json::object();
    for (const auto& p : cmd->params) values[p.name] = p.fallback;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw DomainError("cannot read config '" + config_path + "'");
      json cfg;
      try {
        cfg = json::parse(f);
      } catch (const json::exception& e) {
        throw DomainError("config '" + config_path + "' is not valid JSON: " + e.what());
      }
      if (!cfg.is_object()) throw DomainError("config must be a JSON object");
      if (cfg.contains("out_dir") && out_dir_opt->count() == 0) {
        if (!cfg["out_dir"].is_string()) throw DomainError("config: 'out_dir' must be a string");
        out_dir = cfg["out_dir"].get<std::string>();
      }
      if (cfg.contains("seed") && seed_opt->count() == 0) {
        if (!cfg["seed"].is_number_unsigned()) throw DomainError("config: 'seed' must be a nonnegative integer");
        seed = cfg["seed"].get<unsigned>();
      }
      for (const auto& p : cmd->params) {
        if (cfg.contains(p.name)) values[p.name] = coerce(p, cfg[p.name], "config");
      }
      if (cfg.contains(cmd->name)) {
        const json& section = cfg[cmd->name];
        if (!section.is_object()) throw DomainError("config section '" + cmd->name + "' must be an object");
        for (const auto& [key, v] : section.items()) {
          const auto it = std::find_if(cmd->params.begin(), cmd->params.end(),
                                       [&](const Param& p) { return p.name == key; });
          if (it == cmd->params.end()) throw DomainError("config: unknown key '" + key + "' for " + cmd->name);
          values[key] = coerce(*it, v, "config");
        }
      }
    }
    for (const auto& p : cmd->params) {
      if (opts[cmd->name][p.name]->count() > 0) values[p.name] = parse_flag(p, raw[cmd->name][p.name]);
    }
    const Resolved resolved(values);
    const fs::path dir(out_dir);
    fs::create_directories(dir);

    json summary;
    bool failed = false;
    const std::string& name = cmd->name;
    if (name == "mlf") summary = cmd_mlf(resolved, dir, err);
    if (name == "prabhakar") summary = cmd_prabhakar(resolved, dir, err);
    if (name == "invert") summary = cmd_invert(resolved, dir, err);
    if (name == "resolvent") summary = cmd_resolvent(resolved, dir, err);
    if (name == "green") summary = cmd_green(resolved, dir, err);
    if (name == "solve") summary = cmd_solve(resolved, dir, err);
    if (name == "verify") summary = cmd_verify(resolved, dir, err, seed, failed);

    json head = {{"command", name}, {"status", failed ? "failed" : "ok"}};
    const json config = {{"command", name}, {"out_dir", out_dir}, {"seed", seed}, {"params", resolved.all()}};
    head.update(summary);
    head["config"] = config;
    if (name == "solve") write_json(summary["report"].get<std::string>(), head);
    out << head.dump() << '\n';
    return failed ? ExitCode::convergence : ExitCode::ok;
  } catch (const DomainError& e) {
    err << cmd->name << ": " << e.what() << '\n';
    out << error_json(cmd->name, "validation", e.what()).dump() << '\n';
    return ExitCode::validation;
  } catch (const EvaluationError& e) {
    err << cmd->name << ": " << e.what() << '\n';
    json j = error_json(cmd->name, "convergence", e.what());
    j["error_estimate"] = e.error_estimate();
    out << j.dump() << '\n';
    return ExitCode::convergence;
  } catch (const std::exception& e) {
    err << cmd->name << ": " << e.what() << '\n';
    out << error_json(cmd->name, "unexpected", e.what()).dump() << '\n';
    return ExitCode::unexpected;
  }
}

}  // namespace fracdiff::cli
