// Copyright 2026 The Faraday Filter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "faraday/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "faraday/error.hpp"
#include "faraday/ito_calculus.hpp"
#include "faraday/trajectory.hpp"

namespace faraday {

using nlohmann::json;
namespace fs = std::filesystem;

Command parse_command(std::string_view name) {
  if (name == "simulate") return Command::simulate;
  if (name == "ensemble") return Command::ensemble;
  if (name == "master") return Command::master;
  if (name == "charfunc") return Command::charfunc;
  if (name == "converge") return Command::converge;
  if (name == "check-unitarity") return Command::check_unitarity;
  if (name == "replay") return Command::replay;
  throw DomainError("unknown command '" + std::string(name) + "'");
}

std::string_view command_name(Command c) {
  switch (c) {
    case Command::simulate: return "simulate";
    case Command::ensemble: return "ensemble";
    case Command::master: return "master";
    case Command::charfunc: return "charfunc";
    case Command::converge: return "converge";
    case Command::check_unitarity: return "check-unitarity";
    case Command::replay: return "replay";
  }
  return "?";
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_reference() {
  return R"(CSV outputs (header row, fixed column order, 17 significant digits):
  simulate         trajectory.csv: t,event,dy,count_xi,count_eta,y_plus,y_minus,y,
                   fx,fy,fz,fz2,var_fz,purity,log_likelihood,innovation_0,innovation_1,innovation_qv
                   (event: 0 none, 1 xi, 2 eta; first row is t = 0 with event 0, dy 0)
                   states.csv (record_full_state): t,i,j,re,im
  replay           replay.csv: same columns as trajectory.csv
  ensemble         ensemble.csv: t,mean_fx,mean_fy,mean_fz,mean_fz2,mean_var_fz,mean_purity,
                   mean_innovation_0,se_innovation_0,mean_innovation_1,se_innovation_1,
                   mean_observation,se_observation,mean_log_likelihood,state_trace,state_se
                   (observation: Y^- for polarimetry, integrated photocurrent otherwise)
                   terminal.csv (per_trajectory): index,seed,count_xi,count_eta,y_plus,y_minus,y,
                   fz,var_fz,innovation_qv
                   mean_state.csv (record_full_state): t,i,j,re,im
  master           master.csv: t,trace,fx,fy,fz,fz2,purity,min_eigenvalue
  charfunc         charfunc.csv: k,t,re_analytic,im_analytic,re_empirical,im_empirical,stderr
  converge         converge.csv: alpha,kappa,d_polarimetry,d_homodyne,rate_polarimetry,rate_homodyne
  check-unitarity  unitarity.csv: generator,point,twice_j,alpha,kappa,phi,t,defect
                   unitarity.json: largest defect norm per generator and increment
)";
}

namespace {

class Csv {
 public:
  explicit Csv(std::initializer_list<std::string_view> header) {
    bool first = true;
    for (std::string_view h : header) {
      if (!first) out_ << ',';
      out_ << h;
      first = false;
    }
    out_ << '\n';
  }
  Csv& num(double x) { return field(format_double(x)); }
  Csv& integer(long long x) { return field(std::to_string(x)); }
  Csv& text(std::string_view s) { return field(std::string(s)); }
  void end_row() {
    out_ << '\n';
    fresh_ = true;
  }
  std::string str() const { return out_.str(); }

 private:
  Csv& field(const std::string& s) {
    if (!fresh_) out_ << ',';
    out_ << s;
    fresh_ = false;
    return *this;
  }
  std::ostringstream out_;
  bool fresh_ = true;
};

struct Output {
  fs::path dir;
  json files = json::object();
  std::vector<std::string> paths;

  void write(const std::string& name, const std::string& content) {
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw DomainError("write failed for '" + path.string() + "'");
    files[name] = {{"fnv1a64", hex64(fnv1a64(content))}, {"bytes", content.size()}};
    paths.push_back(path.string());
  }
};

void write_trajectory_csv(Output& out, const std::string& name, const TrajectoryRecord& rec) {
  Csv csv({"t", "event", "dy", "count_xi", "count_eta", "y_plus", "y_minus", "y", "fx", "fy", "fz", "fz2", "var_fz",
           "purity", "log_likelihood", "innovation_0", "innovation_1", "innovation_qv"});
  for (std::size_t k = 0; k < rec.times.size(); ++k) {
    const ObservationIncrement obs = k == 0 ? ObservationIncrement{} : rec.increments[k - 1];
    const Moments& m = rec.moments[k];
    csv.num(rec.times[k]).integer(static_cast<int>(obs.event)).num(obs.dy);
    csv.integer(rec.count_xi[k]).integer(rec.count_eta[k]).num(rec.y_plus[k]).num(rec.y_minus[k]);
    csv.num(rec.photocurrent[k]).num(m.fx).num(m.fy).num(m.fz).num(m.fz2).num(m.var_fz).num(m.purity);
    csv.num(rec.log_likelihood[k]).num(rec.innovation[k][0]).num(rec.innovation[k][1]).num(rec.innovation_qv[k]);
    csv.end_row();
  }
  out.write(name, csv.str());
  if (!rec.states.empty()) {
    Csv st({"t", "i", "j", "re", "im"});
    for (std::size_t k = 0; k < rec.states.size(); ++k) {
      const Matrix& r = rec.states[k];
      for (Eigen::Index i = 0; i < r.rows(); ++i) {
        for (Eigen::Index j = 0; j < r.cols(); ++j) {
          st.num(rec.times[k]).integer(i).integer(j).num(r(i, j).real()).num(r(i, j).imag());
          st.end_row();
        }
      }
    }
    out.write("states.csv", st.str());
  }
}

TrajectoryOptions trajectory_options(const RunConfig& c) {
  TrajectoryOptions o;
  o.record_full_state = c.record_full_state;
  return o;
}

EnsembleOptions ensemble_options(const RunConfig& c) {
  EnsembleOptions o;
  o.sample_every = c.sample_every;
  o.threads = c.threads;
  o.test_function = c.test_function;
  return o;
}

int cmd_simulate(const RunConfig& c, Output& out, json& summary) {
  const TrajectoryRecord rec = simulate(c.params, c.scheme, c.mode, c.initial_state(),
                                        trajectory_seed(c.base_seed, 0), trajectory_options(c));
  write_trajectory_csv(out, "trajectory.csv", rec);
  summary["seed"] = rec.seed;
  summary["count_xi"] = rec.count_xi.back();
  summary["count_eta"] = rec.count_eta.back();
  summary["fz_T"] = rec.moments.back().fz;
  return 0;
}

std::vector<ObservationIncrement> read_record(const std::string& path, double dt) {
  std::ifstream in(path);
  if (!in) throw ConfigError("record", "cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("record", "empty file");
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  const std::vector<std::string> header = split(line);
  int ev_col = -1, dy_col = -1, t_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "event") ev_col = static_cast<int>(i);
    if (header[i] == "dy") dy_col = static_cast<int>(i);
    if (header[i] == "t") t_col = static_cast<int>(i);
  }
  if (ev_col < 0 || dy_col < 0) throw ConfigError("record", "need columns 'event' and 'dy'");
  std::vector<ObservationIncrement> incs;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() < header.size()) throw ConfigError("record", "short row " + std::to_string(row + 2));
    // A leading t = 0 row carries no observation.
    if (row++ == 0 && t_col >= 0 && std::stod(cells[t_col]) == 0.0) continue;
    const int ev = std::stoi(cells[ev_col]);
    if (ev < 0 || ev > 2) throw ConfigError("record", "event must be 0, 1 or 2");
    incs.push_back({static_cast<CountEvent>(ev), std::stod(cells[dy_col]), dt});
  }
  return incs;
}

int cmd_replay(const RunConfig& c, const std::string& record_path, Output& out, json& summary) {
  if (record_path.empty()) throw ConfigError("record", "replay needs an observation file");
  const TrajectoryRecord rec =
      replay(c.params, c.scheme, c.mode, c.initial_state(), read_record(record_path, c.params.dt), trajectory_options(c));
  write_trajectory_csv(out, "replay.csv", rec);
  summary["steps"] = rec.steps();
  summary["fz_T"] = rec.moments.back().fz;
  return 0;
}

int cmd_ensemble(const RunConfig& c, Output& out, json& summary) {
  const EnsembleSummary e =
      run_ensemble(c.params, c.scheme, c.mode, c.initial_state(), c.n_traj, c.base_seed, ensemble_options(c));
  Csv csv({"t", "mean_fx", "mean_fy", "mean_fz", "mean_fz2", "mean_var_fz", "mean_purity", "mean_innovation_0",
           "se_innovation_0", "mean_innovation_1", "se_innovation_1", "mean_observation", "se_observation",
           "mean_log_likelihood", "state_trace", "state_se"});
  for (std::size_t s = 0; s < e.times.size(); ++s) {
    csv.num(e.times[s]);
    for (Series x : {Series::fx, Series::fy, Series::fz, Series::fz2, Series::var_fz, Series::purity}) {
      csv.num(e.mean(x, s));
    }
    for (Series x : {Series::innovation_0, Series::innovation_1, Series::observation}) {
      csv.num(e.mean(x, s)).num(e.standard_error(x, s));
    }
    csv.num(e.mean(Series::log_likelihood, s)).num(e.mean_state[s].trace().real()).num(e.state_standard_error(s));
    csv.end_row();
  }
  out.write("ensemble.csv", csv.str());
  if (c.per_trajectory) {
    Csv t({"index", "seed", "count_xi", "count_eta", "y_plus", "y_minus", "y", "fz", "var_fz", "innovation_qv"});
    for (std::size_t i = 0; i < e.terminal.size(); ++i) {
      const TerminalSample& s = e.terminal[i];
      t.integer(static_cast<long long>(i)).text(std::to_string(trajectory_seed(c.base_seed, i)));
      t.integer(s.count_xi).integer(s.count_eta).num(s.y_plus).num(s.y_minus).num(s.photocurrent);
      t.num(s.fz).num(s.var_fz).num(s.innovation_qv);
      t.end_row();
    }
    out.write("terminal.csv", t.str());
  }
  if (c.record_full_state) {
    Csv st({"t", "i", "j", "re", "im"});
    for (std::size_t s = 0; s < e.times.size(); ++s) {
      const Matrix& r = e.mean_state[s];
      for (Eigen::Index i = 0; i < r.rows(); ++i) {
        for (Eigen::Index j = 0; j < r.cols(); ++j) {
          st.num(e.times[s]).integer(i).integer(j).num(r(i, j).real()).num(r(i, j).imag());
          st.end_row();
        }
      }
    }
    out.write("mean_state.csv", st.str());
  }
  const std::size_t last = e.times.size() - 1;
  summary["n_traj"] = e.n;
  summary["mean_fz_T"] = e.mean(Series::fz, last);
  summary["mean_var_fz_T"] = e.mean(Series::var_fz, last);
  return 0;
}

int cmd_master(const RunConfig& c, Output& out, json& summary) {
  const std::vector<DensityState> states = master_evolve(c.initial_state(), c.params, c.generator);
  const SpinOps ops = make_spin_ops(c.params.space);
  Csv csv({"t", "trace", "fx", "fy", "fz", "fz2", "purity", "min_eigenvalue"});
  for (std::size_t k = 0; k < states.size(); ++k) {
    const DensityState& s = states[k];
    csv.num(c.params.time_at(k)).num(s.trace()).num(s.expect(ops.fx).real()).num(s.expect(ops.fy).real());
    csv.num(s.expect(ops.fz).real()).num(s.expect(ops.fz * ops.fz).real()).num(s.purity()).num(s.min_eigenvalue());
    csv.end_row();
  }
  out.write("master.csv", csv.str());
  summary["generator"] = std::string(generator_kind_name(c.generator));
  summary["fx_T"] = states.back().expect(ops.fx).real();
  return 0;
}

Scheme scheme_for(Process p) {
  switch (p) {
    case Process::plus:
    case Process::minus: return Scheme::polarimetry;
    case Process::homodyne: return Scheme::homodyne;
    case Process::limit: return Scheme::limit;
  }
  return Scheme::polarimetry;
}

int cmd_charfunc(const RunConfig& c, Output& out, json& summary) {
  const std::vector<double> grid = c.k_grid.values();
  const TestFunction shape = c.test_function ? *c.test_function : TestFunction::constant(1.0, c.params.horizon);
  const double t = c.params.horizon;
  const CharFunc analytic = charfunc_analytic(c.process, shape, grid, c.params, c.initial_populations(), t);
  const EnsembleSummary e = run_ensemble(c.params, scheme_for(c.process), c.mode, c.initial_state(), c.n_traj,
                                         c.base_seed, ensemble_options(c));
  const CharFunc empirical = empirical_charfunc(e, c.process, grid);
  Csv csv({"k", "t", "re_analytic", "im_analytic", "re_empirical", "im_empirical", "stderr"});
  std::size_t inside = 0;
  const double band = 4.0 / std::sqrt(static_cast<double>(e.n));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv.num(grid[i]).num(t).num(analytic.value[i].real()).num(analytic.value[i].imag());
    csv.num(empirical.value[i].real()).num(empirical.value[i].imag()).num(empirical.standard_error[i]);
    csv.end_row();
    if (std::abs(analytic.value[i] - empirical.value[i]) <= band) ++inside;
  }
  out.write("charfunc.csv", csv.str());
  summary["process"] = std::string(process_name(c.process));
  summary["fraction_within_4_over_sqrt_n"] = static_cast<double>(inside) / static_cast<double>(grid.size());
  summary["sup_distance"] = sup_distance(analytic, empirical);
  return 0;
}

int cmd_converge(const RunConfig& c, Output& out, json& summary) {
  const ConvergenceStudy study = convergence_study(c.params.measurement_strength, c.alphas, c.k_grid.values(),
                                                   c.params.horizon, c.params.space, c.initial_populations());
  Csv csv({"alpha", "kappa", "d_polarimetry", "d_homodyne", "rate_polarimetry", "rate_homodyne"});
  for (const ConvergenceRow& r : study.rows) {
    csv.num(r.alpha).num(r.kappa).num(r.d_polarimetry).num(r.d_homodyne).num(r.rate_polarimetry).num(r.rate_homodyne);
    csv.end_row();
  }
  out.write("converge.csv", csv.str());
  auto finite_or_null = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  summary["fitted_rate_polarimetry"] = finite_or_null(study.fitted_rate_polarimetry);
  summary["fitted_rate_homodyne"] = finite_or_null(study.fitted_rate_homodyne);
  return 0;
}

int cmd_check_unitarity(const RunConfig& c, Output& out, json& summary) {
  using ito::Generator;
  const Generator unitary[] = {Generator::U0,   Generator::U,           Generator::Uprime,
                               Generator::Weyl, Generator::WeylAdjoint, Generator::Ubar};
  constexpr double kTol = 1e-12;
  Csv csv({"generator", "point", "twice_j", "alpha", "kappa", "phi", "t", "defect"});
  double worst = 0.0;
  double worst_product = 0.0;
  json per_increment = json::object();
  std::mt19937_64 rng(c.base_seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> tj(1, 6);
  for (int point = 0; point <= c.check_points; ++point) {
    ModelParams p = c.params;
    double t = 0.0;
    if (point > 0) {
      p = ModelParams::from_alpha_kappa(SpinSpace::from_twice_j(tj(rng)), 10.0 * u01(rng),
                                        (2.0 * u01(rng) - 1.0) * M_PI, 1.0, 1e-3);
      p.phi = 2.0 * M_PI * u01(rng);
      t = u01(rng);
    }
    for (Generator g : unitary) {
      const ito::QNoiseExpr defect = ito::unitarity_defect(ito::qsde_coefficients(g, p, t));
      const double d = defect.max_norm();
      worst = std::max(worst, d);
      json& row = per_increment[std::string(ito::generator_name(g))];
      if (row.is_null()) row = json::object();
      for (int inc = 0; inc < ito::kIncrementCount; ++inc) {
        const auto which = static_cast<ito::Increment>(inc);
        const std::string label = ito::increment_label(which);
        const double prev = row.contains(label) ? row[label].get<double>() : 0.0;
        row[label] = std::max(prev, defect.norm(which));
      }
      csv.text(ito::generator_name(g)).integer(point).integer(p.space.twice_j()).num(p.alpha).num(p.kappa).num(p.phi);
      csv.num(t).num(d);
      csv.end_row();
    }
    const ito::QNoiseExpr composed = ito::qsde_product(ito::qsde_coefficients(Generator::WeylAdjoint, p, t),
                                                       ito::qsde_coefficients(Generator::U, p, t));
    worst_product = std::max(worst_product, (composed - ito::qsde_coefficients(Generator::Uprime, p, t)).max_norm());
  }
  out.write("unitarity.csv", csv.str());
  out.write("unitarity.json", per_increment.dump(2) + "\n");
  summary["defect_by_increment"] = per_increment;
  summary["max_defect"] = worst;
  summary["max_product_mismatch"] = worst_product;
  summary["tolerance"] = kTol;
  return worst < kTol && worst_product < kTol ? 0 : 1;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunResult run(const RunRequest& request) {
  const RunConfig& c = request.config;
  Output out;
  out.dir = c.out_dir;
  std::error_code ec;
  fs::create_directories(out.dir, ec);
  if (ec) throw ConfigError("out_dir", "cannot create '" + c.out_dir + "': " + ec.message());

  const auto started = std::chrono::steady_clock::now();
  const std::string started_at = utc_now();
  json summary = json::object();
  int code = 0;
  switch (request.command) {
    case Command::simulate: code = cmd_simulate(c, out, summary); break;
    case Command::ensemble: code = cmd_ensemble(c, out, summary); break;
    case Command::master: code = cmd_master(c, out, summary); break;
    case Command::charfunc: code = cmd_charfunc(c, out, summary); break;
    case Command::converge: code = cmd_converge(c, out, summary); break;
    case Command::check_unitarity: code = cmd_check_unitarity(c, out, summary); break;
    case Command::replay: code = cmd_replay(c, request.record_path, out, summary); break;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  RunResult result;
  result.exit_code = code;
  result.manifest = {{"tool_version", std::string(kToolVersion)},
                     {"command", std::string(command_name(request.command))},
                     {"rng", std::string(kRngIdentifier)},
                     {"config", c.to_json()},
                     {"started_at", started_at},
                     {"wall_clock_seconds", seconds},
                     {"files", out.files},
                     {"summary", summary},
                     {"exit_code", code}};
  if (request.command == Command::replay) result.manifest["record"] = request.record_path;
  const fs::path manifest_path = out.dir / "manifest.json";
  std::ofstream mf(manifest_path);
  if (!mf) throw DomainError("cannot write '" + manifest_path.string() + "'");
  mf << result.manifest.dump(2) << '\n';
  out.paths.push_back(manifest_path.string());
  result.files = out.paths;
  result.summary = summary.dump();
  return result;
}

}  // namespace faraday
