#include "ucollab/experiments.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <cmath>
#include <fstream>
#include <numeric>

#include "ucollab/design.hpp"
#include "ucollab/detect.hpp"
#include "ucollab/errors.hpp"
#include "ucollab/metrics.hpp"
#include "ucollab/rng.hpp"
#include "ucollab/sparse.hpp"

namespace ucollab {

namespace {

using nlohmann::json;
using csv::format_number;

std::vector<Index> range(Index first, Index last) {
  std::vector<Index> v;
  for (Index k = first; k <= last; ++k) v.push_back(k);
  return v;
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::uint64_t count) {
  std::vector<std::uint64_t> v(count);
  std::iota(v.begin(), v.end(), first);
  return v;
}

Experiment parse_experiment(std::string_view text) {
  for (auto e : {Experiment::Fig2, Experiment::Fig3, Experiment::Fig4, Experiment::SingleDesign,
                 Experiment::Detect})
    if (to_string(e) == text) return e;
  fail(ErrorKind::Config, "unknown experiment '" + std::string(text) + "'");
}

Method parse_method(std::string_view text) {
  for (auto m : {Method::PCA, Method::DiagonalShortcut, Method::Random, Method::SparseL0,
                 Method::SparseL1})
    if (to_string(m) == text) return m;
  fail(ErrorKind::Config, "unknown method '" + std::string(text) + "'");
}

bool is_sparse(Method m) { return m == Method::SparseL0 || m == Method::SparseL1; }

double mean(const std::vector<double>& v) {
  return v.empty() ? std::nan("") : std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

json base_metadata(const RunConfig& config, const RunResult& result) {
  json meta;
  meta["tool"] = "ucollab";
  meta["version"] = UCOLLAB_VERSION;
  meta["experiment"] = std::string(to_string(config.experiment));
  json cfg = to_json(config);
  cfg.erase("output_dir");
  meta["config"] = cfg;
  json outputs = json::array();
  for (const auto& t : result.tables) outputs.push_back(t.name + ".csv");
  for (const auto& f : result.files) outputs.push_back(f.filename);
  meta["outputs"] = outputs;
  return meta;
}

struct SparsePoint {
  double cdc = 0.0;
  double cu = 0.0;
  double deactivation = 0.0;
  double gamma = 0.0;
};

SparsePoint sparse_at_target(const SignalClass& cls, Index m, Penalty penalty, double target,
                             const RunConfig& config) {
  const Matrix a = padded_factor(cls, m);
  const DesignSpec spec = DesignSpec::uniform(cls.dimension(), m, 0.0, penalty);
  Calibration cal;
  try {
    cal = calibrate_gamma(a, spec, target, penalty, config.tol, config.max_iter);
  } catch (const Error& e) {
    // With M > I at least M - I rows are dead even at gamma = 0; the densest
    // achievable design then stands in for the target.
    if (e.kind() != ErrorKind::Unachievable) throw;
    cal.solution = solve_sparse(a, spec, config.tol, config.max_iter);
    cal.achieved_deactivation = deactivation_ratio(cal.solution);
    if (cal.achieved_deactivation < target) throw;
  }
  SparsePoint p;
  p.cdc = cumulative_dc(cal.solution.w, cls).cdc;
  p.cu = p.cdc / cls.total_energy();
  p.deactivation = cal.achieved_deactivation;
  p.gamma = cal.gamma;
  return p;
}

double optimal_cdc(const SignalClass& cls, Index m) {
  return cumulative_dc(design_cost_free(build_omega(cls), m), cls).cdc;
}

SignalClass design_class(const RunConfig& config) {
  if (!config.signals_csv.empty()) return read_signal_class(config.signals_csv);
  return generate_signal_class(config.I, config.N, config.seeds.front());
}

struct Designed {
  CollaborationMatrix w;
  json details = json::object();
};

Designed make_design(const RunConfig& config, const SignalClass& cls) {
  const Index n = cls.dimension();
  const Index m = config.M;
  require(m >= 1 && m <= n, "design needs 1 <= M <= N");
  Designed d;
  switch (config.method) {
    case Method::PCA:
      d.w = design_cost_free(build_omega(cls), m);
      break;
    case Method::DiagonalShortcut:
      d.w = design_diagonal_shortcut(build_omega(cls), m);
      break;
    case Method::Random:
      d.w = design_random(DesignSpec::uniform(n, m, 0.0, Penalty::None),
                          derive_seed(config.seeds.front(), 1));
      break;
    case Method::SparseL0:
    case Method::SparseL1: {
      const Penalty penalty = config.method == Method::SparseL0 ? Penalty::L0 : Penalty::L1;
      const Matrix& a = cls.signals();
      SparseSolution sol;
      if (config.gamma) {
        const DesignSpec spec = DesignSpec::uniform(n, m, *config.gamma, penalty);
        sol = solve_sparse(a, spec, config.tol, config.max_iter);
        d.details["gamma"] = *config.gamma;
        d.details["gamma_source"] = "given";
      } else {
        const double target = config.target_deactivation.value_or(0.4);
        const DesignSpec spec = DesignSpec::uniform(n, m, 0.0, penalty);
        Calibration cal = calibrate_gamma(a, spec, target, penalty, config.tol, config.max_iter);
        sol = std::move(cal.solution);
        d.details["gamma"] = cal.gamma;
        d.details["gamma_source"] = "calibrated";
        d.details["target_deactivation"] = target;
        d.details["calibration_solves"] = cal.solves;
      }
      d.details["iterations"] = sol.state.iterations;
      d.details["converged"] = sol.state.converged;
      d.details["degenerate"] = sol.state.degenerate;
      d.details["objective"] = sol.objective;
      d.details["deactivation"] = deactivation_ratio(sol);
      d.details["dead_rows"] = sol.dead_rows;
      d.w = std::move(sol.w);
      break;
    }
  }
  return d;
}

csv::Table detection_table(const std::vector<DetectionResult>& results) {
  csv::Table t;
  t.columns = {"signal_index", "deflection",      "pfa",    "pd_closed_form", "pd_monte_carlo",
               "pd_half_width", "pfa_monte_carlo", "trials", "consistent"};
  for (const auto& r : results)
    t.add_row({std::to_string(r.signal_index), format_number(r.deflection), format_number(r.pfa),
               format_number(r.pd_closed_form), format_number(r.pd_monte_carlo),
               format_number(r.pd_half_width), format_number(r.pfa_monte_carlo),
               std::to_string(r.trials), r.consistent() ? "1" : "0"});
  return t;
}

std::vector<DetectionResult> detect_all(const RunConfig& config, const CollaborationMatrix& w,
                                        const SignalClass& cls, double pfa, unsigned threads) {
  std::vector<Index> indices;
  if (config.signal_index)
    indices.push_back(*config.signal_index);
  else
    indices = range(0, cls.count() - 1);
  std::vector<DetectionResult> out(indices.size());
  parallel_for(static_cast<Index>(indices.size()), threads, [&](Index k) {
    const Index i = indices[k];
    out[k] = simulate_detection(w, cls, i, config.sigma, pfa, config.trials,
                                derive_seed(config.seeds.front(), 100 + static_cast<std::uint64_t>(i)));
  });
  return out;
}

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::Fig2: return "fig2";
    case Experiment::Fig3: return "fig3";
    case Experiment::Fig4: return "fig4";
    case Experiment::SingleDesign: return "design";
    case Experiment::Detect: return "detect";
  }
  return "design";
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::PCA: return "pca";
    case Method::DiagonalShortcut: return "diagonal";
    case Method::Random: return "random";
    case Method::SparseL0: return "l0";
    case Method::SparseL1: return "l1";
  }
  return "pca";
}

RunConfig RunConfig::defaults(Experiment e) {
  RunConfig c;
  c.experiment = e;
  c.seeds = seed_range(1, 50);
  switch (e) {
    case Experiment::Fig2:
      c.m_values = range(2, 30);
      c.target_deactivation = 0.4;
      break;
    case Experiment::Fig3:
      c.i_values = range(2, 30);
      c.target_deactivation = 0.4;
      break;
    case Experiment::Fig4:
      c.target_deactivation = 0.4;
      c.cdc_level = 0.9;
      break;
    case Experiment::SingleDesign:
      c.seeds = {1};
      break;
    case Experiment::Detect:
      c.seeds = {1};
      c.pfa = 0.05;
      break;
  }
  return c;
}

void RunConfig::validate() const {
  auto check = [](bool ok, const std::string& msg) {
    if (!ok) fail(ErrorKind::Config, msg);
  };
  check(N >= 1, "N must be >= 1");
  check(M >= 1 && M <= N, "M must satisfy 1 <= M <= N");
  check(I >= 1, "I must be >= 1");
  check(!seeds.empty(), "seeds must not be empty");
  check(trials >= 100, "trials must be >= 100");
  check(sigma > 0.0, "sigma must be > 0");
  check(!pfa || (*pfa > 0.0 && *pfa < 1.0), "pfa must lie in (0, 1)");
  check(!gamma || *gamma >= 0.0, "gamma must be >= 0");
  check(!target_deactivation || (*target_deactivation >= 0.0 && *target_deactivation <= 1.0),
        "target_deactivation must lie in [0, 1]");
  check(!cdc_level || (*cdc_level > 0.0 && *cdc_level <= 1.0), "cdc_level must lie in (0, 1]");
  check(grid_points >= 2, "grid_points must be >= 2");
  check(random_draws >= 1, "random_draws must be >= 1");
  check(tol > 0.0, "tol must be > 0");
  check(max_iter >= 1, "max_iter must be >= 1");
  for (Index m : m_values) check(m >= 1 && m <= N, "m_values must lie in [1, N]");
  for (Index i : i_values) check(i >= 1 && i <= N, "i_values must lie in [1, N]");
  switch (experiment) {
    case Experiment::Fig2:
      check(!m_values.empty(), "fig2 needs m_values");
      check(I <= N, "fig2 needs I <= N");
      check(target_deactivation.has_value(), "fig2 needs target_deactivation");
      break;
    case Experiment::Fig3:
      check(!i_values.empty(), "fig3 needs i_values");
      check(target_deactivation.has_value(), "fig3 needs target_deactivation");
      break;
    case Experiment::Fig4:
      check(M <= I && I <= N, "fig4 needs M <= I <= N");
      check(target_deactivation.has_value(), "fig4 needs target_deactivation");
      check(cdc_level.has_value(), "fig4 needs cdc_level");
      break;
    case Experiment::SingleDesign:
    case Experiment::Detect:
      if (signals_csv.empty() && is_sparse(method))
        check(M <= I && I <= N, "sparse designs need M <= I <= N");
      break;
  }
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) fail(ErrorKind::Config, "config must be a JSON object");
  Experiment e = Experiment::SingleDesign;
  if (j.contains("experiment")) {
    if (!j["experiment"].is_string()) fail(ErrorKind::Config, "experiment must be a string");
    e = parse_experiment(j["experiment"].get<std::string>());
  }
  RunConfig c = RunConfig::defaults(e);
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "experiment") continue;
      else if (key == "N") c.N = value.get<Index>();
      else if (key == "M") c.M = value.get<Index>();
      else if (key == "I") c.I = value.get<Index>();
      else if (key == "method") c.method = parse_method(value.get<std::string>());
      else if (key == "penalty") c.penalty = parse_penalty(value.get<std::string>());
      else if (key == "gamma") c.gamma = value.is_null() ? std::nullopt : std::optional(value.get<double>());
      else if (key == "target_deactivation")
        c.target_deactivation = value.is_null() ? std::nullopt : std::optional(value.get<double>());
      else if (key == "seeds") c.seeds = value.get<std::vector<std::uint64_t>>();
      else if (key == "trials") c.trials = value.get<Index>();
      else if (key == "output_dir") c.output_dir = value.get<std::string>();
      else if (key == "sigma") c.sigma = value.get<double>();
      else if (key == "pfa") c.pfa = value.is_null() ? std::nullopt : std::optional(value.get<double>());
      else if (key == "m_values") c.m_values = value.get<std::vector<Index>>();
      else if (key == "i_values") c.i_values = value.get<std::vector<Index>>();
      else if (key == "grid_points") c.grid_points = value.get<Index>();
      else if (key == "random_draws") c.random_draws = value.get<Index>();
      else if (key == "cdc_level")
        c.cdc_level = value.is_null() ? std::nullopt : std::optional(value.get<double>());
      else if (key == "signals_csv") c.signals_csv = value.get<std::string>();
      else if (key == "signal_index")
        c.signal_index = value.is_null() ? std::nullopt : std::optional(value.get<Index>());
      else if (key == "tol") c.tol = value.get<double>();
      else if (key == "max_iter") c.max_iter = value.get<Index>();
      else fail(ErrorKind::Config, "unknown config key '" + key + "'");
    } catch (const json::exception& ex) {
      fail(ErrorKind::Config, "config key '" + key + "': " + ex.what());
    } catch (const Error& ex) {
      if (ex.kind() == ErrorKind::Config) throw;
      fail(ErrorKind::Config, "config key '" + key + "': " + ex.what());
    }
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& ex) {
    fail(ErrorKind::Config, "config is not valid JSON: " + std::string(ex.what()));
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json j;
  j["experiment"] = std::string(to_string(c.experiment));
  j["N"] = c.N;
  j["M"] = c.M;
  j["I"] = c.I;
  j["method"] = std::string(to_string(c.method));
  j["penalty"] = std::string(to_string(c.penalty));
  j["gamma"] = c.gamma ? json(*c.gamma) : json(nullptr);
  j["target_deactivation"] = c.target_deactivation ? json(*c.target_deactivation) : json(nullptr);
  j["seeds"] = c.seeds;
  j["trials"] = c.trials;
  j["output_dir"] = c.output_dir.string();
  j["sigma"] = c.sigma;
  j["pfa"] = c.pfa ? json(*c.pfa) : json(nullptr);
  j["m_values"] = c.m_values;
  j["i_values"] = c.i_values;
  j["grid_points"] = c.grid_points;
  j["random_draws"] = c.random_draws;
  j["cdc_level"] = c.cdc_level ? json(*c.cdc_level) : json(nullptr);
  j["signals_csv"] = c.signals_csv.string();
  j["signal_index"] = c.signal_index ? json(*c.signal_index) : json(nullptr);
  j["tol"] = c.tol;
  j["max_iter"] = c.max_iter;
  return j;
}

const csv::Table& RunResult::table(std::string_view wanted) const {
  for (const auto& t : tables)
    if (t.name == wanted) return t.table;
  fail(ErrorKind::InvalidArgument, "no table named " + std::string(wanted));
}

RunResult run_fig2(const RunConfig& config, unsigned threads) {
  config.validate();
  const auto& ms = config.m_values;
  const auto& seeds = config.seeds;
  const Index cells = static_cast<Index>(ms.size() * seeds.size());
  const double target = *config.target_deactivation;

  struct Cell {
    double opt, l0, l1, random, prediction, d0, d1;
  };
  std::vector<Cell> out(static_cast<std::size_t>(cells));
  parallel_for(cells, threads, [&](Index k) {
    const Index m = ms[static_cast<std::size_t>(k) / seeds.size()];
    const std::uint64_t seed = seeds[static_cast<std::size_t>(k) % seeds.size()];
    const SignalClass cls = generate_signal_class(config.I, config.N, seed);
    Cell c{};
    c.opt = optimal_cdc(cls, m);
    const SparsePoint p0 = sparse_at_target(cls, m, Penalty::L0, target, config);
    const SparsePoint p1 = sparse_at_target(cls, m, Penalty::L1, target, config);
    c.l0 = p0.cdc;
    c.l1 = p1.cdc;
    c.d0 = p0.deactivation;
    c.d1 = p1.deactivation;
    const DesignSpec spec = DesignSpec::uniform(config.N, m, 0.0, Penalty::None);
    double total = 0.0;
    for (Index draw = 0; draw < config.random_draws; ++draw) {
      const auto w_seed = derive_seed(derive_seed(seed, static_cast<std::uint64_t>(m)),
                                      static_cast<std::uint64_t>(draw));
      total += cumulative_dc(design_random(spec, w_seed), cls).cdc;
    }
    c.random = total / static_cast<double>(config.random_draws);
    c.prediction = random_baseline_prediction(cls, m);
    out[static_cast<std::size_t>(k)] = c;
  });

  csv::Table t;
  t.columns = {"M",          "cdc_opt",          "cdc_l0",          "cdc_l1",
               "cdc_random", "cdc_random_lemma", "deactivation_l0", "deactivation_l1"};
  for (std::size_t mi = 0; mi < ms.size(); ++mi) {
    std::vector<double> opt, l0, l1, rnd, pred, d0, d1;
    for (std::size_t si = 0; si < seeds.size(); ++si) {
      const Cell& c = out[mi * seeds.size() + si];
      opt.push_back(c.opt);
      l0.push_back(c.l0);
      l1.push_back(c.l1);
      rnd.push_back(c.random);
      pred.push_back(c.prediction);
      d0.push_back(c.d0);
      d1.push_back(c.d1);
    }
    t.add_row({std::to_string(ms[mi]), format_number(mean(opt)), format_number(mean(l0)),
               format_number(mean(l1)), format_number(mean(rnd)), format_number(mean(pred)),
               format_number(mean(d0)), format_number(mean(d1))});
  }
  RunResult r;
  r.name = "fig2";
  r.tables.push_back({"fig2", std::move(t)});
  r.metadata = base_metadata(config, r);
  return r;
}

RunResult run_fig3(const RunConfig& config, unsigned threads) {
  config.validate();
  const auto& is = config.i_values;
  const auto& seeds = config.seeds;
  const Index cells = static_cast<Index>(is.size() * seeds.size());
  const double target = *config.target_deactivation;

  struct Cell {
    double opt, l0, l1, d0, d1;
  };
  std::vector<Cell> out(static_cast<std::size_t>(cells));
  parallel_for(cells, threads, [&](Index k) {
    const Index count = is[static_cast<std::size_t>(k) / seeds.size()];
    const std::uint64_t seed = seeds[static_cast<std::size_t>(k) % seeds.size()];
    const SignalClass cls = generate_signal_class(count, config.N, seed);
    Cell c{};
    c.opt = cost_of_universality(design_cost_free(build_omega(cls), config.M), cls);
    const SparsePoint p0 = sparse_at_target(cls, config.M, Penalty::L0, target, config);
    const SparsePoint p1 = sparse_at_target(cls, config.M, Penalty::L1, target, config);
    c.l0 = p0.cu;
    c.l1 = p1.cu;
    c.d0 = p0.deactivation;
    c.d1 = p1.deactivation;
    out[static_cast<std::size_t>(k)] = c;
  });

  csv::Table t;
  t.columns = {"I", "cu_opt", "cu_l0", "cu_l1", "deactivation_l0", "deactivation_l1"};
  for (std::size_t ii = 0; ii < is.size(); ++ii) {
    std::vector<double> opt, l0, l1, d0, d1;
    for (std::size_t si = 0; si < seeds.size(); ++si) {
      const Cell& c = out[ii * seeds.size() + si];
      opt.push_back(c.opt);
      l0.push_back(c.l0);
      l1.push_back(c.l1);
      d0.push_back(c.d0);
      d1.push_back(c.d1);
    }
    t.add_row({std::to_string(is[ii]), format_number(mean(opt)), format_number(mean(l0)),
               format_number(mean(l1)), format_number(mean(d0)), format_number(mean(d1))});
  }
  RunResult r;
  r.name = "fig3";
  r.tables.push_back({"fig3", std::move(t)});
  r.metadata = base_metadata(config, r);
  return r;
}

RunResult run_fig4(const RunConfig& config, unsigned threads) {
  config.validate();
  const auto& seeds = config.seeds;
  const Index grid = config.grid_points;
  const double target = *config.target_deactivation;
  const double level = *config.cdc_level;
  const std::array<Penalty, 2> penalties{Penalty::L0, Penalty::L1};

  struct Cell {
    std::vector<double> gamma, deactivation, normalized;
    double target_deactivation = 0.0;
    double target_normalized = 0.0;
    double max_deactivation_at_level = 0.0;
  };
  const Index cells = static_cast<Index>(seeds.size() * penalties.size());
  std::vector<Cell> out(static_cast<std::size_t>(cells));
  parallel_for(cells, threads, [&](Index k) {
    const std::uint64_t seed = seeds[static_cast<std::size_t>(k) / penalties.size()];
    const Penalty penalty = penalties[static_cast<std::size_t>(k) % penalties.size()];
    const SignalClass cls = generate_signal_class(config.I, config.N, seed);
    const Matrix a = padded_factor(cls, config.M);
    const double opt = optimal_cdc(cls, config.M);
    DesignSpec spec = DesignSpec::uniform(config.N, config.M, 0.0, penalty);
    const double top = gamma_max(a, spec, penalty);

    Cell c;
    for (Index g = 0; g < grid; ++g) {
      const double gamma = top * static_cast<double>(g) / static_cast<double>(grid - 1);
      spec.gammas.setConstant(gamma);
      const SparseSolution sol = solve_sparse(a, spec, config.tol, config.max_iter);
      const double d = deactivation_ratio(sol);
      const double norm = cumulative_dc(sol.w, cls).cdc / opt;
      c.gamma.push_back(gamma);
      c.deactivation.push_back(d);
      c.normalized.push_back(norm);
      if (norm >= level) c.max_deactivation_at_level = std::max(c.max_deactivation_at_level, d);
    }
    spec.gammas.setZero();
    const Calibration cal = calibrate_gamma(a, spec, target, penalty, config.tol, config.max_iter);
    c.target_deactivation = cal.achieved_deactivation;
    c.target_normalized = cumulative_dc(cal.solution.w, cls).cdc / opt;
    out[static_cast<std::size_t>(k)] = std::move(c);
  });

  csv::Table curve;
  curve.columns = {"penalty",           "grid_index",         "gamma_fraction", "mean_gamma",
                   "mean_deactivation", "mean_normalized_cdc"};
  csv::Table summary;
  summary.columns = {"penalty",
                     "target_deactivation",
                     "mean_achieved_deactivation",
                     "mean_normalized_cdc_at_target",
                     "cdc_level",
                     "mean_max_deactivation_at_level",
                     "seeds"};
  for (std::size_t p = 0; p < penalties.size(); ++p) {
    const std::string name(to_string(penalties[p]));
    for (Index g = 0; g < grid; ++g) {
      std::vector<double> gam, dea, nor;
      for (std::size_t s = 0; s < seeds.size(); ++s) {
        const Cell& c = out[s * penalties.size() + p];
        gam.push_back(c.gamma[static_cast<std::size_t>(g)]);
        dea.push_back(c.deactivation[static_cast<std::size_t>(g)]);
        nor.push_back(c.normalized[static_cast<std::size_t>(g)]);
      }
      curve.add_row({name, std::to_string(g),
                     format_number(static_cast<double>(g) / static_cast<double>(grid - 1)),
                     format_number(mean(gam)), format_number(mean(dea)), format_number(mean(nor))});
    }
    std::vector<double> achieved, at_target, at_level;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const Cell& c = out[s * penalties.size() + p];
      achieved.push_back(c.target_deactivation);
      at_target.push_back(c.target_normalized);
      at_level.push_back(c.max_deactivation_at_level);
    }
    summary.add_row({name, format_number(target), format_number(mean(achieved)),
                     format_number(mean(at_target)), format_number(level),
                     format_number(mean(at_level)), std::to_string(seeds.size())});
  }

  RunResult r;
  r.name = "fig4";
  r.tables.push_back({"fig4", std::move(curve)});
  r.tables.push_back({"fig4_summary", std::move(summary)});
  r.metadata = base_metadata(config, r);
  return r;
}

RunResult run_single_design(const RunConfig& config, unsigned threads) {
  config.validate();
  const SignalClass cls = design_class(config);
  const Designed d = make_design(config, cls);
  const MetricsReport report = evaluate(d.w, cls);

  RunResult r;
  r.name = "design";
  {
    std::ostringstream w_csv;
    csv::write_matrix(w_csv, d.w.weights);
    r.files.push_back({"W.csv", w_csv.str()});
    json meta = metadata(d.w);
    for (const auto& [key, value] : d.details.items()) meta[key] = value;
    r.files.push_back({"W.json", meta.dump(2) + "\n"});
  }
  r.files.push_back({"metrics.json", to_json(report).dump(2) + "\n"});
  r.files.push_back({"metrics.csv", to_csv(report)});
  if (config.pfa) {
    r.tables.push_back(
        {"detection", detection_table(detect_all(config, d.w, cls, *config.pfa, threads))});
  }
  r.metadata = base_metadata(config, r);
  r.metadata["design"] = d.details;
  return r;
}

RunResult run_detect(const RunConfig& config, unsigned threads) {
  config.validate();
  const SignalClass cls = design_class(config);
  const Designed d = make_design(config, cls);
  const double pfa = config.pfa.value_or(0.05);

  RunResult r;
  r.name = "detect";
  r.tables.push_back({"detect", detection_table(detect_all(config, d.w, cls, pfa, threads))});
  r.metadata = base_metadata(config, r);
  r.metadata["design"] = d.details;
  r.metadata["design"]["provenance"] = std::string(to_string(d.w.provenance));
  return r;
}

RunResult run_experiment(const RunConfig& config, unsigned threads) {
  switch (config.experiment) {
    case Experiment::Fig2: return run_fig2(config, threads);
    case Experiment::Fig3: return run_fig3(config, threads);
    case Experiment::Fig4: return run_fig4(config, threads);
    case Experiment::SingleDesign: return run_single_design(config, threads);
    case Experiment::Detect: return run_detect(config, threads);
  }
  fail(ErrorKind::Config, "unknown experiment");
}

void write_result(const std::filesystem::path& dir, const RunResult& result) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& t : result.tables) csv::write_text(dir / (t.name + ".csv"), t.table.to_string());
  for (const auto& f : result.files) csv::write_text(dir / f.filename, f.content);
  csv::write_text(dir / (result.name + "_meta.json"), result.metadata.dump(2) + "\n");
}

}  // namespace ucollab
