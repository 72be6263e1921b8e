// Command-line front end: design | fig2 | fig3 | fig4 | detect.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ucollab/errors.hpp"
#include "ucollab/experiments.hpp"

namespace {

using ucollab::ErrorKind;
using ucollab::Experiment;

struct Options {
  std::string config_path;
  std::string out_dir;
  std::vector<std::uint64_t> seeds;
  std::string penalty;
  std::string method;
  std::optional<double> gamma;
  std::optional<double> target;
  unsigned threads = 0;
  bool quiet = false;
};

int report_error(ErrorKind kind, const std::string& message) {
  nlohmann::json record;
  record["error"] = {{"kind", std::string(ucollab::to_string(kind))}, {"message", message}};
  std::cerr << record.dump() << '\n';
  return kind == ErrorKind::Config || kind == ErrorKind::InvalidArgument ? 2 : 1;
}

ucollab::RunConfig build_config(Experiment verb, const Options& opt) {
  nlohmann::json j = nlohmann::json::object();
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) ucollab::fail(ErrorKind::Io, "cannot open config " + opt.config_path);
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      ucollab::fail(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what());
    }
  }
  if (!j.is_object()) ucollab::fail(ErrorKind::Config, "config must be a JSON object");
  const std::string verb_name(ucollab::to_string(verb));
  if (j.contains("experiment") && j["experiment"] != verb_name)
    ucollab::fail(ErrorKind::Config, "config experiment does not match the '" + verb_name + "' verb");
  j["experiment"] = verb_name;

  if (!opt.out_dir.empty()) j["output_dir"] = opt.out_dir;
  if (!opt.seeds.empty()) j["seeds"] = opt.seeds;
  if (!opt.penalty.empty()) {
    j["penalty"] = opt.penalty;
    if (opt.method.empty() && (verb == Experiment::SingleDesign || verb == Experiment::Detect))
      j["method"] = opt.penalty == "none" ? "pca" : opt.penalty;
  }
  if (!opt.method.empty()) j["method"] = opt.method;
  if (opt.gamma) j["gamma"] = *opt.gamma;
  if (opt.target) j["target_deactivation"] = *opt.target;
  return ucollab::parse_config(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Universal collaboration matrix design for distributed detection"};
  app.require_subcommand(1);

  Options opt;
  const std::vector<std::pair<std::string, Experiment>> verbs = {
      {"design", Experiment::SingleDesign},
      {"fig2", Experiment::Fig2},
      {"fig3", Experiment::Fig3},
      {"fig4", Experiment::Fig4},
      {"detect", Experiment::Detect},
  };
  const std::vector<std::string> help = {
      "Compute one collaboration matrix and its metrics",
      "C-DC versus M for PCA, l0, l1 and random designs",
      "Cost of universality versus the number of signals",
      "Deactivated links and normalized C-DC over a gamma grid",
      "Closed-form and Monte-Carlo detection probabilities",
  };

  std::vector<CLI::App*> subs;
  for (std::size_t k = 0; k < verbs.size(); ++k) {
    CLI::App* sub = app.add_subcommand(verbs[k].first, help[k]);
    sub->add_option("--config", opt.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "Output directory");
    sub->add_option("--seed,--seeds", opt.seeds, "Seed list")->delimiter(',');
    sub->add_option("--penalty", opt.penalty, "Sparsity penalty")
        ->check(CLI::IsMember({"l0", "l1", "none"}));
    sub->add_option("--method", opt.method, "Design method")
        ->check(CLI::IsMember({"pca", "diagonal", "random", "l0", "l1"}));
    auto* gamma = sub->add_option("--gamma", opt.gamma, "Uniform row penalty");
    sub->add_option("--target-deactivation", opt.target, "Fraction of links to deactivate")
        ->excludes(gamma);
    sub->add_option("--threads", opt.threads, "Worker threads (0 = hardware concurrency)");
    sub->add_flag("--quiet", opt.quiet, "Suppress progress output");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(ErrorKind::Config, e.what());
  }

  Experiment verb = Experiment::SingleDesign;
  for (std::size_t k = 0; k < subs.size(); ++k)
    if (subs[k]->parsed()) verb = verbs[k].second;

  try {
    const ucollab::RunConfig config = build_config(verb, opt);
    const unsigned threads =
        opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    const ucollab::RunResult result = ucollab::run_experiment(config, threads);
    ucollab::write_result(config.output_dir, result);
    if (!opt.quiet) {
      std::cout << "wrote " << result.name << " results to " << config.output_dir.string() << '\n';
      for (const auto& t : result.tables) std::cout << "  " << t.name << ".csv\n";
      for (const auto& f : result.files) std::cout << "  " << f.filename << '\n';
      std::cout << "  " << result.name << "_meta.json\n";
    }
  } catch (const ucollab::Error& e) {
    return report_error(e.kind(), e.what());
  } catch (const std::exception& e) {
    return report_error(ErrorKind::Io, e.what());
  }
  return 0;
}
