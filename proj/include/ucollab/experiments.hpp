#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ucollab/csv.hpp"
#include "ucollab/model.hpp"
#include "ucollab/parallel.hpp"

namespace ucollab {

enum class Experiment { Fig2, Fig3, Fig4, SingleDesign, Detect };
enum class Method { PCA, DiagonalShortcut, Random, SparseL0, SparseL1 };

std::string_view to_string(Experiment e);
std::string_view to_string(Method m);

struct RunConfig {
  Experiment experiment = Experiment::SingleDesign;
  Index N = 30;
  Index M = 10;
  Index I = 10;
  Method method = Method::PCA;
  Penalty penalty = Penalty::L0;
  std::optional<double> gamma;
  std::optional<double> target_deactivation;
  std::vector<std::uint64_t> seeds;
  Index trials = 100000;
  std::filesystem::path output_dir = "out";
  double sigma = 1.0;
  std::optional<double> pfa;
  std::vector<Index> m_values;  // fig2 sweep
  std::vector<Index> i_values;  // fig3 sweep
  Index grid_points = 200;      // fig4 gamma grid
  Index random_draws = 20;      // fig2 random W draws per seed
  std::optional<double> cdc_level;  // fig4 performance level for the deactivation read-out
  std::filesystem::path signals_csv;
  std::optional<Index> signal_index;
  double tol = 1e-8;
  Index max_iter = 10000;

  /// Defaults for an experiment, including the sweep ranges.
  static RunConfig defaults(Experiment e);
  void validate() const;
};

/// Reads a flat JSON object whose keys mirror RunConfig; unknown keys and
/// type mismatches are Config errors. Missing keys keep the experiment's
/// defaults.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

struct NamedTable {
  std::string name;  // written as <name>.csv
  csv::Table table;
};

struct NamedFile {
  std::string filename;
  std::string content;
};

struct RunResult {
  std::string name;  // metadata is written as <name>_meta.json
  std::vector<NamedTable> tables;
  std::vector<NamedFile> files;
  nlohmann::json metadata;

  const csv::Table& table(std::string_view name) const;
};

RunResult run_fig2(const RunConfig& config, unsigned threads = 1);
RunResult run_fig3(const RunConfig& config, unsigned threads = 1);
RunResult run_fig4(const RunConfig& config, unsigned threads = 1);
RunResult run_single_design(const RunConfig& config, unsigned threads = 1);
RunResult run_detect(const RunConfig& config, unsigned threads = 1);
RunResult run_experiment(const RunConfig& config, unsigned threads = 1);

/// Writes every table and file plus `<name>_meta.json` under dir.
void write_result(const std::filesystem::path& dir, const RunResult& result);

}  // namespace ucollab
