#include "ucollab/collaboration.hpp"

#include <fstream>
#include <string>

#include "ucollab/csv.hpp"
#include "ucollab/errors.hpp"

namespace ucollab {

namespace {

nlohmann::json to_array(const Vector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

Vector from_array(const nlohmann::json& a) {
  Vector v(static_cast<Index>(a.size()));
  for (Index k = 0; k < v.size(); ++k) v(k) = a.at(static_cast<std::size_t>(k)).get<double>();
  return v;
}

}  // namespace

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::PCA: return "pca";
    case Provenance::DiagonalShortcut: return "diagonal";
    case Provenance::Random: return "random";
    case Provenance::SparseL0: return "l0";
    case Provenance::SparseL1: return "l1";
    case Provenance::UserSupplied: return "user";
  }
  return "user";
}

Provenance parse_provenance(std::string_view text) {
  for (auto p : {Provenance::PCA, Provenance::DiagonalShortcut, Provenance::Random,
                 Provenance::SparseL0, Provenance::SparseL1, Provenance::UserSupplied})
    if (to_string(p) == text) return p;
  fail(ErrorKind::InvalidArgument, "unknown provenance '" + std::string(text) + "'");
}

CollaborationMatrix CollaborationMatrix::user(Matrix weights) {
  CollaborationMatrix w;
  w.spec = DesignSpec::uniform(weights.cols(), weights.rows(), 0.0, Penalty::None);
  w.weights = std::move(weights);
  return w;
}

RankPolicy CollaborationMatrix::rank_policy() const noexcept {
  return provenance == Provenance::SparseL0 || provenance == Provenance::SparseL1
             ? RankPolicy::Truncate
             : RankPolicy::Strict;
}

void CollaborationMatrix::validate() const {
  spec.validate();
  require(weights.rows() == spec.M && weights.cols() == spec.N,
          "collaboration matrix shape does not match its spec");
  require(weights.allFinite(), "collaboration matrix entries must be finite");
  if (provenance == Provenance::PCA) {
    const Matrix gram = weights * weights.transpose();
    require((gram - Matrix::Identity(spec.M, spec.M)).norm() <= 1e-9,
            "PCA design rows must be orthonormal");
  }
}

nlohmann::json metadata(const CollaborationMatrix& w) {
  nlohmann::json j;
  j["provenance"] = std::string(to_string(w.provenance));
  j["rows"] = w.rows();
  j["cols"] = w.cols();
  j["spec"] = {{"N", w.spec.N},
               {"M", w.spec.M},
               {"penalty", std::string(to_string(w.spec.penalty))},
               {"gammas", to_array(w.spec.gammas)},
               {"y_diag", to_array(w.spec.y_diag)}};
  j["seed"] = w.seed ? nlohmann::json(*w.seed) : nlohmann::json(nullptr);
  return j;
}

void write_collaboration(const std::filesystem::path& stem, const CollaborationMatrix& w,
                         const nlohmann::json& extra) {
  auto csv_path = stem;
  csv_path += ".csv";
  auto json_path = stem;
  json_path += ".json";
  csv::write_matrix(csv_path, w.weights);
  nlohmann::json meta = metadata(w);
  for (const auto& [key, value] : extra.items()) meta[key] = value;
  csv::write_text(json_path, meta.dump(2) + "\n");
}

CollaborationMatrix read_collaboration(const std::filesystem::path& stem) {
  auto csv_path = stem;
  csv_path += ".csv";
  auto json_path = stem;
  json_path += ".json";
  CollaborationMatrix w;
  w.weights = csv::read_matrix(csv_path);
  std::ifstream in(json_path);
  if (!in) fail(ErrorKind::Io, "cannot open " + json_path.string());
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(in);
    w.provenance = parse_provenance(meta.at("provenance").get<std::string>());
    const auto& spec = meta.at("spec");
    w.spec.N = spec.at("N").get<Index>();
    w.spec.M = spec.at("M").get<Index>();
    w.spec.penalty = parse_penalty(spec.at("penalty").get<std::string>());
    w.spec.gammas = from_array(spec.at("gammas"));
    w.spec.y_diag = from_array(spec.at("y_diag"));
    if (!meta.at("seed").is_null()) w.seed = meta.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Io, "bad collaboration metadata: " + std::string(e.what()));
  }
  w.validate();
  return w;
}

}  // namespace ucollab
