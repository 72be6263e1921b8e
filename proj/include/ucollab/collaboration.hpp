#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>

#include <json.hpp>

#include "ucollab/model.hpp"
#include "ucollab/numeric.hpp"

namespace ucollab {

enum class Provenance { PCA, DiagonalShortcut, Random, SparseL0, SparseL1, UserSupplied };

std::string_view to_string(Provenance p);
Provenance parse_provenance(std::string_view text);

/// M x N weights combining N sensor observations into M messages.
struct CollaborationMatrix {
  Matrix weights;
  Provenance provenance = Provenance::UserSupplied;
  DesignSpec spec;
  std::optional<std::uint64_t> seed;

  /// Builds a UserSupplied matrix with a cost-free spec matching its shape.
  static CollaborationMatrix user(Matrix weights);

  Index rows() const noexcept { return weights.rows(); }
  Index cols() const noexcept { return weights.cols(); }

  /// Sparse designs may carry zero or dependent rows and are evaluated
  /// through the truncating projector.
  RankPolicy rank_policy() const noexcept;

  void validate() const;
};

nlohmann::json metadata(const CollaborationMatrix& w);

/// Writes `<stem>.csv` (M rows, N columns) and `<stem>.json` (metadata).
void write_collaboration(const std::filesystem::path& stem, const CollaborationMatrix& w,
                         const nlohmann::json& extra = nlohmann::json::object());

CollaborationMatrix read_collaboration(const std::filesystem::path& stem);

}  // namespace ucollab
