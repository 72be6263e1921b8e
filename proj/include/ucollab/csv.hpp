#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ucollab::csv {

/// Plain numeric CSV: ',' separator, '.' radix, no header, LF endings.
Eigen::MatrixXd read_matrix(std::istream& in);
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);
void write_matrix(std::ostream& out, const Eigen::MatrixXd& m);
void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m);

/// Shortest round-trip decimal representation ("nan" for NaN).
std::string format_number(double value);

/// Header plus string cells; used for experiment outputs.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string to_string() const;
};

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ucollab::csv
