#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "cartan/root_system.hpp"

namespace cartan {

/// Matrices as row-major nested arrays; column vectors as flat arrays.
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const nlohmann::json& j);

/// {rank, roots: [{coords, mult}], simple: [indices], gram}
nlohmann::json root_system_to_json(const RootSystem& rs);
/// Inverse of root_system_to_json; the chamber is rebuilt from the listed simple roots.
RootSystem root_system_from_json(const nlohmann::json& j);

/// "%.17g" formatting used for every number written out.
std::string format_double(double v);

/// A table with a header row, written as CSV or as a JSON array of row objects.
class Table {
public:
  using Cell = std::variant<double, long long, std::string>;

  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<Cell> row);
  [[nodiscard]] const std::vector<std::string>& header() const noexcept { return header_; }
  [[nodiscard]] const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

  void write_csv(std::ostream& os) const;
  [[nodiscard]] nlohmann::json to_json() const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace cartan
