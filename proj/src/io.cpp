#include "cartan/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace cartan {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m)
{
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j)
{
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a nonempty array");
  if (!j.front().is_array()) {
    Eigen::MatrixXd v(j.size(), 1);
    for (std::size_t i = 0; i < j.size(); ++i) v(i, 0) = j[i].get<double>();
    return v;
  }
  const std::size_t cols = j.front().size();
  Eigen::MatrixXd m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw std::invalid_argument("matrix rows must have equal length");
    }
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v)
{
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j)
{
  if (!j.is_array()) throw std::invalid_argument("vector must be an array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

nlohmann::json root_system_to_json(const RootSystem& rs)
{
  nlohmann::json out;
  out["rank"] = rs.rank();
  out["roots"] = nlohmann::json::array();
  for (const auto& r : rs.roots()) {
    out["roots"].push_back({{"coords", vector_to_json(r.coords)}, {"mult", r.multiplicity}});
  }
  out["simple"] = rs.simple();
  out["gram"] = matrix_to_json(rs.gram());
  return out;
}

RootSystem root_system_from_json(const nlohmann::json& j)
{
  ExplicitRootData data;
  for (const auto& r : j.at("roots")) {
    data.roots.push_back({vector_from_json(r.at("coords")), r.at("mult").get<int>()});
  }
  const int rank = j.at("rank").get<int>();
  if (j.contains("gram")) data.gram = matrix_from_json(j.at("gram"));
  const auto simple = j.at("simple").get<std::vector<std::size_t>>();
  if (static_cast<int>(simple.size()) != rank) {
    throw std::invalid_argument("expected one simple root per rank");
  }
  // Chamber element on which every simple root takes the value 1.
  Eigen::MatrixXd rows(rank, rank);
  for (int i = 0; i < rank; ++i) rows.row(i) = data.roots.at(simple[i]).coords.transpose();
  data.chamber = rows.fullPivLu().solve(Eigen::VectorXd::Ones(rank));
  return RootSystem(data);
}

std::string format_double(double v)
{
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Table::add_row(std::vector<Cell> row)
{
  if (row.size() != header_.size()) throw std::invalid_argument("row width differs from header");
  rows_.push_back(std::move(row));
}

void Table::write_csv(std::ostream& os) const
{
  for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              os << format_double(v);
            } else {
              os << v;
            }
          },
          row[i]);
    }
    os << '\n';
  }
}

nlohmann::json Table::to_json() const
{
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : rows_) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit([&](const auto& v) { obj[header_[i]] = v; }, row[i]);
    }
    out.push_back(std::move(obj));
  }
  return out;
}

}  // namespace cartan
