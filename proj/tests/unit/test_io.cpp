#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "cartan/io.hpp"

using namespace cartan;

TEST(Json, MatrixRoundTrip)
{
  Eigen::MatrixXd m(2, 3);
  m << 1.0, -2.5, 1e-300, 0.1, 1.0 / 3.0, -0.0;
  const nlohmann::json j = matrix_to_json(m);
  EXPECT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0].size(), 3u);
  const Eigen::MatrixXd back = matrix_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back, m);
}

TEST(Json, VectorRoundTripAndFlatMatrix)
{
  const Eigen::Vector3d v(0.1, std::sqrt(2.0), -7.0);
  EXPECT_EQ(vector_from_json(nlohmann::json::parse(vector_to_json(v).dump())), Eigen::VectorXd(v));
  // A flat array read as a matrix is a column.
  const Eigen::MatrixXd col = matrix_from_json(vector_to_json(v));
  EXPECT_EQ(col.cols(), 1);
  EXPECT_EQ(col.rows(), 3);
}

TEST(Json, RejectsMalformedMatrices)
{
  EXPECT_THROW(matrix_from_json(nlohmann::json::array()), std::invalid_argument);
  EXPECT_THROW(matrix_from_json(nlohmann::json::parse("[[1,2],[3]]")), std::invalid_argument);
  EXPECT_THROW(vector_from_json(nlohmann::json::parse("{\"a\":1}")), std::invalid_argument);
}

TEST(Format, SeventeenSignificantDigits)
{
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-2.5e-20), "-2.4999999999999999e-20");
  EXPECT_EQ(format_double(NAN), "nan");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
  for (double x : {1.0 / 3.0, std::exp(1.0), 6.02214076e23}) {
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
}

TEST(Table, CsvAndJson)
{
  Table t({"t", "n", "label"});
  t.add_row({0.5, 3LL, std::string("a")});
  t.add_row({1.0 / 3.0, -1LL, std::string("b")});
  EXPECT_THROW(t.add_row({1.0}), std::invalid_argument);

  std::ostringstream os;
  t.write_csv(os);
  EXPECT_EQ(os.str(), "t,n,label\n0.5,3,a\n0.33333333333333331,-1,b\n");

  const nlohmann::json j = t.to_json();
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["n"], 3);
  EXPECT_EQ(j[1]["label"], "b");
  EXPECT_EQ(j[1]["t"].get<double>(), 1.0 / 3.0);
}
