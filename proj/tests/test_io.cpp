#include "gsamp/io.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <limits>

using namespace gsamp;
using namespace gsamp::io;

TEST(CsvTest, RoundTripIsBitExact) {
  std::mt19937_64 rng(61);
  CVector v = gsamp::testing::random_cvector(rng, 50);
  v(0) = Complex(0.1, -1.0 / 3.0);
  v(1) = Complex(std::numeric_limits<double>::denorm_min(), std::numeric_limits<double>::max());
  v(2) = Complex(-0.0, 1e-300);
  std::stringstream ss;
  write_csv(ss, v);
  const CVector back = read_csv(ss);
  ASSERT_EQ(back.size(), v.size());
  EXPECT_EQ(std::memcmp(back.data(), v.data(), sizeof(Complex) * static_cast<std::size_t>(v.size())), 0);
}

TEST(CsvTest, HeaderAndFormat) {
  CVector v(2);
  v << Complex(1.0, 0.0), Complex(0.1, -2.5);
  std::stringstream ss;
  write_csv(ss, v, -1);
  EXPECT_EQ(ss.str(), "index,re,im\n-1,1,0\n0,0.10000000000000001,-2.5\n");
  std::stringstream bad("idx,re,im\n0,1,2\n");
  EXPECT_THROW(read_csv(bad), SchemaError);
  std::stringstream short_row("index,re,im\n0,1\n");
  EXPECT_THROW(read_csv(short_row), SchemaError);
  std::stringstream junk("index,re,im\n0,1x,2\n");
  EXPECT_THROW(read_csv(junk), SchemaError);
}

TEST(ProblemFileTest, CyclicModel) {
  const auto j = json::parse(R"({
    "model": "cyclic", "dimension": 2,
    "operator": [[0, 1], [1, 0]],
    "generators": [[1, 0]], "orders": [2],
    "samplers": [[[1, 0], [0, 0]]], "r": 1
  })");
  const auto pf = parse_problem(j);
  ASSERT_TRUE(pf.cyclic);
  EXPECT_EQ(pf.cyclic->op.matrix()(0, 1), Complex(1.0, 0.0));
  EXPECT_EQ(pf.cyclic->orders, std::vector<int>{2});
  EXPECT_EQ(pf.cyclic->samplers[0](0), Complex(1.0, 0.0));
}

TEST(ProblemFileTest, FlatOperatorAndComplexPairs) {
  const auto j = json::parse(R"({
    "model": "cyclic", "dimension": 2,
    "operator": [[0, 0], [1, 0], [1, 0], [0, 0]],
    "generators": [[1, [0, 1]]], "orders": [2],
    "samplers": [[1, 0]], "r": 1
  })");
  const auto pf = parse_problem(j);
  EXPECT_EQ(pf.cyclic->op.matrix()(1, 0), Complex(1.0, 0.0));
  EXPECT_EQ(pf.cyclic->generators[0](1), Complex(0.0, 1.0));
}

TEST(ProblemFileTest, SchemaErrors) {
  EXPECT_THROW(parse_problem(json::parse(R"({"dimension": 2})")), SchemaError);
  EXPECT_THROW(parse_problem(json::parse(R"({"model": "banach"})")), SchemaError);
  EXPECT_THROW(parse_problem(json::parse(R"({
    "model": "cyclic", "dimension": 2, "operator": [[1, 0], [0, 1]],
    "generators": [[1, 0, 0]], "orders": [1], "samplers": [[1, 0]], "r": 1})")),
               SchemaError);
  EXPECT_THROW(parse_problem(json::parse(R"({
    "model": "cyclic", "dimension": 2, "operator": [[1, 1], [1, 1]],
    "generators": [[1, 0]], "orders": [1], "samplers": [[1, 0]], "r": 1})")),
               SchemaError);
  EXPECT_THROW(parse_problem(json::parse(R"({
    "model": "cyclic", "dimension": 2, "operator": [[1, 0], [0, 1]],
    "generators": [[1, 0]], "orders": [1, 2], "samplers": [[1, 0]], "r": 1})")),
               SchemaError);
}

TEST(ProblemFileTest, ShiftModel) {
  const auto j = json::parse(R"({
    "model": "shift", "r": 1, "grid": 1024,
    "sequences": {"g1": {"offset": -1, "values": [4, 19, 4]}, "one": {"values": [1]}},
    "spectra": [["g1"]],
    "filter_bank": {"analysis": ["one"], "synthesis": ["one"]}
  })");
  const auto pf = parse_problem(j);
  ASSERT_TRUE(pf.shift);
  EXPECT_EQ(pf.shift->grid, 1024);
  EXPECT_EQ(pf.shift->spectra[0][0].offset, -1);
  ASSERT_TRUE(pf.shift->filter_bank);
  EXPECT_EQ(pf.shift->filter_bank->channels(), 1);
  EXPECT_THROW(parse_problem(json::parse(R"({"model": "shift", "sequences": {}, "spectra": [["x"]]})")),
               SchemaError);
}

TEST(ProblemFileTest, LcaModel) {
  const auto j = json::parse(R"({
    "model": "lca", "dimension": 2,
    "operators": [[[0, 1], [1, 0]]],
    "group": {"moduli": [2], "H_gens": [[1]], "M_gens": [[0]]},
    "generators": [[1, 0]], "samplers": [[1, 0]]
  })");
  const auto pf = parse_problem(j);
  ASSERT_TRUE(pf.lca);
  EXPECT_EQ(pf.lca->moduli, std::vector<int>{2});
  EXPECT_EQ(pf.lca->H_gens[0], lca::Element{1});
}
