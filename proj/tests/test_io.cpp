#include <cstdio>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "ptsym/io.hpp"
#include "support/random_instances.hpp"

using namespace ptsym;
using ptsym::io::Json;

TEST(FormatDouble, SeventeenSignificantDigits) {
  EXPECT_EQ(io::format_double(1.0), "1.0000000000000000e+00");
  EXPECT_EQ(io::format_double(-0.0), "0.0000000000000000e+00");
  EXPECT_EQ(io::format_double(0.1), "1.0000000000000001e-01");
  EXPECT_EQ(io::format_double(6.02214076e23), "6.0221407599999999e+23");
}

TEST(FormatDouble, RoundTripsExactly) {
  ptsym::testing::Rng rng(91);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.normal() * std::pow(10.0, rng.integer(-30, 30));
    EXPECT_EQ(std::stod(io::format_double(x)), x);
  }
}

TEST(Dump, DeterministicLayout) {
  Json j;
  j["b"] = 1.5;
  j["a"] = Json::array({1, 2});
  j["flag"] = true;
  EXPECT_EQ(io::dump(j, 0), R"({"b":1.5000000000000000e+00,"a":[1, 2],"flag":true})");
  EXPECT_EQ(io::dump(j), io::dump(j));
  Json nan;
  nan["x"] = std::nan("");
  EXPECT_EQ(io::dump(nan, 0), R"({"x":null})");
}

TEST(MatrixJson, RoundTrip) {
  ptsym::testing::Rng rng(92);
  const Matrix m = rng.gaussian_matrix(3);
  const Json j = io::parse_json_text(io::dump(io::matrix_json(m)), "test");
  EXPECT_EQ((io::matrix_from_json(j) - m).norm(), 0.0);
  const Vector v = rng.gaussian_vector(4);
  EXPECT_EQ((io::vector_from_json(io::parse_json_text(io::dump(io::vector_json(v)), "test")) - v).norm(), 0.0);
}

TEST(MatrixJson, ValidationErrors) {
  auto kind_of = [](const std::string& text) {
    try {
      io::matrix_from_json(io::parse_json_text(text, "t"));
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Dimension;  // sentinel: no error
  };
  EXPECT_EQ(kind_of("{bad"), ErrorKind::Parse);
  EXPECT_EQ(kind_of(R"({"rows": []})"), ErrorKind::Validation);
  EXPECT_EQ(kind_of(R"({"dim": 2, "rows": [[[1,0],[0,0]]]})"), ErrorKind::Validation);
  EXPECT_EQ(kind_of(R"({"dim": 1, "rows": [[[1]]]})"), ErrorKind::Validation);
  EXPECT_EQ(kind_of(R"({"dim": 1, "rows": [[["a", 0]]]})"), ErrorKind::Validation);
  EXPECT_EQ(kind_of(R"({"dim": 0, "rows": []})"), ErrorKind::Validation);
  EXPECT_EQ(kind_of(R"({"dim": 1, "rows": [[[1, 0]]]})"), ErrorKind::Dimension);
}

TEST(RunConfig, OverlayAndValidation) {
  io::RunConfig cfg;
  io::apply_config_json(cfg, Json::parse(R"({"can_tol": 1e-6, "grid": {"t_end": 5, "points": 11},
                                             "signs": [1, -1], "probe": [[0, 1], [1, 0]]})"));
  EXPECT_EQ(cfg.tol.can_tol, 1e-6);
  EXPECT_EQ(cfg.tol.met_tol, 1e-8);
  EXPECT_EQ(cfg.points, 11);
  EXPECT_EQ(cfg.grid().at(10), 5.0);
  ASSERT_TRUE(cfg.signs.has_value());
  EXPECT_EQ(*cfg.signs, (std::vector<int>{1, -1}));
  EXPECT_EQ(cfg.probe.x, cplx(0, 1));

  io::RunConfig bad;
  EXPECT_THROW(io::apply_config_json(bad, Json::parse(R"({"rank_tol": -1})")), Error);
  EXPECT_THROW(io::apply_config_json(bad, Json::parse(R"({"grid": {"points": 0}})")), Error);
  EXPECT_THROW(io::apply_config_json(bad, Json::parse(R"({"met_tol": "x"})")), Error);
}

TEST(ReadStateFile, VectorBecomesNormalizedProjector) {
  const auto path = std::filesystem::temp_directory_path() / "ptsym_state_test.json";
  {
    std::ofstream out(path);
    out << R"({"dim": 2, "entries": [[3, 0], [0, 4]]})";
  }
  const Matrix rho = io::read_state_file(path.string());
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-15);
  EXPECT_NEAR(rho(0, 0).real(), 9.0 / 25.0, 1e-15);
  EXPECT_NEAR(std::abs(rho(0, 1)), 12.0 / 25.0, 1e-15);
  std::filesystem::remove(path);
}

TEST(CsvWriter, LfEndingsAndOptionalCells) {
  std::ostringstream out;
  io::CsvWriter csv(out);
  csv.row({"a", "b"});
  csv.row({io::csv_optional(std::nullopt), io::csv_optional(2.0)});
  EXPECT_EQ(out.str(), "a,b\n,2.0000000000000000e+00\n");
}
