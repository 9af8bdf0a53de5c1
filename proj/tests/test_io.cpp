#include <filesystem>

#include "helpers.hpp"

namespace annulus {
namespace {

TEST(Io, MatrixRoundtrip) {
  const auto A = random_gaussian(2, 3, 4);
  const auto B = io::matrix_from_json(io::to_json(A));
  EXPECT_TRUE(A == B);
}

TEST(Io, RationalRoundtrip) {
  const auto f = gen::rational(0.4, 9);
  const auto g = io::rational_from_json(io::to_json(f));
  EXPECT_EQ(f.r, g.r);
  EXPECT_EQ(f.p, g.p);
  EXPECT_EQ(f.q1_roots, g.q1_roots);
  EXPECT_EQ(f.q2_roots, g.q2_roots);
  EXPECT_EQ(f.scale, g.scale);
}

TEST(Io, RejectsMalformed) {
  using io::json;
  auto parse_code = [](const char* text) {
    return test::code_of([&] { io::matrix_from_json(json::parse(text)); });
  };
  EXPECT_EQ(parse_code(R"({"rows": 1, "cols": 1})"), Errc::Parse);
  EXPECT_EQ(parse_code(R"({"rows": 1, "cols": 2, "data": [[1, 0]]})"), Errc::Parse);
  EXPECT_EQ(parse_code(R"({"rows": 1, "cols": 1, "data": [[1]]})"), Errc::Parse);
  EXPECT_EQ(parse_code(R"({"rows": -1, "cols": 1, "data": []})"), Errc::Parse);
  json bad = json::parse(R"({"rows": 1, "cols": 1, "data": [[0, 0]]})");
  bad["data"][0][0] = std::numeric_limits<double>::infinity();
  EXPECT_EQ(test::code_of([&] { io::matrix_from_json(bad); }), Errc::Parse);
  EXPECT_EQ(test::code_of([] { io::read_matrix("/nonexistent/m.json"); }), Errc::Parse);
}

TEST(Io, WriteModelDirectory) {
  const auto dir = std::filesystem::temp_directory_path() / "annulus_io_model";
  std::filesystem::remove_all(dir);
  const double r = 0.5;
  const auto T = gen::singular_value_windowed(2, r, 1);
  auto m = build_model(T, r, 3);
  io::write_model(dir, m, 17);
  for (const char* name : {"N.json", "F.json", "V.json", "meta.json"}) EXPECT_TRUE(std::filesystem::exists(dir / name));
  const auto meta = io::read_json_file(dir / "meta.json");
  EXPECT_EQ(meta["seed"].get<int>(), 17);
  EXPECT_EQ(meta["d"].get<int>(), 3);
  EXPECT_TRUE(io::read_matrix(dir / "N.json") == m.N);
  std::filesystem::remove_all(dir);
}

TEST(Io, ReportShapes) {
  const auto rep = certify(gen::example_matrix(0.25), 0.25, 100, 1);
  const auto j = io::to_json(rep);
  for (const char* key : {"version", "verdict", "norm_T", "max_ratio", "witness", "seed"}) EXPECT_TRUE(j.contains(key));
  const auto s = io::to_json(laurent_expand(test::rat(0.5, {1.0}, {2.0}), 5));
  EXPECT_EQ(s["coeffs"].size(), 11u);
}

}  // namespace
}  // namespace annulus
