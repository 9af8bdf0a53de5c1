#pragma once

// JSON serialization. Complex numbers are [re, im] pairs; matrices are
// {"rows", "cols", "data"} with data row-major. Readers reject non-finite
// values and report every problem as Errc::Parse.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "annulus/classes.hpp"
#include "annulus/dilation.hpp"
#include "annulus/laurent.hpp"
#include "annulus/linalg.hpp"
#include "annulus/rational.hpp"
#include "annulus/unitary.hpp"

#ifndef ANNULUS_LAB_VERSION
#define ANNULUS_LAB_VERSION "0.1.0"
#endif

namespace annulus::io {

using json = nlohmann::ordered_json;

inline constexpr const char* version = ANNULUS_LAB_VERSION;

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(Errc::Parse, "complex number must be [re, im]");
  const cplx z{j[0].get<double>(), j[1].get<double>()};
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) fail(Errc::Parse, "non-finite complex entry");
  return z;
}

inline json to_json(const std::vector<cplx>& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(to_json(z));
  return out;
}

inline std::vector<cplx> complex_list_from_json(const json& j) {
  if (!j.is_array()) fail(Errc::Parse, "expected an array of [re, im] pairs");
  std::vector<cplx> out;
  for (const auto& e : j) out.push_back(complex_from_json(e));
  return out;
}

inline json to_json(const ComplexMatrix& A) {
  json data = json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) data.push_back(to_json(A(i, j)));
  return json{{"rows", A.rows()}, {"cols", A.cols()}, {"data", std::move(data)}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    fail(Errc::Parse, "matrix needs rows, cols and data");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer()) fail(Errc::Parse, "rows/cols must be integers");
  const auto rows = j["rows"].get<long long>();
  const auto cols = j["cols"].get<long long>();
  if (rows < 0 || cols < 0) fail(Errc::Parse, "negative matrix dimension");
  const auto& data = j["data"];
  if (!data.is_array() || static_cast<long long>(data.size()) != rows * cols)
    fail(Errc::Parse, "data must hold rows*cols entries");
  ComplexMatrix A(rows, cols);
  for (long long i = 0; i < rows; ++i)
    for (long long c = 0; c < cols; ++c) A(i, c) = complex_from_json(data[static_cast<std::size_t>(i * cols + c)]);
  return A;
}

inline json to_json(const AnnulusRational& f) {
  return json{{"r", f.r},
              {"p", to_json(f.p)},
              {"q1_roots", to_json(f.q1_roots)},
              {"q2_roots", to_json(f.q2_roots)},
              {"scale", to_json(f.scale)}};
}

inline AnnulusRational rational_from_json(const json& j) {
  if (!j.is_object()) fail(Errc::Parse, "rational function must be an object");
  AnnulusRational f;
  if (!j.contains("r") || !j["r"].is_number()) fail(Errc::Parse, "rational function needs a numeric r");
  f.r = j["r"].get<double>();
  if (j.contains("p")) f.p = complex_list_from_json(j["p"]);
  if (j.contains("q1_roots")) f.q1_roots = complex_list_from_json(j["q1_roots"]);
  if (j.contains("q2_roots")) f.q2_roots = complex_list_from_json(j["q2_roots"]);
  if (j.contains("scale")) f.scale = complex_from_json(j["scale"]);
  return f;
}

inline json to_json(const LaurentSeries& s) {
  return json{{"r", s.r},
              {"M", s.order},
              {"coeffs", to_json(s.coeffs)},
              {"factor_pos", to_json(s.factor_pos)},
              {"factor_neg", to_json(s.factor_neg)},
              {"rho1", s.rho1},
              {"rho2", s.rho2},
              {"C1", s.C1},
              {"C2", s.C2},
              {"tail_bound", s.tail_bound},
              {"clustered_roots", s.clustered_roots}};
}

inline json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json to_json(const CertificationReport& rep) {
  json out{{"version", version},
           {"verdict", to_string(rep.verdict)},
           {"r", rep.r},
           {"norm_T", rep.norm_T},
           {"norm_rTinv", finite_or_null(rep.norm_rTinv)},
           {"spectrum_ok", rep.spectrum_ok},
           {"trials", rep.trials},
           {"max_ratio", rep.max_ratio},
           {"witness", rep.witness ? to_json(*rep.witness) : json(nullptr)},
           {"witness_trial", rep.witness_trial ? json(*rep.witness_trial) : json(nullptr)},
           {"seed", rep.seed}};
  return out;
}

inline json to_json(const ArUnitaryDecomposition& d) {
  return json{{"P1", to_json(d.P1)}, {"P2", to_json(d.P2)}, {"U1", to_json(d.U1)}, {"U2", to_json(d.U2)},
              {"residual", d.residual}};
}

inline json to_json(const TailReport& t) {
  return json{{"q1_tail", t.q1_tail}, {"q2_tail", t.q2_tail}, {"bound", t.bound}};
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::Parse, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::Parse, path.string() + ": " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) fail(Errc::Parse, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) fail(Errc::Parse, "write failed for " + path.string());
}

inline ComplexMatrix read_matrix(const std::filesystem::path& path) { return matrix_from_json(read_json_file(path)); }

inline AnnulusRational read_rational(const std::filesystem::path& path) {
  return rational_from_json(read_json_file(path));
}

/// Model directory: N.json, F.json, V.json and meta.json.
inline void write_model(const std::filesystem::path& dir, const ModelTriple& m, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  write_json_file(dir / "N.json", to_json(m.N));
  write_json_file(dir / "F.json", to_json(m.F));
  write_json_file(dir / "V.json", to_json(m.V));
  json meta{{"version", version}, {"r", m.r}, {"d", m.d}, {"M", m.M}, {"exact", m.exact},
            {"tail_report", m.tail_report ? to_json(*m.tail_report) : json(nullptr)}, {"seed", seed}};
  write_json_file(dir / "meta.json", meta);
}

}  // namespace annulus::io
