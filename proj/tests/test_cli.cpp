#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "oracles.hpp"
#include "slope/csv.hpp"
#include "slope/error.hpp"

namespace fs = std::filesystem;
using namespace slope;
using doctest::Approx;

namespace {

/// Fresh scratch directory per test case.
struct ScratchDir {
  fs::path path;
  explicit ScratchDir(const std::string& name) {
    path = fs::temp_directory_path() / ("slope_cli_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

csv::Table load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return csv::read(in);
}

int run(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::ostringstream out;
  std::ostringstream err;
  const int rc = cli::run(args, out, err);
  if (out_text) *out_text = out.str() + err.str();
  return rc;
}

}  // namespace

TEST_CASE("csv formatting") {
  CHECK(csv::format_real(0.1) == "0.10000000000000001");
  CHECK(csv::format_real(-2.0) == "-2");
  CHECK(csv::format_real(NAN) == "nan");
  CHECK(csv::format_real(-INFINITY) == "-inf");
  for (double v : {1.0 / 3.0, 6.02214076e23, -1e-300, 4.88286})
    CHECK(std::strtod(csv::format_real(v).c_str(), nullptr) == v);
  CHECK(csv::quote("plain") == "plain");
  CHECK(csv::quote("a,b") == "\"a,b\"");
  CHECK(csv::quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("csv round trip") {
  std::ostringstream out;
  {
    csv::Writer w(out, "demo", 2, {"name", "value"});
    w.field(std::string_view("x,y")).field(1.5);
    w.end_row();
    w.field(std::string_view("line\nbreak")).field(7LL);
    w.end_row();
    CHECK_THROWS_AS(w.field(1.0).end_row(), DomainError);
  }
  const std::string text = out.str();
  CHECK(text.rfind("#schema=demo/v2\r\n", 0) == 0);
  std::istringstream in(text.substr(0, text.find("7\r\n") + 3));
  const csv::Table t = csv::read(in);
  CHECK(t.schema == "demo/v2");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][t.column("name")] == "x,y");
  CHECK(t.rows[1][0] == "line\nbreak");
  CHECK(t.rows[1][1] == "7");
}

TEST_CASE("config merging keeps command-line flags") {
  ScratchDir dir("config");
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "# comment\nreps = 500\nseed=9\nraw=true\nout_prefix=abc\nbins=false\n";
  }
  const auto merged = cli::merge_config({"cauchy-sim", "--seed", "3", "--config", dir / "run.cfg"});
  const std::vector<std::string> expected = {"cauchy-sim", "--seed", "3", "--reps=500", "--raw", "--out-prefix=abc"};
  CHECK(merged == expected);
  const auto adjusted = cli::merge_config({"cauchy-sim", "--adjusted", "--config=" + (dir / "run.cfg")});
  CHECK(std::find(adjusted.begin(), adjusted.end(), "--raw") == adjusted.end());
  CHECK(run({"table1", "--config", dir / "missing.cfg"}) == cli::kUsage);
}

TEST_CASE("table1 command") {
  ScratchDir dir("table1");
  const std::string out = dir / "t.csv";
  REQUIRE(run({"table1", "--out", out}) == cli::kOk);
  const csv::Table t = load(out);
  CHECK(t.schema == "table1/v1");
  REQUIRE(t.rows.size() == 16);
  const auto num = [&](std::size_t row, const char* col) { return std::stod(t.rows[row][t.column(col)]); };
  CHECK(std::abs(num(3, "lambda_median_score") - 2.44042) < 1e-3);
  CHECK(num(1, "lambda_median_point") == 0.0);
  CHECK(num(1, "variance_diverged") == 1.0);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double n = num(r, "n");
    CHECK(std::abs(num(r, "n_median_point") - n * num(r, "eff_median_point_pct") / 100.0) < 0.05);
    CHECK(std::abs(num(r, "n_median_score") - n * num(r, "eff_median_score_pct") / 100.0) < 0.05);
  }

  const auto manifest = nlohmann::json::parse(slurp(out + ".manifest.json"));
  CHECK(manifest["command"] == "table1");
  CHECK(manifest["outputs"].size() == 1);
  CHECK(manifest["outputs"][0] == out);
  CHECK(manifest["flags"]["n_max"] == 31);
  CHECK(manifest.contains("wall_clock_seconds"));
  CHECK(manifest.contains("library_version"));
  CHECK(fs::last_write_time(out + ".manifest.json") >= fs::last_write_time(out));

  CHECK(run({"table1", "--n-max", "8", "--out", out}) == cli::kUsage);
}

TEST_CASE("bernoulli-eff command") {
  ScratchDir dir("beff");
  const std::string out = dir / "b.csv";
  REQUIRE(run({"bernoulli-eff", "--out", out}) == cli::kOk);
  const csv::Table t = load(out);
  REQUIRE(t.rows.size() == 97);
  for (const auto& row : t.rows) {
    CHECK(std::abs(std::stod(row[t.column("eff_y")]) - 1.0) < 1e-12);
    if (std::stod(row[0]) <= 0.15) CHECK(std::stod(row[t.column("eff_y_y_minus_1")]) <= 0.8);
  }
}

TEST_CASE("curves command") {
  ScratchDir dir("curves");
  const std::string out = dir / "c.csv";
  REQUIRE(run({"curves", "--n", "10", "--grid", "49", "--out", out}) == cli::kOk);
  const csv::Table t = load(out);
  CHECK(t.header.size() == 12);  // parameter column plus eleven curves
  REQUIRE(t.rows.size() == 49);
  // Curve y changes sign at p = y / n.
  for (int y = 1; y <= 9; ++y) {
    const std::size_t col = t.column("y" + std::to_string(y));
    for (std::size_t r = 0; r + 1 < t.rows.size(); ++r) {
      const double p0 = std::stod(t.rows[r][0]);
      const double p1 = std::stod(t.rows[r + 1][0]);
      const double s0 = std::stod(t.rows[r][col]);
      const double s1 = std::stod(t.rows[r + 1][col]);
      if (s0 > 0.0 && s1 <= 0.0) CHECK((p0 < y / 10.0 + 1e-12 && y / 10.0 <= p1 + 1e-12));
    }
  }
  // The slice at p = 0.5 has mean 0 and variance 1 under the binomial law.
  const auto& mid = t.rows[24];
  REQUIRE(std::stod(mid[0]) == Approx(0.5));
  double m = 0.0;
  double v = 0.0;
  for (int y = 0; y <= 10; ++y) {
    const double w = oracle::binomial_pmf(10, y, 0.5);
    const double s = std::stod(mid[static_cast<std::size_t>(y + 1)]);
    m += w * s;
    v += w * s * s;
  }
  CHECK(std::abs(m) < 1e-10);
  CHECK(std::abs(v - 1.0) < 1e-10);

  REQUIRE(run({"curves", "--param-chart", "log_odds", "--out", out}) == cli::kOk);
  CHECK(load(out).header[0] == "log_odds");
  CHECK(run({"curves", "--family", "cauchy", "--out", out}) == cli::kUsage);
}

TEST_CASE("cauchy-sim command") {
  ScratchDir dir("sim");
  const std::string a = dir / "a";
  const std::string b = dir / "b";
  REQUIRE(run({"cauchy-sim", "--reps", "1500", "--seed", "5", "--raw", "--out-prefix", a}) == cli::kOk);
  REQUIRE(run({"cauchy-sim", "--reps", "1500", "--seed", "5", "--raw", "--out-prefix", b}) == cli::kOk);
  for (const char* suffix : {"_summary.csv", "_bins.csv", "_qq.csv", "_replicates.csv"})
    CHECK(slurp(a + suffix) == slurp(b + suffix));

  const csv::Table reps = load(a + "_replicates.csv");
  const std::vector<std::string> cols = {"rep", "theta_hat", "i_obs", "hit_we", "hit_wo", "hit_lrt", "kl_we", "kl_wo", "kl_lrt"};
  CHECK(reps.header == cols);
  CHECK(reps.rows.size() == 1500);
  CHECK(load(a + "_bins.csv").rows.size() == 20);
  CHECK(load(a + "_summary.csv").rows.size() == 3);

  const auto manifest = nlohmann::json::parse(slurp(a + "_summary.csv.manifest.json"));
  CHECK(manifest["seed"] == 5);
  CHECK(manifest["outputs"].size() == 4);
  CHECK(manifest["flags"]["mode"] == "raw");

  CHECK(run({"cauchy-sim", "--raw", "--adjusted"}) == cli::kUsage);
  CHECK(run({"cauchy-sim", "--reps", "0", "--out-prefix", a}) == cli::kUsage);
}

TEST_CASE("thread cap from the environment does not change output") {
  ScratchDir dir("threads");
  ::setenv("SLOPE_LAB_THREADS", "1", 1);
  REQUIRE(run({"cauchy-sim", "--reps", "600", "--out-prefix", dir / "one"}) == cli::kOk);
  ::setenv("SLOPE_LAB_THREADS", "4", 1);
  REQUIRE(run({"cauchy-sim", "--reps", "600", "--out-prefix", dir / "four"}) == cli::kOk);
  ::unsetenv("SLOPE_LAB_THREADS");
  CHECK(slurp(dir / "one_replicates.csv") == slurp(dir / "four_replicates.csv"));
  CHECK(slurp(dir / "one_summary.csv") == slurp(dir / "four_summary.csv"));
}

TEST_CASE("check command") {
  ScratchDir dir("check");
  std::string text;
  CHECK(run({"check", "--family", "bernoulli", "--out", dir / "b.csv"}, &text) == cli::kOk);
  CHECK(text.find("PASS identity") != std::string::npos);
  CHECK(text.find("PASS chart_invariance_eff") != std::string::npos);
  const csv::Table t = load(dir / "b.csv");
  for (const auto& row : t.rows) {
    CHECK(row[t.column("pass")] == "1");
    if (row[t.column("property")] == "identity") CHECK(std::stod(row[t.column("value")]) < 1e-8);
  }
  CHECK(run({"check", "--family", "normal", "--grid", "11"}) == cli::kOk);
  CHECK(run({"check", "--family", "cauchy_median", "--k", "2", "--grid", "11"}) == cli::kOk);
  CHECK(run({"check", "--family", "cauchy_median", "--k", "1", "--grid", "5"}) == cli::kOk);
  CHECK(run({"check", "--family", "nope"}) == cli::kUsage);
}

TEST_CASE("usage errors") {
  CHECK(run({}) == cli::kUsage);
  CHECK(run({"frobnicate"}) == cli::kUsage);
  CHECK(run({"table1", "--n-max", "abc"}) == cli::kUsage);
  std::string text;
  CHECK(run({"--help"}, &text) == cli::kOk);
  CHECK(text.find("cauchy-sim") != std::string::npos);
  CHECK(run({"--version"}, &text) == cli::kOk);
  CHECK(text.find(cli::kVersion) != std::string::npos);
}
