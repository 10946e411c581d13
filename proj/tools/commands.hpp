#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace slope::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kPropertyFailure = 1, kNumericalFailure = 2, kUsage = 3 };

struct Table1Options {
  int n_max = 31;
  std::string out = "table1.csv";
};

struct BernoulliEffOptions {
  int n = 10;
  int grid = 97;
  std::string out = "bernoulli_eff.csv";
};

struct CurvesOptions {
  std::string family = "bernoulli";
  std::string chart = "p";
  int n = 10;
  int grid = 41;
  std::string out = "curves.csv";
};

struct CauchySimOptions {
  int n = 15;
  std::int64_t reps = 100'000;
  std::uint64_t seed = 20'240'917;
  bool raw = false;  // adjusted unless --raw
  int bins = 20;
  double theta_true = 0.0;
  double alpha = 0.05;
  std::string out_prefix = "cauchy_sim";
};

struct CheckOptions {
  std::string family = "bernoulli";
  int grid = 41;
  int n = 10;
  int k = 3;
  double sigma = 1.0;
  std::string out;  // optional CSV
};

/// Every command writes its CSVs then `<first output>.manifest.json` last.
int run_table1(const Table1Options& opt, std::ostream& log);
int run_bernoulli_eff(const BernoulliEffOptions& opt, std::ostream& log);
int run_curves(const CurvesOptions& opt, std::ostream& log);
int run_cauchy_sim(const CauchySimOptions& opt, int threads, std::ostream& log);
int run_check(const CheckOptions& opt, std::ostream& log);

/// Full front end: `slope-lab <table1|bernoulli-eff|curves|cauchy-sim|check> [flags]`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// key=value lines from a config file turned into `--key=value` arguments
/// for keys not already given on the command line.
std::vector<std::string> merge_config(const std::vector<std::string>& args);

}  // namespace slope::cli
