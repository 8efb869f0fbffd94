#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "segprice/distribution.hpp"

namespace segprice::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitConstruction = 3;
inline constexpr int kExitInvariant = 4;

enum class OutputFormat { table, machine };

struct GenerateArgs {
  std::string family;
  int k = 2;
  Real eps = 0.01;
  Real a = 2;
  Real l_cap = 10;
  std::string out_path;  // empty -> stdout
};

struct AnalyzeArgs {
  std::string in_path;
  OutputFormat format = OutputFormat::table;
  int grid_n = 10'000;
};

struct SweepArgs {
  std::string family;
  std::vector<int> k_list;
  Real eps = 0.01;
  Real a = 2;
  Real l_cap = 10;
  std::string out_path;  // empty -> stdout
};

struct VerifyArgs {
  std::uint64_t seed = 1;
  int n_instances = 1000;
};

struct ScreenArgs {
  std::string in_path;
  int grid_n = 50;
  OutputFormat format = OutputFormat::table;
};

int cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err);
int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);
int cmd_screen(const ScreenArgs& args, std::ostream& out, std::ostream& err);

// 12-significant-digit float formatting shared by all report writers.
std::string fmt_real(Real x);

}  // namespace segprice::cli
