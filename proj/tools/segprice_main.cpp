#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "segprice/cli_commands.hpp"

namespace {

using segprice::cli::OutputFormat;

OutputFormat parse_format(const std::string& s) {
  return s == "machine" ? OutputFormat::machine : OutputFormat::table;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"segmented-market pricing: discrimination vs uniform-price analysis"};
  app.require_subcommand(1);

  segprice::cli::GenerateArgs gen_args;
  auto* gen = app.add_subcommand("generate", "write an instance file for a named family");
  gen->add_option("family", gen_args.family,
                  "tight-pair | staircase | triangular | trunc-exp | dirac | unbounded-flat")
      ->required();
  gen->add_option("--k", gen_args.k, "segment count");
  gen->add_option("--eps", gen_args.eps, "epsilon parameter");
  gen->add_option("--a", gen_args.a, "kink location (tight-pair)");
  gen->add_option("--l-cap", gen_args.l_cap, "support cap (trunc-exp)");
  gen->add_option("--out", gen_args.out_path, "output path (default stdout)");

  segprice::cli::AnalyzeArgs an_args;
  std::string an_format = "table";
  auto* an = app.add_subcommand("analyze", "price an instance file and report profits");
  an->add_option("spec", an_args.in_path, "instance file")->required();
  an->add_option("--grid", an_args.grid_n, "search grid resolution");
  an->add_option("--format", an_format, "table | machine")
      ->check(CLI::IsMember({"table", "machine"}));

  segprice::cli::SweepArgs sw_args;
  std::string k_csv;
  auto* sw = app.add_subcommand("sweep", "analyze a family across segment counts");
  sw->add_option("family", sw_args.family, "family supporting a K parameter")->required();
  sw->add_option("--k", k_csv, "comma-separated segment counts, e.g. 2,4,8")->required();
  sw->add_option("--eps", sw_args.eps, "epsilon parameter");
  sw->add_option("--l-cap", sw_args.l_cap, "support cap (trunc-exp)");
  sw->add_option("--out", sw_args.out_path, "output path (default stdout)");

  segprice::cli::VerifyArgs ve_args;
  auto* ve = app.add_subcommand("verify", "run the randomized invariant suite");
  ve->add_option("--seed", ve_args.seed, "RNG seed");
  ve->add_option("--n", ve_args.n_instances, "number of sampled instances");

  segprice::cli::ScreenArgs sc_args;
  std::string sc_format = "table";
  auto* sc = app.add_subcommand("screen", "sequential-screening profits for an instance file");
  sc->add_option("spec", sc_args.in_path, "instance file")->required();
  sc->add_option("--grid", sc_args.grid_n, "threshold grid resolution");
  sc->add_option("--format", sc_format, "table | machine")
      ->check(CLI::IsMember({"table", "machine"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : segprice::cli::kExitUsage;
  }

  if (gen->parsed()) return segprice::cli::cmd_generate(gen_args, std::cout, std::cerr);
  if (an->parsed()) {
    an_args.format = parse_format(an_format);
    return segprice::cli::cmd_analyze(an_args, std::cout, std::cerr);
  }
  if (sw->parsed()) {
    std::size_t pos = 0;
    try {
      while (pos < k_csv.size()) {
        std::size_t used = 0;
        sw_args.k_list.push_back(std::stoi(k_csv.substr(pos), &used));
        pos += used;
        if (pos < k_csv.size() && k_csv[pos] == ',') ++pos;
      }
    } catch (const std::exception&) {
      std::cerr << "bad --k list: " << k_csv << "\n";
      return segprice::cli::kExitUsage;
    }
    return segprice::cli::cmd_sweep(sw_args, std::cout, std::cerr);
  }
  if (ve->parsed()) return segprice::cli::cmd_verify(ve_args, std::cout, std::cerr);
  if (sc->parsed()) {
    sc_args.format = parse_format(sc_format);
    return segprice::cli::cmd_screen(sc_args, std::cout, std::cerr);
  }
  return segprice::cli::kExitUsage;
}
