#include "segprice/cli_commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "segprice/constructions.hpp"
#include "segprice/instance_spec.hpp"
#include "segprice/pricing.hpp"
#include "segprice/random_markets.hpp"
#include "segprice/screening.hpp"
#include "segprice/shape.hpp"

namespace segprice::cli {

std::string fmt_real(Real x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12Lg", x);
  return buf;
}

namespace {

std::string flag_list(const std::vector<ShapeFlag>& flags) {
  std::string s;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (i) s += ",";
    s += to_string(flags[i]);
  }
  return s;
}

std::string bool_list(const std::vector<bool>& flags) {
  std::string s;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (i) s += ",";
    s += flags[i] ? "yes" : "no";
  }
  return s;
}

struct ReportRecord {
  std::string id;
  std::string family;
  int k = 0;
  PricingReport pricing;
  ShapeDiagnosis diag;
};

ReportRecord make_record(const std::string& id, const std::string& family,
                         const MarketInstance& m, const AnalyzeOptions& opt) {
  ReportRecord rec;
  rec.id = id;
  rec.family = family;
  rec.k = (int)m.size();
  rec.pricing = analyze(m, opt);
  rec.diag = diagnose_shape(m, opt.shape_grid_n);
  return rec;
}

std::string opt_text(const std::optional<Real>& v) {
  return v ? fmt_real(*v) : "na";
}

void write_record_table(const ReportRecord& r, std::ostream& out) {
  const auto row = [&](const char* key, const std::string& value) {
    out << std::left << std::setw(20) << key << value << "\n";
  };
  row("instance", r.id);
  row("family", r.family);
  row("segments", std::to_string(r.k));
  row("pi_star", fmt_real(r.pricing.pi_star));
  row("pi_uniform", fmt_real(r.pricing.pi_uniform));
  row("uniform_price", fmt_real(r.pricing.uniform_price));
  row("midpoint_price", opt_text(r.pricing.midpoint_price));
  row("pi_midpoint", opt_text(r.pricing.pi_midpoint));
  row("pi_lower_envelope", opt_text(r.pricing.pi_lower_envelope));
  row("pi_random_expect", opt_text(r.pricing.pi_random_expect));
  row("ratio", fmt_real(r.pricing.ratio));
  row("concave_profit", bool_list(r.diag.concave_profit));
  row("regular", flag_list(r.diag.regular));
  row("mhr", flag_list(r.diag.mhr));
  row("common_support", r.diag.common_support ? "yes" : "no");
  row("bounded_support", r.diag.bounded_support ? "yes" : "no");
  for (const auto& note : r.pricing.notes) row("note", note);
}

void write_record_machine(const ReportRecord& r, std::ostream& out) {
  const auto field = [&](const char* key, const std::string& value, bool quote) {
    out << "  \"" << key << "\": ";
    if (quote) {
      out << '"' << value << '"';
    } else {
      out << value;
    }
  };
  out << "{\n";
  field("instance", r.id, true);
  out << ",\n";
  field("family", r.family, true);
  out << ",\n";
  field("segments", std::to_string(r.k), false);
  out << ",\n";
  field("pi_star", fmt_real(r.pricing.pi_star), false);
  out << ",\n";
  field("pi_uniform", fmt_real(r.pricing.pi_uniform), false);
  out << ",\n";
  field("uniform_price", fmt_real(r.pricing.uniform_price), false);
  out << ",\n";
  field("midpoint_price", opt_text(r.pricing.midpoint_price),
        !r.pricing.midpoint_price.has_value());
  out << ",\n";
  field("pi_midpoint", opt_text(r.pricing.pi_midpoint), !r.pricing.pi_midpoint.has_value());
  out << ",\n";
  field("pi_lower_envelope", opt_text(r.pricing.pi_lower_envelope),
        !r.pricing.pi_lower_envelope.has_value());
  out << ",\n";
  field("pi_random_expect", opt_text(r.pricing.pi_random_expect),
        !r.pricing.pi_random_expect.has_value());
  out << ",\n";
  field("ratio", fmt_real(r.pricing.ratio), false);
  out << ",\n";
  field("concave_profit", bool_list(r.diag.concave_profit), true);
  out << ",\n";
  field("regular", flag_list(r.diag.regular), true);
  out << ",\n";
  field("mhr", flag_list(r.diag.mhr), true);
  out << ",\n";
  field("common_support", r.diag.common_support ? "true" : "false", false);
  out << ",\n";
  field("bounded_support", r.diag.bounded_support ? "true" : "false", false);
  out << "\n}\n";
}

ConstructionParams params_from_args(const GenerateArgs& args) {
  const auto fam = family_from_string(args.family);
  if (!fam) throw SpecError("unknown family: " + args.family);
  ConstructionParams p;
  p.family = *fam;
  p.k = args.k;
  p.epsilon = args.eps;
  p.a = args.a;
  p.cap_l = args.l_cap;
  return p;
}

int write_output(const std::string& text, const std::string& path, std::ostream& out,
                 std::ostream& err) {
  if (path.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream file(path);
  if (!file) {
    err << "cannot write " << path << "\n";
    return kExitUsage;
  }
  file << text;
  return kExitOk;
}

}  // namespace

int cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const auto ctor = build_construction(params_from_args(args));
    return write_output(serialize_spec(spec_from_construction(ctor)), args.out_path, out, err);
  } catch (const ConstructionError& e) {
    err << "construction failure [" << e.condition << "]: " << e.what() << "\n";
    return kExitConstruction;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const auto spec = load_spec_file(args.in_path);
    const auto market = spec.build();
    AnalyzeOptions opt;
    opt.grid_n = args.grid_n;
    const std::string family =
        spec.construction ? to_string(spec.construction->family) : "explicit";
    const std::string id = family + "-k" + std::to_string(market.size());
    const auto rec = make_record(id, family, market, opt);
    if (args.format == OutputFormat::machine) {
      write_record_machine(rec, out);
    } else {
      write_record_table(rec, out);
    }
    return kExitOk;
  } catch (const ConstructionError& e) {
    err << "construction failure [" << e.condition << "]: " << e.what() << "\n";
    return kExitConstruction;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const auto fam = family_from_string(args.family);
    if (!fam) throw SpecError("unknown family: " + args.family);
    if (*fam == Family::TightPair) {
      throw SpecError("tight-pair has a fixed segment count; sweep needs a K family");
    }
    if (args.k_list.empty()) throw SpecError("sweep requires a nonempty K list");

    std::ostringstream text;
    text << "family,k,pi_star,pi_uniform,pi_midpoint,pi_lower_envelope,"
            "pi_random_expect,ratio,concave_all,common_support\n";
    for (int k : args.k_list) {
      ConstructionParams p;
      p.family = *fam;
      p.k = k;
      p.epsilon = args.eps;
      p.a = args.a;
      p.cap_l = args.l_cap;
      const auto ctor = build_construction(p);
      const auto rec = make_record(std::string(to_string(*fam)) + "-k" + std::to_string(k),
                                   to_string(*fam), ctor.market, AnalyzeOptions{});
      text << to_string(*fam) << ',' << k << ',' << fmt_real(rec.pricing.pi_star) << ','
           << fmt_real(rec.pricing.pi_uniform) << ',' << opt_text(rec.pricing.pi_midpoint)
           << ',' << opt_text(rec.pricing.pi_lower_envelope) << ','
           << opt_text(rec.pricing.pi_random_expect) << ',' << fmt_real(rec.pricing.ratio)
           << ',' << (rec.diag.all_concave() ? "yes" : "no") << ','
           << (rec.diag.common_support ? "yes" : "no") << "\n";
    }
    return write_output(text.str(), args.out_path, out, err);
  } catch (const ConstructionError& e) {
    err << "construction failure [" << e.condition << "]: " << e.what() << "\n";
    return kExitConstruction;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  if (args.n_instances < 1) {
    err << "verify requires n >= 1\n";
    return kExitUsage;
  }
  std::mt19937_64 rng(args.seed);
  Real min_ratio = 1;
  long checks = 0;

  const auto violation = [&](const MarketInstance& m, const std::string& what) {
    err << "invariant violated: " << what << "\n";
    err << serialize_spec(spec_from_market(m));
    return kExitInvariant;
  };

  for (int i = 0; i < args.n_instances; ++i) {
    const auto m = random_concave_market(rng);
    const auto rep = analyze(m);
    const Real slack = 1e-9L * std::max<Real>(1, rep.pi_star);
    min_ratio = std::min(min_ratio, rep.ratio);

    if (rep.ratio < 0.5L - 1e-9L) return violation(m, "half-approximation ratio");
    if (!rep.pi_midpoint || *rep.pi_midpoint < 0.5L * rep.pi_star - slack) {
      return violation(m, "midpoint price half-approximation");
    }
    if (*rep.pi_midpoint > rep.pi_uniform + slack) return violation(m, "midpoint <= uniform");
    if (rep.pi_uniform > rep.pi_star + slack) return violation(m, "uniform <= star");
    if (!rep.pi_lower_envelope || *rep.pi_lower_envelope > rep.pi_uniform + slack) {
      return violation(m, "lower envelope <= uniform");
    }
    if (*rep.pi_lower_envelope < 0.5L * rep.pi_star - slack) {
      return violation(m, "lower envelope half-approximation");
    }
    if (!rep.pi_random_expect || *rep.pi_random_expect < 0.5L * rep.pi_star - 1e-6L) {
      return violation(m, "random pricing half-approximation");
    }
    if (rep.ratio < Real(1) / (Real)m.size() - 1e-9L) return violation(m, "1/K floor");
    checks += 7;
  }

  // Pinned near-tight case: the two-segment pair at eps = 1e-3 must sit just
  // above one half.
  {
    const auto ctor = tight_pair(2, 1e-3L);
    const auto rep = analyze(ctor.market);
    if (rep.ratio < 0.5L - 1e-9L || rep.ratio > 0.5015L + 1e-6L) {
      return violation(ctor.market, "tight pair ratio window");
    }
    checks += 1;
  }

  out << "verify: " << args.n_instances << " instances, " << checks
      << " checks passed, min ratio " << fmt_real(min_ratio) << "\n";
  return kExitOk;
}

int cmd_screen(const ScreenArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const auto spec = load_spec_file(args.in_path);
    const auto market = spec.build();
    const ScreeningInstance inst(market, args.grid_n);
    const auto rep = threshold_seq_optimum(inst);

    if (args.format == OutputFormat::machine) {
      out << "{\n";
      out << "  \"pi_static\": " << fmt_real(rep.pi_static) << ",\n";
      out << "  \"pi_seq_threshold\": " << fmt_real(rep.pi_seq_threshold) << ",\n";
      out << "  \"pi_star_bound\": " << fmt_real(rep.pi_star_bound) << ",\n";
      out << "  \"thresholds\": [";
      for (std::size_t i = 0; i < rep.thresholds.size(); ++i) {
        out << (i ? ", " : "") << fmt_real(rep.thresholds[i]);
      }
      out << "],\n  \"base_utilities\": [";
      for (std::size_t i = 0; i < rep.base_utilities.size(); ++i) {
        out << (i ? ", " : "") << fmt_real(rep.base_utilities[i]);
      }
      out << "]\n}\n";
    } else {
      out << std::left << std::setw(20) << "pi_static" << fmt_real(rep.pi_static) << "\n";
      out << std::left << std::setw(20) << "pi_seq_threshold"
          << fmt_real(rep.pi_seq_threshold) << " (threshold-restricted lower bound)\n";
      out << std::left << std::setw(20) << "pi_star_bound" << fmt_real(rep.pi_star_bound)
          << "\n";
      out << std::left << std::setw(20) << "thresholds";
      for (std::size_t i = 0; i < rep.thresholds.size(); ++i) {
        out << (i ? "," : "") << fmt_real(rep.thresholds[i]);
      }
      out << "\n" << std::left << std::setw(20) << "base_utilities";
      for (std::size_t i = 0; i < rep.base_utilities.size(); ++i) {
        out << (i ? "," : "") << fmt_real(rep.base_utilities[i]);
      }
      out << "\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace segprice::cli
