#include "segprice/instance_spec.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace segprice {

namespace {

// Parsing goes through a long-double json instantiation (strtold under the
// hood) so every stored digit survives. Serialization is hand-written: the
// library's float dump assumes double-width varargs, which would mangle
// long doubles.
using Json = nlohmann::basic_json<nlohmann::ordered_map, std::vector, std::string,
                                  bool, std::int64_t, std::uint64_t, long double>;

// Shortest-round-trip style decimal: 21 significant digits always recover
// the same 80-bit value.
std::string num(Real x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.21Lg", x);
  return buf;
}

class JsonWriter {
 public:
  std::string take() { return std::move(out_); }

  void begin_object() { open('{'); }
  void end_object() { close('}'); }
  void begin_array() { open('['); }
  void end_array() { close(']'); }

  void key(const std::string& k) {
    comma();
    indent();
    out_ += '"';
    out_ += k;
    out_ += "\": ";
    pending_value_ = true;
  }
  void value_null() { raw("null"); }
  void value(Real x) { raw(num(x)); }
  void value_int(long long x) { raw(std::to_string(x)); }
  void value(const std::string& s) { raw('"' + s + '"'); }

 private:
  void open(char c) {
    if (!pending_value_) {
      comma();
      indent();
    }
    pending_value_ = false;
    out_ += c;
    out_ += '\n';
    first_.push_back(true);
  }
  void close(char c) {
    first_.pop_back();
    out_ += '\n';
    indent();
    out_ += c;
    if (!first_.empty()) first_.back() = false;
  }
  void raw(const std::string& text) {
    if (!pending_value_) {
      comma();
      indent();
    }
    pending_value_ = false;
    out_ += text;
    if (!first_.empty()) first_.back() = false;
  }
  void comma() {
    if (!first_.empty() && !first_.back()) out_ += ",\n";
    if (!first_.empty() && first_.back()) first_.back() = false;
  }
  void indent() { out_.append(2 * first_.size(), ' '); }

  std::string out_;
  std::vector<bool> first_;
  bool pending_value_ = false;
};

const char* to_string(PieceForm f) {
  switch (f) {
    case PieceForm::LinearSurvival: return "linear_survival";
    case PieceForm::LinearOverP: return "linear_over_p";
    case PieceForm::ExpRampOverP: return "exp_ramp_over_p";
  }
  return "?";
}

PieceForm piece_form_from_string(const std::string& s) {
  if (s == "linear_survival") return PieceForm::LinearSurvival;
  if (s == "linear_over_p") return PieceForm::LinearOverP;
  if (s == "exp_ramp_over_p") return PieceForm::ExpRampOverP;
  throw SpecError("unknown piece form: " + s);
}

void dump_distribution(JsonWriter& w, const SegmentDistribution& d) {
  w.begin_object();
  w.key("kind");
  w.value(std::string(to_string(d.kind())));
  if (d.kind() == DistKind::PiecewiseCdf) {
    w.key("pieces");
    w.begin_array();
    for (const auto& pc : d.pieces()) {
      w.begin_object();
      w.key("form");
      w.value(std::string(to_string(pc.form)));
      w.key("lo");
      w.value(pc.lo);
      w.key("hi");
      if (pc.hi == kInfinity) {
        w.value_null();
      } else {
        w.value(pc.hi);
      }
      w.key("c0");
      w.value(pc.c0);
      w.key("c1");
      w.value(pc.c1);
      w.end_object();
    }
    w.end_array();
  } else {
    w.key("params");
    w.begin_array();
    for (Real p : d.params()) w.value(p);
    w.end_array();
  }
  w.end_object();
}

SegmentDistribution parse_distribution(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "piecewise") {
    std::vector<SurvivalPiece> pieces;
    for (const auto& p : j.at("pieces")) {
      SurvivalPiece pc;
      pc.form = piece_form_from_string(p.at("form").get<std::string>());
      pc.lo = p.at("lo").get<Real>();
      pc.hi = p.at("hi").is_null() ? kInfinity : p.at("hi").get<Real>();
      pc.c0 = p.at("c0").get<Real>();
      pc.c1 = p.at("c1").get<Real>();
      pieces.push_back(pc);
    }
    return SegmentDistribution::piecewise(std::move(pieces));
  }
  const auto params = j.at("params").get<std::vector<Real>>();
  if (kind == "uniform" && params.size() == 2) {
    return SegmentDistribution::uniform(params[0], params[1]);
  }
  if (kind == "trunc_exp" && params.size() == 2) {
    return SegmentDistribution::truncated_exponential(params[0], params[1]);
  }
  if (kind == "triangular" && params.size() == 2) {
    return SegmentDistribution::triangular(params[0], params[1]);
  }
  if (kind == "dirac" && params.size() == 1) {
    return SegmentDistribution::dirac(params[0]);
  }
  throw SpecError("unknown distribution kind or bad parameter count: " + kind);
}

void dump_construction(JsonWriter& w, const ConstructionParams& p) {
  w.begin_object();
  w.key("family");
  w.value(std::string(to_string(p.family)));
  w.key("k");
  w.value_int(p.k);
  switch (p.family) {
    case Family::TightPair:
      w.key("a");
      w.value(p.a);
      w.key("epsilon");
      w.value(p.epsilon);
      if (p.kappa) {
        w.key("kappa");
        w.value(*p.kappa);
      }
      break;
    case Family::DiracWorstCase:
      w.key("epsilon");
      w.value(p.epsilon);
      break;
    case Family::TruncExpMhr:
      w.key("l_cap");
      w.value(p.cap_l);
      break;
    case Family::UnboundedFlat:
      w.key("peaks");
      w.begin_array();
      for (Real peak : p.peaks) w.value(peak);
      w.end_array();
      break;
    default:
      break;
  }
  w.end_object();
}

ConstructionParams parse_construction(const Json& j) {
  ConstructionParams p;
  const std::string name = j.at("family").get<std::string>();
  const auto fam = family_from_string(name);
  if (!fam) throw SpecError("unknown family: " + name);
  p.family = *fam;
  if (j.contains("k")) p.k = (int)j.at("k").get<std::int64_t>();
  if (j.contains("a")) p.a = j.at("a").get<Real>();
  if (j.contains("epsilon")) p.epsilon = j.at("epsilon").get<Real>();
  if (j.contains("l_cap")) p.cap_l = j.at("l_cap").get<Real>();
  if (j.contains("kappa")) p.kappa = j.at("kappa").get<Real>();
  if (j.contains("peaks")) p.peaks = j.at("peaks").get<std::vector<Real>>();
  return p;
}

}  // namespace

MarketInstance InstanceSpec::build() const {
  if (construction) return build_construction(*construction).market;
  if (explicit_market) return *explicit_market;
  throw SpecError("instance spec holds neither a construction nor explicit data");
}

InstanceSpec spec_from_construction(const Construction& c) {
  InstanceSpec spec;
  spec.construction = c.params;
  spec.metadata = c.metadata;
  return spec;
}

InstanceSpec spec_from_market(const MarketInstance& m) {
  InstanceSpec spec;
  spec.explicit_market = m;
  return spec;
}

std::string serialize_spec(const InstanceSpec& spec) {
  JsonWriter w;
  w.begin_object();
  w.key("schema_version");
  w.value_int(spec.schema_version);
  if (spec.construction) {
    w.key("construction");
    dump_construction(w, *spec.construction);
  }
  if (spec.explicit_market) {
    w.key("market");
    w.begin_object();
    w.key("cost");
    w.value(spec.explicit_market->cost());
    w.key("segments");
    w.begin_array();
    for (const auto& s : spec.explicit_market->segments()) {
      w.begin_object();
      w.key("weight");
      w.value(s.weight);
      w.key("dist");
      dump_distribution(w, s.dist);
      w.end_object();
    }
    w.end_array();
    w.end_object();
  }
  if (!spec.metadata.empty()) {
    w.key("metadata");
    w.begin_object();
    for (const auto& [k, v] : spec.metadata) {
      w.key(k);
      w.value(v);
    }
    w.end_object();
  }
  w.end_object();
  return w.take() + "\n";
}

InstanceSpec parse_spec(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw SpecError(std::string("spec parse failure: ") + e.what());
  }
  try {
    InstanceSpec spec;
    spec.schema_version = (int)j.at("schema_version").get<std::int64_t>();
    if (spec.schema_version != 1) {
      throw SpecError("unsupported schema_version");
    }
    if (j.contains("construction")) {
      spec.construction = parse_construction(j.at("construction"));
    }
    if (j.contains("market")) {
      const auto& market = j.at("market");
      std::vector<Segment> segs;
      for (const auto& s : market.at("segments")) {
        segs.push_back({s.at("weight").get<Real>(), parse_distribution(s.at("dist"))});
      }
      spec.explicit_market = MarketInstance(std::move(segs), market.at("cost").get<Real>());
    }
    if (j.contains("metadata")) {
      for (const auto& [k, v] : j.at("metadata").items()) {
        spec.metadata[k] = v.get<Real>();
      }
    }
    if (!spec.construction && !spec.explicit_market) {
      throw SpecError("spec must contain a construction or a market");
    }
    return spec;
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecError(std::string("spec parse failure: ") + e.what());
  }
}

InstanceSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

void save_spec_file(const InstanceSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SpecError("cannot write spec file: " + path);
  out << serialize_spec(spec);
}

}  // namespace segprice
