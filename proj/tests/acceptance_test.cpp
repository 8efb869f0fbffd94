// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one pass/fail line each. Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "segprice/constructions.hpp"
#include "segprice/market.hpp"
#include "segprice/pricing.hpp"
#include "segprice/random_markets.hpp"
#include "segprice/screening.hpp"

namespace {

using namespace segprice;

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(Real x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6Lg", x);
  return buf;
}

Real harmonic(int k) {
  Real h = 0;
  for (int i = k; i >= 1; --i) h += Real(1) / i;
  return h;
}

struct SuiteOneResult {
  std::vector<MarketInstance> markets;
  std::vector<PricingReport> reports;
  Real min_ratio = 1;
  Real min_mid_ratio = 1;
  double seconds = 0;
};

SuiteOneResult run_suite_one(int n) {
  SuiteOneResult out;
  std::mt19937_64 rng(42);
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < n; ++i) {
    auto m = random_concave_market(rng, 16);
    auto rep = analyze(m);
    if (rep.pi_star > 0) {
      out.min_ratio = std::min(out.min_ratio, rep.ratio);
      if (rep.pi_midpoint) {
        out.min_mid_ratio = std::min(out.min_mid_ratio, *rep.pi_midpoint / rep.pi_star);
      } else {
        out.min_mid_ratio = -1;
      }
    }
    out.markets.push_back(std::move(m));
    out.reports.push_back(std::move(rep));
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

// Universal floor tracker shared by suites 1-5 (criterion 6, second half).
Real worst_floor_margin = 1;

void track_floor(const MarketInstance& m, const PricingReport& rep) {
  worst_floor_margin =
      std::min(worst_floor_margin, rep.ratio - Real(1) / (Real)m.size());
}

}  // namespace

int main() {
  // ---- criterion 1: half guarantee on random concave common-support markets
  const auto suite1 = run_suite_one(1000);
  {
    const bool ok = suite1.min_ratio >= 0.5L - 1e-9L && suite1.min_mid_ratio >= 0.5L - 1e-9L &&
                    suite1.seconds < 30.0;
    report(1, "uniform and midpoint prices keep half the discrimination profit", ok,
           "1000 instances, min ratio " + fmt(suite1.min_ratio) + ", min midpoint ratio " +
               fmt(suite1.min_mid_ratio) + ", " + fmt((Real)suite1.seconds) + "s");
    for (std::size_t i = 0; i < suite1.markets.size(); ++i) {
      track_floor(suite1.markets[i], suite1.reports[i]);
    }
  }

  // ---- criterion 2: the two-segment pair approaches one half from above
  {
    bool ok = true;
    std::string detail;
    Real prev = 1;
    for (Real eps : {0.1L, 0.01L, 0.001L}) {
      const auto c = tight_pair(2, eps);
      const auto rep = analyze(c.market);
      track_floor(c.market, rep);
      const Real ceiling = 0.5L + eps * (2 + 1) / 2 + 1e-6L;
      ok = ok && rep.ratio >= 0.5L && rep.ratio <= ceiling && rep.ratio <= prev + 1e-15L;
      prev = rep.ratio;
      detail += "eps=" + fmt(eps) + " ratio=" + fmt(rep.ratio) + " ";
    }
    report(2, "tightness pair ratio sits in [1/2, 1/2 + eps(a+1)/2]", ok, detail);
  }

  // ---- criterion 3: staircase ratio equals the inverse harmonic number
  {
    bool ok = true;
    std::string detail;
    for (int k : {2, 5, 10, 100, 1000}) {
      const auto c = staircase(k);
      const auto rep = analyze(c.market);
      track_floor(c.market, rep);
      const Real expected = 1 / harmonic(k);
      ok = ok && std::fabs(rep.ratio - expected) <= 1e-9L;
      if (k == 5) detail = "K=5 ratio " + fmt(rep.ratio) + " vs 60/137 " + fmt(expected);
    }
    report(3, "staircase ratio equals 1/H_K for K in {2,5,10,100,1000}", ok, detail);
  }

  // ---- criterion 4: triangular family, exact small case and log decay
  {
    const auto rep2 = analyze(triangular_regular(2).market);
    track_floor(triangular_regular(2).market, rep2);
    bool ok = std::fabs(rep2.pi_uniform - 7.0L / 24) <= 1e-9L &&
              std::fabs(rep2.pi_star - 3.0L / 8) <= 1e-9L &&
              std::fabs(rep2.ratio - 7.0L / 9) <= 1e-9L;
    std::string detail = "K=2 ratio " + fmt(rep2.ratio);
    for (int k : {256, 1024}) {
      const auto c = triangular_regular(k);
      const auto rep = analyze(c.market);
      track_floor(c.market, rep);
      const Real target = 2 * std::log(2.0L) / std::log((Real)k);
      ok = ok && std::fabs(rep.ratio - target) <= 0.25L * target;
      detail += ", K=" + std::to_string(k) + " ratio " + fmt(rep.ratio) + " target " +
                fmt(target);
    }
    report(4, "triangular instances: 7/24, 3/8, 7/9 exactly; 2log2/logK decay", ok, detail);
  }

  // ---- criterion 5: MHR family stays below 1/K with the 0.14 peak
  {
    const auto rep5 = analyze(trunc_exp_mhr(5, 10).market);
    track_floor(trunc_exp_mhr(5, 10).market, rep5);
    bool ok = rep5.pi_uniform >= 0.13L && rep5.pi_uniform <= 0.15L;
    std::string detail = "K=5 uniform profit " + fmt(rep5.pi_uniform);
    for (int k : {5, 50, 500}) {
      const auto c = trunc_exp_mhr(k, 10);
      const auto rep = analyze(c.market);
      track_floor(c.market, rep);
      ok = ok && rep.pi_uniform <= Real(1) / k + 1e-9L;
    }
    report(5, "truncated exponentials: uniform profit in [0.13,0.15] and <= 1/K", ok, detail);
  }

  // ---- criterion 6: dirac worst case is exact; universal floor on suites 1-5
  {
    bool ok = true;
    Real worst_err = 0;
    for (int k : {2, 10, 100}) {
      for (Real eps : {0.1L, 0.01L}) {
        const auto rep = analyze(dirac_worst_case(k, eps).market);
        const Real err = std::fabs(rep.ratio - (1 + eps) / k);
        worst_err = std::max(worst_err, err);
        ok = ok && err <= 1e-12L;
      }
    }
    ok = ok && worst_floor_margin >= -1e-9L;
    report(6, "dirac ratio equals (1+eps)/K exactly; 1/K floor over suites 1-5", ok,
           "max |ratio-(1+eps)/K| " + fmt(worst_err) + ", floor margin " +
               fmt(worst_floor_margin));
  }

  // ---- criterion 7: unbounded flat tails close the gap
  {
    bool ok = true;
    Real worst = 1;
    for (const auto& peaks :
         std::vector<std::vector<Real>>{{1}, {1, 2, 3}, {0.5L, 1.25L, 3}, {2, 2, 5, 9}}) {
      const auto rep = analyze(unbounded_flat(peaks).market);
      ok = ok && std::fabs(rep.ratio - 1) <= 1e-9L;
      worst = std::min(worst, rep.ratio);
    }
    report(7, "unbounded flat-tail instances report ratio 1", ok,
           "min ratio " + fmt(worst));
  }

  // ---- criterion 8: random pricing keeps half the profit in expectation
  {
    bool ok = true;
    Real worst = kInfinity;
    for (std::size_t i = 0; i < suite1.reports.size(); ++i) {
      const auto& rep = suite1.reports[i];
      if (!rep.pi_random_expect) {
        ok = false;
        break;
      }
      const Real margin = *rep.pi_random_expect - 0.5L * rep.pi_star;
      worst = std::min(worst, margin);
      ok = ok && margin >= -1e-6L;
    }
    const MarketInstance single({{1.0L, SegmentDistribution::uniform(0, 1)}}, 0);
    const Real e = random_pricing_expectation(single, 1);
    ok = ok && std::fabs(e - Real(1) / 6) <= 1e-9L;
    report(8, "uniformly random pricing earns at least half in expectation", ok,
           "worst margin " + fmt(worst) + ", single uniform integral " + fmt(e));
  }

  // ---- criterion 9: screening sandwich on small zero-cost suite-1 markets
  {
    bool ok = true;
    int used = 0;
    for (const auto& m : suite1.markets) {
      if (m.size() > 3 || m.cost() != 0) continue;
      ++used;
      const auto rep = threshold_seq_optimum(ScreeningInstance(m));
      const Real slack = 1e-9L * std::max<Real>(1, rep.pi_star_bound);
      ok = ok && rep.pi_static <= rep.pi_seq_threshold + slack &&
           rep.pi_seq_threshold <= rep.pi_star_bound + slack &&
           rep.pi_static >= 0.5L * rep.pi_seq_threshold - slack;
    }
    ok = ok && used >= 20;
    // identical types collapse the sandwich to equality
    const MarketInstance ident({{0.5L, SegmentDistribution::uniform(0, 1)},
                                {0.5L, SegmentDistribution::uniform(0, 1)}},
                               0);
    const auto rep = threshold_seq_optimum(ScreeningInstance(ident));
    ok = ok && std::fabs(rep.pi_static - rep.pi_seq_threshold) <= 1e-9L &&
         std::fabs(rep.pi_seq_threshold - rep.pi_star_bound) <= 1e-9L;
    report(9, "static <= threshold menu <= discrimination, with the half floor", ok,
           std::to_string(used) + " small markets, identical-types gap " +
               fmt(std::fabs(rep.pi_star_bound - rep.pi_static)));
  }

  // ---- criterion 10: enumeration oracle equivalence on atomic markets
  {
    std::mt19937_64 rng(4242);
    bool ok = true;
    for (int i = 0; i < 200; ++i) {
      const auto m = random_atomic_market(rng, 3, 5);
      const auto res = optimal_uniform_price(m);
      std::vector<Real> atoms;
      for (const auto& s : m.segments()) {
        atoms.insert(atoms.end(), s.dist.atoms().begin(), s.dist.atoms().end());
      }
      std::sort(atoms.begin(), atoms.end());
      atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
      Real best = 0, best_price = 0;
      bool seen = false;
      for (Real p : atoms) {
        const Real f = uniform_market_profit(m, p);
        const Real eps = 64 * std::numeric_limits<Real>::epsilon() *
                         std::max<Real>(1, std::fabs(best));
        if (!seen || f > best + eps) {
          seen = true;
          best = f;
          best_price = p;
        }
      }
      ok = ok && res.price == best_price && res.profit == best;
    }
    report(10, "optimal uniform price matches brute-force atom enumeration exactly", ok,
           "200 markets, K <= 3, <= 5 atoms each");
  }

  std::printf("ACCEPTANCE: %d/10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
