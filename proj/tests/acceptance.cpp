// Release gate: nine checks, each printed as one [PASS]/[FAIL] line with its
// runtime.  The process exit code is the number of failed checks, so the gate
// can run under ctest.  Checks are deliberately end-to-end: they exercise the
// public API the way the command-line tool and downstream analyses do, with
// expected values that were computed independently, and they time-bound the
// expensive paths.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "tfun/calculus.hpp"
#include "tfun/expr.hpp"
#include "tfun/generators.hpp"
#include "tfun/relations.hpp"
#include "tfun/word.hpp"

using namespace tfun;

namespace {

const char* kSquareOr = "x+(x**2|5)";
const char* kMonster =
    "x/3 + (1/3)**x + 4*(1 - 2*~(x & x**2 + x**3 | x**4)/(3 - 4*(5 + 6*x**5)"
    "**(x**6 ^ x**7)))**(7 + (8*x**8)/(9 + 10*x**9))";

struct SuiteEntry {
  const char* name;
  const char* expr;
};

const SuiteEntry kSuite[] = {
    {"counter", "x+1"},
    {"square-or", "x+(x**2|5)"},
    {"poly2", "1+3*x+2*x**2"},
    {"expo", "3*x+3**x"},
    {"frac", "1+x+4/(1+2*x)"},
    {"monster", kMonster},
};

bool expect(std::string& detail, bool cond, const std::string& msg) {
  if (!cond) detail += "      ! " + msg + "\n";
  return cond;
}

void note(std::string& detail, const std::string& msg) {
  detail += "      - " + msg + "\n";
}

class Gate {
 public:
  void run(int id, const char* title, double budget_secs,
           const std::function<bool(std::string&)>& body) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail += std::string("      ! unexpected exception: ") + e.what() + "\n";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && secs > budget_secs) {
      ok = false;
      detail += "      ! exceeded the time budget: " + std::to_string(secs) + "s > " +
                std::to_string(budget_secs) + "s\n";
    }
    std::printf("[%s] %d: %s (%.2fs)\n", ok ? "PASS" : "FAIL", id, title, secs);
    std::fputs(detail.c_str(), stdout);
    std::fflush(stdout);
    if (!ok) ++failures_;
  }

  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

// [1] The M=2 radius search must land on radius 2 for the square-or example,
// the certificate must come from the theorem path (one cycle walk mod 2^4),
// and brute-force cycle walks at every width up to 16 must agree.
bool criterion_radius_and_certificate(std::string& detail) {
  bool ok = true;
  TFunction f(kSquareOr, 16);
  DiffReport rep = estimate_nm(f, 2);
  ok &= expect(detail, rep.verdict == DiffVerdict::CertifiedAtWidth,
               "M=2 estimate did not certify");
  ok &= expect(detail, rep.k == 2,
               "expected radius 2, estimate returned " + std::to_string(rep.k));
  TransitivityCertificate cert = certify_transitive(f);
  ok &= expect(detail, cert.verdict == TransVerdict::CertifiedByTheorem,
               std::string("expected a theorem-backed certificate, got ") +
                   to_string(cert.verdict));
  ok &= expect(detail, cert.checked_mod == 4,
               "expected the cycle walk to run modulo 2^4, ran modulo 2^" +
                   std::to_string(cert.checked_mod));
  int brute_agree = 0;
  for (int n = 1; n <= 16; ++n)
    brute_agree += is_transitive_bruteforce(TFunction(kSquareOr, n), n) ? 1 : 0;
  ok &= expect(detail, brute_agree == 16,
               "brute-force walks disagreed at " + std::to_string(16 - brute_agree) +
                   " widths");
  note(detail, "radius 2 certified, cycle walk mod 2^4, brute-force agreement at widths 1..16");
  return ok;
}

// [2] For every suite function: certify the M=2 radius, then the linear
// relation between adjacent coordinate slices must hold at every admissible
// level up to 18 with a correction sequence whose period divides 2^n2, the
// extracted corrections must not depend on the level, and for the square-or
// example the period must stay <= 4.
bool criterion_linear_suite(std::string& detail) {
  bool ok = true;
  const int width = 20, n_top = 18;
  for (const SuiteEntry& entry : kSuite) {
    TFunction f(entry.expr, width);
    DiffReport rep = estimate_nm(f, 2);
    if (!expect(detail, rep.verdict == DiffVerdict::CertifiedAtWidth,
                std::string(entry.name) + ": M=2 estimate did not certify")) {
      ok = false;
      continue;
    }
    int n2 = rep.k;
    uint64_t bound = uint64_t{1} << n2;
    Word x0(1, width);
    uint64_t worst_period = 1;
    bool levels_ok = true;
    for (int n = n2 + 1; n <= n_top; ++n) {
      RelationProfile p = extract_linear(f, x0, n, n2);
      levels_ok &= expect(detail, p.verdict == RelationVerdict::Holds,
                          std::string(entry.name) + ": relation violated at level " +
                              std::to_string(n));
      levels_ok &= expect(detail, p.measured_period != 0 && bound % p.measured_period == 0,
                          std::string(entry.name) + ": correction period " +
                              std::to_string(p.measured_period) +
                              " does not divide 2^n2 at level " + std::to_string(n));
      if (p.measured_period > worst_period) worst_period = p.measured_period;
    }
    if (std::string(entry.name) == "square-or")
      levels_ok &= expect(detail, worst_period <= 4,
                          "square-or correction period exceeded 4");
    IndependenceReport ind = check_n_independence(f, x0, n2 + 1, n_top, n2);
    levels_ok &= expect(detail, ind.holds,
                        std::string(entry.name) + ": corrections depend on the level");
    ok &= levels_ok;
    note(detail, std::string(entry.name) + ": n2=" + std::to_string(n2) +
                     ", levels " + std::to_string(n2 + 1) + ".." + std::to_string(n_top) +
                     " hold, worst correction period " + std::to_string(worst_period) +
                     ", level-independent");
  }
  return ok;
}

// [3] The quadratic relation with a constant cross coefficient, at every
// level in [n3+2, 16] for the square-or and polynomial examples.  This check
// states the claim exactly as made and measures it.
bool criterion_quadratic_constant_theta(std::string& detail) {
  bool ok = true;
  const int width = 20;
  for (const char* expr : {kSquareOr, "1+3*x+2*x**2"}) {
    TFunction f(expr, width);
    DiffReport rep = estimate_nm(f, 3);
    if (!expect(detail, rep.verdict == DiffVerdict::CertifiedAtWidth,
                std::string(expr) + ": M=3 estimate did not certify")) {
      ok = false;
      continue;
    }
    int n3 = rep.k;
    Word x0(1, width);
    int violated = 0, total = 0;
    RelationProfile first_bad;
    bool have_bad = false;
    for (int n = n3 + 2; n <= 16; ++n) {
      RelationProfile p = extract_quadratic(f, x0, n, n3);
      ++total;
      if (p.verdict != RelationVerdict::Holds) {
        ++violated;
        if (!have_bad) {
          first_bad = p;
          have_bad = true;
        }
      }
    }
    ok &= expect(detail, violated == 0,
                 std::string(expr) + ": violated at " + std::to_string(violated) + " of " +
                     std::to_string(total) + " levels (n3=" + std::to_string(n3) + ")");
    if (have_bad) {
      note(detail, std::string(expr) + ": first violation at level " +
                       std::to_string(first_bad.n) + ": correction period " +
                       std::to_string(first_bad.theta_period[0]) + " with theta=0 and " +
                       std::to_string(first_bad.theta_period[1]) +
                       " with theta=1, both above the bound 2^n3 = " +
                       std::to_string(uint64_t{1} << n3));
    }
  }
  if (!ok) {
    note(detail,
         "no constant cross coefficient satisfies the level-shift identity for these "
         "maps; the identity becomes exact only when the coefficient is allowed to "
         "drift along the orbit (demonstrated by the relations unit test "
         "\"level-shift relation with a drifting cross coefficient is exact\")");
  }
  return ok;
}

// [4] Bits-only recovery: observe levels 16 and 15 of the square-or orbit at
// width 20, recover candidate pairs for every level down to the radius floor,
// and verify 12 of them against the directly sliced truth.  The recovery must
// not evaluate the function at all.
bool criterion_recovery(std::string& detail) {
  bool ok = true;
  const int width = 20, n = 16;
  TFunction f(kSquareOr, width);
  std::vector<int> levels;
  for (int m = 3; m <= n; ++m) levels.push_back(m);
  auto slices = coordinate_slices(f, Word(1, width), levels, uint64_t{1} << n);

  uint64_t evals_before = eval_count();
  RecoveryResult r = recover(slices[n - 3], slices[n - 1 - 3], 2);
  uint64_t evals_after = eval_count();
  ok &= expect(detail, evals_after == evals_before,
               "recovery evaluated the function " +
                   std::to_string(evals_after - evals_before) + " times");
  ok &= expect(detail, r.n == n && r.floor_level == 2,
               "unexpected recovery shape (n=" + std::to_string(r.n) +
                   ", floor=" + std::to_string(r.floor_level) + ")");

  int matched = 0;
  for (int m = 3; m <= 14; ++m) {
    const RecoveredLevel* lvl = nullptr;
    for (const RecoveredLevel& cand : r.levels)
      if (cand.m == m) lvl = &cand;
    if (!expect(detail, lvl != nullptr,
                "no candidate pair reported for level " + std::to_string(m))) {
      ok = false;
      continue;
    }
    uint64_t period = uint64_t{1} << (m + 1);
    std::vector<uint8_t> truth(slices[m - 3].bits.begin(),
                               slices[m - 3].bits.begin() + period);
    bool hit = lvl->cand0.bits == truth || lvl->cand1.bits == truth;
    ok &= expect(detail, hit,
                 "true level-" + std::to_string(m) + " slice is not among the candidates");
    matched += hit ? 1 : 0;
  }
  note(detail, "levels 3..14 recovered as complementary pairs, " +
                   std::to_string(matched) + "/12 contain the true slice, "
                   "zero function evaluations");
  return ok;
}

// [5] The second half of every period complements the first: checked
// exhaustively at levels 0..16 for every suite function.
bool criterion_half_period(std::string& detail) {
  bool ok = true;
  const int width = 18, n_top = 16;
  std::vector<int> levels;
  for (int nn = 0; nn <= n_top; ++nn) levels.push_back(nn);
  for (const SuiteEntry& entry : kSuite) {
    TFunction f(entry.expr, width);
    auto slices = coordinate_slices(f, Word(1, width), levels,
                                    (uint64_t{1} << (n_top + 1)) + 1);
    for (int nn = 0; nn <= n_top; ++nn) {
      HalfPeriodReport rep = check_half_period(slices[nn], nn);
      ok &= expect(detail, rep.holds,
                   std::string(entry.name) + ": complement identity fails at level " +
                       std::to_string(nn) +
                       (rep.witness ? " (index " + std::to_string(*rep.witness) + ")" : ""));
    }
  }
  note(detail, "all six suite functions, levels 0..16, full-period windows");
  return ok;
}

// [6] The derivative product over 2^n2 consecutive iterates is 1 mod 4 from
// every start residue mod 2^10, for every suite function.
bool criterion_derivative_product(std::string& detail) {
  bool ok = true;
  const int width = 16;
  for (const SuiteEntry& entry : kSuite) {
    TFunction f(entry.expr, width);
    DiffReport rep = estimate_nm(f, 2);
    if (!expect(detail, rep.verdict == DiffVerdict::CertifiedAtWidth,
                std::string(entry.name) + ": M=2 estimate did not certify")) {
      ok = false;
      continue;
    }
    ProductCheck pc = derivative_product_check(f, rep.k, uint64_t{1} << 10);
    ok &= expect(detail, pc.pass && pc.z_count == (uint64_t{1} << 10),
                 std::string(entry.name) + ": product check failed" +
                     (pc.witness_z ? " at z=" + std::to_string(*pc.witness_z) +
                                         " (product " +
                                         std::to_string(pc.witness_product.value_or(0)) + ")"
                                   : ""));
  }
  note(detail, "products over 2^n2 iterates from 1024 start residues, all == 1 mod 4");
  return ok;
}

// [7] The interleaving bijection, exhaustively for every shape m*k <= 16, and
// the univariate column-machine skeleton: single cycle at width k+2 and the
// linear relation holds at the widest level with radius k.
bool criterion_interleave_and_skeleton(std::string& detail) {
  bool ok = true;
  uint64_t checked = 0;
  for (int m = 1; m <= 16; ++m)
    for (int k = 1; m * k <= 16; ++k) {
      int w = m * k;
      for (uint64_t x = 0; x < (uint64_t{1} << w); ++x) {
        if (pack(unpack(Word(x, w), m, k)).value() != x) {
          ok = expect(detail, false,
                      "pack/unpack mismatch at m=" + std::to_string(m) +
                          " k=" + std::to_string(k) + " x=" + std::to_string(x));
          break;
        }
        ++checked;
      }
    }
  note(detail, "interleaving bijection verified on " + std::to_string(checked) +
                   " packed words across all shapes");

  const std::pair<uint64_t, uint64_t> exponent_variants[] = {{1, 0}, {3, 2}};
  for (int k = 2; k <= 4; ++k) {
    for (auto [sigma, epsilon] : exponent_variants) {
      TscSkeleton skel;
      skel.u = as_map(TFunction("x+1", k));
      skel.v.assign(uint64_t{1} << k, 0);
      skel.v[0] = 1;
      skel.sigma = sigma;
      skel.epsilon = epsilon;
      WordMap g = tsc_univariate(skel);
      std::string tag = "skeleton k=" + std::to_string(k) + " sigma=" +
                        std::to_string(sigma) + " epsilon=" + std::to_string(epsilon);
      ok &= expect(detail, is_transitive_bruteforce(g, k + 2),
                   tag + " is not a single cycle at width k+2");
      RelationProfile p = extract_linear(g, Word(1, k + 2), k + 1, k);
      ok &= expect(detail, p.verdict == RelationVerdict::Holds,
                   tag + ": linear relation violated at level k+1");
    }
  }
  note(detail, "skeletons k=2..4 (both exponent variants): single cycles, relation holds");
  return ok;
}

// [8] A two-phase counter-driven pair achieving the longest possible stream
// period p*2^k, with both decimated compositions transitive and obeying the
// linear relation.
bool criterion_counter_driven_pair(std::string& detail) {
  bool ok = true;
  const int k = 10;
  WreathSpec spec;
  spec.k = k;
  spec.family.emplace(0, TFunction(kSquareOr, k));
  spec.family.emplace(1, TFunction("x+2", k));
  spec.control = {0, 1};
  validate(spec);

  uint64_t full = uint64_t{2} << k;  // p * 2^k
  auto stream = wreath_run(spec, Word(0, k), 2 * full);
  uint64_t period = 0;
  for (uint64_t cand = 1; cand <= full && !period; cand <<= 1) {
    bool hit = true;
    for (size_t i = 0; i + cand < stream.size() && hit; ++i)
      hit = stream[i] == stream[i + cand];
    if (hit) period = cand;
  }
  ok &= expect(detail, period == full,
               "stream period " + std::to_string(period) + " != p*2^k = " +
                   std::to_string(full));

  for (int r = 0; r < 2; ++r) {
    WordMap w = wreath_composition(spec, r);
    ok &= expect(detail, is_transitive_bruteforce(w, k),
                 "decimated composition " + std::to_string(r) + " is not a single cycle");
    TransitivityCertificate cert = certify_transitive(w);
    ok &= expect(detail, cert.verdict == TransVerdict::CertifiedByTheorem,
                 "composition " + std::to_string(r) + " missed the theorem path");
    RelationProfile p = extract_linear(w, stream[static_cast<size_t>(r)], 5, 2);
    ok &= expect(detail, p.verdict == RelationVerdict::Holds,
                 "linear relation violated on decimated stream " + std::to_string(r));
  }
  note(detail, "members x + (x**2 | 5) and x + 2, stream period 2*2^10 = " +
                   std::to_string(full) + ", both compositions certified and relation-true");
  return ok;
}

// [9] The mixed-sign construction must stay unresolved at M=2 and must never
// receive a theorem-backed transitivity certificate.
bool criterion_mixed_sign_honesty(std::string& detail) {
  bool ok = true;
  TFunction f("((x ^ -1/3) + 7) ^ -9", 12);
  DiffReport rep = estimate_nm(f, 2);
  ok &= expect(detail, rep.verdict != DiffVerdict::CertifiedAtWidth,
               "M=2 estimate unexpectedly certified a radius");
  note(detail, std::string("M=2 estimate: ") + to_string(rep.verdict) +
                   " after radius " + std::to_string(rep.k));
  TransitivityCertificate cert = certify_transitive(f);
  ok &= expect(detail, cert.verdict != TransVerdict::CertifiedByTheorem,
               "transitivity was certified by theorem despite the unresolved radius");
  ok &= expect(detail, cert.diff.verdict != DiffVerdict::CertifiedAtWidth,
               "certificate carries a certified radius it should not have");
  note(detail, std::string("transitivity: ") + to_string(cert.verdict) +
                   ", cycle-walked through mod 2^" + std::to_string(cert.checked_mod));
  return ok;
}

}  // namespace

int main() {
  std::printf("acceptance gate: nine checks\n");
  Gate gate;
  gate.run(1, "radius estimate and transitivity certificate (square-or)", 5.0,
           criterion_radius_and_certificate);
  gate.run(2, "linear relation suite, levels to 18 at width 20", 120.0,
           criterion_linear_suite);
  gate.run(3, "quadratic relation with a constant cross coefficient", 120.0,
           criterion_quadratic_constant_theta);
  gate.run(4, "bits-only recovery of levels 3..14 from two observed slices", 30.0,
           criterion_recovery);
  gate.run(5, "half-period complement identity, suite-wide", 60.0,
           criterion_half_period);
  gate.run(6, "derivative products over 2^n2 iterates are 1 mod 4", 60.0,
           criterion_derivative_product);
  gate.run(7, "interleaving bijection and univariate column skeletons", 60.0,
           criterion_interleave_and_skeleton);
  gate.run(8, "counter-driven pair with the longest stream period", 60.0,
           criterion_counter_driven_pair);
  gate.run(9, "mixed-sign construction stays honestly unresolved", 60.0,
           criterion_mixed_sign_honesty);
  std::printf("%d of 9 checks passed\n", 9 - gate.failures());
  return gate.failures();
}
