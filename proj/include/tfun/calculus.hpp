#pragma once

// Finite-precision 2-adic differential calculus on word maps: numeric
// derivatives modulo 2^M, search for the minimal uniform-differentiability
// radius, and the certification theorems that turn finite cycle checks into
// transitivity verdicts.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tfun/expr.hpp"
#include "tfun/word.hpp"

namespace tfun {

// A map on words of one width.  Everything in this header analyzes WordMaps,
// so table-backed generators and deliberately broken test stubs get the same
// treatment as expression-backed functions.
struct WordMap {
  int width = 0;
  std::function<Word(const Word&)> fn;

  Word operator()(const Word& x) const {
    if (x.width() != width) throw WidthMismatch(x.width(), width);
    return fn(x);
  }
};

WordMap as_map(const TFunction& f);
// outer(inner(x)); widths must agree.
WordMap compose(const WordMap& outer, const WordMap& inner);
// f applied e times.
WordMap power_map(const WordMap& f, uint64_t e);

// --- compatibility (the 1-Lipschitz property) ---

struct CompatWitness {
  uint64_t a = 0, b = 0;
  int s = 0;  // a ≡ b mod 2^s but f(a) ≢ f(b) mod 2^s
};

struct CompatibilityReport {
  bool pass = true;
  uint64_t checked = 0;
  std::optional<CompatWitness> witness;
};

// Checks f(a) ≡ f(b) (mod 2^s) whenever a ≡ b (mod 2^s): a structured sweep
// over pairs (a, a+2^s) followed by `samples` seeded random pairs.
CompatibilityReport check_compatibility(const WordMap& f, uint64_t samples = 2000,
                                        uint64_t seed = 0x7c3
                                        );
CompatibilityReport check_compatibility(const TFunction& f, uint64_t samples = 2000,
                                        uint64_t seed = 0x7c3);

// --- derivatives ---

// f(x+2^k) - f(x) was not divisible by 2^k; no derivative value exists at
// this radius (never happens for a compatible map).
struct NotDivisible : Error {
  uint64_t x;
  int k;
  NotDivisible(uint64_t x_, int k_)
      : Error("difference at x=" + std::to_string(x_) + " not divisible by 2^" +
              std::to_string(k_)),
        x(x_), k(k_) {}
};

// d = ((f(x+2^k) - f(x)) / 2^k) mod 2^m — the unique candidate derivative
// mod 2^m at radius k.  Requires k + m <= width.
Word derivative_mod(const WordMap& f, int m, int k, const Word& x);
Word derivative_mod(const TFunction& f, int m, int k, const Word& x);

enum class DiffVerdict { CertifiedAtWidth, Refuted, Inconclusive };

struct DiffWitness {
  uint64_t x = 0, h = 0;  // f(x+h) ≢ f(x) + d·h (mod 2^{ord2(h)+m})
};

struct DiffReport {
  int m = 0;      // modulus exponent
  int k = 0;      // certified radius when CertifiedAtWidth, else last radius tried
  int width = 0;  // word width the scan ran at
  DiffVerdict verdict = DiffVerdict::Inconclusive;
  std::vector<uint64_t> table;  // x mod 2^k -> derivative mod 2^m (certified only)
  // Refuted/Inconclusive: the (x, h) that broke the last radius tried.
  // CertifiedAtWidth with k > 1: the pair that broke radius k-1, i.e. the
  // evidence that the certified radius is minimal.  Absent when k == 1.
  std::optional<DiffWitness> witness;
};

const char* to_string(DiffVerdict v);

// Searches k = 1..k_max for the smallest radius at which the derivative table
// built from derivative_mod satisfies f(x+h) ≡ f(x) + d·h (mod 2^{j+m}) for
// all x mod 2^{min(width-m, k+m+2)} and h = 2^j·r with k <= j <= width-m-1,
// r = 1 plus h_samples seeded odd multipliers per j.  The j = k, r = 1 pass
// doubles as the table-periodicity check: it asserts derivative_mod at any x
// equals the table entry for x mod 2^k.  k_max <= 0 selects
// min(8, width-m-1).  The verdict only ever speaks about this width.
DiffReport estimate_nm(const WordMap& f, int m, int k_max = 0, int h_samples = 16,
                       int workers = 0);
DiffReport estimate_nm(const TFunction& f, int m, int k_max = 0, int h_samples = 16,
                       int workers = 0);

// --- brute-force permutation / cycle structure, n <= min(width, 24) ---

bool is_bijective_bruteforce(const WordMap& f, int n);
bool is_transitive_bruteforce(const WordMap& f, int n);
bool is_bijective_bruteforce(const TFunction& f, int n);
bool is_transitive_bruteforce(const TFunction& f, int n);

// --- transitivity certification ---

enum class TransVerdict { CertifiedByTheorem, BruteForceOnly, Refuted };

const char* to_string(TransVerdict v);

struct TransitivityCertificate {
  TransVerdict verdict = TransVerdict::Refuted;
  int n2 = -1;          // certified derivative radius backing the theorem path
  int checked_mod = 0;  // exponent of the largest modulus cycle-checked
  DiffReport diff;      // the m=2 estimation this verdict rests on
};

// If estimate_nm(f, 2) certifies at radius n2, one cycle walk mod 2^{n2+2}
// decides transitivity at every width (single cycle mod 2^{n2+2} extends
// upward; a broken cycle at any modulus refutes outright).  Without a
// certified radius, falls back to walking n = 1..brute_n and reports
// BruteForceOnly — a statement about tested moduli, not all of them.
// k_max <= 0 and brute_n <= 0 select min(8, width-3) and min(width, 12).
TransitivityCertificate certify_transitive(const WordMap& f, int k_max = 0,
                                           int brute_n = 0, int workers = 0);
TransitivityCertificate certify_transitive(const TFunction& f, int k_max = 0,
                                           int brute_n = 0, int workers = 0);

// --- derivative product along an orbit ---

struct ProductCheck {
  bool pass = false;
  int n2 = 0;
  uint64_t z_count = 0;
  std::optional<uint64_t> witness_z;        // first z whose product != 1
  std::optional<uint64_t> witness_product;  // its product mod 4
};

// For each start z in [0, z_count): the product of derivative_mod(f, 2, n2, ·)
// over 2^{n2} consecutive iterates must be ≡ 1 (mod 4).  Requires
// n2 + 2 <= width.
ProductCheck derivative_product_check(const WordMap& f, int n2, uint64_t z_count,
                                      int workers = 0);
ProductCheck derivative_product_check(const TFunction& f, int n2, uint64_t z_count,
                                      int workers = 0);

// --- iterate-displacement probe ---

// phi(x) = (f^{2^{n-1}}(x) - x) / 2^{n-1} mod 8 was even (or the difference
// was not divisible by 2^{n-1}); for a transitive map phi is always odd.
struct AlphaViolation : Error {
  uint64_t x;
  uint64_t diff;  // f^{2^{n-1}}(x) - x at full width
  int n;
  AlphaViolation(uint64_t x_, uint64_t diff_, int n_)
      : Error("displacement after 2^" + std::to_string(n_ - 1) + " steps from x=" +
              std::to_string(x_) + " is " + std::to_string(diff_) +
              ", not an odd multiple of 2^" + std::to_string(n_ - 1)),
        x(x_), diff(diff_), n(n_) {}
};

struct PhiSample {
  uint64_t x = 0;
  uint64_t phi = 0;  // mod 8, odd
};

struct ProofProbe {
  int n = 0;
  std::vector<PhiSample> phi;  // phi.front() is the probe point
  int alpha = 0;               // bit 0 of phi at the probe point (1 on success)
  int beta = 0;                // bit 1 of phi at the probe point
  int beta_bits = 0;           // cross-check: bit n-1 of x + bit n of x + bit n of f^{2^{n-1}}(x)
  int gamma = 0;               // bit 2 of phi at the probe point
  int k3 = -1;                 // radius used for mod-8 derivatives, -1 if none found
  std::vector<uint8_t> lambda;  // bit 1 of (f^i)'(x) mod 8 = prod_{j<i} f'(f^j(x)), i = 0..
  std::vector<uint8_t> eta;     // bit 2 of the same products
};

// Measures the displacement phi of the 2^{n-1}-th iterate at x (and at
// phi_samples-1 following start points), decomposes it into the alpha/beta/
// gamma bits, cross-checks beta against the coordinate-bit formula, and
// tabulates the lambda/eta bits of iterated-derivative products mod 8.
// Requires width >= n+2 and n >= 2.  k3 <= 0 auto-estimates the mod-8 radius;
// if none certifies, lambda/eta stay empty.
ProofProbe proof_probe(const WordMap& f, int n, const Word& x, int k3 = 0,
                       int prod_len = 16, int phi_samples = 1);
ProofProbe proof_probe(const TFunction& f, int n, const Word& x, int k3 = 0,
                       int prod_len = 16, int phi_samples = 1);

}  // namespace tfun
