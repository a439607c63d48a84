#pragma once

// Coordinate-sequence slicing, the half-period identity, linear and quadratic
// relations between adjacent coordinate sequences of a single-cycle map, and
// the bits-only recovery of lower coordinate sequences from two observed ones.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tfun/calculus.hpp"
#include "tfun/expr.hpp"
#include "tfun/word.hpp"

namespace tfun {

// bit i is bit `n` of f^i(x0), for i in [0, length); streaming, O(1) state.
BitSeq coordinate_sequence(const WordMap& f, const Word& x0, int n, uint64_t length);
BitSeq coordinate_sequence(const TFunction& f, const Word& x0, int n, uint64_t length);

// All requested levels sliced from one orbit pass.
std::vector<BitSeq> coordinate_slices(const WordMap& f, const Word& x0,
                                      const std::vector<int>& levels, uint64_t length);
std::vector<BitSeq> coordinate_slices(const TFunction& f, const Word& x0,
                                      const std::vector<int>& levels, uint64_t length);

// Smallest p in {1,2,4,...} with bits[i] == bits[i+p] for every checkable i.
// A result >= bits.size() means no period was confirmed within the window.
uint64_t min_period_pow2(const std::vector<uint8_t>& bits);

struct HalfPeriodReport {
  bool holds = false;
  int n = 0;
  std::optional<int64_t> witness;  // first index with s(i + 2^n) != 1 - s(i)
};

// Verifies s(i + 2^n) == 1 - s(i) over every checkable index of s, which for
// a level-n coordinate slice of a single-cycle map is the statement that the
// second half of each period complements the first.  Requires size >= 2^n + 1.
HalfPeriodReport check_half_period(const BitSeq& s, int n);

enum class RelationKind { Linear, Quadratic };
enum class RelationVerdict { Holds, Violated, Inconclusive };
const char* to_string(RelationVerdict v);
const char* to_string(RelationKind k);

struct RelationProfile {
  RelationKind kind = RelationKind::Linear;
  int n = 0;       // level of the top sequence in the relation
  int radius = 0;  // the differentiability radius the period is judged against
  int constant = 0;  // linear: the start-anchored bit sum; quadratic: y[0]
  BitSeq y;          // extracted correction sequence, window [0, 2^{n-1})
  uint64_t measured_period = 0;
  std::optional<int> theta;    // quadratic only: selected cross-term constant
  uint64_t theta_period[2] = {0, 0};  // quadratic: y-period under theta = 0 / 1
  bool ambiguous_theta = false;       // both theta values meet the period bound
  bool no_constant_theta = false;     // neither does
  bool period_checked = true;  // false when radius == 1 disables the quadratic bound
  RelationVerdict verdict = RelationVerdict::Inconclusive;
  std::optional<int64_t> witness;  // first i with y(i) != y(i - 2^radius)
};

// Linear relation at level n: with C = chi_lo(0) + chi_hi(0) + chi_hi(2^{n-1}),
//   y(i) = chi_hi(i + 2^{n-1}) + chi_lo(i) + chi_hi(i) + C        (mod 2)
// for i in [0, 2^{n-1}).  Holds when the measured period of y divides 2^n2
// within a window of at least 2^n2 bits; a shorter window is Inconclusive.
// chi_lo is the level n-1 slice covering [0, 2^{n-1}); chi_hi the level n
// slice covering [0, 2^n).  Requires n >= n2 + 1.
RelationProfile linear_profile(const BitSeq& chi_lo, const BitSeq& chi_hi, int n, int n2);

// Slices the two coordinate sequences from f's orbit at x0, then applies
// linear_profile.  Requires f.width > n.
RelationProfile extract_linear(const WordMap& f, const Word& x0, int n, int n2);
RelationProfile extract_linear(const TFunction& f, const Word& x0, int n, int n2);

struct IndependenceReport {
  bool holds = false;
  int n_lo = 0, n_hi = 0;
  std::vector<RelationProfile> profiles;  // one per level in [n_lo, n_hi]
  // first disagreement: (level, index) where that level's y differs from n_lo's
  std::optional<std::pair<int, int64_t>> witness;
};

// Extracts y at every level n in [n_lo, n_hi] from one orbit pass and checks
// the sequences agree on their common index range [0, 2^{n_lo - 1}).
IndependenceReport check_n_independence(const WordMap& f, const Word& x0, int n_lo,
                                        int n_hi, int n2);
IndependenceReport check_n_independence(const TFunction& f, const Word& x0, int n_lo,
                                        int n_hi, int n2);

// Quadratic relation at level n: for theta in {0,1} solves
//   y(i) = chi_hi(i + 2^{n-2}) + chi_lo2(i)*chi_lo1(i)
//          + theta*(chi_lo2(i) + chi_lo1(i)) + chi_hi(i)          (mod 2)
// over i in [0, 2^{n-1}) and selects the theta whose y-period divides 2^n3.
// When n3 == 1 the theorem carries no period bound: the smaller-period theta
// is reported, period_checked is false, and the verdict stays Holds.
// chi_lo2/chi_lo1 are levels n-2 and n-1 over [0, 2^{n-1}); chi_hi is level n
// over [0, 2^{n-1} + 2^{n-2}).  Requires n >= n3 + 2.
RelationProfile quadratic_profile(const BitSeq& chi_lo2, const BitSeq& chi_lo1,
                                  const BitSeq& chi_hi, int n, int n3);
RelationProfile extract_quadratic(const WordMap& f, const Word& x0, int n, int n3);
RelationProfile extract_quadratic(const TFunction& f, const Word& x0, int n, int n3);

// The observed sequences are inconsistent with the linear relation (the
// source was not a single-cycle map with the claimed radius, or n2 is wrong).
struct RelationViolated : Error {
  int level;
  int64_t index;
  RelationViolated(int level_, int64_t index_)
      : Error("relation violated at level " + std::to_string(level_) + ", index " +
              std::to_string(index_)),
        level(level_), index(index_) {}
};

struct RecoveredLevel {
  int m = 0;
  BitSeq cand0, cand1;  // full period 2^{m+1}; cand1 = complement(cand0)
};

struct RecoveryResult {
  int n = 0;            // level of the observed upper sequence
  int floor_level = 0;  // lowest recovered level (= n2)
  BitSeq y;             // correction sequence extracted in step 1
  std::vector<RecoveredLevel> levels;  // m = n-2 down to floor_level
};

// Bits-only recovery: given the level-n slice over [0, 2^n) and the level-
// (n-1) slice over [0, 2^{n-1}) of one orbit, extracts y, verifies it is
// 2^n2-periodic (else throws RelationViolated), then walks levels m = n-2
// down to n2 solving the linear relation for the level-m sequence under both
// start-bit branches.  Each level yields a complementary candidate pair whose
// canonical (start bit 0) branch feeds the next level.  The true sequence is
// one of the two candidates at every level.  No function evaluation occurs.
// Requires n - 1 >= n2 + 1; pass n explicitly if chi_hi.coord is unset.
RecoveryResult recover(const BitSeq& chi_hi, const BitSeq& chi_lo, int n2, int n = -1);

}  // namespace tfun
