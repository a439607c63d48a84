#include <doctest.h>

#include "tfun/calculus.hpp"
#include "tfun/expr.hpp"
#include "tfun/relations.hpp"

using namespace tfun;

namespace {
const char* kSquareUpdate = "x+(x**2|5)";
const char* kPoly = "1+3*x+2*x**2";

std::string text(const BitSeq& s) {
  std::string out(s.bits.size(), '0');
  for (size_t i = 0; i < s.bits.size(); ++i)
    if (s.bits[i]) out[i] = '1';
  return out;
}
}  // namespace

TEST_CASE("coordinate slicing") {
  TFunction counter("x+1", 8);
  BitSeq level2 = coordinate_sequence(counter, Word(0, 8), 2, 16);
  CHECK(text(level2) == "0000111100001111");
  CHECK(level2.coord == 2);
  CHECK(level2.start == 0);

  auto slices = coordinate_slices(counter, Word(0, 8), {0, 1, 2}, 16);
  REQUIRE(slices.size() == 3);
  CHECK(text(slices[0]) == "0101010101010101");
  CHECK(text(slices[1]) == "0011001100110011");
  CHECK(slices[2] == level2);
}

TEST_CASE("min_period_pow2") {
  CHECK(min_period_pow2({0, 0, 0, 0}) == 1);
  CHECK(min_period_pow2({0, 1, 0, 1, 0, 1}) == 2);
  CHECK(min_period_pow2({1, 0, 0, 0, 1, 0, 0, 0, 1}) == 4);
  CHECK(min_period_pow2({0, 0, 0, 1}) == 4);  // nothing shorter confirmable
}

TEST_CASE("half-period complement identity") {
  TFunction f(kSquareUpdate, 10);
  auto slices = coordinate_slices(f, Word(1, 10), {0, 1, 2, 3, 4}, 64);
  for (int n = 0; n <= 4; ++n) {
    HalfPeriodReport rep = check_half_period(slices[n], n);
    CHECK(rep.holds);
    CHECK(!rep.witness);
  }

  BitSeq zeros{std::vector<uint8_t>(8, 0), 1, 0};
  HalfPeriodReport bad = check_half_period(zeros, 1);
  CHECK(!bad.holds);
  REQUIRE(bad.witness);
  CHECK(*bad.witness == 0);
}

TEST_CASE("linear relation on the square update") {
  TFunction f(kSquareUpdate, 20);
  for (int n = 3; n <= 8; ++n) {
    RelationProfile p = extract_linear(f, Word(1, 20), n, 2);
    CHECK(p.verdict == RelationVerdict::Holds);
    CHECK(p.measured_period == 4);
    CHECK(p.radius == 2);
    CHECK(p.kind == RelationKind::Linear);
    CHECK(!p.witness);
  }

  // radius below the true one turns the same extraction into a violation
  RelationProfile wrong = extract_linear(f, Word(1, 20), 5, 1);
  CHECK(wrong.verdict == RelationVerdict::Violated);
  REQUIRE(wrong.witness);

  IndependenceReport ind = check_n_independence(f, Word(1, 20), 3, 8, 2);
  CHECK(ind.holds);
  CHECK(ind.profiles.size() == 6);
  IndependenceReport broken = check_n_independence(f, Word(1, 20), 3, 6, 1);
  CHECK(!broken.holds);

  CHECK_THROWS_AS(extract_linear(f, Word(1, 20), 2, 2), Error);    // n < n2+1
  CHECK_THROWS_AS(extract_linear(TFunction("x+1", 8), Word(0, 8), 8, 1), Error);
}

TEST_CASE("correction sequence translates along the orbit") {
  // For a start point t steps down the same orbit, the extracted y is the
  // original one shifted by t and rebased: y'(i) = y(i+t) + y(t)  (mod 2).
  TFunction f(kSquareUpdate, 16);
  Word x0(1, 16);
  RelationProfile base = extract_linear(f, x0, 5, 2);
  REQUIRE(base.verdict == RelationVerdict::Holds);
  auto yb = [&](uint64_t i) { return base.y.bits[i % base.measured_period]; };

  Word xt = x0;
  for (uint64_t t = 1; t <= 8; ++t) {
    xt = f(xt);
    RelationProfile shifted = extract_linear(f, xt, 5, 2);
    REQUIRE(shifted.verdict == RelationVerdict::Holds);
    for (uint64_t i = 0; i < 16; ++i)
      CHECK(shifted.y.bits[i % shifted.measured_period] == (yb(i + t) ^ yb(t)));
  }
}

TEST_CASE("quadratic relation holds for the counter and fails for square updates") {
  // counter: radius 1, so the period bound is vacuous and theta settles to 0
  RelationProfile counter = extract_quadratic(TFunction("x+1", 12), Word(0, 12), 5, 1);
  CHECK(counter.verdict == RelationVerdict::Holds);
  CHECK(counter.period_checked == false);
  CHECK(counter.theta == 0);
  CHECK(counter.theta_period[0] == 1);
  CHECK(counter.theta_period[1] == 32);
  CHECK(counter.measured_period == 1);

  // square update: no constant cross coefficient exists; both theta choices
  // leave a correction with full level period 2^n
  TFunction ks(kSquareUpdate, 20);
  RelationProfile q5 = extract_quadratic(ks, Word(1, 20), 5, 3);
  CHECK(q5.verdict == RelationVerdict::Violated);
  CHECK(q5.no_constant_theta);
  CHECK(!q5.theta);
  CHECK(q5.theta_period[0] == 32);
  CHECK(q5.theta_period[1] == 32);
  CHECK(q5.measured_period == 32);
  CHECK(q5.constant == 0);
  REQUIRE(q5.witness);
  CHECK(*q5.witness == 11);
  CHECK(text(q5.y).substr(0, 32) == "00111010001000101010001110111011");

  RelationProfile q6 = extract_quadratic(ks, Word(1, 20), 6, 3);
  CHECK(q6.verdict == RelationVerdict::Violated);
  CHECK(q6.measured_period == 64);

  RelationProfile p4 = extract_quadratic(TFunction(kPoly, 20), Word(1, 20), 4, 2);
  CHECK(p4.verdict == RelationVerdict::Violated);
  CHECK(p4.no_constant_theta);
  CHECK(p4.theta_period[0] == 16);
  CHECK(p4.theta_period[1] == 16);
  REQUIRE(p4.witness);
  CHECK(*p4.witness == 8);
  CHECK(text(p4.y).substr(0, 16) == "0100010011101110");

  CHECK_THROWS_AS(extract_quadratic(ks, Word(1, 20), 4, 3), Error);  // n < n3+2
}

TEST_CASE("level-shift relation with a drifting cross coefficient is exact") {
  // The constant-coefficient quadratic form above fails, but replacing the
  // constant with the drift bits of the iterated derivative product makes the
  // relation exact on the full cycle:
  //   hi(i+q) = lo2(i)*lo1(i) + (lo2(i)+lo1(i))*(beta+lambda(i))
  //             + hi(i) + gamma + eta(i)                       (mod 2)
  // with q = 2^{n-2}, beta/gamma from the displacement probe at level n-1,
  // and lambda/eta the drift bits of prod_{j<i} f'(f^j(x)) mod 8.
  struct Case {
    const char* expr;
    int k3;
    std::vector<int> levels;
    std::vector<uint64_t> starts;
  };
  const Case cases[] = {
      {kSquareUpdate, 3, {5, 6, 7}, {1, 3}},
      {kPoly, 2, {4, 5, 6}, {1, 2}},
      {"x+1", 1, {5}, {0}},
  };
  for (const Case& c : cases) {
    TFunction f(c.expr, 20);
    for (int n : c.levels) {
      uint64_t q = uint64_t{1} << (n - 2);
      uint64_t cycle = uint64_t{1} << (n + 1);
      for (uint64_t x0 : c.starts) {
        ProofProbe probe = proof_probe(f, n - 1, Word(x0, 20), c.k3,
                                       static_cast<int>(cycle));
        REQUIRE(probe.lambda.size() >= cycle);
        auto slices = coordinate_slices(f, Word(x0, 20), {n - 2, n - 1, n},
                                        cycle + q + 1);
        const BitSeq& lo2 = slices[0];
        const BitSeq& lo1 = slices[1];
        const BitSeq& hi = slices[2];
        for (uint64_t i = 0; i < cycle; ++i) {
          int a = lo2.bits[i], b = lo1.bits[i];
          int predicted = (a & b) ^ ((a ^ b) & (probe.beta ^ probe.lambda[i])) ^
                          hi.bits[i] ^ probe.gamma ^ probe.eta[i];
          REQUIRE(hi.bits[i + q] == predicted);
        }
      }
    }
  }
}

TEST_CASE("recovery walks the relation down to the radius floor") {
  TFunction counter("x+1", 10);
  auto slices = coordinate_slices(counter, Word(0, 10), {5, 6}, uint64_t{1} << 6);
  uint64_t evals_before = eval_count();
  RecoveryResult r = recover(slices[1], slices[0], 1);
  CHECK(eval_count() == evals_before);  // bits only, no function evaluation
  CHECK(r.n == 6);
  CHECK(r.floor_level == 1);
  CHECK(text(r.y) == std::string(32, '0'));
  REQUIRE(r.levels.size() == 4);
  CHECK(r.levels[0].m == 4);
  CHECK(r.levels[3].m == 1);
  CHECK(text(r.levels[1].cand0) == "0000000011111111");
  for (const RecoveredLevel& lvl : r.levels) {
    CHECK(lvl.cand1 == complement(lvl.cand0));
    BitSeq truth = coordinate_sequence(counter, Word(0, 10), lvl.m,
                                       uint64_t{1} << (lvl.m + 1));
    bool hit = truth.bits == lvl.cand0.bits || truth.bits == lvl.cand1.bits;
    CHECK(hit);
  }

  TFunction ks(kSquareUpdate, 12);
  auto ks_slices = coordinate_slices(ks, Word(1, 12), {7, 8}, uint64_t{1} << 8);
  RecoveryResult kr = recover(ks_slices[1], ks_slices[0], 2);
  CHECK(kr.floor_level == 2);
  for (const RecoveredLevel& lvl : kr.levels) {
    BitSeq truth = coordinate_sequence(ks, Word(1, 12), lvl.m,
                                       uint64_t{1} << (lvl.m + 1));
    bool hit = truth.bits == lvl.cand0.bits || truth.bits == lvl.cand1.bits;
    CHECK(hit);
  }

  // corrupting the lower sequence breaks the relation and recovery says where
  auto corrupt = ks_slices[0];
  corrupt.bits[9] ^= 1;
  CHECK_THROWS_AS(recover(ks_slices[1], corrupt, 2, 8), RelationViolated);
}
