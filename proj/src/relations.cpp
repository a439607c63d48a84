#include "tfun/relations.hpp"

#include <algorithm>

namespace tfun {

namespace {

void check_level(const WordMap& f, int n) {
  if (n < 0 || n >= f.width)
    throw Error("coordinate level " + std::to_string(n) + " out of range for width " +
                std::to_string(f.width));
}

// Shared input validation: sequences must be start-anchored and, when their
// coord tag is set, must actually be the level the relation expects.
void check_input_seq(const BitSeq& s, int level, int64_t min_len, const char* name) {
  if (s.start != 0)
    throw Error(std::string(name) + " must start at index 0, got " +
                std::to_string(s.start));
  if (s.coord >= 0 && s.coord != level)
    throw Error(std::string(name) + " is tagged level " + std::to_string(s.coord) +
                ", expected " + std::to_string(level));
  if (s.size() < min_len)
    throw Error(std::string(name) + " covers " + std::to_string(s.size()) +
                " bits, need " + std::to_string(min_len));
}

}  // namespace

BitSeq coordinate_sequence(const WordMap& f, const Word& x0, int n, uint64_t length) {
  check_level(f, n);
  if (length == 0) throw Error("sequence length must be >= 1");
  BitSeq s;
  s.coord = n;
  s.bits.reserve(length);
  Word x = x0;
  for (uint64_t i = 0; i < length; ++i) {
    s.bits.push_back(static_cast<uint8_t>(x.bit(n)));
    if (i + 1 < length) x = f(x);
  }
  return s;
}

BitSeq coordinate_sequence(const TFunction& f, const Word& x0, int n, uint64_t length) {
  return coordinate_sequence(as_map(f), x0, n, length);
}

std::vector<BitSeq> coordinate_slices(const WordMap& f, const Word& x0,
                                      const std::vector<int>& levels, uint64_t length) {
  for (int n : levels) check_level(f, n);
  if (length == 0) throw Error("sequence length must be >= 1");
  std::vector<BitSeq> out(levels.size());
  for (size_t t = 0; t < levels.size(); ++t) {
    out[t].coord = levels[t];
    out[t].bits.reserve(length);
  }
  Word x = x0;
  for (uint64_t i = 0; i < length; ++i) {
    for (size_t t = 0; t < levels.size(); ++t)
      out[t].bits.push_back(static_cast<uint8_t>(x.bit(levels[t])));
    if (i + 1 < length) x = f(x);
  }
  return out;
}

std::vector<BitSeq> coordinate_slices(const TFunction& f, const Word& x0,
                                      const std::vector<int>& levels, uint64_t length) {
  return coordinate_slices(as_map(f), x0, levels, length);
}

uint64_t min_period_pow2(const std::vector<uint8_t>& bits) {
  uint64_t len = bits.size();
  for (uint64_t p = 1;; p <<= 1) {
    if (p >= len) return p;
    bool ok = true;
    for (uint64_t i = 0; i + p < len; ++i) {
      if (bits[i] != bits[i + p]) {
        ok = false;
        break;
      }
    }
    if (ok) return p;
  }
}

HalfPeriodReport check_half_period(const BitSeq& s, int n) {
  if (n < 0 || n > 62) throw Error("level out of range");
  int64_t half = int64_t{1} << n;
  if (s.size() < half + 1)
    throw Error("sequence of " + std::to_string(s.size()) +
                " bits is too short to check a 2^" + std::to_string(n) + " half-period");
  HalfPeriodReport rep;
  rep.n = n;
  rep.holds = true;
  for (int64_t i = 0; i + half < s.size(); ++i) {
    if (s.bits[i + half] == s.bits[i]) {
      rep.holds = false;
      rep.witness = s.start + i;
      return rep;
    }
  }
  return rep;
}

const char* to_string(RelationVerdict v) {
  switch (v) {
    case RelationVerdict::Holds: return "holds";
    case RelationVerdict::Violated: return "violated";
    case RelationVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(RelationKind k) {
  return k == RelationKind::Linear ? "linear" : "quadratic";
}

namespace {

// Shared period judgment: measured period of y against the bound 2^radius.
void judge_period(RelationProfile& p) {
  uint64_t bound = uint64_t{1} << p.radius;
  uint64_t window = p.y.bits.size();
  if (window < bound) {
    p.verdict = RelationVerdict::Inconclusive;
    return;
  }
  if (p.measured_period <= bound) {
    p.verdict = RelationVerdict::Holds;
    return;
  }
  p.verdict = RelationVerdict::Violated;
  for (uint64_t i = 0; i + bound < window; ++i) {
    if (p.y.bits[i] != p.y.bits[i + bound]) {
      p.witness = static_cast<int64_t>(i + bound);
      break;
    }
  }
}

}  // namespace

RelationProfile linear_profile(const BitSeq& chi_lo, const BitSeq& chi_hi, int n, int n2) {
  if (n2 < 1) throw Error("radius must be >= 1");
  if (n < n2 + 1)
    throw Error("level " + std::to_string(n) + " below theorem range (need n >= " +
                std::to_string(n2 + 1) + ")");
  int64_t half = int64_t{1} << (n - 1);
  check_input_seq(chi_lo, n - 1, half, "lower sequence");
  check_input_seq(chi_hi, n, 2 * half, "upper sequence");

  RelationProfile p;
  p.kind = RelationKind::Linear;
  p.n = n;
  p.radius = n2;
  const auto& lo = chi_lo.bits;
  const auto& hi = chi_hi.bits;
  // y over everything both sequences can support, not just the minimum.
  int64_t window = std::min<int64_t>(chi_lo.size(), chi_hi.size() - half);
  p.constant = lo[0] ^ hi[0] ^ hi[half];
  p.y.bits.resize(window);
  for (int64_t i = 0; i < window; ++i)
    p.y.bits[i] = static_cast<uint8_t>(hi[i + half] ^ lo[i] ^ hi[i] ^ p.constant);
  p.measured_period = min_period_pow2(p.y.bits);
  judge_period(p);
  return p;
}

namespace {

// The trajectory mod 2^{n+1} cycles after at most 2^{n+1} steps, so a window
// of one full cycle plus the period bound makes the verdict exact for the
// infinite sequence, not just for the sampled prefix.
uint64_t exhaustive_window(int n, int radius, int64_t shift) {
  if (n > 24)
    throw Error("level " + std::to_string(n) +
                " too large for an exhaustive window; slice coordinates directly");
  return (uint64_t{1} << (n + 1)) + (uint64_t{1} << radius) + static_cast<uint64_t>(shift);
}

}  // namespace

RelationProfile extract_linear(const WordMap& f, const Word& x0, int n, int n2) {
  if (n >= f.width)
    throw Error("width " + std::to_string(f.width) + " too small for level " +
                std::to_string(n));
  if (n2 < 1) throw Error("radius must be >= 1");
  if (n < n2 + 1)
    throw Error("level " + std::to_string(n) + " below theorem range (need n >= " +
                std::to_string(n2 + 1) + ")");
  uint64_t length = exhaustive_window(n, n2, int64_t{1} << (n - 1));
  auto slices = coordinate_slices(f, x0, {n - 1, n}, length);
  return linear_profile(slices[0], slices[1], n, n2);
}

RelationProfile extract_linear(const TFunction& f, const Word& x0, int n, int n2) {
  return extract_linear(as_map(f), x0, n, n2);
}

IndependenceReport check_n_independence(const WordMap& f, const Word& x0, int n_lo,
                                        int n_hi, int n2) {
  if (n_lo < n2 + 1 || n_lo >= n_hi)
    throw Error("need " + std::to_string(n2 + 1) + " <= n_lo < n_hi");
  if (n_hi >= f.width)
    throw Error("width " + std::to_string(f.width) + " too small for level " +
                std::to_string(n_hi));
  std::vector<int> levels;
  for (int n = n_lo - 1; n <= n_hi; ++n) levels.push_back(n);
  uint64_t length = exhaustive_window(n_hi, n2, int64_t{1} << (n_hi - 1));
  auto slices = coordinate_slices(f, x0, levels, length);

  IndependenceReport rep;
  rep.n_lo = n_lo;
  rep.n_hi = n_hi;
  for (int n = n_lo; n <= n_hi; ++n)
    rep.profiles.push_back(linear_profile(slices[n - (n_lo - 1) - 1],
                                          slices[n - (n_lo - 1)], n, n2));
  rep.holds = true;
  for (size_t t = 0; t < rep.profiles.size(); ++t) {
    if (rep.profiles[t].verdict != RelationVerdict::Holds) {
      rep.holds = false;
      rep.witness = {{n_lo + static_cast<int>(t), rep.profiles[t].witness.value_or(-1)}};
      return rep;
    }
  }
  // Every level holds with period dividing 2^n2, so the first 2^n2 bits
  // determine each y entirely; comparing that prefix decides equality.
  int64_t common = int64_t{1} << n2;
  const auto& base = rep.profiles.front().y.bits;
  for (size_t t = 1; t < rep.profiles.size(); ++t) {
    const auto& yt = rep.profiles[t].y.bits;
    for (int64_t i = 0; i < common; ++i) {
      if (yt[i] != base[i]) {
        rep.holds = false;
        rep.witness = {n_lo + static_cast<int>(t), i};
        return rep;
      }
    }
  }
  return rep;
}

IndependenceReport check_n_independence(const TFunction& f, const Word& x0, int n_lo,
                                        int n_hi, int n2) {
  return check_n_independence(as_map(f), x0, n_lo, n_hi, n2);
}

RelationProfile quadratic_profile(const BitSeq& chi_lo2, const BitSeq& chi_lo1,
                                  const BitSeq& chi_hi, int n, int n3) {
  if (n3 < 1) throw Error("radius must be >= 1");
  if (n < n3 + 2)
    throw Error("level " + std::to_string(n) + " below theorem range (need n >= " +
                std::to_string(n3 + 2) + ")");
  int64_t quarter = int64_t{1} << (n - 2);
  check_input_seq(chi_lo2, n - 2, 2 * quarter, "level n-2 sequence");
  check_input_seq(chi_lo1, n - 1, 2 * quarter, "level n-1 sequence");
  check_input_seq(chi_hi, n, 3 * quarter, "upper sequence");

  const auto& a = chi_lo2.bits;
  const auto& b = chi_lo1.bits;
  const auto& hi = chi_hi.bits;
  int64_t window = std::min({chi_lo2.size(), chi_lo1.size(), chi_hi.size() - quarter});
  std::vector<uint8_t> y_of[2];
  uint64_t period_of[2];
  for (int theta = 0; theta < 2; ++theta) {
    auto& y = y_of[theta];
    y.resize(window);
    for (int64_t i = 0; i < window; ++i)
      y[i] = static_cast<uint8_t>(hi[i + quarter] ^ (a[i] & b[i]) ^
                                  (theta & (a[i] ^ b[i])) ^ hi[i]);
    period_of[theta] = min_period_pow2(y);
  }

  RelationProfile p;
  p.kind = RelationKind::Quadratic;
  p.n = n;
  p.radius = n3;
  p.theta_period[0] = period_of[0];
  p.theta_period[1] = period_of[1];

  uint64_t bound = uint64_t{1} << n3;
  int pick;
  if (n3 > 1) {
    bool q0 = period_of[0] <= bound, q1 = period_of[1] <= bound;
    if (!q0 && !q1) {
      p.no_constant_theta = true;
      pick = period_of[0] <= period_of[1] ? 0 : 1;
      p.y.bits = y_of[pick];
      p.measured_period = period_of[pick];
      p.constant = p.y.bits[0];
      p.verdict = RelationVerdict::Violated;
      for (uint64_t i = 0; i + bound < p.y.bits.size(); ++i) {
        if (p.y.bits[i] != p.y.bits[i + bound]) {
          p.witness = static_cast<int64_t>(i + bound);
          break;
        }
      }
      return p;
    }
    p.ambiguous_theta = q0 && q1;
    pick = q0 && (!q1 || period_of[0] <= period_of[1]) ? 0 : 1;
  } else {
    p.period_checked = false;
    p.ambiguous_theta = period_of[0] == period_of[1];
    pick = period_of[0] <= period_of[1] ? 0 : 1;
  }
  p.theta = pick;
  p.y.bits = y_of[pick];
  p.measured_period = period_of[pick];
  p.constant = p.y.bits[0];
  p.verdict = RelationVerdict::Holds;
  return p;
}

RelationProfile extract_quadratic(const WordMap& f, const Word& x0, int n, int n3) {
  if (n >= f.width)
    throw Error("width " + std::to_string(f.width) + " too small for level " +
                std::to_string(n));
  if (n3 < 1) throw Error("radius must be >= 1");
  if (n < n3 + 2)
    throw Error("level " + std::to_string(n) + " below theorem range (need n >= " +
                std::to_string(n3 + 2) + ")");
  uint64_t length = exhaustive_window(n, n3, int64_t{1} << (n - 2));
  auto slices = coordinate_slices(f, x0, {n - 2, n - 1, n}, length);
  return quadratic_profile(slices[0], slices[1], slices[2], n, n3);
}

RelationProfile extract_quadratic(const TFunction& f, const Word& x0, int n, int n3) {
  return extract_quadratic(as_map(f), x0, n, n3);
}

RecoveryResult recover(const BitSeq& chi_hi, const BitSeq& chi_lo, int n2, int n) {
  if (n < 0) n = chi_hi.coord;
  if (n < 0) throw Error("level of the upper sequence unknown; pass n explicitly");
  if (n2 < 1) throw Error("radius must be >= 1");
  if (n - 1 < n2 + 1)
    throw Error("need n - 1 >= " + std::to_string(n2 + 1) +
                " so the relation applies at every recovered level");
  int64_t half = int64_t{1} << (n - 1);
  check_input_seq(chi_hi, n, 2 * half, "upper sequence");
  check_input_seq(chi_lo, n - 1, half, "lower sequence");

  RecoveryResult out;
  out.n = n;
  out.floor_level = n2;

  const auto& lo = chi_lo.bits;
  const auto& hi = chi_hi.bits;
  int constant = lo[0] ^ hi[0] ^ hi[half];
  out.y.bits.resize(half);
  for (int64_t i = 0; i < half; ++i)
    out.y.bits[i] = static_cast<uint8_t>(hi[i + half] ^ lo[i] ^ hi[i] ^ constant);

  int64_t bound = int64_t{1} << n2;
  for (int64_t i = bound; i < half; ++i)
    if (out.y.bits[i] != out.y.bits[i - bound]) throw RelationViolated(n, i);

  std::vector<uint8_t> upper(chi_lo.bits.begin(), chi_lo.bits.begin() + half);
  for (int m = n - 2; m >= n2; --m) {
    int64_t p = int64_t{1} << m;
    int base = upper[0] ^ upper[p];
    std::vector<uint8_t> cand(2 * p);
    cand[0] = 0;
    for (int64_t i = 1; i < p; ++i)
      cand[i] = static_cast<uint8_t>(upper[i + p] ^ upper[i] ^ base ^ out.y.bits[i]);
    for (int64_t i = 0; i < p; ++i) cand[i + p] = static_cast<uint8_t>(1 - cand[i]);

    RecoveredLevel lvl;
    lvl.m = m;
    lvl.cand0.bits = cand;
    lvl.cand0.coord = m;
    lvl.cand1 = complement(lvl.cand0);
    out.levels.push_back(std::move(lvl));
    upper = std::move(cand);
  }
  return out;
}

}  // namespace tfun
