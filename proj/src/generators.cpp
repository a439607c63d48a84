#include "tfun/generators.hpp"

#include <bit>
#include <memory>
#include <random>

namespace tfun {

int MultiState::k() const {
  if (words.empty()) throw Error("state needs at least one word");
  int w = words.front().width();
  for (const Word& x : words)
    if (x.width() != w) throw WidthMismatch(x.width(), w);
  return w;
}

uint64_t MultiState::column(int j) const {
  uint64_t c = 0;
  for (size_t r = 0; r < words.size(); ++r)
    c |= static_cast<uint64_t>(words[r].bit(j)) << r;
  return c;
}

Word pack(const MultiState& s) {
  int m = s.m(), k = s.k();
  if (m * k > 64)
    throw Error("packed width " + std::to_string(m * k) + " exceeds 64 bits");
  uint64_t v = 0;
  for (int j = 0; j < k; ++j)
    for (int r = 0; r < m; ++r)
      v |= static_cast<uint64_t>(s.words[r].bit(j)) << (j * m + r);
  return Word(v, m * k);
}

MultiState unpack(const Word& x, int m, int k) {
  if (m < 1 || k < 1 || m * k > 64) throw Error("bad unpack shape");
  if (x.width() != m * k) throw WidthMismatch(x.width(), m * k);
  MultiState s;
  for (int r = 0; r < m; ++r) {
    uint64_t v = 0;
    for (int j = 0; j < k; ++j)
      v |= static_cast<uint64_t>(x.bit(j * m + r)) << j;
    s.words.emplace_back(v, k);
  }
  return s;
}

std::vector<MultiState> conjugate_run(const WordMap& f_uni, const MultiState& s0,
                                      uint64_t steps) {
  int m = s0.m(), k = s0.k();
  if (f_uni.width != m * k) throw WidthMismatch(f_uni.width, m * k);
  std::vector<MultiState> out;
  out.reserve(steps + 1);
  Word x = pack(s0);
  out.push_back(s0);
  for (uint64_t i = 0; i < steps; ++i) {
    x = f_uni(x);
    out.push_back(unpack(x, m, k));
  }
  return out;
}

std::vector<MultiState> conjugate_run(const TFunction& f_uni, const MultiState& s0,
                                      uint64_t steps) {
  return conjugate_run(as_map(f_uni), s0, steps);
}

WordMap tsc_univariate(const TscSkeleton& skel) {
  int k = skel.u.width;
  if (k < 1 || k > 30) throw ConstructionInvalid("low-word width out of range");
  if (skel.extra < 2)
    throw ConstructionInvalid("need at least 2 extra bits above the low word");
  if (k + skel.extra > 64) throw ConstructionInvalid("total width exceeds 64 bits");
  if (skel.v.size() != (uint64_t{1} << k))
    throw ConstructionInvalid("selector table must have 2^k entries");
  uint64_t ones = 0;
  for (uint8_t b : skel.v) {
    if (b > 1) throw ConstructionInvalid("selector entries must be 0 or 1");
    ones += b;
  }
  if ((ones & 1) == 0)
    throw ConstructionInvalid("selector must take value 1 on an odd number of words");
  if ((skel.sigma & 1) == 0) throw ConstructionInvalid("sigma must be odd");
  if (skel.epsilon & 1) throw ConstructionInvalid("epsilon must be even");

  int width = k + skel.extra;
  auto u = skel.u;
  auto v = std::make_shared<std::vector<uint8_t>>(skel.v);
  uint64_t sigma = skel.sigma, epsilon = skel.epsilon;
  return WordMap{width, [k, width, u, v, sigma, epsilon](const Word& x) {
                   uint64_t xbar = x.value() & mask_bits(k);
                   uint64_t xtilde = x.value() >> k;
                   uint64_t low = u(Word(xbar, k)).value();
                   uint64_t high = xtilde + ((*v)[xbar] ? sigma : epsilon);
                   return Word(low | (high << k), width);
                 }};
}

int default_alpha(const MultiState& s, int j) {
  if (j == 0) return 1;
  uint64_t need = mask_bits(j);
  for (const Word& w : s.words)
    if ((w.value() & need) != need) return 0;
  return 1;
}

std::vector<uint32_t> perm_power(const std::vector<uint32_t>& perm, uint64_t e) {
  size_t n = perm.size();
  std::vector<uint32_t> res(n), base = perm;
  for (size_t i = 0; i < n; ++i) res[i] = static_cast<uint32_t>(i);
  auto mul = [n](const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    std::vector<uint32_t> c(n);
    for (size_t i = 0; i < n; ++i) c[i] = a[b[i]];
    return c;
  };
  while (e) {
    if (e & 1) res = mul(base, res);
    base = mul(base, base);
    e >>= 1;
  }
  return res;
}

namespace {

bool is_single_cycle(const std::vector<uint32_t>& perm) {
  size_t n = perm.size();
  std::vector<bool> seen(n);
  for (uint32_t v : perm) {
    if (v >= n || seen[v]) return false;
    seen[v] = true;
  }
  uint32_t x = 0;
  for (size_t i = 1; i < n; ++i) {
    x = perm[x];
    if (x == 0) return false;
  }
  return perm[x] == 0;
}

}  // namespace

Tsc::Tsc(TscSpec spec) : spec_(std::move(spec)) {
  if (spec_.m < 1 || spec_.m > 16) throw ConstructionInvalid("word count out of range");
  if (spec_.k < 1 || spec_.k > 64) throw ConstructionInvalid("width out of range");
  size_t k = static_cast<size_t>(spec_.k);
  if (spec_.sboxes.size() != k || spec_.sigma.size() != k || spec_.epsilon.size() != k)
    throw ConstructionInvalid("need one sbox and one exponent pair per column");
  uint64_t box_size = uint64_t{1} << spec_.m;
  for (size_t j = 0; j < k; ++j) {
    if (spec_.sboxes[j].size() != box_size || !is_single_cycle(spec_.sboxes[j]))
      throw ConstructionInvalid("sbox " + std::to_string(j) +
                                " is not a single-cycle permutation of 2^m elements");
    if ((spec_.sigma[j] & 1) == 0)
      throw ConstructionInvalid("sigma[" + std::to_string(j) + "] must be odd");
    if (spec_.epsilon[j] & 1)
      throw ConstructionInvalid("epsilon[" + std::to_string(j) + "] must be even");
  }
  if (!spec_.alpha) spec_.alpha = default_alpha;

  // sampled checks of the two selector laws: always on at column 0, and
  // insensitive to the column it steers
  std::mt19937_64 rng(0xa1fa);
  for (int t = 0; t < 64; ++t) {
    MultiState s;
    for (int r = 0; r < spec_.m; ++r)
      s.words.emplace_back(rng() & mask_bits(spec_.k), spec_.k);
    if (spec_.alpha(s, 0) != 1)
      throw ConstructionInvalid("selector must be 1 at column 0");
    int j = static_cast<int>(rng() % static_cast<uint64_t>(spec_.k));
    int before = spec_.alpha(s, j);
    MultiState flipped = s;
    int r = static_cast<int>(rng() % static_cast<uint64_t>(spec_.m));
    flipped.words[r] = flipped.words[r] ^ Word(uint64_t{1} << j, spec_.k);
    if (spec_.alpha(flipped, j) != before)
      throw ConstructionInvalid("selector for column " + std::to_string(j) +
                                " depends on that column");
  }

  for (size_t j = 0; j < k; ++j) {
    moved_.push_back(perm_power(spec_.sboxes[j], spec_.sigma[j] & (box_size - 1)));
    held_.push_back(perm_power(spec_.sboxes[j], spec_.epsilon[j] & (box_size - 1)));
  }
}

MultiState Tsc::step(const MultiState& s) const {
  if (s.m() != spec_.m || s.k() != spec_.k)
    throw Error("state shape does not match the machine");
  std::vector<uint64_t> vals(static_cast<size_t>(spec_.m), 0);
  for (int j = 0; j < spec_.k; ++j) {
    uint64_t c = s.column(j);
    uint64_t nc = (spec_.alpha(s, j) ? moved_ : held_)[j][c];
    for (int r = 0; r < spec_.m; ++r)
      vals[r] |= ((nc >> r) & 1) << j;
  }
  MultiState out;
  for (int r = 0; r < spec_.m; ++r) out.words.emplace_back(vals[r], spec_.k);
  return out;
}

MultiState tsc_step(const TscSpec& spec, const MultiState& s) {
  return Tsc(spec).step(s);
}

WordMap tsc_packed_map(const TscSpec& spec) {
  auto runner = std::make_shared<Tsc>(spec);
  int m = spec.m, k = spec.k;
  if (m * k > 64) throw Error("packed width exceeds 64 bits");
  return WordMap{m * k, [runner, m, k](const Word& x) {
                   return pack(runner->step(unpack(x, m, k)));
                 }};
}

void validate(const WreathSpec& spec) {
  if (spec.control.empty()) throw Error("control sequence must be nonempty");
  if (spec.k < 1 || spec.k > 64) throw Error("width out of range");
  for (uint64_t y : spec.control) {
    auto it = spec.family.find(y);
    if (it == spec.family.end())
      throw Error("no family member for control value " + std::to_string(y));
    if (it->second.width != spec.k)
      throw WidthMismatch(it->second.width, spec.k);
  }
}

std::vector<Word> wreath_run(const WreathSpec& spec, const Word& x0, uint64_t steps) {
  validate(spec);
  if (x0.width() != spec.k) throw WidthMismatch(x0.width(), spec.k);
  std::vector<Word> out;
  out.reserve(steps + 1);
  out.push_back(x0);
  Word x = x0;
  size_t p = spec.control.size();
  for (uint64_t i = 0; i < steps; ++i) {
    x = spec.family.at(spec.control[i % p])(x);
    out.push_back(x);
  }
  return out;
}

std::vector<Word> wreath_decimate(const std::vector<Word>& seq, int p, int r) {
  if (p < 1 || r < 0 || r >= p) throw Error("decimation phase out of range");
  std::vector<Word> out;
  for (size_t i = static_cast<size_t>(r); i < seq.size(); i += static_cast<size_t>(p))
    out.push_back(seq[i]);
  return out;
}

WordMap wreath_composition(const WreathSpec& spec, int r) {
  validate(spec);
  int p = static_cast<int>(spec.control.size());
  if (r < 0 || r >= p) throw Error("decimation phase out of range");
  WordMap acc{spec.k, [](const Word& x) { return x; }};
  for (int t = 0; t < p; ++t) {
    const TFunction& f = spec.family.at(spec.control[static_cast<size_t>((r + t) % p)]);
    acc = compose(as_map(f), acc);
  }
  return acc;
}

std::vector<uint64_t> make_lfsr_control(uint64_t taps, uint64_t state0, int bits) {
  if (bits < 1 || bits > 32) throw Error("register size out of range");
  uint64_t msk = mask_bits(bits);
  if (state0 == 0 || state0 > msk) throw Error("seed state must be nonzero and fit");
  if (taps == 0 || taps > msk) throw Error("tap mask must be nonzero and fit");
  std::vector<uint64_t> out;
  uint64_t s = state0;
  do {
    out.push_back(s);
    uint64_t fb = static_cast<uint64_t>(std::popcount(s & taps) & 1);
    s = (s >> 1) | (fb << (bits - 1));
    if (out.size() > (uint64_t{1} << bits)) throw Error("register failed to cycle");
  } while (s != state0);
  return out;
}

std::optional<std::vector<uint32_t>> find_conjugator(const WordMap& f, const WordMap& g,
                                                     uint64_t anchor) {
  if (f.width != g.width) throw WidthMismatch(f.width, g.width);
  if (f.width > 16) throw Error("conjugator search is table-sized; width must be <= 16");
  uint64_t n = uint64_t{1} << f.width;
  if (anchor >= n) throw Error("anchor out of range");
  std::vector<uint32_t> w(n, UINT32_MAX);
  std::vector<bool> seen_y(n);
  uint64_t x = 0, y = anchor;
  for (uint64_t i = 0; i < n; ++i) {
    if (w[x] != UINT32_MAX || seen_y[y]) return std::nullopt;  // early cycle
    w[x] = static_cast<uint32_t>(y);
    seen_y[y] = true;
    x = f(Word(x, f.width)).value();
    y = g(Word(y, g.width)).value();
  }
  if (x != 0 || y != anchor) return std::nullopt;  // maps were not permutations
  return w;
}

}  // namespace tfun
