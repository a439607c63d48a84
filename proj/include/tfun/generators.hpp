#pragma once

// Multivariate state/word interleaving, the selector-driven column machine
// and its univariate skeleton, counter-dependent (wreath) generators, and
// cycle-alignment conjugator search.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "tfun/calculus.hpp"
#include "tfun/expr.hpp"
#include "tfun/word.hpp"

namespace tfun {

// m words of equal width k; column j is the m-bit vector of bit j across words.
struct MultiState {
  std::vector<Word> words;

  int m() const { return static_cast<int>(words.size()); }
  int k() const;  // common width; validates non-empty and equal widths
  uint64_t column(int j) const;  // bit r of the result = words[r].bit(j)

  friend bool operator==(const MultiState& a, const MultiState& b) {
    return a.words == b.words;
  }
  friend bool operator!=(const MultiState& a, const MultiState& b) { return !(a == b); }
};

// Bit-interleaving bijection: bit j*m + r of the packed word is bit j of
// words[r] — columns read bottom to top, low column first.  m*k <= 64.
Word pack(const MultiState& s);
MultiState unpack(const Word& x, int m, int k);

// unpack(f_uni^i(pack(s0))) for i = 0..steps: the multivariate generator a
// univariate map induces through the interleaving.
std::vector<MultiState> conjugate_run(const WordMap& f_uni, const MultiState& s0,
                                      uint64_t steps);
std::vector<MultiState> conjugate_run(const TFunction& f_uni, const MultiState& s0,
                                      uint64_t steps);

struct ConstructionInvalid : Error {
  using Error::Error;
};

// Univariate skeleton of the column machine, on words split as
// x = xbar + 2^k * xtilde:
//   f(x) = u(xbar) + 2^k * (xtilde + (v(xbar) ? sigma : epsilon))  mod 2^{k+extra}.
// With u transitive on k bits and v taking value 1 on an odd number of
// k-bit words, f is transitive and uniformly differentiable with radius <= k.
struct TscSkeleton {
  WordMap u;               // transitive map on k-bit words
  std::vector<uint8_t> v;  // 2^k selector bits, odd number of ones
  uint64_t sigma = 1;      // odd
  uint64_t epsilon = 0;    // even
  int extra = 2;           // additional high bits, >= 2
};

// Validates the skeleton (throws ConstructionInvalid) and returns the map at
// width u.width + extra.
WordMap tsc_univariate(const TscSkeleton& skel);

// Full column machine: column j advances by the sigma_j-th or epsilon_j-th
// power of the single-cycle permutation sboxes[j], selected by the odd
// parameter's bit for column j.
struct TscSpec {
  int m = 0, k = 0;
  std::vector<std::vector<uint32_t>> sboxes;  // k permutations of [0, 2^m)
  std::vector<uint64_t> sigma;                // k odd exponents
  std::vector<uint64_t> epsilon;              // k even exponents
  // alpha(state, j) in {0,1}; must be 1 at j = 0 and must not depend on
  // column j itself.  Empty = default: AND of all bits in columns 0..j-1.
  std::function<int(const MultiState&, int)> alpha;
};

int default_alpha(const MultiState& s, int j);

// e-th power of a permutation table, exponent reduced mod the cycle length.
std::vector<uint32_t> perm_power(const std::vector<uint32_t>& perm, uint64_t e);

// Precomputed runner; construction validates the spec (single-cycle boxes,
// exponent parities, alpha sampling) and throws ConstructionInvalid.
class Tsc {
 public:
  explicit Tsc(TscSpec spec);

  const TscSpec& spec() const { return spec_; }
  MultiState step(const MultiState& s) const;

 private:
  TscSpec spec_;
  std::vector<std::vector<uint32_t>> moved_, held_;  // S_j^sigma_j, S_j^epsilon_j
};

// One-shot convenience; builds the runner internally.
MultiState tsc_step(const TscSpec& spec, const MultiState& s);

// The machine as a packed-word map (m*k <= 64).  Only selector functions that
// keep every output bit dependent on its own and lower packed bits (such as
// additive sboxes) make this a 1-Lipschitz map; the general machine is
// block-wise compatible only.
WordMap tsc_packed_map(const TscSpec& spec);

// Counter-dependent generator: x_{i+1} = f_{y_i}(x_i) with y_i = control
// values cycling with period control.size().
struct WreathSpec {
  std::vector<uint64_t> control;        // one full period of control values
  std::map<uint64_t, TFunction> family; // y -> f_y, all of width k
  int k = 0;
};

void validate(const WreathSpec& spec);

// x_0 .. x_steps.
std::vector<Word> wreath_run(const WreathSpec& spec, const Word& x0, uint64_t steps);

// (seq[r + l*p]) for l = 0, 1, ... — the r-th decimated substream.
std::vector<Word> wreath_decimate(const std::vector<Word>& seq, int p, int r);

// w_r = f_{y_{r+p-1}} o ... o f_{y_r}; the r-th decimated substream is the
// w_r orbit of x_r.
WordMap wreath_composition(const WreathSpec& spec, int r);

// One period of an LFSR state stream (nonzero state0, taps as a bit mask);
// library example control source.
std::vector<uint64_t> make_lfsr_control(uint64_t taps, uint64_t state0, int bits);

// Cycle alignment: when f and g are single cycles on [0, 2^width), returns w
// with w(f(x)) = g(w(x)) for all x (so f = w^{-1} o g o w), anchored by
// w(0) = anchor; nullopt when either map is not a single cycle.
// Table-sized: width <= 16.
std::optional<std::vector<uint32_t>> find_conjugator(const WordMap& f, const WordMap& g,
                                                     uint64_t anchor = 0);

}  // namespace tfun
