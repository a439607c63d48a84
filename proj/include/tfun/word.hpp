#pragma once

// Arithmetic in Z/2^width for width 1..64, plus bit-sequence containers.
// Words are immutable residues; every operation checks width agreement and
// keeps values reduced.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfun {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WidthMismatch : Error {
  WidthMismatch(int a, int b)
      : Error("width mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

struct NotAUnit : Error {
  explicit NotAUnit(uint64_t v)
      : Error("value " + std::to_string(v) + " is even, not a unit") {}
};

// Raising an even base to a data-dependent exponent is not a 1-Lipschitz
// operation; the word ring refuses it.
struct NotATFunction : Error {
  using Error::Error;
};

// All-ones mask for a width in [1,64].
uint64_t mask_bits(int width);

class Word {
 public:
  Word(uint64_t value, int width);

  uint64_t value() const { return value_; }
  int width() const { return width_; }
  int bit(int j) const;  // delta_j, 0 <= j < width

  friend Word operator+(const Word& a, const Word& b);
  friend Word operator-(const Word& a, const Word& b);
  friend Word operator*(const Word& a, const Word& b);
  friend Word operator&(const Word& a, const Word& b);
  friend Word operator|(const Word& a, const Word& b);
  friend Word operator^(const Word& a, const Word& b);
  friend Word operator~(const Word& a);
  friend bool operator==(const Word& a, const Word& b);
  friend bool operator!=(const Word& a, const Word& b);

 private:
  uint64_t value_;
  int width_;
};

std::ostream& operator<<(std::ostream& os, const Word& w);

// Bit j of w; throws on j out of [0, width).
int delta(const Word& w, int j);

// Multiplicative inverse of an odd word; throws NotAUnit on even input.
Word inv_odd(const Word& a);

// base^exp with exact (integer) exponent; defined for every base.
Word pow_uint(const Word& base, uint64_t exp);

// base^exp for odd base and word-valued exponent.  For width >= 3 the result
// depends only on exp mod 2^(width-1) (the unit group exponent divides
// 2^(width-2)), so the exponent is reduced before square-and-multiply; at
// widths 1..2 the exponent is used directly.  Even base throws NotATFunction.
Word pow_mod(const Word& base, const Word& exp);

// 2-adic valuation; ord2(0) is a distinguished infinite value.
struct Ord2 {
  bool infinite = false;
  int value = 0;  // meaningful only when !infinite

  static Ord2 inf() { return {true, 0}; }
  static Ord2 at(int v) { return {false, v}; }
  friend bool operator==(const Ord2& a, const Ord2& b) {
    return a.infinite == b.infinite && (a.infinite || a.value == b.value);
  }
};

Ord2 ord2(const Word& w);

// 2-adic distance on a log scale: either exactly zero or 2^exponent with
// exponent = -ord2(a-b) <= 0.  Ordered so the strong triangle inequality
// d(a,c) <= max(d(a,b), d(b,c)) can be checked directly.
struct Dist2 {
  bool zero = true;
  int exponent = 0;

  friend bool operator==(const Dist2& a, const Dist2& b) {
    return a.zero == b.zero && (a.zero || a.exponent == b.exponent);
  }
  friend bool operator<(const Dist2& a, const Dist2& b) {
    if (a.zero) return !b.zero;
    if (b.zero) return false;
    return a.exponent < b.exponent;
  }
  friend bool operator<=(const Dist2& a, const Dist2& b) { return a < b || a == b; }
};

Dist2 dist2(const Word& a, const Word& b);

// Dense 0/1 sequence; bits[p] is the value at absolute index start + p.
// coord records which coordinate (bit level) the sequence was sliced from,
// -1 when not applicable.  Sequences handled by the toolkit are nonempty.
struct BitSeq {
  std::vector<uint8_t> bits;
  int coord = -1;
  int64_t start = 0;

  int64_t size() const { return static_cast<int64_t>(bits.size()); }
  int64_t end() const { return start + size(); }
  int at(int64_t index) const;  // absolute index, bounds-checked

  friend bool operator==(const BitSeq& a, const BitSeq& b) {
    return a.bits == b.bits && a.coord == b.coord && a.start == b.start;
  }
};

BitSeq complement(const BitSeq& s);

// Text format: per sequence an optional header line
//   # coord=<n> start=<i> len=<L>
// followed by one line of '0'/'1' where offset p from the left is index
// start + p.  The writer emits the header whenever coord or start is set,
// which makes write -> read -> write byte-identical.
void write_bitseq(std::ostream& os, const BitSeq& s);
void write_bitseqs(std::ostream& os, const std::vector<BitSeq>& all);
std::vector<BitSeq> read_bitseqs(std::istream& is);
std::string bitseq_text(const BitSeq& s);
std::vector<BitSeq> load_bitseq_file(const std::string& path);
void save_bitseq_file(const std::string& path, const std::vector<BitSeq>& all);

}  // namespace tfun
