#include "tfun/word.hpp"

#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace tfun {

uint64_t mask_bits(int width) {
  if (width < 1 || width > 64) throw Error("width must be in [1,64], got " + std::to_string(width));
  return width == 64 ? ~0ull : ((1ull << width) - 1);
}

Word::Word(uint64_t value, int width) : value_(value & mask_bits(width)), width_(width) {}

int Word::bit(int j) const {
  if (j < 0 || j >= width_)
    throw Error("bit index " + std::to_string(j) + " out of range for width " + std::to_string(width_));
  return static_cast<int>((value_ >> j) & 1);
}

static void check_widths(const Word& a, const Word& b) {
  if (a.width() != b.width()) throw WidthMismatch(a.width(), b.width());
}

Word operator+(const Word& a, const Word& b) {
  check_widths(a, b);
  return Word(a.value() + b.value(), a.width());
}

Word operator-(const Word& a, const Word& b) {
  check_widths(a, b);
  return Word(a.value() - b.value(), a.width());
}

Word operator*(const Word& a, const Word& b) {
  check_widths(a, b);
  return Word(a.value() * b.value(), a.width());
}

Word operator&(const Word& a, const Word& b) {
  check_widths(a, b);
  return Word(a.value() & b.value(), a.width());
}

Word operator|(const Word& a, const Word& b) {
  check_widths(a, b);
  return Word(a.value() | b.value(), a.width());
}

Word operator^(const Word& a, const Word& b) {
  check_widths(a, b);
  return Word(a.value() ^ b.value(), a.width());
}

Word operator~(const Word& a) { return Word(~a.value(), a.width()); }

bool operator==(const Word& a, const Word& b) {
  check_widths(a, b);
  return a.value() == b.value();
}

bool operator!=(const Word& a, const Word& b) { return !(a == b); }

std::ostream& operator<<(std::ostream& os, const Word& w) {
  return os << w.value() << ":" << w.width();
}

int delta(const Word& w, int j) { return w.bit(j); }

Word inv_odd(const Word& a) {
  if ((a.value() & 1) == 0) throw NotAUnit(a.value());
  // Newton lifting: x <- x(2 - ax) doubles the precision; a is its own
  // inverse mod 8, so five rounds reach 2^64.
  uint64_t v = a.value();
  uint64_t x = v;
  for (int i = 0; i < 5; ++i) x *= 2 - v * x;
  return Word(x, a.width());
}

Word pow_uint(const Word& base, uint64_t exp) {
  uint64_t acc = 1, b = base.value();
  while (exp) {
    if (exp & 1) acc *= b;
    b *= b;
    exp >>= 1;
  }
  return Word(acc, base.width());
}

Word pow_mod(const Word& base, const Word& exp) {
  if (base.width() != exp.width()) throw WidthMismatch(base.width(), exp.width());
  if ((base.value() & 1) == 0)
    throw NotATFunction("even base " + std::to_string(base.value()) + " with word exponent");
  uint64_t e = exp.value();
  if (base.width() >= 3) e &= mask_bits(base.width() - 1);
  return pow_uint(base, e);
}

Ord2 ord2(const Word& w) {
  if (w.value() == 0) return Ord2::inf();
  return Ord2::at(std::countr_zero(w.value()));
}

Dist2 dist2(const Word& a, const Word& b) {
  Ord2 o = ord2(a - b);
  if (o.infinite) return Dist2{true, 0};
  return Dist2{false, -o.value};
}

int BitSeq::at(int64_t index) const {
  int64_t p = index - start;
  if (p < 0 || p >= size())
    throw Error("bit index " + std::to_string(index) + " outside [" + std::to_string(start) +
                ", " + std::to_string(end()) + ")");
  return bits[static_cast<size_t>(p)];
}

BitSeq complement(const BitSeq& s) {
  BitSeq r = s;
  for (auto& b : r.bits) b = static_cast<uint8_t>(1 - b);
  return r;
}

void write_bitseq(std::ostream& os, const BitSeq& s) {
  if (s.bits.empty()) throw Error("refusing to write empty bit sequence");
  if (s.coord >= 0 || s.start != 0)
    os << "# coord=" << s.coord << " start=" << s.start << " len=" << s.bits.size() << "\n";
  for (uint8_t b : s.bits) os.put(b ? '1' : '0');
  os.put('\n');
}

void write_bitseqs(std::ostream& os, const std::vector<BitSeq>& all) {
  for (const auto& s : all) write_bitseq(os, s);
}

std::string bitseq_text(const BitSeq& s) {
  std::ostringstream os;
  write_bitseq(os, s);
  return os.str();
}

std::vector<BitSeq> read_bitseqs(std::istream& is) {
  std::vector<BitSeq> out;
  std::string line;
  int pending_coord = -1;
  int64_t pending_start = 0;
  int64_t pending_len = -1;
  bool have_header = false;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      int coord = -1;
      int64_t start = 0, len = -1;
      if (std::sscanf(line.c_str(), "# coord=%d start=%lld len=%lld", &coord,
                      reinterpret_cast<long long*>(&start),
                      reinterpret_cast<long long*>(&len)) != 3)
        throw Error("bad bit-sequence header at line " + std::to_string(lineno) + ": " + line);
      pending_coord = coord;
      pending_start = start;
      pending_len = len;
      have_header = true;
      continue;
    }
    BitSeq s;
    s.bits.reserve(line.size());
    for (char c : line) {
      if (c == '0' || c == '1')
        s.bits.push_back(static_cast<uint8_t>(c - '0'));
      else if (c == '\r')
        continue;
      else
        throw Error(std::string("bad bit character '") + c + "' at line " + std::to_string(lineno));
    }
    if (s.bits.empty()) throw Error("empty bit line at line " + std::to_string(lineno));
    if (have_header) {
      if (pending_len >= 0 && pending_len != s.size())
        throw Error("header len " + std::to_string(pending_len) + " does not match line of " +
                    std::to_string(s.size()) + " bits at line " + std::to_string(lineno));
      s.coord = pending_coord;
      s.start = pending_start;
      have_header = false;
    }
    out.push_back(std::move(s));
  }
  if (have_header) throw Error("trailing bit-sequence header without bits");
  return out;
}

std::vector<BitSeq> load_bitseq_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_bitseqs(in);
}

void save_bitseq_file(const std::string& path, const std::vector<BitSeq>& all) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_bitseqs(out, all);
}

}  // namespace tfun
