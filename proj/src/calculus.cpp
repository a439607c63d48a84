#include "tfun/calculus.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <random>

#include "tfun/parallel.hpp"

namespace tfun {

WordMap as_map(const TFunction& f) {
  return WordMap{f.width, [f](const Word& x) { return f(x); }};
}

WordMap compose(const WordMap& outer, const WordMap& inner) {
  if (outer.width != inner.width) throw WidthMismatch(outer.width, inner.width);
  return WordMap{outer.width,
                 [outer, inner](const Word& x) { return outer.fn(inner.fn(x)); }};
}

WordMap power_map(const WordMap& f, uint64_t e) {
  return WordMap{f.width, [f, e](const Word& x) {
                   Word y = x;
                   for (uint64_t i = 0; i < e; ++i) y = f.fn(y);
                   return y;
                 }};
}

CompatibilityReport check_compatibility(const WordMap& f, uint64_t samples,
                                        uint64_t seed) {
  CompatibilityReport rep;
  int w = f.width;
  uint64_t wmask = mask_bits(w);
  auto violates = [&](uint64_t a, uint64_t b, int s) {
    Word fa = f(Word(a, w)), fb = f(Word(b, w));
    return ((fa.value() ^ fb.value()) & mask_bits(s)) != 0;
  };
  // structured sweep first so small witnesses are found deterministically
  uint64_t a_lim = std::min<uint64_t>(wmask, 255);
  for (int s = 1; s < w; ++s) {
    for (uint64_t a = 0; a <= a_lim; ++a) {
      uint64_t b = (a + (uint64_t{1} << s)) & wmask;
      ++rep.checked;
      if (violates(a, b, s)) {
        rep.pass = false;
        rep.witness = CompatWitness{a, b, s};
        return rep;
      }
    }
  }
  std::mt19937_64 rng(seed);
  for (uint64_t i = 0; i < samples; ++i) {
    uint64_t a = rng() & wmask;
    int s = 1 + static_cast<int>(i % static_cast<uint64_t>(std::max(1, w - 1)));
    uint64_t high = rng() & wmask & ~mask_bits(s);  // resample bits >= s only
    uint64_t b = (a & mask_bits(s)) | high;
    if (b == a) b = (a ^ (uint64_t{1} << std::min(w - 1, s))) & wmask;
    if (b == a) continue;
    ++rep.checked;
    if (violates(a, b, s)) {
      rep.pass = false;
      rep.witness = CompatWitness{a, b, s};
      return rep;
    }
  }
  return rep;
}

CompatibilityReport check_compatibility(const TFunction& f, uint64_t samples,
                                        uint64_t seed) {
  return check_compatibility(as_map(f), samples, seed);
}

Word derivative_mod(const WordMap& f, int m, int k, const Word& x) {
  if (m < 1 || k < 1) throw Error("derivative radius and modulus exponents must be >= 1");
  if (k + m > f.width)
    throw Error("width " + std::to_string(f.width) + " too small for derivative mod 2^" +
                std::to_string(m) + " at radius " + std::to_string(k));
  if (x.width() != f.width) throw WidthMismatch(x.width(), f.width);
  Word h(uint64_t{1} << k, f.width);
  uint64_t diff = (f(x + h) - f(x)).value();
  if (diff & mask_bits(k)) throw NotDivisible(x.value(), k);
  return Word((diff >> k) & mask_bits(m), m);
}

Word derivative_mod(const TFunction& f, int m, int k, const Word& x) {
  return derivative_mod(as_map(f), m, k, x);
}

const char* to_string(DiffVerdict v) {
  switch (v) {
    case DiffVerdict::CertifiedAtWidth: return "certified-at-width";
    case DiffVerdict::Refuted: return "refuted";
    case DiffVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// Deterministic h grid for one radius k: every dyadic order j gets r = 1
// first, then seeded odd multipliers — independent of worker count.
std::vector<std::pair<int, uint64_t>> make_h_grid(int width, int m, int k,
                                                  int h_samples) {
  std::vector<std::pair<int, uint64_t>> grid;
  for (int j = k; j <= width - m - 1; ++j) {
    grid.emplace_back(j, uint64_t{1} << j);
    std::mt19937_64 rng(0x5eedULL ^ (uint64_t(m) << 48) ^ (uint64_t(k) << 40) ^
                        (uint64_t(width) << 32) ^ uint64_t(j));
    for (int t = 0; t < h_samples; ++t) {
      uint64_t r = (rng() | 1) & mask_bits(width - j);
      if (r == 1) continue;  // already covered
      grid.emplace_back(j, (r << j) & mask_bits(width));
    }
  }
  return grid;
}

}  // namespace

DiffReport estimate_nm(const WordMap& f, int m, int k_max, int h_samples, int workers) {
  DiffReport rep;
  rep.m = m;
  rep.width = f.width;
  if (m < 1) throw Error("modulus exponent must be >= 1");
  int k_cap = f.width - m - 1;
  if (k_cap < 1)
    throw Error("width " + std::to_string(f.width) + " too small to estimate mod 2^" +
                std::to_string(m) + " differentiability");
  k_max = k_max <= 0 ? std::min(8, k_cap) : std::min(k_max, k_cap);

  for (int k = 1; k <= k_max; ++k) {
    rep.k = k;
    std::vector<uint64_t> table(uint64_t{1} << k);
    bool table_ok = true;
    for (uint64_t x = 0; x < table.size(); ++x) {
      try {
        table[x] = derivative_mod(f, m, k, Word(x, f.width)).value();
      } catch (const NotDivisible& nd) {
        rep.verdict = DiffVerdict::Refuted;
        rep.witness = DiffWitness{nd.x, uint64_t{1} << k};
        table_ok = false;
        break;
      }
    }
    if (!table_ok) return rep;

    int x_bits = std::min(f.width - m, k + m + 2);
    uint64_t x_count = uint64_t{1} << x_bits;
    std::vector<uint64_t> fx(x_count);
    parallel_for(0, x_count, workers, [&](uint64_t b, uint64_t e) {
      for (uint64_t x = b; x < e; ++x) fx[x] = f(Word(x, f.width)).value();
    });

    auto grid = make_h_grid(f.width, m, k, h_samples);
    std::vector<std::optional<DiffWitness>> found(grid.size());
    std::atomic<uint64_t> first_bad{grid.size()};
    parallel_for(0, grid.size(), workers, [&](uint64_t b, uint64_t e) {
      for (uint64_t gi = b; gi < e; ++gi) {
        if (gi > first_bad.load(std::memory_order_relaxed)) continue;
        auto [j, h] = grid[gi];
        uint64_t cmask = mask_bits(std::min(j + m, f.width));
        for (uint64_t x = 0; x < x_count; ++x) {
          uint64_t fxh = f(Word(x + h, f.width)).value();
          uint64_t d = table[x & mask_bits(k)];
          if ((fxh - fx[x] - d * h) & cmask) {
            found[gi] = DiffWitness{x, h};
            uint64_t cur = first_bad.load(std::memory_order_relaxed);
            while (gi < cur &&
                   !first_bad.compare_exchange_weak(cur, gi, std::memory_order_relaxed)) {
            }
            break;
          }
        }
      }
    });

    uint64_t bad = first_bad.load();
    if (bad == grid.size()) {
      rep.verdict = DiffVerdict::CertifiedAtWidth;
      rep.table = std::move(table);
      return rep;
    }
    rep.witness = found[bad];
  }
  rep.verdict = DiffVerdict::Inconclusive;
  return rep;
}

DiffReport estimate_nm(const TFunction& f, int m, int k_max, int h_samples, int workers) {
  return estimate_nm(as_map(f), m, k_max, h_samples, workers);
}

namespace {

void check_brute_width(const WordMap& f, int n) {
  if (n < 1 || n > std::min(f.width, 24))
    throw Error("brute-force modulus exponent " + std::to_string(n) +
                " out of range for width " + std::to_string(f.width));
}

}  // namespace

bool is_bijective_bruteforce(const WordMap& f, int n) {
  check_brute_width(f, n);
  uint64_t size = uint64_t{1} << n;
  std::vector<bool> seen(size);
  for (uint64_t x = 0; x < size; ++x) {
    uint64_t y = f(Word(x, f.width)).value() & mask_bits(n);
    if (seen[y]) return false;
    seen[y] = true;
  }
  return true;
}

bool is_transitive_bruteforce(const WordMap& f, int n) {
  check_brute_width(f, n);
  uint64_t size = uint64_t{1} << n;
  uint64_t x = 0;
  for (uint64_t i = 1; i <= size; ++i) {
    x = f(Word(x, f.width)).value() & mask_bits(n);
    if (x == 0) return i == size;
  }
  return false;
}

bool is_bijective_bruteforce(const TFunction& f, int n) {
  return is_bijective_bruteforce(as_map(f), n);
}

bool is_transitive_bruteforce(const TFunction& f, int n) {
  return is_transitive_bruteforce(as_map(f), n);
}

const char* to_string(TransVerdict v) {
  switch (v) {
    case TransVerdict::CertifiedByTheorem: return "certified-by-theorem";
    case TransVerdict::BruteForceOnly: return "brute-force-only";
    case TransVerdict::Refuted: return "refuted";
  }
  return "?";
}

TransitivityCertificate certify_transitive(const WordMap& f, int k_max, int brute_n,
                                           int workers) {
  TransitivityCertificate cert;
  cert.diff.m = 2;
  cert.diff.width = f.width;
  if (f.width >= 4) {
    if (k_max <= 0) k_max = std::min(8, f.width - 3);
    cert.diff = estimate_nm(f, 2, k_max, 16, workers);
  }
  if (cert.diff.verdict == DiffVerdict::CertifiedAtWidth) {
    cert.n2 = cert.diff.k;
    cert.checked_mod = cert.n2 + 2;
    cert.verdict = is_transitive_bruteforce(f, cert.checked_mod)
                       ? TransVerdict::CertifiedByTheorem
                       : TransVerdict::Refuted;
    return cert;
  }
  if (brute_n <= 0) brute_n = std::min(f.width, 12);
  for (int n = 1; n <= brute_n; ++n) {
    cert.checked_mod = n;
    if (!is_transitive_bruteforce(f, n)) {
      cert.verdict = TransVerdict::Refuted;
      return cert;
    }
  }
  cert.verdict = TransVerdict::BruteForceOnly;
  return cert;
}

TransitivityCertificate certify_transitive(const TFunction& f, int k_max, int brute_n,
                                           int workers) {
  return certify_transitive(as_map(f), k_max, brute_n, workers);
}

ProductCheck derivative_product_check(const WordMap& f, int n2, uint64_t z_count,
                                      int workers) {
  if (n2 < 1 || n2 + 2 > f.width)
    throw Error("radius " + std::to_string(n2) + " out of range for width " +
                std::to_string(f.width));
  ProductCheck out;
  out.n2 = n2;
  out.z_count = z_count;
  out.pass = true;
  uint64_t steps = uint64_t{1} << n2;
  std::mutex mu;
  parallel_for(0, z_count, workers, [&](uint64_t b, uint64_t e) {
    for (uint64_t z = b; z < e; ++z) {
      Word x(z, f.width);
      uint64_t prod = 1;
      for (uint64_t j = 0; j < steps; ++j) {
        prod = (prod * derivative_mod(f, 2, n2, x).value()) & 3;
        x = f(x);
      }
      if (prod != 1) {
        std::lock_guard<std::mutex> lk(mu);
        out.pass = false;
        if (!out.witness_z || z < *out.witness_z) {
          out.witness_z = z;
          out.witness_product = prod;
        }
        return;
      }
    }
  });
  return out;
}

ProductCheck derivative_product_check(const TFunction& f, int n2, uint64_t z_count,
                                      int workers) {
  return derivative_product_check(as_map(f), n2, z_count, workers);
}

ProofProbe proof_probe(const WordMap& f, int n, const Word& x, int k3, int prod_len,
                       int phi_samples) {
  if (n < 2) throw Error("probe level must be >= 2");
  if (f.width < n + 2)
    throw Error("width " + std::to_string(f.width) + " too small to probe level " +
                std::to_string(n));
  if (x.width() != f.width) throw WidthMismatch(x.width(), f.width);

  ProofProbe probe;
  probe.n = n;
  uint64_t half = uint64_t{1} << (n - 1);
  Word probe_end(0, f.width);
  for (int s = 0; s < std::max(1, phi_samples); ++s) {
    Word start = x + Word(static_cast<uint64_t>(s), f.width);
    Word xe = start;
    for (uint64_t i = 0; i < half; ++i) xe = f(xe);
    uint64_t diff = (xe - start).value();
    Ord2 o = ord2(Word(diff, f.width));
    if (o.infinite || o.value != n - 1) throw AlphaViolation(start.value(), diff, n);
    probe.phi.push_back(PhiSample{start.value(), (diff >> (n - 1)) & 7});
    if (s == 0) probe_end = xe;
  }
  uint64_t phi0 = probe.phi.front().phi;
  probe.alpha = static_cast<int>(phi0 & 1);
  probe.beta = static_cast<int>((phi0 >> 1) & 1);
  probe.gamma = static_cast<int>((phi0 >> 2) & 1);
  probe.beta_bits = x.bit(n - 1) ^ x.bit(n) ^ probe_end.bit(n);

  if (k3 <= 0 && f.width >= 5) {
    DiffReport d3 = estimate_nm(f, 3, std::min(8, f.width - 4));
    if (d3.verdict == DiffVerdict::CertifiedAtWidth) k3 = d3.k;
  }
  if (k3 >= 1 && k3 + 3 <= f.width) {
    probe.k3 = k3;
    Word xi = x;
    uint64_t prod = 1;
    for (int i = 0; i < prod_len; ++i) {
      probe.lambda.push_back(static_cast<uint8_t>((prod >> 1) & 1));
      probe.eta.push_back(static_cast<uint8_t>((prod >> 2) & 1));
      prod = (prod * derivative_mod(f, 3, k3, xi).value()) & 7;
      xi = f(xi);
    }
  }
  return probe;
}

ProofProbe proof_probe(const TFunction& f, int n, const Word& x, int k3, int prod_len,
                       int phi_samples) {
  return proof_probe(as_map(f), n, x, k3, prod_len, phi_samples);
}

}  // namespace tfun
