#pragma once

#include <cstdint>
#include <string>

#include "pseudodet/errors.hpp"

namespace pseudodet {

// Modulus descriptor for Z/p^m. q = p^m fits in 31 bits so that products of
// reduced residues never overflow int64.
struct Mod {
  int64_t p = 0;
  int m = 0;
  int64_t q = 0;

  static bool is_prime(int64_t p) {
    if (p < 2) return false;
    for (int64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) return false;
    return true;
  }

  static Mod make(int64_t p, int m) {
    require(is_prime(p), errc::validation_error,
            "modulus base " + std::to_string(p) + " is not prime");
    require(m >= 1, errc::validation_error, "modulus exponent must be >= 1");
    int64_t q = 1;
    for (int i = 0; i < m; ++i) {
      require(q <= (int64_t{1} << 31) / p, errc::validation_error,
              "modulus p^m exceeds 2^31");
      q *= p;
    }
    return Mod{p, m, q};
  }

  bool operator==(const Mod& o) const { return p == o.p && m == o.m; }
  bool operator!=(const Mod& o) const { return !(*this == o); }

  int64_t reduce(int64_t x) const {
    x %= q;
    return x < 0 ? x + q : x;
  }

  int64_t add(int64_t a, int64_t b) const { return (a + b) % q; }
  int64_t sub(int64_t a, int64_t b) const { return reduce(a - b); }
  int64_t mul(int64_t a, int64_t b) const { return (a * b) % q; }
  int64_t neg(int64_t a) const { return a == 0 ? 0 : q - a; }

  int64_t pow(int64_t a, int64_t e) const {
    require(e >= 0, errc::internal, "negative exponent");
    int64_t r = 1 % q;
    a = reduce(a);
    while (e > 0) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  // p-adic valuation of a reduced residue, capped at m (val(0) = m).
  int valuation(int64_t a) const {
    if (a == 0) return m;
    int v = 0;
    while (a % p == 0) {
      a /= p;
      ++v;
    }
    return v;
  }

  bool is_unit(int64_t a) const { return reduce(a) % p != 0; }

  // Inverse of a unit via extended Euclid against q.
  int64_t inv(int64_t a) const {
    a = reduce(a);
    require(is_unit(a), errc::validation_error,
            std::to_string(a) + " is not a unit mod " + std::to_string(q));
    int64_t r0 = q, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
      int64_t k = r0 / r1;
      int64_t r2 = r0 - k * r1;
      int64_t s2 = s0 - k * s1;
      r0 = r1; r1 = r2;
      s0 = s1; s1 = s2;
    }
    return reduce(s0);
  }
};

}  // namespace pseudodet
