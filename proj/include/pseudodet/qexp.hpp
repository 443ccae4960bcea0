#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pseudodet/algebra.hpp"

namespace pseudodet {

namespace detail {

// Exact rational arithmetic for Bernoulli constant terms. Values stay well
// inside __int128 for the supported modulus/weight caps.
struct Frac {
  __int128 num = 0;
  __int128 den = 1;

  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  void reduce() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 g = gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  static Frac make(__int128 n, __int128 d = 1) {
    Frac f{n, d};
    require(d != 0, errc::internal, "zero denominator");
    f.reduce();
    return f;
  }

  Frac operator+(const Frac& o) const {
    return make(num * o.den + o.num * den, den * o.den);
  }
  Frac operator*(const Frac& o) const {
    return make(num * o.num, den * o.den);
  }
};

// B_0, ..., B_n with B_1 = -1/2, via the defining recurrence.
inline std::vector<Frac> bernoulli_numbers(int n) {
  std::vector<Frac> b{Frac::make(1)};
  std::vector<std::vector<__int128>> choose(n + 2);
  for (int i = 0; i <= n + 1; ++i) {
    choose[i].assign(i + 1, 1);
    for (int j = 1; j < i; ++j)
      choose[i][j] = choose[i - 1][j - 1] + choose[i - 1][j];
  }
  for (int m = 1; m <= n; ++m) {
    Frac acc = Frac::make(0);
    for (int j = 0; j < m; ++j)
      acc = acc + Frac::make(choose[m + 1][j]) * b[j];
    b.push_back(Frac::make(-1, m + 1) * acc);
  }
  return b;
}

}  // namespace detail

// Character mod N with values in a chain algebra; index a holds the value at
// the residue a, zero on residues sharing a factor with N.
struct DirichletCharacter {
  int64_t modulus = 1;
  AlgebraPtr algebra;
  std::vector<AlgebraElement> values;
  int64_t conductor = 1;

  const AlgebraElement& at(int64_t n) const {
    int64_t r = n % modulus;
    if (r < 0) r += modulus;
    return values[size_t(r)];
  }

  bool is_trivial() const { return conductor == 1; }

  static DirichletCharacter make(int64_t modulus, AlgebraPtr algebra,
                                 std::vector<AlgebraElement> values) {
    require(modulus >= 1 && modulus <= 1000, errc::validation_error,
            "character modulus out of the supported range");
    DirichletCharacter c{modulus, std::move(algebra), std::move(values), 1};
    require(c.values.size() == size_t(c.modulus), errc::validation_error,
            "character table must have one value per residue");
    for (int64_t a = 0; a < c.modulus; ++a) {
      bool coprime = std::gcd(a, c.modulus) == 1;
      if (coprime)
        require(is_unit(c.values[a]), errc::validation_error,
                "character value at a coprime residue must be a unit");
      else
        require(c.values[a].is_zero(), errc::validation_error,
                "character must vanish off the coprime residues");
    }
    require(c.at(1) == algebra_unit(c.algebra), errc::validation_error,
            "character must send 1 to 1");
    for (int64_t a = 0; a < c.modulus; ++a) {
      if (std::gcd(a, c.modulus) != 1) continue;
      for (int64_t b = a; b < c.modulus; ++b) {
        if (std::gcd(b, c.modulus) != 1) continue;
        require(c.at(a * b) == c.at(a) * c.at(b), errc::validation_error,
                "character is not multiplicative");
      }
    }
    // Conductor: least divisor f of N with chi trivial on 1 + fZ.
    for (int64_t f = 1; f <= c.modulus; ++f) {
      if (c.modulus % f != 0) continue;
      bool factors = true;
      for (int64_t a = 1; a < c.modulus && factors; a += f)
        if (std::gcd(a, c.modulus) == 1)
          factors = c.at(a) == algebra_unit(c.algebra);
      if (factors) {
        c.conductor = f;
        break;
      }
    }
    return c;
  }
};

inline DirichletCharacter trivial_dirichlet(const AlgebraPtr& alg,
                                            int64_t modulus) {
  std::vector<AlgebraElement> values;
  for (int64_t a = 0; a < modulus; ++a)
    values.push_back(std::gcd(a, modulus) == 1 ? algebra_unit(alg)
                                               : algebra_zero(alg));
  return DirichletCharacter::make(modulus, alg, std::move(values));
}

// Builds a character from an integer table (entries must be units mod the
// algebra characteristic, e.g. -1/+1 for quadratic characters).
inline DirichletCharacter dirichlet_from_integers(
    const AlgebraPtr& alg, int64_t modulus, const std::vector<int64_t>& table) {
  std::vector<AlgebraElement> values;
  for (int64_t a = 0; a < modulus; ++a)
    values.push_back(algebra_scalar(alg, table[size_t(a)]));
  return DirichletCharacter::make(modulus, alg, std::move(values));
}

// Legendre symbol character mod an odd prime, via Euler's criterion.
inline DirichletCharacter legendre_character(const AlgebraPtr& alg,
                                             int64_t p) {
  require(p >= 3 && p % 2 == 1 && Mod::is_prime(p), errc::validation_error,
          "Legendre character needs an odd prime modulus");
  std::vector<int64_t> table(size_t(p), 0);
  for (int64_t a = 1; a < p; ++a) {
    int64_t e = 1, base = a % p, exp = (p - 1) / 2;
    while (exp > 0) {
      if (exp & 1) e = e * base % p;
      base = base * base % p;
      exp >>= 1;
    }
    table[size_t(a)] = e == 1 ? 1 : -1;
  }
  return dirichlet_from_integers(alg, p, table);
}

inline DirichletCharacter dirichlet_product(const DirichletCharacter& a,
                                            const DirichletCharacter& b) {
  require(a.algebra->same_structure(*b.algebra), errc::validation_error,
          "character product needs a common algebra");
  int64_t n = std::lcm(a.modulus, b.modulus);
  std::vector<AlgebraElement> values;
  for (int64_t r = 0; r < n; ++r)
    values.push_back(std::gcd(r, n) == 1 ? a.at(r) * b.at(r)
                                         : algebra_zero(a.algebra));
  return DirichletCharacter::make(n, a.algebra, std::move(values));
}

// Characters agree as functions after lifting to the common modulus.
inline bool characters_compatible(const DirichletCharacter& a,
                                  const DirichletCharacter& b) {
  if (!a.algebra->same_structure(*b.algebra)) return false;
  if (a.conductor != b.conductor) return false;
  int64_t n = std::lcm(a.modulus, b.modulus);
  for (int64_t r = 0; r < n; ++r)
    if (std::gcd(r, n) == 1 && !(a.at(r) == b.at(r))) return false;
  return true;
}

// Integer lift of a quadratic character: entries in {-1, 0, +1}.
inline std::optional<std::vector<int64_t>> quadratic_lift(
    const DirichletCharacter& chi) {
  std::vector<int64_t> table(size_t(chi.modulus), 0);
  auto one = algebra_unit(chi.algebra);
  for (int64_t a = 0; a < chi.modulus; ++a) {
    if (std::gcd(a, chi.modulus) != 1) continue;
    if (chi.values[size_t(a)] == one)
      table[size_t(a)] = 1;
    else if (chi.values[size_t(a)] == -one)
      table[size_t(a)] = -1;
    else
      return std::nullopt;
  }
  return table;
}


// Truncated q-expansion. Weight, level and character are advisory metadata
// driving the operator formulas; coefficients are the ground truth.
struct QExpansion {
  AlgebraPtr algebra;
  std::vector<AlgebraElement> coeffs;
  int64_t weight = 0;
  int64_t level = 1;
  DirichletCharacter character;

  size_t precision() const { return coeffs.size(); }

  const AlgebraElement& at(size_t n) const {
    require(n < coeffs.size(), errc::insufficient_precision,
            "coefficient index " + std::to_string(n) +
                " beyond precision " + std::to_string(coeffs.size()));
    return coeffs[n];
  }
};

inline QExpansion qexp_make(const AlgebraPtr& alg,
                            std::vector<AlgebraElement> coeffs, int64_t weight,
                            int64_t level, DirichletCharacter character) {
  require(!coeffs.empty(), errc::validation_error,
          "precision must be at least 1");
  require(level >= 1, errc::validation_error, "level must be positive");
  for (const auto& c : coeffs)
    require(c.alg->same_structure(*alg), errc::validation_error,
            "coefficient from a foreign algebra");
  require(character.algebra->same_structure(*alg), errc::validation_error,
          "character algebra mismatch");
  return QExpansion{alg, std::move(coeffs), weight, level,
                    std::move(character)};
}

inline QExpansion qexp_constant(const AlgebraPtr& alg,
                                const AlgebraElement& value, size_t precision,
                                int64_t weight = 0, int64_t level = 1) {
  std::vector<AlgebraElement> coeffs(precision, algebra_zero(alg));
  coeffs[0] = value;
  return qexp_make(alg, std::move(coeffs), weight, level,
                   trivial_dirichlet(alg, 1));
}

inline QExpansion truncate(const QExpansion& f, size_t precision) {
  require(precision >= 1 && precision <= f.precision(),
          errc::insufficient_precision, "cannot truncate upward");
  QExpansion g = f;
  g.coeffs.resize(precision, algebra_zero(f.algebra));
  return g;
}

inline QExpansion scale(const AlgebraElement& c, const QExpansion& f) {
  QExpansion g = f;
  for (auto& a : g.coeffs) a = c * a;
  return g;
}

// Sum metadata: precision is the minimum, level the lcm; a sum of distinct
// weights records the larger one (the mod-p weight filtration order), and
// the characters must agree as functions.
inline QExpansion qexp_add(const QExpansion& f, const QExpansion& g) {
  require(f.algebra->same_structure(*g.algebra), errc::validation_error,
          "sum needs a common coefficient algebra");
  require(characters_compatible(f.character, g.character),
          errc::validation_error, "sum needs compatible characters");
  size_t b = std::min(f.precision(), g.precision());
  std::vector<AlgebraElement> coeffs;
  for (size_t n = 0; n < b; ++n) coeffs.push_back(f.coeffs[n] + g.coeffs[n]);
  auto character =
      f.character.modulus >= g.character.modulus ? f.character : g.character;
  return qexp_make(f.algebra, std::move(coeffs),
                   std::max(f.weight, g.weight), std::lcm(f.level, g.level),
                   std::move(character));
}

inline QExpansion qexp_sub(const QExpansion& f, const QExpansion& g) {
  return qexp_add(f, scale(-algebra_unit(g.algebra), g));
}

inline bool qexp_coeffs_equal(const QExpansion& f, const QExpansion& g,
                              size_t up_to) {
  for (size_t n = 0; n < up_to; ++n)
    if (!(f.at(n) == g.at(n))) return false;
  return true;
}

// Cauchy product: precision min, weights add, levels lcm, characters
// multiply.
inline QExpansion qexp_mul(const QExpansion& f, const QExpansion& g) {
  require(f.algebra->same_structure(*g.algebra), errc::validation_error,
          "product needs a common coefficient algebra");
  size_t b = std::min(f.precision(), g.precision());
  std::vector<AlgebraElement> coeffs(b, algebra_zero(f.algebra));
  for (size_t i = 0; i < b; ++i) {
    if (f.coeffs[i].is_zero()) continue;
    for (size_t j = 0; i + j < b; ++j)
      coeffs[i + j] = coeffs[i + j] + f.coeffs[i] * g.coeffs[j];
  }
  return qexp_make(f.algebra, std::move(coeffs), f.weight + g.weight,
                   std::lcm(f.level, g.level),
                   dirichlet_product(f.character, g.character));
}

// Multiplicative inverse of a series with unit constant term.
inline QExpansion qexp_invert(const QExpansion& f) {
  require(is_unit(f.coeffs[0]), errc::validation_error,
          "series inverse needs a unit constant term");
  auto inv0 = invert(f.coeffs[0]);
  std::vector<AlgebraElement> coeffs{inv0};
  for (size_t n = 1; n < f.precision(); ++n) {
    auto acc = algebra_zero(f.algebra);
    for (size_t j = 0; j < n; ++j) acc = acc + f.coeffs[n - j] * coeffs[j];
    coeffs.push_back(-(inv0 * acc));
  }
  return qexp_make(f.algebra, std::move(coeffs), -f.weight, f.level,
                   trivial_dirichlet(f.algebra, 1));
}

// Euler product prod (1 - q^{dn}) to the given precision, by the pentagonal
// number expansion of a single eta factor without its q^{d/24} prefactor.
inline QExpansion euler_factor(const AlgebraPtr& alg, int64_t d, size_t b) {
  std::vector<AlgebraElement> coeffs(b, algebra_zero(alg));
  coeffs[0] = algebra_unit(alg);
  for (int64_t j = 1;; ++j) {
    int64_t e1 = d * j * (3 * j - 1) / 2;
    int64_t e2 = d * j * (3 * j + 1) / 2;
    if (e1 >= int64_t(b) && e2 >= int64_t(b)) break;
    auto sign = algebra_scalar(alg, j % 2 == 1 ? -1 : 1);
    if (e1 < int64_t(b)) coeffs[size_t(e1)] = coeffs[size_t(e1)] + sign;
    if (e2 < int64_t(b)) coeffs[size_t(e2)] = coeffs[size_t(e2)] + sign;
  }
  return qexp_make(alg, std::move(coeffs), 0, 1, trivial_dirichlet(alg, 1));
}

// q^{sum d r / 24} prod eta(q^d)^{r_d}. Weight is (sum r_d)/2 and the level
// records lcm(d); the character slot stays trivial (advisory metadata).
inline QExpansion eta_product(
    const AlgebraPtr& alg, const std::vector<std::pair<int64_t, int64_t>>& terms,
    size_t b) {
  require(b >= 1, errc::validation_error, "precision must be at least 1");
  int64_t exponent24 = 0, weight2 = 0, level = 1;
  for (auto [d, r] : terms) {
    require(d >= 1, errc::validation_error, "eta argument must be positive");
    exponent24 += d * r;
    weight2 += r;
    level = std::lcm(level, d);
  }
  require(exponent24 % 24 == 0, errc::non_integral_exponent,
          "leading exponent (sum d r)/24 is not an integer");
  require(weight2 % 2 == 0, errc::non_integral_exponent,
          "half-integral weight is not supported");
  int64_t exponent = exponent24 / 24;
  require(exponent >= 0, errc::validation_error,
          "negative leading exponent is not supported");
  auto f = qexp_constant(alg, algebra_unit(alg), b);
  for (auto [d, r] : terms) {
    auto factor = euler_factor(alg, d, b);
    if (r < 0) factor = qexp_invert(factor);
    for (int64_t i = 0; i < std::abs(r); ++i) f = qexp_mul(f, factor);
  }
  // Shift by q^exponent, dropping coefficients past the precision window.
  std::vector<AlgebraElement> coeffs(b, algebra_zero(alg));
  for (size_t n = 0; n + size_t(exponent) < b; ++n)
    coeffs[n + size_t(exponent)] = f.coeffs[n];
  return qexp_make(alg, std::move(coeffs), weight2 / 2, level,
                   trivial_dirichlet(alg, 1));
}

// a_n = sum_{d | n} chi2(d) d^{k-1} chi1(n/d) for n >= 1. The constant term
// is 0 for nontrivial chi1 and otherwise -B_{k, chi2}/2k with the
// generalized Bernoulli number taken at the modulus of chi2 (imprimitive
// convention); it is computed by exact rational arithmetic, so chi2 must
// carry an integer lift (quadratic or trivial).
inline QExpansion eisenstein(int64_t k, const DirichletCharacter& chi1,
                             const DirichletCharacter& chi2, size_t b) {
  require(k >= 1, errc::validation_error, "weight must be positive");
  const auto& alg = chi2.algebra;
  require(chi1.algebra->same_structure(*alg), errc::validation_error,
          "characters must share an algebra");
  auto parity = chi1.at(-1) * chi2.at(-1);
  auto expected = algebra_scalar(alg, k % 2 == 0 ? 1 : -1);
  require(parity == expected, errc::parity_mismatch,
          "chi1 chi2(-1) must equal (-1)^k");
  std::vector<AlgebraElement> coeffs(b, algebra_zero(alg));
  const Mod& mod = alg->mod;
  for (int64_t n = 1; n < int64_t(b); ++n)
    for (int64_t d = 1; d <= n; ++d) {
      if (n % d != 0) continue;
      auto term = chi2.at(d) * chi1.at(n / d);
      coeffs[size_t(n)] =
          coeffs[size_t(n)] + scale(mod.pow(mod.reduce(d), k - 1), term);
    }
  if (chi1.is_trivial()) {
    int64_t f = chi2.modulus;
    require(k <= 12 && f <= 100, errc::out_of_range,
            "constant term supported for k <= 12 and modulus <= 100");
    auto lift = quadratic_lift(chi2);
    require(lift.has_value(), errc::validation_error,
            "constant term needs an integer-valued character");
    auto bern = detail::bernoulli_numbers(int(k));
    // Binomial row C(k, j), built multiplicatively.
    std::vector<__int128> ck(size_t(k) + 1);
    ck[0] = 1;
    for (int64_t j = 1; j <= k; ++j) ck[size_t(j)] = ck[size_t(j - 1)] * (k - j + 1) / j;
    detail::Frac bk_chi = detail::Frac::make(0);
    for (int64_t a = 1; a <= f; ++a) {
      if ((*lift)[size_t(a % f)] == 0) continue;
      // B_k(a/f) = sum_j C(k, j) B_j (a/f)^{k-j}
      detail::Frac poly = detail::Frac::make(0);
      for (int64_t j = 0; j <= k; ++j) {
        detail::Frac x = detail::Frac::make(1);
        for (int64_t i = 0; i < k - j; ++i)
          x = x * detail::Frac::make(a, f);
        poly = poly + detail::Frac::make(ck[size_t(j)]) * bern[size_t(j)] * x;
      }
      bk_chi = bk_chi + detail::Frac::make((*lift)[size_t(a % f)]) * poly;
    }
    for (int64_t i = 0; i < k - 1; ++i)
      bk_chi = bk_chi * detail::Frac::make(f);
    detail::Frac a0 = detail::Frac::make(-1, 2 * k) * bk_chi;
    int64_t den = mod.reduce(int64_t(a0.den % __int128(mod.q)));
    require(mod.is_unit(den), errc::non_integral_constant,
            "Eisenstein constant term has a denominator divisible by p");
    int64_t num = mod.reduce(int64_t(a0.num % __int128(mod.q)));
    coeffs[0] = algebra_scalar(alg, mod.mul(num, mod.inv(den)));
  }
  int64_t level = std::lcm(chi1.modulus, chi2.modulus);
  return qexp_make(alg, std::move(coeffs), k, level,
                   dirichlet_product(chi1, chi2));
}

// The Hasse invariant: constant q-expansion 1 in weight p - 1, a strictly
// mod-p object.
inline QExpansion hasse(const AlgebraPtr& alg, size_t b) {
  require(alg->mod.m == 1, errc::requires_char_p,
          "Hasse invariant lives in characteristic p");
  return qexp_constant(alg, algebra_unit(alg), b, alg->mod.p - 1, 1);
}

// V: a_n <- a_{n/p}; precision grows to p(B-1)+1, level multiplies by p.
inline QExpansion v_op(const QExpansion& f, int64_t p) {
  require(p >= 2, errc::validation_error, "expansion degree must be >= 2");
  size_t b = size_t(p) * (f.precision() - 1) + 1;
  std::vector<AlgebraElement> coeffs(b, algebra_zero(f.algebra));
  for (size_t n = 0; n < f.precision(); ++n)
    coeffs[size_t(p) * n] = f.coeffs[n];
  return qexp_make(f.algebra, std::move(coeffs), f.weight, f.level * p,
                   f.character);
}

// U_p: a_n <- a_{np}; output precision floor((B-1)/p) + 1, or the requested
// precision when given.
inline QExpansion u_op(const QExpansion& f, int64_t p, size_t want = 0) {
  require(p >= 2, errc::validation_error, "operator degree must be >= 2");
  size_t b = (f.precision() - 1) / size_t(p) + 1;
  require(want == 0 || want <= b, errc::insufficient_precision,
          "input precision supports only " + std::to_string(b) +
              " output coefficients");
  if (want != 0) b = want;
  std::vector<AlgebraElement> coeffs;
  for (size_t n = 0; n < b; ++n) coeffs.push_back(f.coeffs[n * size_t(p)]);
  return qexp_make(f.algebra, std::move(coeffs), f.weight, f.level,
                   f.character);
}

// T_ell in weight k with character chi:
// a_n <- a_{n ell} + chi(ell) ell^{k-1} a_{n/ell} (second term when ell | n).
// The formula is formal; level metadata is advisory and not enforced.
inline QExpansion t_ell(const QExpansion& f, int64_t ell, int64_t k,
                        const DirichletCharacter& chi, size_t want = 0) {
  require(ell >= 2 && Mod::is_prime(ell), errc::validation_error,
          "Hecke operator index must be prime");
  require(chi.algebra->same_structure(*f.algebra), errc::validation_error,
          "character algebra mismatch");
  size_t b = (f.precision() - 1) / size_t(ell) + 1;
  require(want == 0 || want <= b, errc::insufficient_precision,
          "input precision supports only " + std::to_string(b) +
              " output coefficients");
  if (want != 0) b = want;
  const Mod& mod = f.algebra->mod;
  auto mult = scale(mod.pow(mod.reduce(ell), k - 1), chi.at(ell));
  std::vector<AlgebraElement> coeffs;
  for (size_t n = 0; n < b; ++n) {
    auto a = f.coeffs[n * size_t(ell)];
    if (n % size_t(ell) == 0) a = a + mult * f.coeffs[n / size_t(ell)];
    coeffs.push_back(a);
  }
  return qexp_make(f.algebra, std::move(coeffs), f.weight, f.level,
                   f.character);
}

// ceil(k idx / 12) + 1 with idx the index of Gamma1(N) (halved-index
// convention: idx(1) = 1, idx(2) = 3, idx(N) = N^2 prod (1 - 1/ell^2)).
inline int64_t sturm_bound(int64_t k, int64_t n) {
  require(k >= 1 && n >= 1, errc::validation_error,
          "weight and level must be positive");
  int64_t idx = 1;
  if (n == 2) idx = 3;
  if (n >= 3) {
    idx = n * n;
    int64_t rest = n;
    for (int64_t ell = 2; ell * ell <= rest; ++ell) {
      if (rest % ell != 0) continue;
      while (rest % ell == 0) rest /= ell;
      idx = idx / (ell * ell) * (ell * ell - 1);
    }
    if (rest > 1) idx = idx / (rest * rest) * (rest * rest - 1);
  }
  return (k * idx + 11) / 12 + 1;
}

// Weight/level/precision envelope for a single-character space; the level is
// the tame level, coprime to p and at least 5.
struct SpaceSpec {
  int64_t weight = 1;
  int64_t level = 5;
  Mod mod{2, 1, 2};
  size_t precision = 1;
  DirichletCharacter character;

  static SpaceSpec make(int64_t weight, int64_t level, Mod mod,
                        size_t precision, DirichletCharacter character) {
    require(weight >= 1, errc::validation_error, "weight must be positive");
    require(level >= 5, errc::validation_error,
            "tame level must be at least 5");
    require(level % mod.p != 0, errc::validation_error,
            "tame level must be coprime to p");
    require(precision >= 1, errc::validation_error,
            "precision must be at least 1");
    require(character.modulus == level || character.modulus == 1,
            errc::validation_error,
            "character modulus must divide into the tame level");
    return SpaceSpec{weight, level, mod, precision, std::move(character)};
  }
};

// Enumerates algebra elements (coordinate odometer); the search space must
// stay small, as it does for every bundled coefficient ring.
inline std::vector<AlgebraElement> enumerate_algebra(const AlgebraPtr& alg) {
  double size = 1;
  for (size_t i = 0; i < alg->rank; ++i) size *= double(alg->mod.q);
  require(size <= 65536.0, errc::out_of_range,
          "algebra too large to enumerate");
  std::vector<AlgebraElement> out;
  Row coords(alg->rank, 0);
  while (true) {
    out.push_back(algebra_element(alg, coords));
    size_t i = 0;
    while (i < alg->rank) {
      if (++coords[i] < alg->mod.q) break;
      coords[i] = 0;
      ++i;
    }
    if (i == alg->rank) break;
  }
  return out;
}

struct Stabilized {
  QExpansion f;
  AlgebraElement alpha;
  AlgebraElement beta;
};

// Ordinary p-stabilization f = g - beta V g, with alpha the distinguished
// unit root of X^2 - a_p X + p^{k-1} chi(p). Verifies U_p f = alpha f to the
// available precision, which is what makes g "an eigenform" operationally.
inline Stabilized stabilize(const QExpansion& g, int64_t p,
                            const AlgebraElement& a_p,
                            const AlgebraElement& chi_p, int64_t k) {
  const auto& alg = g.algebra;
  require(p == alg->mod.p, errc::validation_error,
          "stabilization prime must match the coefficient characteristic");
  require(is_unit(a_p), errc::not_ordinary, "a_p must be a unit");
  auto c = scale(alg->mod.pow(alg->mod.reduce(p), k - 1), chi_p);
  std::optional<AlgebraElement> best;
  std::optional<AlgebraElement> best_beta;
  for (const auto& x : enumerate_algebra(alg)) {
    if (!(x * x - a_p * x + c).is_zero() || !is_unit(x)) continue;
    auto beta = a_p - x;
    bool better = false;
    if (!best.has_value()) {
      better = true;
    } else {
      bool cur_distinguished = !is_unit(*best_beta);
      bool new_distinguished = !is_unit(beta);
      if (new_distinguished != cur_distinguished)
        better = new_distinguished;
      else
        better = x.coords < best->coords;
    }
    if (better) {
      best = x;
      best_beta = beta;
    }
  }
  require(best.has_value(), errc::roots_not_rational,
          "the Frobenius quadratic has no unit root in this algebra");
  auto f = qexp_sub(g, scale(*best_beta, v_op(g, p)));
  auto uf = u_op(f, p);
  auto rhs = truncate(scale(*best, f), uf.precision());
  require(qexp_coeffs_equal(uf, rhs, uf.precision()), errc::validation_error,
          "input is not a T_p eigenform to the working precision");
  return Stabilized{std::move(f), *best, *best_beta};
}

struct EigenCheck {
  bool ok = false;
  size_t checked_to = 0;
  std::optional<size_t> first_mismatch;
  QExpansion h;
};

// Forms h = A g - beta V g and tests T_p h = alpha h coefficientwise, with
// T_p acting in weight p. Inputs are taken at face value; a failure is
// reported as a mismatch, never thrown.
inline EigenCheck weight_p_eigen_check(const QExpansion& g,
                                       const AlgebraElement& a_p,
                                       const AlgebraElement& chi_p,
                                       const AlgebraElement& alpha,
                                       const AlgebraElement& beta) {
  const auto& alg = g.algebra;
  int64_t p = alg->mod.p;
  auto ag = qexp_mul(hasse(alg, g.precision()), g);
  auto h = qexp_sub(ag, scale(beta, v_op(g, p)));
  h = truncate(h, g.precision());
  // T_p in weight p: U_p + chi(p) p^{p-1} V; the V term dies mod p.
  auto tph = u_op(h, p);
  auto vmult = scale(alg->mod.pow(alg->mod.reduce(p), p - 1), chi_p);
  tph = qexp_add(tph, truncate(scale(vmult, v_op(h, p)), tph.precision()));
  (void)a_p;
  auto rhs = truncate(scale(alpha, h), tph.precision());
  EigenCheck out{true, tph.precision(), std::nullopt, std::move(h)};
  for (size_t n = 0; n < tph.precision(); ++n)
    if (!(tph.at(n) == rhs.at(n))) {
      out.ok = false;
      out.first_mismatch = n;
      break;
    }
  return out;
}

}  // namespace pseudodet
