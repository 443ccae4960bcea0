#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pseudodet/algebra.hpp"
#include "pseudodet/determinant.hpp"
#include "pseudodet/group.hpp"
#include "pseudodet/group_ring.hpp"

namespace pseudodet {

// Ordinarity data: a determinant pair plus a unit alpha, weight n with
// n = 1 mod (p-1), and the inertia character psi.
struct OrdinaryWitness {
  DeterminantPair pair;
  AlgebraElement alpha;
  int64_t weight_n = 1;
  CharacterData psi;

  static OrdinaryWitness make(DeterminantPair pair, AlgebraElement alpha,
                              int64_t weight_n, CharacterData psi) {
    OrdinaryWitness w{std::move(pair), std::move(alpha), weight_n,
                      std::move(psi)};
    require(is_unit(w.alpha), errc::validation_error, "alpha must be a unit");
    int64_t pm1 = w.pair.algebra->mod.p - 1;
    require(w.weight_n >= 1 && (pm1 == 0 || (w.weight_n - 1) % pm1 == 0),
            errc::validation_error, "weight must be 1 mod (p-1)");
    auto inertia = subgroup_elements(*w.pair.group, w.pair.group->inertia_gens);
    require(w.psi.domain == inertia, errc::validation_error,
            "psi domain must be the inertia subgroup");
    require(same_group(w.psi.group, w.pair.group), errc::validation_error,
            "psi defined on a different group");
    return w;
  }
};

struct OrdViolation {
  int condition = 0;  // 1, 2 or 3
  int h = 0;
  int g = 0;
  std::string note;
};

// Conditions: (1) inertia characteristic polynomials are (X-1)(X-psi(h));
// (2) alpha is a root of X^2 - T(phi) X + D(phi); (3) the expanded kernel
// membership of (h - psi(h))(phi - alpha), scanned over all g. Violations
// are collected exhaustively.
inline std::vector<OrdViolation> check_ordinary(const OrdinaryWitness& w) {
  std::vector<OrdViolation> out;
  const auto& p = w.pair;
  const auto& gr = *p.group;
  auto one = algebra_unit(p.algebra);
  auto inertia = subgroup_elements(gr, gr.inertia_gens);
  int phi = gr.frobenius;
  for (int h : inertia) {
    const auto& psi_h = w.psi.at(h);
    if (!(p.T[h] == one + psi_h))
      out.push_back({1, h, 0, "T(h) != 1 + psi(h)"});
    if (!(p.D[h] == psi_h)) out.push_back({1, h, 0, "D(h) != psi(h)"});
  }
  auto quad = w.alpha * w.alpha - p.T[phi] * w.alpha + p.D[phi];
  if (!quad.is_zero())
    out.push_back({2, 0, 0, "alpha is not a root of the Frobenius quadratic"});
  for (size_t g = 0; g < gr.order; ++g)
    for (int h : inertia) {
      const auto& psi_h = w.psi.at(h);
      int gh = gr.mult[g][h];
      int gphi = gr.mult[g][phi];
      int ghphi = gr.mult[gh][phi];
      auto lhs = p.T[ghphi] - psi_h * p.T[gphi] - p.T[gh] * w.alpha +
                 p.T[g] * psi_h * w.alpha;
      if (!lhs.is_zero())
        out.push_back({3, h, int(g), "T(ghphi) - psi(h)T(gphi) - T(gh)a + T(g)psi(h)a != 0"});
    }
  return out;
}

// Matrix-side oracle: (rho(h) - psi(h)) (rho(phi) - alpha) must be the zero
// matrix for every inertia generator; products of generators then satisfy
// the same identity because joint eigenvectors multiply.
inline bool matrix_ordinarity_oracle(const GroupPtr& group,
                                     const std::vector<Mat2>& mats,
                                     const CharacterData& psi,
                                     const AlgebraElement& alpha) {
  require(mats.size() == group->order, errc::not_a_representation,
          "one matrix per group element required");
  const auto& alg = alpha.alg;
  require(mats[0] == mat2_identity(alg), errc::not_a_representation,
          "identity must map to the identity matrix");
  for (size_t g = 0; g < group->order; ++g)
    for (size_t h = 0; h < group->order; ++h)
      require(mat2_mul(mats[g], mats[h]) == mats[group->mult[g][h]],
              errc::not_a_representation, "matrices are not multiplicative");
  Mat2 frob_factor = mat2_sub(mats[group->frobenius], mat2_scalar(alpha));
  for (int h : group->inertia_gens) {
    Mat2 inertia_factor = mat2_sub(mats[h], mat2_scalar(psi.at(h)));
    if (!mat2_mul(inertia_factor, frob_factor).is_zero()) return false;
  }
  return true;
}

// D(h - 1) must vanish for every inertia h as soon as condition (1) holds;
// no freeness hypothesis is involved. Nonzero values are reported.
inline std::vector<std::pair<int, AlgebraElement>> d_inertia_vanishing(
    const OrdinaryWitness& w) {
  std::vector<std::pair<int, AlgebraElement>> out;
  const auto& p = w.pair;
  for (int h : subgroup_elements(*p.group, p.group->inertia_gens)) {
    auto hm1 = ring_sub(ring_basis(p.group, p.algebra, h),
                        ring_basis(p.group, p.algebra, 0));
    auto v = extend_D(p, hm1);
    if (!v.is_zero()) out.emplace_back(h, v);
  }
  return out;
}

// Both sides of alpha (T(sh) - T(s) psi(h)) = T(shphi) - psi(h) T(sphi).
inline std::pair<AlgebraElement, AlgebraElement> alpha_ramification_identity(
    const OrdinaryWitness& w, int s, int h) {
  const auto& p = w.pair;
  const auto& gr = *p.group;
  const auto& psi_h = w.psi.at(h);
  int sh = gr.mult[s][h];
  int phi = gr.frobenius;
  auto lhs = w.alpha * (p.T[sh] - p.T[s] * psi_h);
  auto rhs = p.T[gr.mult[sh][phi]] - psi_h * p.T[gr.mult[s][phi]];
  return {lhs, rhs};
}

enum class CertVerdict { unramified, undetermined };

inline const char* cert_verdict_name(CertVerdict v) {
  return v == CertVerdict::unramified ? "Unramified" : "Undetermined";
}

struct UnramifiednessCertificate {
  ModMatrix S_basis;
  ModMatrix Stilde_basis;
  ModMatrix annihilator_basis;
  CertVerdict verdict = CertVerdict::undetermined;
  UnramWitness direct_check;
};

// Annihilator certification: S is the closure of the coefficient image and
// all T/D values; if the annihilator of Stilde/S vanishes the determinant is
// unramified, and the direct test must agree. A nonzero annihilator only
// withholds judgement; the direct test still records the ground truth.
inline UnramifiednessCertificate prop_key_certify(
    const OrdinaryWitness& w,
    const std::vector<AlgebraElement>& coefficient_image) {
  require(check_ordinary(w).empty(), errc::not_ordinary,
          "witness fails the ordinarity conditions");
  const auto& p = w.pair;
  std::vector<AlgebraElement> gens = coefficient_image;
  for (size_t g = 0; g < p.group->order; ++g) {
    gens.push_back(p.T[g]);
    gens.push_back(p.D[g]);
  }
  UnramifiednessCertificate cert;
  cert.S_basis = subalgebra_closure(p.algebra, gens);
  cert.Stilde_basis =
      howell_form(ModMatrix::identity(p.algebra->mod, p.algebra->rank)).h;
  cert.annihilator_basis =
      annihilator_of_quotient(p.algebra, cert.S_basis, w.alpha);
  cert.direct_check = unramified_test(p);
  if (cert.annihilator_basis.rows.empty()) {
    cert.verdict = CertVerdict::unramified;
    require(cert.direct_check.ok, errc::internal,
            "annihilator vanished but the direct test found ramification");
  } else {
    cert.verdict = CertVerdict::undetermined;
  }
  return cert;
}

// Tm[U_p]/(U_p^2 - tp U_p + diamond): free of rank two over Tm.
struct DoublingRing {
  AlgebraPtr algebra;
  AlgebraHom embed;
  AlgebraElement u_p;
  AlgebraElement tp;
  AlgebraElement diamond;
};

inline DoublingRing doubling_ring(const AlgebraPtr& tm,
                                  const AlgebraElement& tp,
                                  const AlgebraElement& diamond) {
  require(is_unit(diamond), errc::validation_error,
          "diamond value must be a unit");
  auto ext = adjoin_quadratic_root(tm, tp, diamond);
  return DoublingRing{ext.algebra, ext.embed, ext.root, tp, diamond};
}

// Coordinate rows of the module basis {1, U_p} over Tm inside the doubling
// ring, as Z/p^m vectors.
inline ModMatrix doubling_basis_rows(const DoublingRing& dr) {
  const auto& tm = dr.embed.source;
  std::vector<Row> rows;
  for (size_t i = 0; i < tm->rank; ++i) {
    Row ei(tm->rank, 0);
    ei[i] = tm->mod.reduce(1);
    auto img = dr.embed.apply(algebra_element(tm, ei));
    rows.push_back(img.coords);
    rows.push_back((img * dr.u_p).coords);
  }
  return ModMatrix{dr.algebra->mod, dr.algebra->rank, std::move(rows)};
}

struct FrobeniusIdentification {
  bool t_matches = false;
  bool d_matches = false;
  // Differences T(phi) - tp and D(phi) - diamond, as Tm coordinate rows read
  // off from the free expansion in the basis {1, U_p}.
  Row t_diff;
  Row d_diff;

  bool ok() const { return t_matches && d_matches; }
};

// The identification step: U_p satisfies X^2 - tp X + diamond = 0, so the
// residual u^2 - T(phi) u + D(phi) expands as (tp - T(phi)) u + (D(phi) -
// diamond) in the free basis {1, U_p}; both coordinates must vanish. The
// expansion reads off base-ring coordinates, so T(phi) and D(phi) must lie
// in the embedded base subring.
inline FrobeniusIdentification frobenius_identification(
    const DoublingRing& dr, const AlgebraElement& t_phi,
    const AlgebraElement& d_phi) {
  const auto& tm = dr.embed.source;
  {
    std::vector<Row> base_rows;
    for (size_t i = 0; i < tm->rank; ++i) {
      Row ei(tm->rank, 0);
      ei[i] = tm->mod.reduce(1);
      base_rows.push_back(dr.embed.apply(algebra_element(tm, ei)).coords);
    }
    auto base_hf = howell_form(
        ModMatrix{dr.algebra->mod, dr.algebra->rank, std::move(base_rows)});
    require(span_contains(base_hf, t_phi.coords) &&
                span_contains(base_hf, d_phi.coords),
            errc::validation_error,
            "T(phi) and D(phi) must lie in the base subring");
  }
  ModMatrix basis = doubling_basis_rows(dr);
  auto fb = free_basis_of_span(basis);
  require(fb.has_value() && fb->rows.size() == basis.rows.size() &&
              span_equal(basis, ModMatrix::identity(dr.algebra->mod,
                                                    dr.algebra->rank)),
          errc::not_free, "{1, U_p} is not a free module basis");
  auto residual = dr.u_p * dr.u_p - t_phi * dr.u_p + d_phi;
  auto coords = solve_with(howell_form(basis), residual.coords);
  require(coords.has_value(), errc::internal,
          "free basis failed to expand the residual");
  size_t r = dr.embed.source->rank;
  FrobeniusIdentification out;
  out.t_diff.resize(r);
  out.d_diff.resize(r);
  // Basis rows interleave embed(e_i) and embed(e_i) * U_p.
  for (size_t i = 0; i < r; ++i) {
    out.d_diff[i] = (*coords)[2 * i];
    out.t_diff[i] = dr.algebra->mod.neg((*coords)[2 * i + 1]);
  }
  out.t_matches = row_is_zero(out.t_diff);
  out.d_matches = row_is_zero(out.d_diff);
  return out;
}

}  // namespace pseudodet
