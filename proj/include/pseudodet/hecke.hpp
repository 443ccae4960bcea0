#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pseudodet/algebra.hpp"
#include "pseudodet/determinant.hpp"
#include "pseudodet/errors.hpp"
#include "pseudodet/howell.hpp"
#include "pseudodet/qexp.hpp"

namespace pseudodet {

// Where a form-space basis came from: a trusted fixture file, an Eisenstein
// product construction, or the weight-one bound computed here.
enum class Provenance { ingested, eisenstein_products, weight1_computed };

inline const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::ingested: return "Ingested";
    case Provenance::eisenstein_products: return "EisensteinProducts";
    case Provenance::weight1_computed: return "Weight1Computed";
  }
  fail(errc::internal, "unknown provenance");
}

inline Provenance provenance_from_name(const std::string& s) {
  if (s == "Ingested") return Provenance::ingested;
  if (s == "EisensteinProducts") return Provenance::eisenstein_products;
  if (s == "Weight1Computed") return Provenance::weight1_computed;
  fail(errc::parse_error, "unknown provenance '" + s + "'");
}

// First `b` coefficients of f as one row over Z/p^m (algebra coordinates
// concatenated coefficient by coefficient).
inline Row flatten_qexp(const QExpansion& f, size_t b) {
  require(f.precision() >= b, errc::insufficient_precision,
          "form holds " + std::to_string(f.precision()) +
              " coefficients, need " + std::to_string(b));
  size_t r = f.algebra->rank;
  Row row(b * r, 0);
  for (size_t n = 0; n < b; ++n)
    for (size_t t = 0; t < r; ++t) row[n * r + t] = f.coeffs[n].coords[t];
  return row;
}

// A basis of q-expansions cut to one nebentypus character. Forms may mix
// nominal weights and levels (constants, V-images); the spec's weight and
// tame level drive the Hecke action and the Sturm bound. The basis may be
// empty (the zero space), so the coefficient algebra is carried explicitly.
struct FormSpaceBasis {
  SpaceSpec spec;
  AlgebraPtr algebra;
  std::vector<QExpansion> basis;
  Provenance provenance = Provenance::ingested;

  size_t dimension() const { return basis.size(); }

  // Least common multiple of the levels the basis forms actually carry.
  int64_t space_level() const {
    int64_t l = spec.level;
    for (const auto& f : basis) l = std::lcm(l, f.level);
    return l;
  }

  // Forms normalized to the spec precision; rows must be a free module
  // basis of their span (independence over Z/p^m, not just spanning).
  static FormSpaceBasis make(SpaceSpec spec, AlgebraPtr algebra,
                             std::vector<QExpansion> basis,
                             Provenance provenance) {
    require(algebra->mod == spec.mod, errc::validation_error,
            "coefficient algebra lives over the wrong chain ring");
    std::vector<QExpansion> cut;
    for (const auto& f : basis) {
      require(f.algebra == algebra || f.algebra->same_structure(*algebra),
              errc::validation_error, "basis forms must share the algebra");
      require(f.precision() >= spec.precision, errc::insufficient_precision,
              "basis form shorter than the space precision");
      cut.push_back(truncate(f, spec.precision));
    }
    FormSpaceBasis out{std::move(spec), std::move(algebra), std::move(cut),
                       provenance};
    require(out.spec.precision >=
                size_t(sturm_bound(out.spec.weight, out.space_level())),
            errc::insufficient_precision,
            "space precision below the Sturm bound");
    if (out.basis.empty()) return out;
    std::vector<Row> rows;
    for (const auto& f : out.basis)
      rows.push_back(flatten_qexp(f, out.spec.precision));
    ModMatrix m{out.spec.mod, out.spec.precision * out.algebra->rank,
                std::move(rows)};
    require(left_kernel(m).rows.empty(), errc::validation_error,
            "basis rows satisfy a nontrivial relation");
    return out;
  }
};

// Square matrix over the coefficient algebra, rows = images of basis forms.
struct AlgMatrix {
  AlgebraPtr alg;
  size_t n = 0;
  std::vector<std::vector<AlgebraElement>> entries;

  static AlgMatrix zero(const AlgebraPtr& alg, size_t n) {
    return AlgMatrix{
        alg, n,
        std::vector<std::vector<AlgebraElement>>(
            n, std::vector<AlgebraElement>(n, algebra_zero(alg)))};
  }

  static AlgMatrix identity(const AlgebraPtr& alg, size_t n) {
    AlgMatrix m = zero(alg, n);
    for (size_t i = 0; i < n; ++i) m.entries[i][i] = algebra_unit(alg);
    return m;
  }

  static AlgMatrix scalar(const AlgebraPtr& alg, size_t n,
                          const AlgebraElement& c) {
    AlgMatrix m = zero(alg, n);
    for (size_t i = 0; i < n; ++i) m.entries[i][i] = c;
    return m;
  }
};

inline bool operator==(const AlgMatrix& a, const AlgMatrix& b) {
  if (a.n != b.n) return false;
  for (size_t i = 0; i < a.n; ++i)
    for (size_t j = 0; j < a.n; ++j)
      if (!(a.entries[i][j] == b.entries[i][j])) return false;
  return true;
}

inline AlgMatrix alg_mat_add(const AlgMatrix& a, const AlgMatrix& b) {
  require(a.n == b.n, errc::internal, "matrix size mismatch");
  AlgMatrix out = a;
  for (size_t i = 0; i < a.n; ++i)
    for (size_t j = 0; j < a.n; ++j)
      out.entries[i][j] = a.entries[i][j] + b.entries[i][j];
  return out;
}

inline AlgMatrix alg_mat_mul(const AlgMatrix& a, const AlgMatrix& b) {
  require(a.n == b.n, errc::internal, "matrix size mismatch");
  AlgMatrix out = AlgMatrix::zero(a.alg, a.n);
  for (size_t i = 0; i < a.n; ++i)
    for (size_t j = 0; j < a.n; ++j)
      for (size_t k = 0; k < a.n; ++k)
        out.entries[i][j] =
            out.entries[i][j] + a.entries[i][k] * b.entries[k][j];
  return out;
}

// One Z/p^m row per matrix: entries row-major, coordinates inlined.
inline Row flatten_matrix(const AlgMatrix& m) {
  size_t r = m.alg->rank;
  Row row(m.n * m.n * r, 0);
  for (size_t i = 0; i < m.n; ++i)
    for (size_t j = 0; j < m.n; ++j)
      for (size_t t = 0; t < r; ++t)
        row[(i * m.n + j) * r + t] = m.entries[i][j].coords[t];
  return row;
}

inline AlgMatrix unflatten_matrix(const AlgebraPtr& alg, size_t n,
                                  const Row& row) {
  size_t r = alg->rank;
  require(row.size() == n * n * r, errc::internal, "flattened size mismatch");
  AlgMatrix m = AlgMatrix::zero(alg, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      Row c(r);
      for (size_t t = 0; t < r; ++t) c[t] = row[(i * n + j) * r + t];
      m.entries[i][j] = algebra_element(alg, std::move(c));
    }
  return m;
}

// Operator labels: "T_ell", "U_p", "<d>".
struct OperatorLabel {
  char kind = 'T';  // 'T', 'U', or 'D' for a diamond
  int64_t ell = 0;
};

inline OperatorLabel parse_operator_label(const std::string& s) {
  auto numeric = [](const std::string& t) -> int64_t {
    require(!t.empty(), errc::parse_error, "operator label missing index");
    int64_t v = 0;
    for (char c : t) {
      require(c >= '0' && c <= '9', errc::parse_error,
              "operator index must be a number in '" + t + "'");
      v = v * 10 + (c - '0');
      require(v <= (int64_t(1) << 40), errc::parse_error,
              "operator index out of range");
    }
    require(v >= 2, errc::parse_error, "operator index must be at least 2");
    return v;
  };
  if (s.size() >= 3 && s.front() == '<' && s.back() == '>')
    return OperatorLabel{'D', numeric(s.substr(1, s.size() - 2))};
  if (s.rfind("T_", 0) == 0) return OperatorLabel{'T', numeric(s.substr(2))};
  if (s.rfind("U_", 0) == 0) return OperatorLabel{'U', numeric(s.substr(2))};
  fail(errc::parse_error, "unknown operator label '" + s + "'");
}

inline std::string operator_label(char kind, int64_t ell) {
  if (kind == 'D') return "<" + std::to_string(ell) + ">";
  require(kind == 'T' || kind == 'U', errc::internal, "unknown operator kind");
  return std::string(1, kind) + "_" + std::to_string(ell);
}

// Matrix of an operator on the basis: op(f_i) = sum_j entries[i][j] f_j,
// solved from q-expansions truncated to an output precision that still
// pins forms of this weight and level (the Sturm bound). Diamonds act as
// the scalar chi(d) because the space is cut to a single character.
inline AlgMatrix hecke_matrix(const FormSpaceBasis& space,
                              const std::string& label, size_t want = 0) {
  require(space.dimension() >= 1, errc::validation_error,
          "operator matrix on the zero space");
  OperatorLabel op = parse_operator_label(label);
  const auto& alg = space.algebra;
  const Mod& mod = space.spec.mod;
  size_t dim = space.dimension();
  if (op.kind == 'D') {
    require(std::gcd(op.ell, space.space_level() * mod.p) == 1,
            errc::validation_error,
            "diamond index must be coprime to the level and p");
    return AlgMatrix::scalar(alg, dim, space.spec.character.at(op.ell));
  }
  if (op.kind == 'U')
    require(op.ell == mod.p, errc::validation_error,
            "U_p index must be the chain ring prime");
  size_t b_in = space.spec.precision;
  size_t b_out = (b_in - 1) / size_t(op.ell) + 1;
  require(want == 0 || want <= b_out, errc::insufficient_precision,
          "space precision supports only " + std::to_string(b_out) +
              " output coefficients");
  if (want != 0) b_out = want;
  require(b_out >= size_t(sturm_bound(space.spec.weight, space.space_level())),
          errc::insufficient_precision,
          "operator output precision falls below the Sturm bound");
  // Unknown coefficients range over the algebra: one block of rows per
  // basis form, one row per algebra coordinate.
  size_t r = alg->rank;
  std::vector<Row> rows;
  for (const auto& f : space.basis)
    for (size_t t = 0; t < r; ++t) {
      Row e(r, 0);
      e[t] = mod.reduce(1);
      rows.push_back(
          flatten_qexp(scale(algebra_element(alg, std::move(e)), f), b_out));
    }
  HowellForm hf = howell_form(ModMatrix{mod, b_out * r, std::move(rows)});
  AlgMatrix out = AlgMatrix::zero(alg, dim);
  for (size_t i = 0; i < dim; ++i) {
    QExpansion image =
        op.kind == 'U'
            ? u_op(space.basis[i], op.ell, b_out)
            : t_ell(space.basis[i], op.ell, space.spec.weight,
                    space.spec.character, b_out);
    auto c = solve_with(hf, flatten_qexp(image, b_out));
    require(c.has_value(), errc::not_stable,
            label + " image of basis form " + std::to_string(i) +
                " does not solve in the span");
    for (size_t j = 0; j < dim; ++j) {
      Row coords(r);
      for (size_t t = 0; t < r; ++t) coords[t] = (*c)[j * r + t];
      out.entries[i][j] = algebra_element(alg, std::move(coords));
    }
  }
  return out;
}

// Commutative algebra generated by operator matrices over the coefficient
// algebra, as a ChainAlgebra on a free module basis of the closure. The
// coefficient scalars are adjoined, so the result is an algebra over the
// full coefficient ring, not just Z/p^m.
struct GeneratedAlgebra {
  AlgebraPtr algebra;
  AlgebraPtr coefficients;
  size_t matrix_dim = 0;
  // Rows are flattened matrices forming the free module basis.
  ModMatrix basis;
  std::map<std::string, AlgebraElement> op_images;

  AlgebraElement element_of(const AlgMatrix& m) const {
    auto c = solve_with(howell_form(basis), flatten_matrix(m));
    require(c.has_value(), errc::validation_error,
            "matrix lies outside the generated algebra");
    return algebra_element(algebra, *c);
  }

  // Image of a coefficient scalar c, i.e. of the matrix c * identity.
  AlgebraElement scalar_element(const AlgebraElement& c) const {
    return element_of(AlgMatrix::scalar(coefficients, matrix_dim, c));
  }

  AlgMatrix matrix_of(const AlgebraElement& x) const {
    require(x.alg == algebra || x.alg->same_structure(*algebra),
            errc::validation_error, "element of a different algebra");
    return unflatten_matrix(coefficients, matrix_dim,
                            row_times_matrix(basis.mod, x.coords, basis));
  }
};

inline GeneratedAlgebra algebra_generate(
    const std::map<std::string, AlgMatrix>& ops) {
  require(!ops.empty(), errc::validation_error,
          "algebra generation needs at least one operator");
  const AlgebraPtr& coeff = ops.begin()->second.alg;
  size_t n = ops.begin()->second.n;
  const Mod& mod = coeff->mod;
  for (const auto& [label, m] : ops) {
    require(m.n == n, errc::validation_error,
            "operator " + label + " has the wrong size");
    require(m.alg == coeff || m.alg->same_structure(*coeff),
            errc::validation_error,
            "operator " + label + " lives over a different algebra");
  }
  for (auto i = ops.begin(); i != ops.end(); ++i)
    for (auto j = std::next(i); j != ops.end(); ++j)
      require(alg_mat_mul(i->second, j->second) ==
                  alg_mat_mul(j->second, i->second),
              errc::non_commuting,
              "operators " + i->first + " and " + j->first +
                  " do not commute");
  // Module span seeded with the coefficient scalars; each round adjoins all
  // pairwise products, so stability gives multiplicative closure.
  std::vector<Row> rows;
  for (size_t t = 0; t < coeff->rank; ++t) {
    Row e(coeff->rank, 0);
    e[t] = mod.reduce(1);
    rows.push_back(flatten_matrix(
        AlgMatrix::scalar(coeff, n, algebra_element(coeff, std::move(e)))));
  }
  for (const auto& [label, m] : ops) rows.push_back(flatten_matrix(m));
  size_t width = n * n * coeff->rank;
  ModMatrix span = howell_form(ModMatrix{mod, width, std::move(rows)}).h;
  for (size_t round = 0; round <= width; ++round) {
    std::vector<Row> next = span.rows;
    for (size_t i = 0; i < span.rows.size(); ++i)
      for (size_t j = i; j < span.rows.size(); ++j)
        next.push_back(flatten_matrix(
            alg_mat_mul(unflatten_matrix(coeff, n, span.rows[i]),
                        unflatten_matrix(coeff, n, span.rows[j]))));
    ModMatrix grown = howell_form(ModMatrix{mod, width, std::move(next)}).h;
    if (grown.rows == span.rows) break;
    require(round < width, errc::internal, "algebra closure did not stabilize");
    span = std::move(grown);
  }
  auto basis = free_basis_of_span(span);
  require(basis.has_value(), errc::not_free,
          "generated algebra is not free as a module");
  HowellForm hf = howell_form(*basis);
  size_t k = basis->rows.size();
  std::vector<AlgMatrix> mats;
  for (const auto& row : basis->rows)
    mats.push_back(unflatten_matrix(coeff, n, row));
  std::vector<std::string> names(k);
  for (size_t i = 0; i < k; ++i) names[i] = "m" + std::to_string(i);
  std::vector<std::vector<Row>> table(k, std::vector<Row>(k));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) {
      auto c = solve_with(hf, flatten_matrix(alg_mat_mul(mats[i], mats[j])));
      require(c.has_value(), errc::internal, "closure not closed under product");
      table[i][j] = *c;
    }
  auto unit = solve_with(hf, flatten_matrix(AlgMatrix::identity(coeff, n)));
  require(unit.has_value(), errc::internal, "identity outside the closure");
  AlgebraPtr alg = ChainAlgebra::make(mod, std::move(names), std::move(table),
                                      std::move(*unit));
  GeneratedAlgebra out{alg, coeff, n, *basis, {}};
  for (const auto& [label, m] : ops) out.op_images.emplace(label, out.element_of(m));
  return out;
}

struct HeckeAlgebraModel {
  FormSpaceBasis space;
  std::map<std::string, AlgMatrix> operators;
  GeneratedAlgebra generated;
};

inline HeckeAlgebraModel build_model(FormSpaceBasis space,
                                     const std::vector<std::string>& labels,
                                     size_t want = 0) {
  std::map<std::string, AlgMatrix> ops;
  for (const auto& label : labels) {
    require(!ops.count(label), errc::validation_error,
            "duplicate operator label " + label);
    ops.emplace(label, hecke_matrix(space, label, want));
  }
  GeneratedAlgebra gen = algebra_generate(ops);
  return HeckeAlgebraModel{std::move(space), std::move(ops), std::move(gen)};
}

// Residual eigenvalue data at Frobenius: ell -> (tbar, dbar) over the
// coefficient algebra.
struct ResidualData {
  std::map<int64_t, std::pair<AlgebraElement, AlgebraElement>> at_ell;
};

// An ideal of the generated algebra, carried with the Howell basis of the
// module it generates.
struct HeckeIdeal {
  std::vector<AlgebraElement> generators;
  ModMatrix span;
};

inline ModMatrix ideal_span(const AlgebraPtr& alg,
                            const std::vector<AlgebraElement>& gens) {
  std::vector<Row> rows;
  for (const auto& g : gens)
    for (size_t j = 0; j < alg->rank; ++j) {
      Row e(alg->rank, 0);
      e[j] = alg->mod.reduce(1);
      rows.push_back(alg->mul_coords(g.coords, e));
    }
  return howell_form(ModMatrix{alg->mod, alg->rank, std::move(rows)}).h;
}

// The ideal generated by p, the deviations T_ell - tbar(Frob_ell) and
// <ell> ell^{n-1} - dbar(Frob_ell) for every T_ell operator of the model,
// and, when the unit-root pair is supplied, (U_p - alpha)(U_p - beta).
// The pair enters only through alpha + beta and alpha * beta, which must be
// coefficient scalars even when alpha itself lives in an extension.
inline HeckeIdeal build_maximal_ideal(
    const HeckeAlgebraModel& model, const ResidualData& residual,
    const std::optional<std::pair<AlgebraElement, AlgebraElement>>& unit_pair,
    int64_t weight_n) {
  require(weight_n >= 1, errc::validation_error, "weight must be positive");
  const GeneratedAlgebra& gen = model.generated;
  const Mod& mod = gen.algebra->mod;
  std::vector<AlgebraElement> gens;
  gens.push_back(scale(mod.p, algebra_unit(gen.algebra)));
  for (const auto& [label, m] : model.operators) {
    OperatorLabel op = parse_operator_label(label);
    if (op.kind != 'T') continue;
    auto it = residual.at_ell.find(op.ell);
    require(it != residual.at_ell.end(), errc::validation_error,
            "residual data missing at " + std::to_string(op.ell));
    gens.push_back(gen.op_images.at(label) -
                   gen.scalar_element(it->second.first));
    int64_t ellpow = mod.pow(mod.reduce(op.ell), weight_n - 1);
    gens.push_back(
        scale(ellpow,
              gen.scalar_element(model.space.spec.character.at(op.ell))) -
        gen.scalar_element(it->second.second));
  }
  if (unit_pair) {
    auto it = gen.op_images.find(operator_label('U', mod.p));
    require(it != gen.op_images.end(), errc::validation_error,
            "unit-root pair given but the model has no U_p operator");
    // The pair may live in an extension; only its trace and norm enter, and
    // those must be scalars over the chain ring.
    const auto& [a, b] = *unit_pair;
    auto trace = scalar_value(a + b);
    auto norm = scalar_value(a * b);
    require(trace.has_value() && norm.has_value(), errc::validation_error,
            "unit-root trace and norm must be chain ring scalars");
    const AlgebraElement& u = it->second;
    gens.push_back(u * u - scale(*trace, u) +
                   scale(*norm, algebra_unit(gen.algebra)));
  }
  ModMatrix span = ideal_span(gen.algebra, gens);
  require(!span_contains(howell_form(span), gen.algebra->unit),
          errc::not_proper, "residual data generates the unit ideal");
  return HeckeIdeal{std::move(gens), std::move(span)};
}

// Localization at a proper ideal of an Artinian chain algebra: the stable
// power of the ideal is generated by an idempotent e, and the local factor
// is the complementary cut (1 - e) A.
struct LocalizedModel {
  AlgebraComponent component;
  std::map<std::string, AlgebraElement> op_images;
};

inline LocalizedModel localize(const GeneratedAlgebra& gen,
                               const HeckeIdeal& ideal) {
  const AlgebraPtr& alg = gen.algebra;
  const Mod& mod = alg->mod;
  ModMatrix power = ideal.span;
  for (int round = 0; round < mod.m * int(alg->rank) + 1; ++round) {
    std::vector<Row> next;
    for (const auto& g : ideal.span.rows)
      for (const auto& h : power.rows) next.push_back(alg->mul_coords(g, h));
    ModMatrix grown = howell_form(ModMatrix{mod, alg->rank, std::move(next)}).h;
    if (grown.rows == power.rows) break;
    power = std::move(grown);
  }
  AlgebraElement e = algebra_zero(alg);
  if (!power.rows.empty()) {
    // Identity of the idempotent ideal: e with e v = v for each basis row.
    size_t k = power.rows.size();
    std::vector<Row> rows(k, Row(k * alg->rank, 0));
    Row target(k * alg->rank, 0);
    for (size_t j = 0; j < k; ++j) {
      for (size_t i = 0; i < k; ++i) {
        Row prod = alg->mul_coords(power.rows[i], power.rows[j]);
        for (size_t t = 0; t < alg->rank; ++t)
          rows[i][j * alg->rank + t] = prod[t];
      }
      for (size_t t = 0; t < alg->rank; ++t)
        target[j * alg->rank + t] = power.rows[j][t];
    }
    auto c = solve_in_span(ModMatrix{mod, k * alg->rank, std::move(rows)},
                           target);
    require(c.has_value(), errc::internal,
            "stable ideal power has no identity");
    Row coords(alg->rank, 0);
    for (size_t i = 0; i < k; ++i)
      coords = row_add(mod, coords, row_scale(mod, (*c)[i], power.rows[i]));
    e = algebra_element(alg, std::move(coords));
    require(e * e == e, errc::internal, "ideal identity is not idempotent");
  }
  AlgebraComponent comp = idempotent_component(alg, algebra_unit(alg) - e);
  LocalizedModel out{comp, {}};
  for (const auto& [label, x] : gen.op_images)
    out.op_images.emplace(label, component_project(comp, x));
  return out;
}

// Generalized-eigenspace split of u at the residues alpha != beta, via the
// stable power idempotents of u - beta and u - alpha (the squaring orbit is
// the Hensel lift of the coprime mod-p factorization). With alpha = beta
// the algebra is returned whole.
struct SemilocalSplit {
  std::vector<AlgebraComponent> components;
  std::vector<AlgebraElement> u_images;
};

inline SemilocalSplit semilocal_split(const AlgebraPtr& alg,
                                      const AlgebraElement& u,
                                      const AlgebraElement& alpha,
                                      const AlgebraElement& beta) {
  require(u.alg == alg || u.alg->same_structure(*alg), errc::validation_error,
          "u outside the algebra");
  require(alpha.alg == alg || alpha.alg->same_structure(*alg),
          errc::validation_error, "alpha outside the algebra");
  require(beta.alg == alg || beta.alg->same_structure(*alg),
          errc::validation_error, "beta outside the algebra");
  // The claimed residues must be the characteristic factors of u:
  // ((u-alpha)(u-beta))^rank vanishes mod p.
  AlgebraElement w =
      element_pow((u - alpha) * (u - beta), int64_t(alg->rank));
  for (int64_t c : w.coords)
    require(c % alg->mod.p == 0, errc::validation_error,
            "residues are not the characteristic factors of u");
  SemilocalSplit out;
  if (alpha == beta) {
    out.components.push_back(
        idempotent_component(alg, algebra_unit(alg)));
    out.u_images.push_back(component_project(out.components[0], u));
    return out;
  }
  AlgebraElement ea = power_idempotent(u - beta);
  AlgebraElement eb = power_idempotent(u - alpha);
  require((ea * eb).is_zero() && ea + eb == algebra_unit(alg),
          errc::lift_failure,
          "mod-p factors are not coprime for the claimed distinct residues");
  // A residue that does not actually occur yields the zero idempotent and
  // contributes no component.
  for (const auto& e : {ea, eb}) {
    if (e.is_zero()) continue;
    out.components.push_back(idempotent_component(alg, e));
    out.u_images.push_back(component_project(out.components.back(), u));
  }
  return out;
}

// Upper bound for the weight-one space at precision b: all f with f e in
// the target row span for every multiplier e in aux. With aux = {1} this
// degenerates to the target span itself; the bound is sharp exactly when
// aux multiplies the true weight-one space onto products inside the target.
inline FormSpaceBasis weight1_space(
    const FormSpaceBasis& aux, const FormSpaceBasis& target, size_t b,
    std::optional<size_t> expected_dimension = std::nullopt) {
  const auto& alg = aux.algebra;
  const Mod& mod = aux.spec.mod;
  require(mod == target.spec.mod && alg->same_structure(*target.algebra),
          errc::validation_error,
          "aux and target must share the coefficient ring");
  require(aux.spec.level == target.spec.level, errc::validation_error,
          "aux and target must share the tame level");
  require(b >= size_t(sturm_bound(1, target.space_level())),
          errc::insufficient_precision,
          "requested precision below the weight-one Sturm bound");
  require(aux.spec.precision >= b && target.spec.precision >= b,
          errc::insufficient_precision,
          "aux and target must hold the requested precision");
  bool unit_leading = false;
  for (const auto& e : aux.basis)
    for (size_t i = 0; i < b && !unit_leading; ++i) {
      if (e.coeffs[i].is_zero()) continue;
      unit_leading = is_unit(e.coeffs[i]);
      break;
    }
  require(unit_leading, errc::validation_error,
          "aux needs a form whose leading coefficient is a unit");
  // Unknown f has b algebra coefficients. Stack one constraint block per
  // multiplier: x M_e = y_e T for some y_e, i.e. the left kernel of the
  // matrix [M_{e_1} .. M_{e_k}; T .. 0; ..; 0 .. T] restricted to x.
  size_t r = alg->rank;
  size_t xrows = b * r;
  size_t block = b * r;
  size_t k = aux.dimension();
  std::vector<Row> trows;
  for (const auto& f : target.basis) trows.push_back(flatten_qexp(f, b));
  size_t total_rows = xrows + k * trows.size();
  ModMatrix stacked = ModMatrix::zero(mod, total_rows, k * block);
  for (size_t n = 0; n < b; ++n)
    for (size_t t = 0; t < r; ++t) {
      // Basis monomial q^n e_t multiplied by each aux form.
      Row e(r, 0);
      e[t] = mod.reduce(1);
      std::vector<AlgebraElement> coeffs(b, algebra_zero(alg));
      coeffs[n] = algebra_element(alg, std::move(e));
      QExpansion mono = qexp_make(alg, std::move(coeffs), 1, aux.spec.level,
                                  aux.spec.character);
      for (size_t ei = 0; ei < k; ++ei) {
        Row prod = flatten_qexp(
            truncate(qexp_mul(mono, truncate(aux.basis[ei], b)), b), b);
        for (size_t c = 0; c < block; ++c)
          stacked.rows[n * r + t][ei * block + c] = prod[c];
      }
    }
  for (size_t ei = 0; ei < k; ++ei)
    for (size_t ti = 0; ti < trows.size(); ++ti)
      for (size_t c = 0; c < block; ++c)
        stacked.rows[xrows + ei * trows.size() + ti][ei * block + c] =
            trows[ti][c];
  ModMatrix ker = left_kernel(stacked);
  std::vector<Row> xparts;
  for (const auto& row : ker.rows) {
    Row x(row.begin(), row.begin() + xrows);
    if (!row_is_zero(x)) xparts.push_back(std::move(x));
  }
  ModMatrix span = howell_form(ModMatrix{mod, xrows, std::move(xparts)}).h;
  auto basis = free_basis_of_span(span);
  require(basis.has_value(), errc::not_free,
          "weight-one solution space is not free as a module");
  require(!expected_dimension || *expected_dimension == basis->rows.size(),
          errc::validation_error,
          "weight-one space dimension " + std::to_string(basis->rows.size()) +
              " does not match the expected " +
              std::to_string(expected_dimension ? *expected_dimension : 0));
  std::vector<QExpansion> forms;
  for (const auto& row : basis->rows) {
    std::vector<AlgebraElement> coeffs;
    for (size_t n = 0; n < b; ++n) {
      Row c(r);
      for (size_t t = 0; t < r; ++t) c[t] = row[n * r + t];
      coeffs.push_back(algebra_element(alg, std::move(c)));
    }
    forms.push_back(qexp_make(alg, std::move(coeffs), 1, target.spec.level,
                              aux.spec.character));
  }
  SpaceSpec spec = SpaceSpec::make(1, target.spec.level, mod, b,
                                   aux.spec.character);
  return FormSpaceBasis::make(std::move(spec), alg, std::move(forms),
                              Provenance::weight1_computed);
}

// Comparison of the unramified Galois side against the Hecke side at every
// prime ell coprime to the tame level up to L, with ell = p included and
// flagged. iota identifies the Galois value algebra with the model algebra.
struct TheoremRow {
  int64_t ell = 0;
  bool at_p = false;
  bool t_match = false;
  bool d_match = false;
};

struct TheoremReport {
  std::vector<TheoremRow> rows;
  bool all_match = true;
};

inline TheoremReport main_theorem_check(
    const std::map<std::string, AlgebraElement>& op_images,
    const DirichletCharacter& character, int64_t weight_n,
    const DeterminantPair& galois, const std::map<int64_t, size_t>& frobenius,
    const AlgebraHom& iota, int64_t limit, int64_t tame_level, int64_t p) {
  require(weight_n >= 1, errc::validation_error, "weight must be positive");
  const Mod& mod = iota.target->mod;
  TheoremReport report;
  for (int64_t ell = 2; ell <= limit; ++ell) {
    if (!Mod::is_prime(ell) || tame_level % ell == 0) continue;
    auto op = op_images.find(operator_label('T', ell));
    require(op != op_images.end(), errc::missing_frobenius_data,
            "model has no T_" + std::to_string(ell) + " operator");
    auto cls = frobenius.find(ell);
    require(cls != frobenius.end(), errc::missing_frobenius_data,
            "no Frobenius class recorded at " + std::to_string(ell));
    require(cls->second < size_t(galois.group->order), errc::out_of_range,
            "Frobenius class index out of range");
    AlgebraElement t_galois = iota.apply(galois.T[cls->second]);
    AlgebraElement d_galois = iota.apply(galois.D[cls->second]);
    AlgebraElement d_hecke =
        scale(mod.pow(mod.reduce(ell), weight_n - 1),
              iota.apply(character.at(ell)));
    TheoremRow row;
    row.ell = ell;
    row.at_p = ell == p;
    row.t_match = t_galois == op->second;
    row.d_match = d_galois == d_hecke;
    report.all_match = report.all_match && row.t_match && row.d_match;
    report.rows.push_back(row);
  }
  return report;
}

// The weight-one T_p must already lie in the algebra generated without it:
// the two module spans coincide, or a flattened witness matrix is returned.
struct RedundancyReport {
  bool ok = false;
  std::optional<Row> witness;
};

inline RedundancyReport t_p_redundancy_check(const GeneratedAlgebra& without_tp,
                                             const GeneratedAlgebra& with_tp) {
  require(without_tp.matrix_dim == with_tp.matrix_dim &&
              without_tp.coefficients->same_structure(*with_tp.coefficients),
          errc::validation_error, "models act on different spaces");
  HowellForm base = howell_form(without_tp.basis);
  for (const auto& row : with_tp.basis.rows)
    if (!span_contains(base, row)) return RedundancyReport{false, row};
  HowellForm ext = howell_form(with_tp.basis);
  for (const auto& row : without_tp.basis.rows)
    if (!span_contains(ext, row)) return RedundancyReport{false, row};
  return RedundancyReport{true, std::nullopt};
}

namespace detail {

using Poly = std::vector<AlgebraElement>;

inline Poly poly_add(const Poly& a, const Poly& b) {
  const auto& alg = a.empty() ? b.front().alg : a.front().alg;
  Poly out(std::max(a.size(), b.size()), algebra_zero(alg));
  for (size_t i = 0; i < a.size(); ++i) out[i] = out[i] + a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] = out[i] + b[i];
  return out;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  const auto& alg = a.front().alg;
  Poly out(a.size() + b.size() - 1, algebra_zero(alg));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
  return out;
}

inline Poly poly_det(const std::vector<std::vector<Poly>>& m,
                     std::vector<size_t> cols, size_t row) {
  const auto& alg = m[0][0].front().alg;
  if (cols.empty()) return Poly{algebra_unit(alg)};
  Poly out{algebra_zero(alg)};
  for (size_t k = 0; k < cols.size(); ++k) {
    std::vector<size_t> rest = cols;
    rest.erase(rest.begin() + int64_t(k));
    Poly minor = poly_det(m, std::move(rest), row + 1);
    Poly term = poly_mul(m[row][cols[k]], minor);
    if (k % 2 == 1)
      for (auto& c : term) c = -c;
    out = poly_add(out, term);
  }
  return out;
}

}  // namespace detail

// Characteristic polynomial det(x I - A), lowest degree first; a conjugation
// invariant used to compare Hecke matrices across bases.
inline std::vector<AlgebraElement> char_poly(const AlgMatrix& a) {
  require(a.n >= 1 && a.n <= 6, errc::out_of_range,
          "characteristic polynomial supported up to size 6");
  std::vector<std::vector<detail::Poly>> m(
      a.n, std::vector<detail::Poly>(a.n));
  for (size_t i = 0; i < a.n; ++i)
    for (size_t j = 0; j < a.n; ++j) {
      m[i][j] = detail::Poly{-a.entries[i][j]};
      if (i == j) m[i][j].push_back(algebra_unit(a.alg));
    }
  std::vector<size_t> cols(a.n);
  for (size_t i = 0; i < a.n; ++i) cols[i] = i;
  detail::Poly det = detail::poly_det(m, std::move(cols), 0);
  det.resize(a.n + 1, algebra_zero(a.alg));
  return det;
}

}  // namespace pseudodet
