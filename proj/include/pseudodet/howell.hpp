#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pseudodet/errors.hpp"
#include "pseudodet/modring.hpp"

namespace pseudodet {

using Row = std::vector<int64_t>;

// Dense row-list matrix over Z/p^m. Entries are always kept reduced.
struct ModMatrix {
  Mod mod;
  size_t cols = 0;
  std::vector<Row> rows;

  static ModMatrix make(const Mod& mod, std::vector<Row> rows, size_t cols) {
    ModMatrix a{mod, cols, std::move(rows)};
    for (auto& r : a.rows) {
      require(r.size() == cols, errc::validation_error, "ragged matrix rows");
      for (auto& x : r) x = mod.reduce(x);
    }
    return a;
  }

  static ModMatrix make(const Mod& mod, std::vector<Row> rows) {
    size_t cols = rows.empty() ? 0 : rows[0].size();
    return make(mod, std::move(rows), cols);
  }

  static ModMatrix zero(const Mod& mod, size_t nrows, size_t cols) {
    return ModMatrix{mod, cols, std::vector<Row>(nrows, Row(cols, 0))};
  }

  static ModMatrix identity(const Mod& mod, size_t n) {
    ModMatrix a = zero(mod, n, n);
    for (size_t i = 0; i < n; ++i) a.rows[i][i] = mod.reduce(1);
    return a;
  }

  bool operator==(const ModMatrix& o) const {
    return mod == o.mod && cols == o.cols && rows == o.rows;
  }
};

inline Row row_add(const Mod& mod, const Row& a, const Row& b) {
  Row r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = mod.add(a[i], b[i]);
  return r;
}

inline Row row_sub(const Mod& mod, const Row& a, const Row& b) {
  Row r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = mod.sub(a[i], b[i]);
  return r;
}

inline Row row_scale(const Mod& mod, int64_t c, const Row& a) {
  c = mod.reduce(c);
  Row r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = mod.mul(c, a[i]);
  return r;
}

inline bool row_is_zero(const Row& a) {
  for (auto x : a)
    if (x != 0) return false;
  return true;
}

// r -= c * s, in place.
inline void row_submul(const Mod& mod, Row& r, int64_t c, const Row& s) {
  c = mod.reduce(c);
  if (c == 0) return;
  for (size_t i = 0; i < r.size(); ++i) r[i] = mod.sub(r[i], mod.mul(c, s[i]));
}

inline Row row_times_matrix(const Mod& mod, const Row& v, const ModMatrix& a) {
  require(v.size() == a.rows.size(), errc::internal, "row/matrix shape mismatch");
  Row r(a.cols, 0);
  for (size_t i = 0; i < v.size(); ++i) {
    int64_t c = mod.reduce(v[i]);
    if (c == 0) continue;
    for (size_t j = 0; j < a.cols; ++j)
      r[j] = mod.add(r[j], mod.mul(c, a.rows[i][j]));
  }
  return r;
}

inline ModMatrix mat_mul(const ModMatrix& a, const ModMatrix& b) {
  require(a.cols == b.rows.size(), errc::internal, "matrix shape mismatch");
  ModMatrix c = ModMatrix::zero(a.mod, a.rows.size(), b.cols);
  for (size_t i = 0; i < a.rows.size(); ++i)
    c.rows[i] = row_times_matrix(a.mod, a.rows[i], b);
  return c;
}

// Canonical span representative over Z/p^m. Rows of h are the Howell basis:
// pivots are p^{v_i} at strictly increasing columns, entries above a pivot
// are reduced mod p^{v_i}, and every span element with leading zeros up to
// column j lies in the span of the rows with pivot >= j (completion
// property). h = transform * input holds exactly.
struct HowellForm {
  ModMatrix h;
  std::vector<size_t> pivot_col;
  std::vector<int> pivot_val;
  ModMatrix transform;
};

inline HowellForm howell_form(const ModMatrix& a) {
  const Mod& mod = a.mod;
  std::vector<Row> work = a.rows;
  std::vector<Row> trans = ModMatrix::identity(mod, a.rows.size()).rows;

  size_t r = 0;
  std::vector<size_t> pivot_col;
  std::vector<int> pivot_val;
  for (size_t j = 0; j < a.cols; ++j) {
    // Rows at positions >= r are zero in all columns < j.
    size_t best = work.size();
    int best_val = mod.m;
    for (size_t i = r; i < work.size(); ++i) {
      int v = mod.valuation(work[i][j]);
      if (v < best_val) {
        best_val = v;
        best = i;
      }
    }
    if (best == work.size()) continue;
    std::swap(work[r], work[best]);
    std::swap(trans[r], trans[best]);
    int v = best_val;
    int64_t pivot = work[r][j];
    int64_t unit = pivot;
    for (int t = 0; t < v; ++t) unit /= mod.p;
    int64_t scale = mod.inv(unit);
    work[r] = row_scale(mod, scale, work[r]);
    trans[r] = row_scale(mod, scale, trans[r]);
    int64_t pv = 1;
    for (int t = 0; t < v; ++t) pv *= mod.p;
    if (v > 0) {
      // Completion row: kills the pivot, keeps the span's deeper tail.
      int64_t c = mod.q / pv;
      Row comp = row_scale(mod, c, work[r]);
      if (!row_is_zero(comp)) {
        work.push_back(std::move(comp));
        trans.push_back(row_scale(mod, c, trans[r]));
      }
    }
    for (size_t i = r + 1; i < work.size(); ++i) {
      int64_t e = work[i][j];
      if (e == 0) continue;
      int64_t k = e / pv;
      row_submul(mod, work[i], k, work[r]);
      row_submul(mod, trans[i], k, trans[r]);
    }
    pivot_col.push_back(j);
    pivot_val.push_back(v);
    ++r;
  }
  work.resize(r);
  trans.resize(r);
  // Back-reduce entries above each pivot mod p^{v}.
  for (size_t i = 0; i < r; ++i) {
    int64_t pv = 1;
    for (int t = 0; t < pivot_val[i]; ++t) pv *= mod.p;
    for (size_t u = 0; u < i; ++u) {
      int64_t k = work[u][pivot_col[i]] / pv;
      row_submul(mod, work[u], k, work[i]);
      row_submul(mod, trans[u], k, trans[i]);
    }
  }
  HowellForm hf;
  hf.h = ModMatrix{mod, a.cols, std::move(work)};
  hf.pivot_col = std::move(pivot_col);
  hf.pivot_val = std::move(pivot_val);
  hf.transform = ModMatrix{mod, a.rows.size(), std::move(trans)};
  return hf;
}

// Greedy reduction of target against the Howell rows; the completion
// property makes greedy complete. Returns coefficients on the Howell rows.
inline std::optional<Row> reduce_against(const HowellForm& hf, const Row& target) {
  const Mod& mod = hf.h.mod;
  require(target.size() == hf.h.cols, errc::internal, "target length mismatch");
  Row residual = target;
  for (auto& x : residual) x = mod.reduce(x);
  Row d(hf.h.rows.size(), 0);
  for (size_t i = 0; i < hf.h.rows.size(); ++i) {
    int64_t pv = 1;
    for (int t = 0; t < hf.pivot_val[i]; ++t) pv *= mod.p;
    int64_t e = residual[hf.pivot_col[i]];
    if (e % pv != 0) return std::nullopt;
    d[i] = e / pv;
    row_submul(mod, residual, d[i], hf.h.rows[i]);
  }
  if (!row_is_zero(residual)) return std::nullopt;
  return d;
}

inline bool span_contains(const HowellForm& hf, const Row& target) {
  return reduce_against(hf, target).has_value();
}

// Coordinates on the ORIGINAL rows of the matrix that produced hf.
inline std::optional<Row> solve_with(const HowellForm& hf, const Row& target) {
  auto d = reduce_against(hf, target);
  if (!d) return std::nullopt;
  return row_times_matrix(hf.h.mod, *d, hf.transform);
}

inline std::optional<Row> solve_in_span(const ModMatrix& a, const Row& target) {
  return solve_with(howell_form(a), target);
}

inline bool span_equal(const ModMatrix& a, const ModMatrix& b) {
  require(a.mod == b.mod && a.cols == b.cols, errc::internal,
          "span comparison shape mismatch");
  return howell_form(a).h.rows == howell_form(b).h.rows;
}

// Number of elements of the row span: prod p^{m - v_i} over pivots.
inline uint64_t span_size(const HowellForm& hf) {
  uint64_t n = 1;
  for (int v : hf.pivot_val) {
    for (int t = v; t < hf.h.mod.m; ++t) {
      require(n <= UINT64_MAX / uint64_t(hf.h.mod.p), errc::out_of_range,
              "span size overflows");
      n *= uint64_t(hf.h.mod.p);
    }
  }
  return n;
}

// Howell basis of { x : x * a = 0 }, via the Howell form of [a | I]: the
// rows whose a-part pivots fall past a's columns carry exactly the kernel.
inline ModMatrix left_kernel(const ModMatrix& a) {
  const Mod& mod = a.mod;
  size_t n = a.rows.size();
  ModMatrix aug = ModMatrix::zero(mod, n, a.cols + n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < a.cols; ++j) aug.rows[i][j] = a.rows[i][j];
    aug.rows[i][a.cols + i] = mod.reduce(1);
  }
  HowellForm hf = howell_form(aug);
  std::vector<Row> ker;
  for (size_t i = 0; i < hf.h.rows.size(); ++i) {
    if (hf.pivot_col[i] < a.cols) continue;
    ker.emplace_back(hf.h.rows[i].begin() + a.cols, hf.h.rows[i].end());
  }
  return howell_form(ModMatrix{mod, n, std::move(ker)}).h;
}

// Free module basis of the row span, when one exists. Rows are selected so
// that their images form a basis of M/pM (Nakayama gives generation), then
// freeness is certified by an empty left kernel. Howell rows alone do not
// work: span{(2,1)} over Z/4 has Howell rows {(2,1),(0,2)} but is free of
// rank one on the single generator (2,1).
inline std::optional<ModMatrix> free_basis_of_span(const ModMatrix& a) {
  const Mod& mod = a.mod;
  HowellForm hf = howell_form(a);
  std::vector<Row> pm;
  for (const auto& r : hf.h.rows) pm.push_back(row_scale(mod, mod.p, r));
  std::vector<Row> selected;
  for (const auto& r : hf.h.rows) {
    std::vector<Row> probe = selected;
    probe.insert(probe.end(), pm.begin(), pm.end());
    if (span_contains(howell_form(ModMatrix{mod, a.cols, probe}), r)) continue;
    selected.push_back(r);
  }
  ModMatrix basis{mod, a.cols, selected};
  if (!span_equal(basis, hf.h)) return std::nullopt;
  if (!left_kernel(basis).rows.empty()) return std::nullopt;
  return basis;
}

}  // namespace pseudodet
