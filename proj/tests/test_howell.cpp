#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "pseudodet/howell.hpp"

using namespace pseudodet;

namespace {

// Brute-force row span: every coefficient tuple times the matrix.
std::set<Row> brute_span(const ModMatrix& a) {
  std::set<Row> out;
  size_t n = a.rows.size();
  Row c(n, 0);
  while (true) {
    out.insert(row_times_matrix(a.mod, c, a));
    size_t i = 0;
    while (i < n && ++c[i] == a.mod.q) c[i++] = 0;
    if (i == n) break;
  }
  return out;
}

// Brute-force left kernel as a set of coefficient rows.
std::set<Row> brute_kernel(const ModMatrix& a) {
  std::set<Row> out;
  size_t n = a.rows.size();
  Row c(n, 0);
  while (true) {
    if (row_is_zero(row_times_matrix(a.mod, c, a))) out.insert(c);
    size_t i = 0;
    while (i < n && ++c[i] == a.mod.q) c[i++] = 0;
    if (i == n) break;
  }
  return out;
}

void check_howell_against_brute(const ModMatrix& a) {
  HowellForm hf = howell_form(a);
  // transform is exact: h = transform * a.
  REQUIRE(mat_mul(hf.transform, a).rows == hf.h.rows);
  // Idempotent.
  HowellForm again = howell_form(hf.h);
  REQUIRE(again.h.rows == hf.h.rows);
  std::set<Row> span = brute_span(a);
  REQUIRE(brute_span(hf.h) == span);
  REQUIRE(span_size(hf) == span.size());
  // Membership and solve agree with enumeration over the whole ambient space.
  Row v(a.cols, 0);
  while (true) {
    bool in = span.count(v) > 0;
    REQUIRE(span_contains(hf, v) == in);
    auto sol = solve_with(hf, v);
    REQUIRE(sol.has_value() == in);
    if (sol) REQUIRE(row_times_matrix(a.mod, *sol, a) == v);
    size_t i = 0;
    while (i < a.cols && ++v[i] == a.mod.q) v[i++] = 0;
    if (i == a.cols) break;
  }
  // Left kernel matches enumeration.
  ModMatrix ker = left_kernel(a);
  for (const auto& x : ker.rows)
    REQUIRE(row_is_zero(row_times_matrix(a.mod, x, a)));
  REQUIRE(brute_span(ker) == brute_kernel(a));
}

}  // namespace

TEST_CASE("howell form canonical examples") {
  Mod z4 = Mod::make(2, 2);
  Mod z9 = Mod::make(3, 2);

  SECTION("single generator with duplicate zero row over Z/4") {
    auto hf = howell_form(ModMatrix::make(z4, {{2}, {0}}));
    REQUIRE(hf.h.rows == std::vector<Row>{{2}});
  }
  SECTION("identity over Z/9 is a fixed point") {
    auto id = ModMatrix::identity(z9, 3);
    REQUIRE(howell_form(id).h.rows == id.rows);
  }
  SECTION("diagonal 3s over Z/9 is a fixed point") {
    auto a = ModMatrix::make(z9, {{3, 0}, {0, 3}});
    auto hf = howell_form(a);
    REQUIRE(hf.h.rows == a.rows);
    // All 81 coefficient pairs hit only the 9 vectors (3a, 3b).
    REQUIRE(brute_span(a).size() == 9);
    REQUIRE(span_size(hf) == 9);
  }
  SECTION("completion row appears: span{(2,1)} over Z/4") {
    auto hf = howell_form(ModMatrix::make(z4, {{2, 1}}));
    REQUIRE(hf.h.rows == std::vector<Row>{{2, 1}, {0, 2}});
  }
}

TEST_CASE("solve_in_span examples") {
  Mod z4 = Mod::make(2, 2);
  auto a = ModMatrix::make(z4, {{2}});

  auto c = solve_in_span(a, {2});
  REQUIRE(c.has_value());
  REQUIRE(row_times_matrix(z4, *c, a) == Row{2});

  REQUIRE(!solve_in_span(a, {1}).has_value());

  auto id = ModMatrix::identity(z4, 3);
  Row v{1, 2, 3};
  auto d = solve_in_span(id, v);
  REQUIRE(d.has_value());
  REQUIRE(*d == v);
}

TEST_CASE("howell form agrees with brute force on all small matrices over Z/4") {
  Mod z4 = Mod::make(2, 2);
  for (auto [nr, nc] : std::vector<std::pair<size_t, size_t>>{
           {1, 1}, {1, 2}, {2, 1}, {2, 2}}) {
    size_t cells = nr * nc;
    size_t total = 1;
    for (size_t i = 0; i < cells; ++i) total *= z4.q;
    for (size_t code = 0; code < total; ++code) {
      size_t t = code;
      std::vector<Row> rows(nr, Row(nc));
      for (size_t i = 0; i < nr; ++i)
        for (size_t j = 0; j < nc; ++j) {
          rows[i][j] = int64_t(t % z4.q);
          t /= z4.q;
        }
      check_howell_against_brute(ModMatrix::make(z4, std::move(rows), nc));
    }
  }
}

TEST_CASE("howell form agrees with brute force on random matrices over Z/9 and Z/8") {
  std::mt19937_64 rng(20230816);
  for (const Mod& mod : {Mod::make(3, 2), Mod::make(2, 3)}) {
    for (int trial = 0; trial < 120; ++trial) {
      size_t nr = 1 + rng() % 3;
      size_t nc = 1 + rng() % 2;
      std::vector<Row> rows(nr, Row(nc));
      for (auto& r : rows)
        for (auto& x : r) x = int64_t(rng() % uint64_t(mod.q));
      check_howell_against_brute(ModMatrix::make(mod, std::move(rows), nc));
    }
  }
}

TEST_CASE("span-preserving row operations leave the howell form unchanged") {
  std::mt19937_64 rng(7);
  for (const Mod& mod : {Mod::make(2, 2), Mod::make(3, 2), Mod::make(5, 1)}) {
    for (int trial = 0; trial < 200; ++trial) {
      size_t nr = 2 + rng() % 2;
      size_t nc = 1 + rng() % 3;
      std::vector<Row> rows(nr, Row(nc));
      for (auto& r : rows)
        for (auto& x : r) x = int64_t(rng() % uint64_t(mod.q));
      ModMatrix a = ModMatrix::make(mod, rows, nc);
      // Shuffle rows, add random multiples of one row to another, scale by
      // units, and append a random span element: the span is unchanged.
      std::shuffle(rows.begin(), rows.end(), rng);
      size_t i = rng() % nr, j = rng() % nr;
      if (i != j) rows[i] = row_add(mod, rows[i], row_scale(mod, int64_t(rng() % uint64_t(mod.q)), rows[j]));
      int64_t u = int64_t(rng() % uint64_t(mod.q));
      if (mod.is_unit(u)) rows[i] = row_scale(mod, u, rows[i]);
      Row combo(nc, 0);
      for (const auto& r : a.rows)
        combo = row_add(mod, combo, row_scale(mod, int64_t(rng() % uint64_t(mod.q)), r));
      rows.push_back(combo);
      ModMatrix b = ModMatrix::make(mod, rows, nc);
      REQUIRE(howell_form(a).h.rows == howell_form(b).h.rows);
      REQUIRE(span_equal(a, b));
    }
  }
}

TEST_CASE("degenerate shapes") {
  Mod z4 = Mod::make(2, 2);
  auto empty = ModMatrix::make(z4, {}, 2);
  REQUIRE(howell_form(empty).h.rows.empty());
  REQUIRE(span_contains(howell_form(empty), {0, 0}));
  REQUIRE(!span_contains(howell_form(empty), {1, 0}));
  auto zero = ModMatrix::zero(z4, 3, 2);
  REQUIRE(howell_form(zero).h.rows.empty());
  REQUIRE(brute_span(left_kernel(zero)).size() == 64);
}
