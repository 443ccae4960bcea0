// Generates the bundled fixture files. Every derived value is cross-checked
// against an independent oracle before anything is written, and every file
// is re-read through the public loaders afterwards.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "pseudodet/fixtures.hpp"
#include "pseudodet/ordinary.hpp"

using namespace pseudodet;

namespace {

AlgebraPtr f2() { return scalar_algebra(Mod::make(2, 1)); }

QuadExtension f4() {
  auto base = f2();
  return adjoin_quadratic_root(base, algebra_unit(base), algebra_unit(base));
}

// Class oracle for the level-23 fixture, by exhaustive quadratic-form search:
// a prime represented by x^2 + xy + 6y^2 has identity Frobenius class, one
// represented by 2x^2 + xy + 3y^2 has 3-cycle class, and an inert prime has
// transposition class. Both forms are positive definite of discriminant -23,
// so |x|, |y| <= 20 exhausts all values up to 100.
int form_class(int64_t ell) {
  for (int64_t x = -20; x <= 20; ++x)
    for (int64_t y = -20; y <= 20; ++y) {
      if (x * x + x * y + 6 * y * y == ell) return 0;
      if (2 * x * x + x * y + 3 * y * y == ell) return 2;
    }
  return 1;
}

// Independent check: the class is determined by the number of roots of
// x^3 - x - 1 modulo ell (3 roots: identity, 1: transposition, 0: 3-cycle).
int cubic_class(int64_t ell) {
  int roots = 0;
  for (int64_t x = 0; x < ell; ++x)
    if ((x * x % ell * x % ell + 2 * ell - x - 1) % ell == 0) ++roots;
  if (roots == 3) return 0;
  if (roots == 1) return 1;
  return 2;
}

std::vector<int64_t> primes_up_to(int64_t bound) {
  std::vector<int64_t> out;
  for (int64_t n = 2; n <= bound; ++n)
    if (Mod::is_prime(n)) out.push_back(n);
  return out;
}

void check(bool ok, const std::string& what) {
  if (!ok) {
    std::cerr << "cross-check failed: " << what << "\n";
    std::exit(1);
  }
}

GaloisFixture make_s3_fixture() {
  GaloisFixture f;
  f.algebra = f2();
  auto plain = group_from_permutations({{1, 0, 2}, {1, 2, 0}});
  auto model = std::make_shared<GroupModel>(*plain);
  model->inertia_gens = {};
  model->frobenius = 2;
  model->labels.assign(model->order, "");
  model->labels[0] = "id";
  model->labels[2] = "frob";
  model->validate();
  f.group = model;
  auto one = algebra_unit(f.algebra);
  auto zero = algebra_zero(f.algebra);
  Mat2 s{zero, one, one, zero};
  Mat2 r{zero, one, one, one};
  f.representation = rep_from_generators(f.group, f.algebra, {{1, s}, {2, r}});
  f.pair = from_matrix_rep(f.group, f.algebra, *f.representation);
  f.character = legendre_character(f.algebra, 23);
  f.level = 23;
  f.prime = 2;
  f.weight = 1;
  f.oracle_bound = 100;
  for (int64_t ell : primes_up_to(100)) {
    if (ell == 23) continue;
    int cls = form_class(ell);
    check(cls == cubic_class(ell),
          "form and cubic oracles disagree at " + std::to_string(ell));
    f.frobenius_classes[ell] = cls;
  }
  check(f.frobenius_classes.at(2) == 2, "2 must land in the 3-cycle class");
  check(f.frobenius_classes.at(59) == 0, "59 must land in the identity class");

  // The fixture's T at Frobenius must reproduce the eta-product eigenform
  // coefficients away from 2 * 23.
  auto g = eta_product(f.algebra, {{1, 1}, {23, 1}}, 102);
  for (const auto& [ell, cls] : f.frobenius_classes) {
    if (ell == 2) continue;
    check(f.pair.T[size_t(cls)] == g.at(ell),
          "T(Frob) vs eta coefficient at " + std::to_string(ell));
  }
  f.metadata = Json{
      {"source_form", "eta(q) eta(q^23) reduced mod 2"},
      {"tame_level", 23},
      {"character", "quadratic residue character mod 23"},
      {"oracle",
       "prime represented by x^2+xy+6y^2: identity class; by 2x^2+xy+3y^2: "
       "3-cycle class; otherwise transposition class (exhaustive search)"}};
  return f;
}

GaloisFixture make_ramified_control() {
  GaloisFixture f;
  auto ext = f4();
  f.algebra = ext.algebra;
  auto plain = group_from_permutations({{1, 2, 3, 4, 5, 0}});
  auto model = std::make_shared<GroupModel>(*plain);
  model->inertia_gens = {2};
  model->frobenius = 3;
  model->validate();
  f.group = model;
  auto w = algebra_element(f.algebra, {0, 1});
  std::vector<Mat2> mats;
  for (int i = 0; i < 6; ++i)
    mats.push_back(Mat2{algebra_unit(f.algebra), algebra_zero(f.algebra),
                        algebra_zero(f.algebra), element_pow(w, i % 3)});
  f.representation = mats;
  f.pair = from_matrix_rep(f.group, f.algebra, mats);
  f.character = trivial_dirichlet(f.algebra, 1);
  f.level = 1;
  f.prime = 2;
  f.weight = 1;
  f.oracle_bound = 0;
  check(!unramified_test(f.pair).ok, "control must be ramified");
  f.metadata = Json{
      {"note",
       "synthetic negative control: 1 + psi with psi of order 3 ramified at "
       "2; no Frobenius table is bundled"}};
  return f;
}

GaloisFixture make_ordinary_uppertri() {
  GaloisFixture f;
  auto ext = f4();
  auto alg = ext.algebra;
  f.algebra = alg;
  auto w = algebra_element(alg, {0, 1});
  auto one = algebra_unit(alg);
  auto zero = algebra_zero(alg);
  Mat2 hm{w, one, zero, one};
  Mat2 um{one, one, zero, one};
  auto [mat_group, mat_mats] = group_from_matrix_generators(alg, {hm, um});
  check(mat_group->order == 12, "mirabolic group must have order 12");
  // Rebuild through permutations so the fixture serializes; left
  // multiplication by the two generators gives faithful permutations.
  auto perm_of = [&](int gidx) {
    std::vector<int> p(mat_group->order);
    for (size_t x = 0; x < mat_group->order; ++x)
      p[x] = mat_group->mult[gidx][x];
    return p;
  };
  auto plain = group_from_permutations({perm_of(1), perm_of(2)});
  check(plain->order == 12, "permutation rebuild changed the order");
  auto model = std::make_shared<GroupModel>(*plain);
  // Identify which low index carries the order-3 generator h.
  auto order_of = [&](int x) {
    int n = 1, y = x;
    while (y != 0) {
      y = model->mult[y][x];
      ++n;
    }
    return n;
  };
  int h_idx = order_of(1) == 3 ? 1 : 2;
  int u_idx = h_idx == 1 ? 2 : 1;
  check(order_of(h_idx) == 3 && order_of(u_idx) == 2,
        "generator orders must be 3 and 2");
  int phi_idx = model->mult[u_idx][h_idx];
  model->inertia_gens = {h_idx, u_idx};
  model->frobenius = phi_idx;
  model->validate();
  f.group = model;
  f.representation =
      rep_from_generators(f.group, alg, {{h_idx, hm}, {u_idx, um}});
  f.pair = from_matrix_rep(f.group, alg, *f.representation);
  check((*f.representation)[size_t(phi_idx)] == Mat2{w, zero, zero, one},
        "Frobenius must act by diag(w, 1)");
  f.character = trivial_dirichlet(alg, 1);
  f.level = 1;
  f.prime = 2;
  f.weight = 1;
  f.oracle_bound = 0;

  // The shipped shape passes all three ordinarity conditions with alpha = 1.
  std::map<int, AlgebraElement> values;
  std::vector<int> domain;
  for (size_t i = 0; i < f.group->order; ++i) {
    domain.push_back(int(i));
    values.emplace(int(i), (*f.representation)[i].a);
  }
  auto psi = CharacterData::make(f.group, domain, values);
  auto witness = OrdinaryWitness::make(f.pair, algebra_unit(alg), 1, psi);
  check(check_ordinary(witness).empty(), "upper-triangular witness ordinary");
  f.metadata = Json{
      {"note",
       "upper-triangular family [[a, b], [0, 1]] on the full mirabolic group "
       "over F4; ordinary with alpha = 1; entirely synthetic"},
      {"alpha_hint", Json::array({1, 0})}};
  return f;
}

void emit_galois(const std::string& dir, const std::string& name,
                 const GaloisFixture& f) {
  auto path = dir + "/" + name + ".json";
  write_fixture_file(path, galois_fixture_to_json(f));
  auto back = load_galois_fixture(path);
  check(back.group->order == f.group->order &&
            back.frobenius_classes == f.frobenius_classes,
        "reload mismatch for " + name);
  std::cout << "wrote " << path << "\n";
}

void emit_basis(const std::string& dir, const std::string& name,
                const FormSpaceBasis& space, size_t expected, Json metadata) {
  auto path = dir + "/" + name + ".json";
  write_fixture_file(path,
                     basis_fixture_to_json(space, expected, std::move(metadata)));
  auto back = load_basis_fixture(path);
  check(back.space.dimension() == expected, "reload mismatch for " + name);
  std::cout << "wrote " << path << "\n";
}

Row frozen_row(const AlgMatrix& m, size_t i) {
  Row out;
  for (size_t j = 0; j < m.n; ++j) {
    auto s = scalar_value(m.entries[i][j]);
    check(s.has_value(), "operator entry is not scalar");
    out.push_back(*s);
  }
  return out;
}

void make_weight2_level46(const std::string& dir) {
  auto alg = f2();
  size_t b = 810;
  auto g = eta_product(alg, {{1, 1}, {23, 1}}, b);
  auto vg = truncate(v_op(g, 2), b);
  auto one = qexp_constant(alg, algebra_unit(alg), b);
  auto spec = SpaceSpec::make(2, 23, alg->mod, b, trivial_dirichlet(alg, 1));
  auto space =
      FormSpaceBasis::make(spec, alg, {one, g, vg}, Provenance::ingested);
  check(space.dimension() == 3, "weight-2 target dimension");
  check(space.space_level() == 46, "weight-2 target level");
  // Operator matrices on {1, g, Vg} are pinned; recompute both.
  auto t3 = hecke_matrix(space, "T_3");
  check(frozen_row(t3, 0) == Row{0, 0, 0} && frozen_row(t3, 1) == Row{0, 1, 0} &&
            frozen_row(t3, 2) == Row{0, 0, 1},
        "frozen T_3 matrix");
  auto u2 = hecke_matrix(space, "U_2");
  check(frozen_row(u2, 0) == Row{1, 0, 0} && frozen_row(u2, 1) == Row{0, 1, 1} &&
            frozen_row(u2, 2) == Row{0, 1, 0},
        "frozen U_2 matrix");
  emit_basis(dir, "w2_level46_mod2_target", space, 3,
             Json{{"forms",
                   Json::array({"constant 1", "eta(q) eta(q^23) mod 2",
                                "V of the eta product"})},
                  {"note", "weight-2 target space for the level-23 pipeline"}});
}

void make_weight1_level23(const std::string& dir) {
  auto alg = f2();
  size_t b = 4400;
  auto g = eta_product(alg, {{1, 1}, {23, 1}}, b);
  auto one = qexp_constant(alg, algebra_unit(alg), b);
  auto chi = legendre_character(alg, 23);
  auto spec = SpaceSpec::make(1, 23, alg->mod, b, chi);
  auto space = FormSpaceBasis::make(spec, alg, {one, g}, Provenance::ingested);
  check(space.dimension() == 2, "weight-1 basis dimension");
  // T_ell acts diagonally; the eta line carries the eigenform coefficients.
  auto t2 = hecke_matrix(space, "T_2");
  check(frozen_row(t2, 0) == Row{0, 0} && frozen_row(t2, 1) == Row{0, 1},
        "frozen weight-1 T_2 matrix");
  emit_basis(dir, "w1_level23_mod2_aux", space, 2,
             Json{{"forms",
                   Json::array({"constant 1", "eta(q) eta(q^23) mod 2"})},
                  {"note",
                   "weight-1 multiplier basis for the level-23 pipeline; "
                   "precision supports T_ell through ell = 97"}});
}

void make_weight2_level11(const std::string& dir) {
  auto alg = scalar_algebra(Mod::make(3, 2));
  size_t b = 500;
  // 24 E for the level-11 weight-2 Eisenstein series E with constant term
  // 5/12: integral coefficients 10 + 24 sum (sigma(n) - 11 sigma(n/11)) q^n.
  auto sigma = [](int64_t n) {
    int64_t s = 0;
    for (int64_t d = 1; d <= n; ++d)
      if (n % d == 0) s += d;
    return s;
  };
  std::vector<AlgebraElement> coeffs;
  coeffs.push_back(algebra_scalar(alg, 10));
  for (size_t n = 1; n < b; ++n) {
    int64_t c = sigma(int64_t(n));
    if (n % 11 == 0) c -= 11 * sigma(int64_t(n) / 11);
    coeffs.push_back(algebra_scalar(alg, 24 * c));
  }
  auto chi = trivial_dirichlet(alg, 1);
  auto eis = qexp_make(alg, std::move(coeffs), 2, 11, chi);
  check(eis.at(0) == algebra_unit(alg), "Eisenstein constant term 10 = 1 mod 9");
  auto g = eta_product(alg, {{1, 2}, {11, 2}}, b);
  check(g.at(1) == algebra_unit(alg) && g.at(2) == algebra_scalar(alg, -2),
        "eta(q)^2 eta(q^11)^2 leading coefficients");
  auto spec = SpaceSpec::make(2, 11, alg->mod, b, chi);
  auto space =
      FormSpaceBasis::make(spec, alg, {eis, g}, Provenance::eisenstein_products);
  check(space.dimension() == 2, "level-11 basis dimension");
  auto t2 = hecke_matrix(space, "T_2");
  check(frozen_row(t2, 0) == Row{3, 0} && frozen_row(t2, 1) == Row{0, 7},
        "frozen level-11 T_2 matrix");
  // The cusp line stabilizes with the distinguished non-unit companion root.
  auto st = stabilize(g, 3, g.at(3), chi.at(3), 2);
  check(st.alpha == algebra_scalar(alg, 2) && st.beta == algebra_scalar(alg, 6),
        "stabilization roots mod 9");
  emit_basis(dir, "w2_level11_mod9_basis", space, 2,
             Json{{"forms",
                   Json::array({"24 E mod 9 with E the level-11 weight-2 "
                                "Eisenstein series",
                                "eta(q)^2 eta(q^11)^2 mod 9"})},
                  {"note", "stabilization fixture: p = 3 with a_3 = -1"}});
}

}  // namespace

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : "fixtures";
  std::filesystem::create_directories(dir);
  emit_galois(dir, "s3_level23_p2", make_s3_fixture());
  emit_galois(dir, "ramified_control", make_ramified_control());
  emit_galois(dir, "ordinary_uppertri_f4", make_ordinary_uppertri());
  make_weight2_level46(dir);
  make_weight1_level23(dir);
  make_weight2_level11(dir);
  std::cout << "all fixtures written and reloaded\n";
  return 0;
}
