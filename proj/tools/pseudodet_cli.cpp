// Batch verification driver: validates fixtures, certifies unramifiedness,
// and runs the end-to-end comparison of Galois-side Frobenius data against
// Hecke eigensystems. Reports are deterministic JSON plus a text summary.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pseudodet/fixtures.hpp"
#include "pseudodet/ordinary.hpp"

using namespace pseudodet;

namespace {

// Exit codes: 0 clean, 1 environment or I/O, 2 mathematical validation.
constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitMath = 2;

int emit(Json report, const std::vector<std::string>& lines,
         const std::string& out_path, int code) {
  report["metadata"] = Json{{"version", kVersion}};
  for (const auto& l : lines) std::cout << l << "\n";
  std::string dumped = report.dump(1) + "\n";
  if (out_path.empty()) {
    std::cout << dumped;
  } else {
    std::ofstream out(out_path);
    if (!out.good()) {
      std::cout << "cannot write " << out_path << "\n";
      return kExitIo;
    }
    out << dumped;
  }
  return code;
}

bool require_exists(const std::string& path) {
  if (std::filesystem::exists(path)) return true;
  std::cout << "missing file: " << path << "\n";
  return false;
}

Json violations_to_json(const std::vector<OrdViolation>& vs) {
  Json arr = Json::array();
  for (const auto& v : vs)
    arr.push_back(Json{{"condition", v.condition},
                       {"h", v.h},
                       {"g", v.g},
                       {"note", v.note}});
  return arr;
}

Json matrix_to_json(const ModMatrix& m) {
  Json arr = Json::array();
  for (const auto& r : m.rows) arr.push_back(r);
  return arr;
}

Json unram_to_json(const UnramWitness& w) {
  Json j;
  j["ok"] = w.ok;
  if (w.trace_pair)
    j["trace_pair"] = Json::array({w.trace_pair->first, w.trace_pair->second});
  if (w.d_element) j["d_element"] = *w.d_element;
  return j;
}

// The inertia character of an ordinary-shaped pair: psi(h) = T(h) - 1 on the
// subgroup generated by the marked inertia generators.
CharacterData derive_inertia_character(const DeterminantPair& pair) {
  auto inertia = subgroup_elements(*pair.group, pair.group->inertia_gens);
  std::map<int, AlgebraElement> values;
  for (int h : inertia)
    values.emplace(h, pair.T[size_t(h)] - algebra_unit(pair.algebra));
  return CharacterData::make(pair.group, inertia, std::move(values));
}

std::optional<Row> parse_coords(const std::string& s, size_t rank) {
  Row coords;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      coords.push_back(std::stoll(item, &used));
      if (used != item.size()) return std::nullopt;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  if (coords.empty() || coords.size() > rank) return std::nullopt;
  coords.resize(rank, 0);
  return coords;
}

std::vector<std::string> prime_labels(int64_t bound, int64_t tame_level) {
  std::vector<std::string> labels;
  for (int64_t ell = 2; ell <= bound; ++ell)
    if (Mod::is_prime(ell) && tame_level % ell != 0)
      labels.push_back(operator_label('T', ell));
  return labels;
}

// Worker-pool evaluation of the operator matrices; assembly stays ordered.
std::map<std::string, AlgMatrix> operator_pool(const FormSpaceBasis& space,
                                               const std::vector<std::string>& labels) {
  std::vector<std::future<AlgMatrix>> futures;
  futures.reserve(labels.size());
  for (const auto& label : labels)
    futures.push_back(std::async(std::launch::async, [&space, label] {
      return hecke_matrix(space, label, 0);
    }));
  std::map<std::string, AlgMatrix> ops;
  for (size_t i = 0; i < labels.size(); ++i)
    ops.emplace(labels[i], futures[i].get());
  return ops;
}

ModMatrix flattened_span(const std::vector<QExpansion>& forms, size_t b) {
  std::vector<Row> rows;
  for (const auto& f : forms) rows.push_back(flatten_qexp(f, b));
  const auto& alg = forms.front().algebra;
  return ModMatrix{alg->mod, b * alg->rank, std::move(rows)};
}

int run_validate(const std::string& name, const std::string& out_path) {
  auto path = resolve_fixture_path(name);
  if (!require_exists(path)) return kExitIo;
  Json j = parse_fixture_file(path);
  require(j.is_object() && j.contains("kind") && j.at("kind").is_string(),
          errc::validation_error, "fixture has no kind field");
  std::string kind = j.at("kind").get<std::string>();
  Json report{{"command", "validate"}, {"path", path}, {"kind", kind}};
  std::vector<std::string> lines;
  if (kind == "galois_fixture") {
    auto f = galois_fixture_from_json(j);
    report["group_order"] = f.group->order;
    report["algebra_rank"] = f.algebra->rank;
    report["level"] = f.level;
    report["prime"] = f.prime;
    report["oracle_primes"] = f.frobenius_classes.size();
    report["unramified"] = unramified_test(f.pair).ok;
    report["ok"] = true;
    lines.push_back("galois fixture ok: group order " +
                    std::to_string(f.group->order) + ", oracle covers " +
                    std::to_string(f.frobenius_classes.size()) + " primes");
  } else if (kind == "basis_fixture") {
    auto f = load_basis_fixture(path);
    report["dimension"] = f.space.dimension();
    report["weight"] = f.space.spec.weight;
    report["level"] = f.space.space_level();
    report["precision"] = f.space.spec.precision;
    report["ok"] = true;
    lines.push_back("basis fixture ok: dimension " +
                    std::to_string(f.space.dimension()) + " at precision " +
                    std::to_string(f.space.spec.precision));
  } else {
    fail(errc::validation_error, "unknown fixture kind " + kind);
  }
  return emit(std::move(report), lines, out_path, kExitOk);
}

int run_certify(const std::string& name, const std::string& alpha_spec,
                const std::string& out_path) {
  auto path = resolve_fixture_path(name);
  if (!require_exists(path)) return kExitIo;
  auto fixture = load_galois_fixture(path);
  Json report{{"command", "certify"}, {"path", path}};
  std::vector<std::string> lines;

  DeterminantPair pair = fixture.pair;
  AlgebraElement alpha = algebra_unit(fixture.algebra);
  if (alpha_spec == "root") {
    // Adjoin a root of the Frobenius quadratic and move the whole pair up.
    int phi = fixture.group->frobenius;
    auto ext = adjoin_quadratic_root(fixture.algebra, fixture.pair.T[phi],
                                     fixture.pair.D[phi]);
    pair = base_change(fixture.pair, ext.embed);
    alpha = ext.root;
    report["alpha"] = Json{{"kind", "adjoined root"}, {"coords", alpha.coords}};
  } else {
    auto coords = parse_coords(alpha_spec, fixture.algebra->rank);
    require(coords.has_value(), errc::parse_error,
            "--alpha expects 'root' or comma-separated coordinates");
    alpha = algebra_element(fixture.algebra, *coords);
    report["alpha"] = Json{{"kind", "explicit"}, {"coords", alpha.coords}};
  }
  auto psi = derive_inertia_character(pair);
  auto witness = OrdinaryWitness::make(pair, alpha, fixture.weight, psi);
  auto violations = check_ordinary(witness);
  if (!violations.empty()) {
    report["ok"] = false;
    report["violations"] = violations_to_json(violations);
    for (const auto& v : violations)
      lines.push_back("ordinarity condition (" + std::to_string(v.condition) +
                      ") violated: " + v.note);
    return emit(std::move(report), lines, out_path, kExitMath);
  }
  auto cert = prop_key_certify(witness, {});
  report["ok"] = true;
  report["verdict"] = cert_verdict_name(cert.verdict);
  report["annihilator_basis"] = matrix_to_json(cert.annihilator_basis);
  report["subring_basis"] = matrix_to_json(cert.S_basis);
  report["direct_check"] = unram_to_json(cert.direct_check);
  lines.push_back(std::string("verdict: ") + cert_verdict_name(cert.verdict));
  lines.push_back("annihilator basis rows: " +
                  std::to_string(cert.annihilator_basis.rows.size()));
  lines.push_back(std::string("direct check: ") +
                  (cert.direct_check.ok ? "unramified" : "ramified"));
  return emit(std::move(report), lines, out_path, kExitOk);
}

// Reduce a q-expansion (and its character) along a scalar chain-ring
// reduction hom, e.g. Z/9 -> Z/3.
QExpansion reduce_qexp(const QExpansion& f, const AlgebraHom& hom) {
  std::vector<AlgebraElement> coeffs;
  for (const auto& c : f.coeffs) coeffs.push_back(hom.apply(c));
  std::vector<AlgebraElement> values;
  for (const auto& v : f.character.values) values.push_back(hom.apply(v));
  auto chi =
      DirichletCharacter::make(f.character.modulus, hom.target, std::move(values));
  return qexp_make(hom.target, std::move(coeffs), f.weight, f.level,
                   std::move(chi));
}

int run_stabilize(const std::string& name, int m, int64_t prime,
                  int64_t weight_k, const std::string& out_path) {
  auto path = resolve_fixture_path(name);
  if (!require_exists(path)) return kExitIo;
  auto fixture = load_basis_fixture(path);
  const auto& space = fixture.space;
  require(space.spec.mod.p == prime, errc::validation_error,
          "fixture characteristic differs from the requested prime");
  require(m >= 1 && m <= space.spec.mod.m, errc::validation_error,
          "requested exponent m exceeds the fixture modulus");

  // The cusp line is the row with a_0 = 0 and unit a_1.
  std::optional<QExpansion> cusp;
  for (const auto& f : space.basis)
    if (f.at(0).is_zero() && is_unit(f.at(1))) cusp = f;
  require(cusp.has_value(), errc::validation_error,
          "fixture has no normalized cusp row");
  QExpansion g = *cusp;
  if (m < space.spec.mod.m) {
    auto target = scalar_algebra(Mod::make(prime, m));
    auto hom = AlgebraHom::make(space.algebra, target,
                                ModMatrix::make(target->mod, {target->unit}));
    g = reduce_qexp(g, hom);
  }
  auto st = stabilize(g, prime, g.at(prime), g.character.at(prime), weight_k);
  int64_t sturm = sturm_bound(weight_k, g.level * prime);
  size_t verified_to = (g.precision() - 1) / size_t(prime) + 1;
  require(verified_to >= size_t(sturm), errc::insufficient_precision,
          "stabilized eigenvalue verified below the Sturm bound");

  Json report{{"command", "stabilize"},
              {"path", path},
              {"prime", prime},
              {"m", m},
              {"weight", weight_k},
              {"a_p", g.at(prime).coords},
              {"alpha", st.alpha.coords},
              {"beta", st.beta.coords},
              {"beta_distinguished", !is_unit(st.beta)},
              {"sturm_bound", sturm},
              {"verified_to", verified_to},
              {"ok", true}};
  std::vector<std::string> lines;
  lines.push_back("stabilized mod " + std::to_string(space.spec.mod.p) + "^" +
                  std::to_string(m) + ": alpha = " +
                  std::to_string(st.alpha.coords[0]) + ", beta = " +
                  std::to_string(st.beta.coords[0]) +
                  (is_unit(st.beta) ? "" : " (non-unit companion)"));
  lines.push_back("U_p eigenvalue verified to precision " +
                  std::to_string(verified_to) + " (Sturm bound " +
                  std::to_string(sturm) + ")");
  return emit(std::move(report), lines, out_path, kExitOk);
}

int run_weight1(const std::string& aux_name, const std::string& target_name,
                size_t b, int64_t expected, const std::string& out_path) {
  auto aux_path = resolve_fixture_path(aux_name);
  auto target_path = resolve_fixture_path(target_name);
  if (!require_exists(aux_path) || !require_exists(target_path)) return kExitIo;
  auto aux = load_basis_fixture(aux_path);
  auto target = load_basis_fixture(target_path);
  if (b == 0) b = size_t(sturm_bound(1, target.space.space_level()));
  std::optional<size_t> want;
  if (expected >= 0) want = size_t(expected);
  auto computed = weight1_space(aux.space, target.space, b, want);
  Json forms = Json::array();
  for (const auto& f : computed.basis) {
    size_t lead = 0;
    while (lead < b && f.at(int64_t(lead)).is_zero()) ++lead;
    forms.push_back(Json{{"leading_index", lead},
                         {"leading", f.at(int64_t(lead)).coords}});
  }
  Json report{{"command", "weight1"},
              {"aux", aux_path},
              {"target", target_path},
              {"b", b},
              {"dimension", computed.dimension()},
              {"forms", forms},
              {"ok", true}};
  std::vector<std::string> lines{
      "weight-one space dimension " + std::to_string(computed.dimension()) +
      " at precision " + std::to_string(b)};
  return emit(std::move(report), lines, out_path, kExitOk);
}

struct LocalPipeline {
  HeckeAlgebraModel model;
  ResidualData residual;
  LocalizedModel local;
  AlgebraHom iota;
};

// Common core: weight-one operator algebra, residual Frobenius data, and the
// localization at the associated maximal ideal.
LocalPipeline build_local_pipeline(const GaloisFixture& galois,
                                   const BasisFixture& aux, int64_t bound) {
  require(aux.space.algebra->same_structure(*galois.algebra),
          errc::validation_error,
          "basis and fixture coefficient algebras disagree");
  auto labels = prime_labels(bound, aux.space.spec.level);
  auto ops = operator_pool(aux.space, labels);
  auto generated = algebra_generate(ops);
  HeckeAlgebraModel model{aux.space, std::move(ops), std::move(generated)};
  ResidualData residual;
  for (const auto& label : labels) {
    int64_t ell = parse_operator_label(label).ell;
    int cls = frobenius_class(galois, ell);
    residual.at_ell.emplace(
        ell, std::make_pair(
                 algebra_element(aux.space.algebra, galois.pair.T[cls].coords),
                 algebra_element(aux.space.algebra, galois.pair.D[cls].coords)));
  }
  auto ideal = build_maximal_ideal(model, residual, std::nullopt,
                                   aux.space.spec.weight);
  auto local = localize(model.generated, ideal);
  auto iota = AlgebraHom::make(
      galois.algebra, local.component.algebra,
      ModMatrix::make(local.component.algebra->mod,
                      {local.component.algebra->unit}));
  return LocalPipeline{std::move(model), std::move(residual), std::move(local),
                       std::move(iota)};
}

struct DoublingOutcome {
  DoublingRing ring;
  bool free_rank_two = false;
  FrobeniusIdentification fi;
  UnramifiednessCertificate cert;
  std::vector<OrdViolation> violations;
};

DoublingOutcome run_doubling_chain(const GaloisFixture& galois,
                                   const LocalPipeline& pipe, int64_t prime,
                                   int64_t weight_n,
                                   const DirichletCharacter& character) {
  const auto& tm = pipe.local.component.algebra;
  auto tp_label = operator_label('T', prime);
  require(pipe.local.op_images.count(tp_label), errc::validation_error,
          "pipeline has no " + tp_label + " image");
  auto tp = pipe.local.op_images.at(tp_label);
  auto diamond = scale(tm->mod.pow(tm->mod.reduce(prime), weight_n - 1),
                       pipe.iota.apply(character.at(prime)));
  DoublingOutcome out{doubling_ring(tm, tp, diamond),
                      false,
                      {},
                      {},
                      {}};
  auto rows = doubling_basis_rows(out.ring);
  auto fb = free_basis_of_span(rows);
  out.free_rank_two =
      fb.has_value() && fb->rows.size() == 2 * tm->rank &&
      span_equal(rows,
                 ModMatrix::identity(out.ring.algebra->mod, out.ring.algebra->rank));

  // Certification of the base-changed pair with alpha = U_p.
  auto pair_tm = base_change(galois.pair, pipe.iota);
  auto pair_dbl = base_change(pair_tm, out.ring.embed);
  auto psi = derive_inertia_character(pair_dbl);
  auto witness = OrdinaryWitness::make(pair_dbl, out.ring.u_p, weight_n, psi);
  out.violations = check_ordinary(witness);
  if (out.violations.empty()) out.cert = prop_key_certify(witness, {});

  // Galois-side Frobenius values, expanded in the free basis {1, U_p}.
  int phi = galois.group->frobenius;
  out.fi = frobenius_identification(
      out.ring, out.ring.embed.apply(pipe.iota.apply(galois.pair.T[phi])),
      out.ring.embed.apply(pipe.iota.apply(galois.pair.D[phi])));
  return out;
}

int run_main_theorem(int64_t level, int64_t prime, int m, int64_t bound,
                     const std::string& galois_name,
                     const std::string& target_name,
                     const std::string& weight1_name, size_t b_weight1,
                     const std::string& out_path) {
  require(bound >= 2, errc::validation_error, "bound must be at least 2");
  auto galois_path = resolve_fixture_path(galois_name);
  auto target_path = resolve_fixture_path(target_name);
  auto weight1_path = resolve_fixture_path(weight1_name);
  for (const auto& p : {galois_path, target_path, weight1_path})
    if (!require_exists(p)) return kExitIo;
  auto galois = load_galois_fixture(galois_path);
  auto target = load_basis_fixture(target_path);
  auto aux = load_basis_fixture(weight1_path);
  require(galois.level == level && aux.space.spec.level == level,
          errc::validation_error, "fixtures disagree with --level");
  require(galois.prime == prime && aux.space.spec.mod.p == prime,
          errc::validation_error, "fixtures disagree with --prime");
  require(aux.space.spec.mod.m == m, errc::validation_error,
          "basis modulus disagrees with --m");

  Json report{{"command", "main-theorem"},
              {"level", level},
              {"prime", prime},
              {"m", m},
              {"bound", bound}};
  std::vector<std::string> lines;
  bool ok = true;

  // Stage 1: the weight-one space upper bound reproduces the bundled basis.
  if (b_weight1 == 0)
    b_weight1 = size_t(sturm_bound(1, target.space.space_level()));
  auto computed =
      weight1_space(aux.space, target.space, b_weight1, aux.expected_dimension);
  bool span_match =
      span_equal(flattened_span(computed.basis, b_weight1),
                 flattened_span(aux.space.basis, b_weight1));
  ok = ok && span_match;
  report["weight_one"] = Json{{"dimension", computed.dimension()},
                              {"precision", b_weight1},
                              {"matches_bundled", span_match}};
  lines.push_back("weight-one space: dimension " +
                  std::to_string(computed.dimension()) +
                  (span_match ? " (matches the bundled basis)"
                              : " (DIFFERS from the bundled basis)"));

  // Stage 2: operator algebra, localization at the residual eigensystem.
  auto pipe = build_local_pipeline(galois, aux, bound);
  report["localization"] =
      Json{{"algebra_rank", pipe.model.generated.algebra->rank},
           {"local_rank", pipe.local.component.algebra->rank}};
  lines.push_back("Hecke algebra rank " +
                  std::to_string(pipe.model.generated.algebra->rank) +
                  ", localization rank " +
                  std::to_string(pipe.local.component.algebra->rank));

  // Stage 3: T_p is redundant among the other operators.
  auto tp_label = operator_label('T', prime);
  std::map<std::string, AlgMatrix> ops_without(pipe.model.operators);
  require(ops_without.erase(tp_label) == 1, errc::validation_error,
          "model carries no " + tp_label);
  auto rr = t_p_redundancy_check(algebra_generate(ops_without),
                                 pipe.model.generated);
  ok = ok && rr.ok;
  report["t_p_redundancy"] = Json{{"ok", rr.ok}};
  if (rr.witness) report["t_p_redundancy"]["witness"] = *rr.witness;
  lines.push_back(std::string("T_p redundancy: ") + (rr.ok ? "ok" : "FAILED"));

  // Stage 4: doubling, certification, Frobenius identification at p.
  auto chain = run_doubling_chain(galois, pipe, prime, aux.space.spec.weight,
                                  aux.space.spec.character);
  ok = ok && chain.free_rank_two && chain.violations.empty() &&
       chain.cert.verdict == CertVerdict::unramified && chain.fi.ok();
  report["doubling"] = Json{
      {"base_rank", pipe.local.component.algebra->rank},
      {"doubled_rank", chain.ring.algebra->rank},
      {"free_rank_two", chain.free_rank_two}};
  report["certification"] =
      chain.violations.empty()
          ? Json{{"verdict", cert_verdict_name(chain.cert.verdict)},
                 {"annihilator_basis",
                  matrix_to_json(chain.cert.annihilator_basis)},
                 {"direct_check", unram_to_json(chain.cert.direct_check)}}
          : Json{{"violations", violations_to_json(chain.violations)}};
  report["frobenius_identification"] = Json{{"t_match", chain.fi.t_matches},
                                            {"d_match", chain.fi.d_matches},
                                            {"t_diff", chain.fi.t_diff},
                                            {"d_diff", chain.fi.d_diff}};
  lines.push_back(std::string("doubling ring free of rank 2: ") +
                  (chain.free_rank_two ? "yes" : "NO"));
  lines.push_back(std::string("certification verdict: ") +
                  (chain.violations.empty()
                       ? cert_verdict_name(chain.cert.verdict)
                       : "ordinarity violated"));
  lines.push_back(std::string("Frobenius identification at p: ") +
                  (chain.fi.ok() ? "T(phi) = T_p and D(phi) = <p>"
                                 : "MISMATCH"));

  // Stage 5: the per-ell comparison table.
  std::map<int64_t, size_t> frob;
  for (const auto& [ell, cls] : galois.frobenius_classes)
    frob.emplace(ell, size_t(cls));
  auto thm = main_theorem_check(pipe.local.op_images, aux.space.spec.character,
                                aux.space.spec.weight, galois.pair, frob,
                                pipe.iota, bound, level, prime);
  ok = ok && thm.all_match;
  Json rows = Json::array();
  size_t mismatches = 0;
  for (const auto& row : thm.rows) {
    rows.push_back(Json{{"ell", row.ell},
                        {"at_p", row.at_p},
                        {"t_match", row.t_match},
                        {"d_match", row.d_match}});
    if (!row.t_match || !row.d_match) ++mismatches;
    std::string tag = row.at_p ? " (= p)" : "";
    lines.push_back("ell " + std::to_string(row.ell) + tag + ": " +
                    (row.t_match ? "T match" : "T MISMATCH") + ", " +
                    (row.d_match ? "D match" : "D MISMATCH"));
  }
  report["rows"] = std::move(rows);
  report["mismatches"] = mismatches;
  report["all_match"] = thm.all_match;
  report["ok"] = ok;
  lines.push_back(std::to_string(mismatches) + " mismatches over " +
                  std::to_string(thm.rows.size()) + " primes");
  return emit(std::move(report), lines, out_path, ok ? kExitOk : kExitMath);
}

int run_doubling_cmd(const std::string& galois_name,
                     const std::string& weight1_name, int64_t bound,
                     const std::string& out_path) {
  auto galois_path = resolve_fixture_path(galois_name);
  auto weight1_path = resolve_fixture_path(weight1_name);
  for (const auto& p : {galois_path, weight1_path})
    if (!require_exists(p)) return kExitIo;
  auto galois = load_galois_fixture(galois_path);
  auto aux = load_basis_fixture(weight1_path);
  auto pipe = build_local_pipeline(galois, aux, bound);
  auto chain = run_doubling_chain(galois, pipe, galois.prime,
                                  aux.space.spec.weight,
                                  aux.space.spec.character);
  bool ok = chain.free_rank_two && chain.violations.empty() &&
            chain.cert.verdict == CertVerdict::unramified && chain.fi.ok();
  Json report{{"command", "doubling"},
              {"base_rank", pipe.local.component.algebra->rank},
              {"doubled_rank", chain.ring.algebra->rank},
              {"free_rank_two", chain.free_rank_two},
              {"u_p", chain.ring.u_p.coords},
              {"tp", chain.ring.tp.coords},
              {"diamond", chain.ring.diamond.coords},
              {"frobenius_identification",
               Json{{"t_match", chain.fi.t_matches},
                    {"d_match", chain.fi.d_matches}}},
              {"ok", ok}};
  std::vector<std::string> lines{
      "doubling ring rank " + std::to_string(chain.ring.algebra->rank) +
          " over base rank " +
          std::to_string(pipe.local.component.algebra->rank) +
          (chain.free_rank_two ? " (free on {1, U_p})" : " (NOT free)"),
      std::string("Frobenius identification: ") +
          (chain.fi.ok() ? "ok" : "MISMATCH")};
  return emit(std::move(report), lines, out_path, ok ? kExitOk : kExitMath);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"determinant and eigensystem verification driver"};
  app.require_subcommand(1);
  std::string out_path;

  auto* validate = app.add_subcommand("validate", "validate a fixture file");
  std::string validate_name;
  validate->add_option("fixture", validate_name, "fixture name or path")
      ->required();
  validate->add_option("--out", out_path, "write the JSON report to this path");

  auto* certify =
      app.add_subcommand("certify", "certify unramifiedness of a fixture");
  std::string certify_name, alpha_spec = "root";
  certify->add_option("fixture", certify_name, "galois fixture name or path")
      ->required();
  certify->add_option("--alpha", alpha_spec,
                      "'root' or comma-separated coordinates");
  certify->add_option("--out", out_path, "write the JSON report to this path");

  auto* main_thm = app.add_subcommand(
      "main-theorem", "compare Frobenius data against Hecke eigenvalues");
  int64_t level = 23, prime = 2, bound = 100;
  int m = 1;
  size_t b_weight1 = 0;
  std::string galois_name = "s3_level23_p2";
  std::string target_name = "w2_level46_mod2_target";
  std::string weight1_name = "w1_level23_mod2_aux";
  main_thm->add_option("--level", level, "tame level N");
  main_thm->add_option("--prime", prime, "working prime p");
  main_thm->add_option("--m", m, "modulus exponent");
  main_thm->add_option("--bound", bound, "prime bound L");
  main_thm->add_option("--galois", galois_name, "galois fixture");
  main_thm->add_option("--target", target_name, "weight-2 target basis");
  main_thm->add_option("--weight1", weight1_name, "weight-1 multiplier basis");
  main_thm->add_option("--b", b_weight1, "weight-one comparison precision");
  main_thm->add_option("--out", out_path, "write the JSON report to this path");

  auto* stab = app.add_subcommand("stabilize", "ordinary p-stabilization");
  std::string stab_name = "w2_level11_mod9_basis";
  int stab_m = 1;
  int64_t stab_prime = 3, stab_weight = 2;
  stab->add_option("--basis", stab_name, "basis fixture");
  stab->add_option("--m", stab_m, "modulus exponent to work at");
  stab->add_option("--prime", stab_prime, "stabilization prime");
  stab->add_option("--weight", stab_weight, "weight of the input form");
  stab->add_option("--out", out_path, "write the JSON report to this path");

  auto* w1 = app.add_subcommand("weight1", "compute the weight-one space");
  std::string w1_aux = "w1_level23_mod2_aux";
  std::string w1_target = "w2_level46_mod2_target";
  size_t w1_b = 0;
  int64_t w1_expected = -1;
  w1->add_option("--aux", w1_aux, "weight-1 multiplier basis");
  w1->add_option("--target", w1_target, "weight-2 target basis");
  w1->add_option("--b", w1_b, "working precision (0 = Sturm bound)");
  w1->add_option("--expected", w1_expected, "expected dimension (-1 = none)");
  w1->add_option("--out", out_path, "write the JSON report to this path");

  auto* dbl = app.add_subcommand("doubling", "doubled module at U_p");
  std::string dbl_galois = "s3_level23_p2";
  std::string dbl_weight1 = "w1_level23_mod2_aux";
  int64_t dbl_bound = 20;
  dbl->add_option("--galois", dbl_galois, "galois fixture");
  dbl->add_option("--weight1", dbl_weight1, "weight-1 multiplier basis");
  dbl->add_option("--bound", dbl_bound, "prime bound for the algebra");
  dbl->add_option("--out", out_path, "write the JSON report to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitIo;
  }

  try {
    if (validate->parsed()) return run_validate(validate_name, out_path);
    if (certify->parsed())
      return run_certify(certify_name, alpha_spec, out_path);
    if (main_thm->parsed())
      return run_main_theorem(level, prime, m, bound, galois_name, target_name,
                              weight1_name, b_weight1, out_path);
    if (stab->parsed())
      return run_stabilize(stab_name, stab_m, stab_prime, stab_weight,
                           out_path);
    if (w1->parsed())
      return run_weight1(w1_aux, w1_target, w1_b, w1_expected, out_path);
    if (dbl->parsed())
      return run_doubling_cmd(dbl_galois, dbl_weight1, dbl_bound, out_path);
  } catch (const error& e) {
    std::cout << "error: " << e.what() << "\n";
    return kExitMath;
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << "\n";
    return kExitMath;
  }
  return kExitIo;
}
