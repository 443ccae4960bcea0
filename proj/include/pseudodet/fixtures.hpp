#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pseudodet/determinant.hpp"
#include "pseudodet/hecke.hpp"
#include "pseudodet/version.hpp"

namespace pseudodet {

using Json = nlohmann::json;

// JSON (de)serialization for the core types plus the two bundled fixture
// kinds. Loaders re-validate every invariant; nothing in a file is trusted.

inline Json algebra_to_json(const AlgebraPtr& alg) {
  Json j;
  j["p"] = alg->mod.p;
  j["m"] = alg->mod.m;
  j["rank"] = alg->rank;
  j["basis"] = alg->basis_names;
  j["table"] = alg->table;
  j["unit"] = alg->unit;
  return j;
}

inline AlgebraPtr algebra_from_json(const Json& j) {
  require(j.is_object(), errc::parse_error, "algebra must be an object");
  auto mod = Mod::make(j.at("p").get<int64_t>(), j.at("m").get<int>());
  auto names = j.at("basis").get<std::vector<std::string>>();
  auto table = j.at("table").get<std::vector<std::vector<Row>>>();
  auto unit = j.at("unit").get<Row>();
  require(j.at("rank").get<size_t>() == names.size(), errc::validation_error,
          "declared rank disagrees with the basis list");
  return ChainAlgebra::make(mod, std::move(names), std::move(table),
                            std::move(unit));
}

inline Json group_to_json(const GroupModel& g) {
  require(!g.perm_gens.empty(), errc::validation_error,
          "group serialization needs generating permutations");
  Json j;
  j["perm_gens"] = g.perm_gens;
  j["inertia_gens"] = g.inertia_gens;
  j["frobenius"] = g.frobenius;
  if (g.decomposition_gens) j["decomposition_gens"] = *g.decomposition_gens;
  if (!g.labels.empty()) {
    Json labels = Json::object();
    for (size_t i = 0; i < g.labels.size(); ++i)
      if (!g.labels[i].empty()) labels[std::to_string(i)] = g.labels[i];
    j["labels"] = std::move(labels);
  }
  return j;
}

inline GroupPtr group_from_json(const Json& j) {
  require(j.is_object(), errc::parse_error, "group must be an object");
  auto gens = j.at("perm_gens").get<std::vector<std::vector<int>>>();
  auto base = group_from_permutations(gens);
  auto model = std::make_shared<GroupModel>(*base);
  model->inertia_gens = j.at("inertia_gens").get<std::vector<int>>();
  model->frobenius = j.at("frobenius").get<int>();
  if (j.contains("decomposition_gens"))
    model->decomposition_gens = j["decomposition_gens"].get<std::vector<int>>();
  if (j.contains("labels")) {
    model->labels.assign(model->order, "");
    for (const auto& [key, value] : j["labels"].items()) {
      size_t i = std::stoul(key);
      require(i < model->order, errc::validation_error,
              "label index out of range");
      model->labels[i] = value.get<std::string>();
    }
  }
  model->validate();
  return model;
}

inline Json character_to_json(const DirichletCharacter& chi) {
  Json j;
  j["modulus"] = chi.modulus;
  Json values = Json::array();
  for (const auto& v : chi.values) values.push_back(v.coords);
  j["values"] = std::move(values);
  return j;
}

inline DirichletCharacter character_from_json(const Json& j,
                                              const AlgebraPtr& alg) {
  require(j.is_object(), errc::parse_error, "character must be an object");
  std::vector<AlgebraElement> values;
  for (const auto& row : j.at("values"))
    values.push_back(algebra_element(alg, row.get<Row>()));
  return DirichletCharacter::make(j.at("modulus").get<int64_t>(), alg,
                                  std::move(values));
}

inline Json qexp_to_json(const QExpansion& f) {
  Json j;
  j["algebra"] = algebra_to_json(f.algebra);
  j["weight"] = f.weight;
  j["level"] = f.level;
  j["character"] = character_to_json(f.character);
  j["precision"] = f.precision();
  Json coeffs = Json::array();
  for (const auto& c : f.coeffs) coeffs.push_back(c.coords);
  j["coeffs"] = std::move(coeffs);
  return j;
}

inline QExpansion qexp_from_json(const Json& j, const AlgebraPtr& alg) {
  require(j.is_object(), errc::parse_error, "q-expansion must be an object");
  require(algebra_to_json(alg) == j.at("algebra"), errc::validation_error,
          "form algebra disagrees with the owning fixture algebra");
  std::vector<AlgebraElement> coeffs;
  for (const auto& row : j.at("coeffs"))
    coeffs.push_back(algebra_element(alg, row.get<Row>()));
  require(coeffs.size() == j.at("precision").get<size_t>(),
          errc::validation_error,
          "declared precision disagrees with the coefficient list");
  auto chi = character_from_json(j.at("character"), alg);
  return qexp_make(alg, std::move(coeffs), j.at("weight").get<int64_t>(),
                   j.at("level").get<int64_t>(), std::move(chi));
}

inline Json space_spec_to_json(const SpaceSpec& spec) {
  Json j;
  j["weight"] = spec.weight;
  j["level"] = spec.level;
  j["p"] = spec.mod.p;
  j["m"] = spec.mod.m;
  j["precision"] = spec.precision;
  j["character"] = character_to_json(spec.character);
  return j;
}

inline SpaceSpec space_spec_from_json(const Json& j, const AlgebraPtr& alg) {
  auto mod = Mod::make(j.at("p").get<int64_t>(), j.at("m").get<int>());
  require(mod.p == alg->mod.p && mod.m == alg->mod.m, errc::validation_error,
          "space modulus disagrees with the fixture algebra");
  return SpaceSpec::make(j.at("weight").get<int64_t>(),
                         j.at("level").get<int64_t>(), mod,
                         j.at("precision").get<size_t>(),
                         character_from_json(j.at("character"), alg));
}

inline Json wrap_fixture(const std::string& kind, Json body, Json metadata) {
  body["kind"] = kind;
  body["version"] = kFixtureFormatVersion;
  body["metadata"] = std::move(metadata);
  return body;
}

inline void check_wrapper(const Json& j, const std::string& kind) {
  require(j.is_object(), errc::parse_error, "fixture must be a JSON object");
  require(j.contains("kind") && j.at("kind") == kind, errc::validation_error,
          "fixture kind mismatch: expected " + kind);
  require(j.contains("version") &&
              j.at("version").get<int>() == kFixtureFormatVersion,
          errc::validation_error, "unsupported fixture format version");
}

// A marked Galois-side fixture: a determinant pair on a finite group with a
// precomputed Frobenius-class table. The table's provenance is documented in
// the fixture metadata; loaders only check internal consistency.
struct GaloisFixture {
  GroupPtr group;
  AlgebraPtr algebra;
  std::optional<std::vector<Mat2>> representation;
  DeterminantPair pair;
  DirichletCharacter character;
  std::map<int64_t, int> frobenius_classes;
  int64_t oracle_bound = 0;
  int64_t level = 1;
  int64_t prime = 2;
  int64_t weight = 1;
  Json metadata;
};

inline Json mat2_to_json(const Mat2& m) {
  return Json::array({m.a.coords, m.b.coords, m.c.coords, m.d.coords});
}

inline Mat2 mat2_from_json(const Json& j, const AlgebraPtr& alg) {
  require(j.is_array() && j.size() == 4, errc::parse_error,
          "matrix must be a length-4 array");
  return Mat2{algebra_element(alg, j[0].get<Row>()),
              algebra_element(alg, j[1].get<Row>()),
              algebra_element(alg, j[2].get<Row>()),
              algebra_element(alg, j[3].get<Row>())};
}

inline Json galois_fixture_to_json(const GaloisFixture& f) {
  Json body;
  body["group"] = group_to_json(*f.group);
  body["algebra"] = algebra_to_json(f.algebra);
  if (f.representation) {
    Json mats = Json::array();
    for (const auto& m : *f.representation) mats.push_back(mat2_to_json(m));
    body["representation"] = std::move(mats);
  }
  Json t = Json::array(), d = Json::array();
  for (const auto& v : f.pair.T) t.push_back(v.coords);
  for (const auto& v : f.pair.D) d.push_back(v.coords);
  body["pair"] = Json{{"T", std::move(t)}, {"D", std::move(d)}};
  body["character"] = character_to_json(f.character);
  Json classes = Json::object();
  for (const auto& [ell, idx] : f.frobenius_classes)
    classes[std::to_string(ell)] = idx;
  body["frobenius_classes"] = std::move(classes);
  body["oracle_bound"] = f.oracle_bound;
  body["level"] = f.level;
  body["prime"] = f.prime;
  body["weight"] = f.weight;
  return wrap_fixture("galois_fixture", std::move(body), f.metadata);
}

inline Json parse_fixture_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::parse_error, "cannot open " + path);
  Json j = Json::parse(in, nullptr, false);
  require(!j.is_discarded(), errc::parse_error, "malformed JSON in " + path);
  return j;
}

inline GaloisFixture galois_fixture_from_json(const Json& j) {
  check_wrapper(j, "galois_fixture");
  GaloisFixture f;
  f.metadata = j.value("metadata", Json::object());
  f.algebra = algebra_from_json(j.at("algebra"));
  f.group = group_from_json(j.at("group"));
  f.level = j.at("level").get<int64_t>();
  f.prime = j.at("prime").get<int64_t>();
  f.weight = j.at("weight").get<int64_t>();
  require(Mod::is_prime(f.prime) && f.prime == f.algebra->mod.p,
          errc::validation_error,
          "fixture prime must match the coefficient characteristic");
  f.character = character_from_json(j.at("character"), f.algebra);
  if (j.contains("representation")) {
    std::vector<Mat2> mats;
    for (const auto& mj : j["representation"])
      mats.push_back(mat2_from_json(mj, f.algebra));
    require(mats.size() == f.group->order, errc::validation_error,
            "representation must list one matrix per element");
    f.representation = std::move(mats);
  }
  require(f.representation.has_value() || j.contains("pair"),
          errc::validation_error,
          "fixture needs a representation or an explicit pair");
  if (f.representation) {
    // from_matrix_rep re-validates the axioms.
    f.pair = from_matrix_rep(f.group, f.algebra, *f.representation);
  }
  if (j.contains("pair")) {
    DeterminantPair explicit_pair{f.group, f.algebra, {}, {}};
    for (const auto& row : j["pair"].at("T"))
      explicit_pair.T.push_back(algebra_element(f.algebra, row.get<Row>()));
    for (const auto& row : j["pair"].at("D"))
      explicit_pair.D.push_back(algebra_element(f.algebra, row.get<Row>()));
    require(explicit_pair.T.size() == f.group->order &&
                explicit_pair.D.size() == f.group->order,
            errc::validation_error, "pair must list one value per element");
    auto violations = validate_axioms(explicit_pair);
    require(violations.empty(), errc::validation_error,
            "determinant axioms fail: " +
                (violations.empty() ? "" : violations.front().rule));
    if (f.representation)
      for (size_t g = 0; g < f.group->order; ++g)
        require(explicit_pair.T[g] == f.pair.T[g] &&
                    explicit_pair.D[g] == f.pair.D[g],
                errc::validation_error,
                "explicit pair disagrees with the representation");
    f.pair = std::move(explicit_pair);
  }
  f.oracle_bound = j.at("oracle_bound").get<int64_t>();
  for (const auto& [key, value] : j.at("frobenius_classes").items()) {
    int64_t ell = std::stoll(key);
    int idx = value.get<int>();
    require(Mod::is_prime(ell) && f.level % ell != 0, errc::validation_error,
            "oracle prime " + key + " divides the level or is composite");
    require(0 <= idx && size_t(idx) < f.group->order, errc::validation_error,
            "Frobenius class index out of range at " + key);
    // D at Frobenius must be the nebentypus value (times the weight twist).
    auto expected =
        scale(f.algebra->mod.pow(f.algebra->mod.reduce(ell), f.weight - 1),
              f.character.at(ell));
    require(f.pair.D[size_t(idx)] == expected, errc::validation_error,
            "D(Frob) disagrees with the character at " + key);
    f.frobenius_classes.emplace(ell, idx);
  }
  for (int64_t ell = 2; ell <= f.oracle_bound; ++ell) {
    if (!Mod::is_prime(ell) || f.level % ell == 0) continue;
    require(f.frobenius_classes.count(ell) != 0, errc::validation_error,
            "oracle missing prime " + std::to_string(ell));
  }
  return f;
}

inline GaloisFixture load_galois_fixture(const std::string& path) {
  return galois_fixture_from_json(parse_fixture_file(path));
}

inline int frobenius_class(const GaloisFixture& f, int64_t ell) {
  require(ell >= 2 && ell <= f.oracle_bound && f.level % ell != 0,
          errc::out_of_range,
          "prime " + std::to_string(ell) + " outside the oracle table");
  auto it = f.frobenius_classes.find(ell);
  require(it != f.frobenius_classes.end(), errc::out_of_range,
          "prime " + std::to_string(ell) + " outside the oracle table");
  return it->second;
}

// A serialized q-expansion basis with its space parameters; loading rebuilds
// the FormSpaceBasis, which re-checks precision and Howell independence.
struct BasisFixture {
  FormSpaceBasis space;
  std::optional<size_t> expected_dimension;
  Json metadata;
};

inline Json basis_fixture_to_json(const FormSpaceBasis& space,
                                  std::optional<size_t> expected_dimension,
                                  Json metadata) {
  Json body;
  Json spec = space_spec_to_json(space.spec);
  spec["algebra"] = algebra_to_json(space.algebra);
  body["spec"] = std::move(spec);
  body["provenance"] = provenance_name(space.provenance);
  if (expected_dimension) body["expected_dimension"] = *expected_dimension;
  Json forms = Json::array();
  for (const auto& f : space.basis) forms.push_back(qexp_to_json(f));
  body["forms"] = std::move(forms);
  return wrap_fixture("basis_fixture", std::move(body), std::move(metadata));
}

inline BasisFixture basis_fixture_from_json(const Json& j) {
  check_wrapper(j, "basis_fixture");
  auto alg = algebra_from_json(j.at("spec").at("algebra"));
  auto spec = space_spec_from_json(j.at("spec"), alg);
  std::vector<QExpansion> forms;
  for (const auto& fj : j.at("forms")) forms.push_back(qexp_from_json(fj, alg));
  auto provenance = provenance_from_name(j.at("provenance").get<std::string>());
  BasisFixture out{
      FormSpaceBasis::make(spec, alg, std::move(forms), provenance),
      std::nullopt, j.value("metadata", Json::object())};
  if (j.contains("expected_dimension")) {
    out.expected_dimension = j["expected_dimension"].get<size_t>();
    require(*out.expected_dimension == out.space.dimension(),
            errc::validation_error,
            "basis has dimension " + std::to_string(out.space.dimension()) +
                " but the fixture declares " +
                std::to_string(*out.expected_dimension));
  }
  return out;
}

inline BasisFixture load_basis_fixture(const std::string& path) {
  return basis_fixture_from_json(parse_fixture_file(path));
}

inline void write_fixture_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  require(out.good(), errc::parse_error, "cannot write " + path);
  out << j.dump(1) << "\n";
}

// Bundled-fixture directory: the PSEUDODET_FIXTURES environment variable,
// falling back to ./fixtures.
inline std::string fixtures_dir() {
  if (const char* env = std::getenv("PSEUDODET_FIXTURES")) return env;
  return "fixtures";
}

// Bare names resolve inside the bundled directory; anything that looks like
// a path is used as given.
inline std::string resolve_fixture_path(const std::string& name) {
  if (name.find('/') != std::string::npos ||
      std::filesystem::exists(name))
    return name;
  return fixtures_dir() + "/" + name +
         (name.size() > 5 && name.substr(name.size() - 5) == ".json" ? ""
                                                                     : ".json");
}

}  // namespace pseudodet
