#pragma once

// JSON module files and report serialization.

#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sl2/coherence.hpp"
#include "sl2/decomposition.hpp"
#include "sl2/identities.hpp"
#include "sl2/linearization.hpp"
#include "sl2/module.hpp"

namespace sl2::io {

using json = nlohmann::json;
using AnyModule = std::variant<SL2Module<PrimeField>, SL2Module<RationalField>>;

namespace detail {

[[noreturn]] inline void malformed(const std::string& what) { throw Error(Errc::Malformed, what); }

inline const json& field_of(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline std::uint64_t to_uint(const json& j, const char* what) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0) return static_cast<std::uint64_t>(j.get<long long>());
  malformed(std::string(what) + " must be a non-negative integer");
}

inline PrimeField::Element parse_entry(const PrimeField& f, const json& j) {
  const std::uint64_t v = to_uint(j, "matrix entry");
  if (v >= f.characteristic()) malformed("matrix entry " + std::to_string(v) + " outside [0,p)");
  return v;
}

inline RationalField::Element parse_entry(const RationalField&, const json& j) {
  if (j.is_number_integer()) return BigRational(j.get<long long>());
  if (!j.is_string()) malformed("rational entries must be \"num/den\" strings");
  static const std::regex shape("(-?[0-9]+)(/([0-9]+))?");
  std::smatch m;
  const std::string s = j.get<std::string>();
  if (!std::regex_match(s, m, shape)) malformed("bad rational \"" + s + "\"");
  const BigInt num(m[1].str());
  const BigInt den = m[3].matched ? BigInt(m[3].str()) : BigInt(1);
  if (den == 0) malformed("zero denominator in \"" + s + "\"");
  return BigRational(num, den);
}

inline json entry_json(const PrimeField&, PrimeField::Element a) { return a; }
inline json entry_json(const RationalField& f, const RationalField::Element& a) { return f.to_string(a); }

}  // namespace detail

template <ScalarField F>
json matrix_json(const Matrix<F>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(detail::entry_json(m.field(), m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Parses a matrix; rows and cols of 0 are taken from the data when not fixed.
template <ScalarField F>
Matrix<F> parse_matrix(const F& f, const json& j, std::optional<std::size_t> rows = std::nullopt,
                       std::optional<std::size_t> cols = std::nullopt) {
  if (!j.is_array()) detail::malformed("matrix must be an array of rows");
  const std::size_t r = j.size();
  if (rows && r != *rows) detail::malformed("matrix has " + std::to_string(r) + " rows");
  std::size_t c = cols.value_or(r > 0 && j[0].is_array() ? j[0].size() : 0);
  Matrix<F> m(f, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (!j[i].is_array() || j[i].size() != c) detail::malformed("matrix rows must all have " + std::to_string(c) + " entries");
    for (std::size_t k = 0; k < c; ++k) m(i, k) = detail::parse_entry(f, j[i][k]);
  }
  return m;
}

inline json spec_json(const FieldSpec& spec) {
  json j;
  j["characteristic"] = spec.characteristic();
  j["extension_degree"] = spec.degree();
  if (spec.degree() > 1) j["modulus"] = spec.modulus();
  return j;
}

inline FieldSpec parse_spec(const json& j) {
  const std::uint64_t p = detail::to_uint(detail::field_of(j, "characteristic"), "characteristic");
  const std::uint64_t e = detail::to_uint(detail::field_of(j, "extension_degree"), "extension_degree");
  if (e == 0 || e > 64) detail::malformed("extension_degree must lie in [1,64]");
  const bool has_mod = j.contains("modulus");
  if (has_mod != (e > 1)) detail::malformed("modulus must be present exactly when extension_degree > 1");
  std::optional<Poly> modulus;
  if (has_mod) {
    const auto& mj = j.at("modulus");
    if (!mj.is_array()) detail::malformed("modulus must be an integer array");
    Poly m;
    for (const auto& c : mj) m.push_back(detail::to_uint(c, "modulus coefficient"));
    modulus = m;
  }
  return FieldSpec::make(p, static_cast<unsigned>(e), modulus);
}

template <ScalarField F>
json module_json(const SL2Module<F>& v) {
  json j = spec_json(v.spec());
  j["dimension"] = v.dim();
  json gens = json::array();
  for (unsigned b = 0; b < v.degree(); ++b)
    gens.push_back({{"basis_index", b}, {"H", matrix_json(v.H(b))}, {"X", matrix_json(v.X(b))}, {"Y", matrix_json(v.Y(b))}});
  j["generators"] = std::move(gens);
  return j;
}

inline json module_json(const AnyModule& v) {
  return std::visit([](const auto& m) { return module_json(m); }, v);
}

template <ScalarField F>
SL2Module<F> parse_module_as(const json& j, const FieldSpec& spec) {
  const F f = field_for<F>(spec);
  const std::size_t d = detail::to_uint(detail::field_of(j, "dimension"), "dimension");
  const auto& gj = detail::field_of(j, "generators");
  if (!gj.is_array() || gj.size() != spec.degree())
    detail::malformed("generators must list one entry per basis index 0..e-1");
  std::vector<std::optional<GeneratorTriple<F>>> slots(spec.degree());
  for (const auto& g : gj) {
    const std::uint64_t b = detail::to_uint(detail::field_of(g, "basis_index"), "basis_index");
    if (b >= spec.degree()) detail::malformed("basis_index " + std::to_string(b) + " out of range");
    if (slots[b]) detail::malformed("basis_index " + std::to_string(b) + " repeated");
    slots[b] = GeneratorTriple<F>{parse_matrix(f, detail::field_of(g, "H"), d, d),
                                  parse_matrix(f, detail::field_of(g, "X"), d, d),
                                  parse_matrix(f, detail::field_of(g, "Y"), d, d)};
  }
  std::vector<GeneratorTriple<F>> triples;
  for (auto& s : slots) triples.push_back(std::move(*s));
  return SL2Module<F>(spec, d, std::move(triples));
}

inline AnyModule parse_module(const json& j) {
  if (!j.is_object()) detail::malformed("module file must hold a JSON object");
  const FieldSpec spec = parse_spec(j);
  if (spec.is_rational()) return parse_module_as<RationalField>(j, spec);
  return parse_module_as<PrimeField>(j, spec);
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) detail::malformed("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    detail::malformed(path + ": " + e.what());
  }
}

inline AnyModule read_module(const std::string& path) { return parse_module(read_json_file(path)); }

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::Malformed, "cannot write " + path);
  out << j.dump() << '\n';
}

// Reports

template <ScalarField F>
json subspace_json(const Subspace<F>& w) {
  return {{"dimension", w.dim()}, {"basis", matrix_json(w.basis())}};
}

inline json multiplicities_json(const std::map<unsigned, std::size_t>& mult) {
  json out = json::array();
  for (const auto& [k, i] : mult) out.push_back({k, i});
  return out;
}

inline json validation_json(const ValidationReport& r) {
  json fails = json::array();
  for (const auto& f : r.failures) fails.push_back({{"relation", f.relation}, {"i", f.i}, {"j", f.j}});
  return {{"valid", r.ok()}, {"failures", std::move(fails)}};
}

inline json identity_json(const IdentityRecord& r) {
  json j = {{"identity", r.identity}, {"i", r.i}, {"j", r.j}, {"lambdas", r.lambdas}, {"pass", r.pass}};
  j["mu"] = r.mu >= 0 ? json(r.mu) : json(nullptr);
  return j;
}

inline json verdict_json(const Verdict& v) {
  return {{"hypothesis", v.hypothesis}, {"conclusion", v.conclusion}, {"respected", v.respected()}};
}

template <ScalarField F>
json classification_json(const ClassificationReport<F>& r) {
  return {{"route", route_name(r.route)},
          {"annihilator_dimension", r.ann_dim},
          {"multiplicities", multiplicities_json(r.multiplicities)},
          {"witness", matrix_json(r.witness.matrix)},
          {"witness_verified", r.witness.is_isomorphism()}};
}

inline json sab_json(const SabReport& r) {
  json j = {{"n", r.n},
            {"m", r.m},
            {"p", r.p},
            {"alpha", matrix_json(r.alpha)},
            {"beta", matrix_json(r.beta)},
            {"beta_alpha_charpoly", r.beta_alpha_charpoly},
            {"simple", r.simple},
            {"witness", matrix_json(r.witness.matrix)},
            {"witness_verified", r.witness.is_isomorphism()}};
  j["proper_submodule"] = r.proper_submodule ? subspace_json(*r.proper_submodule) : json(nullptr);
  return j;
}

template <ScalarField F>
json scalar_action_json(const ScalarAction<F>& s) {
  json j = spec_json(s.spec);
  json mats = json::array();
  for (std::size_t b = 0; b < s.S.size(); ++b) mats.push_back({{"basis_index", b}, {"S", matrix_json(s.S[b])}});
  j["scalars"] = std::move(mats);
  return j;
}

template <ScalarField F>
json linearization_json(const Linearization<F>& l) {
  return {{"multiplicities", multiplicities_json(l.multiplicities)},
          {"witness", matrix_json(l.witness.matrix)},
          {"witness_verified", l.witness.is_isomorphism()}};
}

template <ScalarField F>
json series_json(const SeriesReport<F>& r, const std::string& mode) {
  json terms = json::array();
  for (const auto& t : r.terms) terms.push_back(subspace_json(t));
  json steps = json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"k", s.k},
                     {"quotient_dimension", s.quotient.dim()},
                     {"multiplicities", multiplicities_json(s.structure.multiplicities)}});
  return {{"mode", mode}, {"terms", std::move(terms)}, {"steps", std::move(steps)}};
}

template <ScalarField F>
json separation_json(const Separation<F>& s) {
  return {{"annihilator", subspace_json(s.ann)},
          {"g_dot_V", subspace_json(s.gv)},
          {"structure", linearization_json(s.structure)},
          {"scalars", scalar_action_json(s.structure.action)}};
}

inline json casimir_height_json(const CasimirHeight& h) {
  json j = {{"lower_bound", h.lower_bound}, {"stabilized", h.stabilized}};
  j["height"] = h.height ? json(*h.height) : json(nullptr);
  return j;
}

inline json coherence_json(const CoherenceVerdict& v) {
  return {{"length", v.length}, {"kappa", v.kappa}, {"iota", v.iota}, {"applicable", v.applicable}, {"holds", v.holds()}};
}

}  // namespace sl2::io
