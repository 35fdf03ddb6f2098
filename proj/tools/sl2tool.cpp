// sl2tool: construct sl_2(K)-modules, run the analyses, print JSON reports.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sl2/io.hpp"

using namespace sl2;
using io::AnyModule;
using io::json;

namespace {

constexpr std::uint64_t kDefaultBudget = 1000000;

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::Malformed:
    case Errc::NotPrime:
    case Errc::CharTwoUnsupported:
    case Errc::ReducibleModulus:
    case Errc::DimensionMismatch:
    case Errc::NonSquare:
    case Errc::FieldMismatch:
    case Errc::BadCharacteristicWindow:
    case Errc::CharZeroUnsupported:
      return 2;
    default:
      return 1;
  }
}

void emit(const json& j) { std::cout << j.dump() << '\n'; }

void diagnose(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << '\n';
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::uint64_t parse_uint(const std::string& s, const char* what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (s.empty() || s[0] == '-') throw std::invalid_argument(s);
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw Error(Errc::Malformed, std::string("bad ") + what + " \"" + s + "\"");
  }
  if (used != s.size()) throw Error(Errc::Malformed, std::string("bad ") + what + " \"" + s + "\"");
  return v;
}

/// P[:E[:c0,c1,...]], modulus constant term first; the leading 1 may be omitted.
FieldSpec parse_field(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.empty() || parts.size() > 3) throw Error(Errc::Malformed, "field must be P[:E[:MODULUS]]");
  const std::uint64_t p = parse_uint(parts[0], "characteristic");
  const unsigned e = parts.size() > 1 ? static_cast<unsigned>(parse_uint(parts[1], "extension degree")) : 1;
  std::optional<Poly> modulus;
  if (parts.size() > 2) {
    Poly m;
    for (const auto& c : split(parts[2], ',')) m.push_back(parse_uint(c, "modulus coefficient"));
    if (m.size() == e) m.push_back(1);
    modulus = m;
  }
  return FieldSpec::make(p, e, modulus);
}

SL2Module<PrimeField> need_prime(const AnyModule& v, const char* what) {
  if (const auto* m = std::get_if<SL2Module<PrimeField>>(&v)) return *m;
  throw Error(Errc::FieldMismatch, std::string(what) + " needs a module over F_p or F_q");
}

void write_module(const std::string& out, const json& j) {
  if (out.empty() || out == "-")
    emit(j);
  else
    io::write_json_file(out, j);
}

std::uint64_t brute_budget(std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SL2_BRUTE_BUDGET")) return parse_uint(env, "SL2_BRUTE_BUDGET");
  return kDefaultBudget;
}

/// The n in the window n < p < 2n for which extraction succeeds, smallest first.
SabReport extract_any(const SL2Module<PrimeField>& v, std::optional<unsigned> n) {
  if (n) return extract_alpha_beta(v, *n);
  const std::uint64_t p = v.spec().characteristic();
  for (std::uint64_t c = p / 2 + 1; c < p; ++c) {
    try {
      return extract_alpha_beta(v, static_cast<unsigned>(c));
    } catch (const Error& e) {
      if (e.code() != Errc::NotAnSab && e.code() != Errc::HypothesisViolated) throw;
    }
  }
  throw Error(Errc::NotAnSab, "no n with n < p < 2n presents the module as an S_{alpha,beta}");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact representation theory of sl_2(K) over finite fields and Q"};
  app.require_subcommand(1);
  int code = 0;
  std::function<int()> action;

  std::string in, out, field, alpha_file, beta_file, exponents, mode = "ker", route_str = "auto", a_file, b_file;
  std::vector<std::string> ins;
  unsigned k = 0, n = 0, imax = 3, jmax = 3, dim = 1;
  std::optional<unsigned> n_opt;
  std::uint64_t seed = 0, p = 0;
  std::optional<std::uint64_t> budget;

  auto* construct = app.add_subcommand("construct", "Build a fixture module");
  construct->require_subcommand(1);

  auto* c_sym = construct->add_subcommand("sym", "Symmetric power Sym^k of the natural module");
  c_sym->add_option("--k", k, "Degree")->required();
  c_sym->add_option("--field", field, "P[:E[:MODULUS]], 0 for Q")->required();
  c_sym->add_option("--out", out, "Output file (stdout when omitted)");
  c_sym->callback([&] {
    action = [&] {
      const FieldSpec spec = parse_field(field);
      write_module(out, spec.is_rational() ? io::module_json(sym_power<RationalField>(k, spec))
                                           : io::module_json(sym_power<PrimeField>(k, spec)));
      return 0;
    };
  });

  auto* c_triv = construct->add_subcommand("trivial", "Trivial module of a given dimension");
  c_triv->add_option("--dim", dim, "Dimension over the prime field")->required();
  c_triv->add_option("--field", field, "P[:E[:MODULUS]], 0 for Q")->required();
  c_triv->add_option("--out", out, "Output file (stdout when omitted)");
  c_triv->callback([&] {
    action = [&] {
      const FieldSpec spec = parse_field(field);
      write_module(out, spec.is_rational() ? io::module_json(trivial<RationalField>(dim, spec))
                                           : io::module_json(trivial<PrimeField>(dim, spec)));
      return 0;
    };
  });

  auto* c_sab = construct->add_subcommand("sab", "Two-row module S_{alpha,beta} for n < p < 2n");
  c_sab->add_option("--n", n, "Length of the long row")->required();
  c_sab->add_option("--p", p, "Characteristic")->required();
  c_sab->add_option("--alpha", alpha_file, "JSON matrix alpha: V1 -> V2")->required();
  c_sab->add_option("--beta", beta_file, "JSON matrix beta: V2 -> V1")->required();
  c_sab->add_option("--out", out, "Output file (stdout when omitted)");
  c_sab->callback([&] {
    action = [&] {
      if (!is_prime(p) || p == 2) throw Error(Errc::NotPrime, "p must be an odd prime");
      const PrimeField f(p);
      const auto al = io::parse_matrix(f, io::read_json_file(alpha_file));
      const auto be = io::parse_matrix(f, io::read_json_file(beta_file));
      write_module(out, io::module_json(s_alpha_beta(n, p, al, be)));
      return 0;
    };
  });

  auto* c_tw = construct->add_subcommand("twisted", "Twisted tensor power of Nat by Frobenius powers");
  c_tw->add_option("--field", field, "P:E[:MODULUS]")->required();
  c_tw->add_option("--exponents", exponents, "Comma-separated Frobenius exponents")->required();
  c_tw->add_option("--out", out, "Output file (stdout when omitted)");
  c_tw->callback([&] {
    action = [&] {
      const FieldSpec spec = parse_field(field);
      if (spec.is_rational()) throw Error(Errc::FieldMismatch, "twisted tensors need a finite field");
      std::vector<unsigned> ex;
      for (const auto& s : split(exponents, ',')) ex.push_back(static_cast<unsigned>(parse_uint(s, "exponent")));
      write_module(out, io::module_json(twisted_tensor_nat(spec, ex)));
      return 0;
    };
  });

  auto* c_sum = construct->add_subcommand("sum", "Direct sum of module files");
  c_sum->add_option("--in", ins, "Module files")->required();
  c_sum->add_option("--out", out, "Output file (stdout when omitted)");
  c_sum->callback([&] {
    action = [&] {
      std::vector<AnyModule> parts;
      for (const auto& f : ins) parts.push_back(io::read_module(f));
      const bool rational = std::holds_alternative<SL2Module<RationalField>>(parts.front());
      auto gather = [&](auto tag) {
        using M = decltype(tag);
        std::vector<M> ms;
        for (const auto& v : parts) {
          const auto* m = std::get_if<M>(&v);
          if (!m || !(m->spec() == std::get<M>(parts.front()).spec()))
            throw Error(Errc::FieldMismatch, "summands must share one field");
          ms.push_back(*m);
        }
        return io::module_json(direct_sum(ms));
      };
      write_module(out, rational ? gather(SL2Module<RationalField>{}) : gather(SL2Module<PrimeField>{}));
      return 0;
    };
  });

  auto* scr = app.add_subcommand("scramble", "Conjugate by a seeded random change of basis");
  scr->add_option("--in", in, "Module file")->required();
  scr->add_option("--seed", seed, "RNG seed")->required();
  scr->add_option("--out", out, "Output file (stdout when omitted)");
  scr->callback([&] {
    action = [&] {
      const auto v = io::read_module(in);
      write_module(out, std::visit([&](const auto& m) { return io::module_json(scramble(m, seed)); }, v));
      return 0;
    };
  });

  auto* val = app.add_subcommand("validate", "Check the bracket relations on basis pairs");
  val->add_option("--in", in, "Module file")->required();
  val->callback([&] {
    action = [&] {
      const auto r = std::visit([](const auto& m) { return validate(m); }, io::read_module(in));
      emit(io::validation_json(r));
      for (const auto& f : r.failures)
        diagnose("RelationFailed", f.relation + " fails at i=" + std::to_string(f.i) + " j=" + std::to_string(f.j));
      return r.ok() ? 0 : 1;
    };
  });

  auto* ids = app.add_subcommand("identities", "Check the enveloping-ring identities, one JSON line per instance");
  ids->add_option("--in", in, "Module file")->required();
  ids->add_option("--imax", imax, "Largest power of x");
  ids->add_option("--jmax", jmax, "Largest power of y");
  ids->callback([&] {
    action = [&] {
      const auto recs = std::visit([&](const auto& m) { return verify_identities(m, imax, jmax); }, io::read_module(in));
      bool ok = true;
      for (const auto& r : recs) {
        emit(io::identity_json(r));
        ok = ok && r.pass;
      }
      return ok ? 0 : 1;
    };
  });

  auto* wts = app.add_subcommand("weights", "Weight and generalized weight spaces of H_0");
  wts->add_option("--in", in, "Module file")->required();
  wts->callback([&] {
    action = [&] {
      std::visit(
          [](const auto& m) {
            auto list = [](const auto& spaces) {
              json out = json::array();
              for (const auto& [label, w] : spaces) out.push_back({{"weight", label}, {"space", io::subspace_json(w)}});
              return out;
            };
            emit({{"diagonalizable", weight_diagonalizable(m)},
                  {"weights", list(weight_spaces(m))},
                  {"generalized", list(generalized_weight_spaces(m))}});
          },
          io::read_module(in));
      return 0;
    };
  });

  auto* cas = app.add_subcommand("casimir", "Casimir element 2xy + 2yx + h^2 of the prime subring");
  cas->add_option("--in", in, "Module file")->required();
  cas->callback([&] {
    action = [&] {
      std::visit(
          [](const auto& m) {
            const auto c = casimir(m);
            json j = {{"matrix", io::matrix_json(c)}};
            j["scalar"] = nullptr;
            if (m.dim() > 0) {
              const auto lam = c(0, 0);
              if (c == Matrix<std::decay_t<decltype(m.field())>>::identity(m.field(), m.dim()).scaled(lam))
                j["scalar"] = io::detail::entry_json(m.field(), lam);
            }
            emit(j);
          },
          io::read_module(in));
      return 0;
    };
  });

  auto* ann = app.add_subcommand("annihilator", "Ann_V(g) and g.V");
  ann->add_option("--in", in, "Module file")->required();
  ann->callback([&] {
    action = [&] {
      std::visit([](const auto& m) {
        emit({{"annihilator", io::subspace_json(annihilator(m))}, {"g_dot_V", io::subspace_json(g_dot_V(m))}});
      }, io::read_module(in));
      return 0;
    };
  });

  auto* len = app.add_subcommand("length", "u-length and nilpotency index of x");
  len->add_option("--in", in, "Module file")->required();
  len->callback([&] {
    action = [&] {
      std::visit([](const auto& m) { emit({{"u_length", u_length(m)}, {"x_nilpotency", x_nilpotency(m)}}); },
                 io::read_module(in));
      return 0;
    };
  });

  auto* cls = app.add_subcommand("classify", "Decompose into Sym^k components with a verified isomorphism");
  cls->add_option("--in", in, "Module file")->required();
  cls->add_option("--n", n, "Bound with x^n = 0")->required();
  cls->add_option("--route", route_str, "auto|large-char|two-sided|char3|x-only");
  cls->callback([&] {
    action = [&] {
      const auto route = parse_route(route_str);
      if (!route) throw Error(Errc::Malformed, "unknown route \"" + route_str + "\"");
      std::visit([&](const auto& m) { emit(io::classification_json(classify(m, n, *route))); }, io::read_module(in));
      return 0;
    };
  });

  auto* sx = app.add_subcommand("sab-extract", "Recover alpha, beta from a module in the window n < p < 2n");
  sx->add_option("--in", in, "Module file")->required();
  sx->add_option("--n", n, "Length of the long row")->required();
  sx->callback([&] {
    action = [&] {
      emit(io::sab_json(extract_alpha_beta(need_prime(io::read_module(in), "sab-extract"), n)));
      return 0;
    };
  });

  auto* si = app.add_subcommand("sab-iso", "Decide isomorphism of two simple S_{alpha,beta} modules");
  si->add_option("--a", a_file, "First module file")->required();
  si->add_option("--b", b_file, "Second module file")->required();
  si->add_option("--n", n_opt, "Length of the long row (searched when omitted)");
  si->callback([&] {
    action = [&] {
      const auto ra = extract_any(need_prime(io::read_module(a_file), "sab-iso"), n_opt);
      const auto rb = extract_any(need_prime(io::read_module(b_file), "sab-iso"), n_opt);
      const bool iso = sab_isomorphic(ra, rb);
      emit({{"isomorphic", iso}, {"n", {ra.n, rb.n}}});
      return iso ? 0 : 1;
    };
  });

  auto* lin = app.add_subcommand("linearize", "Build a compatible K-vector space structure");
  lin->add_option("--in", in, "Module file")->required();
  lin->add_option("--n", n, "Bound with x^n = 0")->required();
  lin->add_option("--out", out, "Scalar action file");
  lin->callback([&] {
    action = [&] {
      std::visit([&](const auto& m) {
        const auto l = linearize(m, n);
        if (!out.empty()) io::write_json_file(out, io::scalar_action_json(l.action));
        emit(io::linearization_json(l));
      }, io::read_module(in));
      return 0;
    };
  });

  auto* ser = app.add_subcommand("series", "Kernel or image coherence series");
  ser->add_option("--in", in, "Module file")->required();
  ser->add_option("--n", n, "Bound with x^n = 0")->required();
  ser->add_option("--mode", mode, "ker|im");
  ser->callback([&] {
    action = [&] {
      if (mode != "ker" && mode != "im") throw Error(Errc::Malformed, "mode must be ker or im");
      std::visit([&](const auto& m) { emit(io::series_json(mode == "ker" ? series_ker(m, n) : series_im(m, n), mode)); },
                 io::read_module(in));
      return 0;
    };
  });

  auto* sep = app.add_subcommand("separate", "Split V = Ann_V(g) + g.V with a K-structure on g.V");
  sep->add_option("--in", in, "Module file")->required();
  sep->add_option("--n", n, "Bound with x^n = 0")->required();
  sep->callback([&] {
    action = [&] {
      std::visit([&](const auto& m) { emit(io::separation_json(separate(m, n))); }, io::read_module(in));
      return 0;
    };
  });

  auto* coh = app.add_subcommand("coherence", "Coherence degrees, their length bound, Casimir height");
  coh->add_option("--in", in, "Module file")->required();
  coh->callback([&] {
    action = [&] {
      int rc = 0;
      std::visit([&](const auto& m) {
        json j = {{"kappa", kappa(m)}, {"iota", iota(m)}, {"casimir_height", io::casimir_height_json(casimir_height_report(m))}};
        try {
          const auto verdict = check_coherence_bound(m);
          j["bound"] = io::coherence_json(verdict);
          if (!verdict.holds()) rc = 1;
        } catch (const Error& e) {
          if (e.code() != Errc::CharTooSmall) throw;
          j["bound"] = {{"applicable", false}, {"reason", errc_name(e.code())}};
        }
        emit(j);
      }, io::read_module(in));
      return rc;
    };
  });

  auto* sim = app.add_subcommand("simple", "Brute-force simplicity test over F_p");
  sim->add_option("--in", in, "Module file")->required();
  sim->add_option("--budget", budget, "Vector budget (default 10^6, or SL2_BRUTE_BUDGET)");
  sim->callback([&] {
    action = [&] {
      const auto v = need_prime(io::read_module(in), "simple");
      const std::uint64_t b = brute_budget(budget);
      const bool s = is_simple_bruteforce(v, b);
      emit({{"simple", s}, {"budget", b}});
      return s ? 0 : 1;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    code = action ? action() : 2;
  } catch (const Error& e) {
    diagnose(errc_name(e.code()), e.what());
    code = exit_code_for(e.code());
  } catch (const json::exception& e) {
    diagnose("Malformed", e.what());
    code = 2;
  } catch (const std::bad_alloc&) {
    diagnose("OutOfMemory", "allocation failed");
    code = 1;
  }
  return code;
}
