// paleyvec: build fields, compute and predict clique numbers of G_U, run the
// verification suites, survey subspace families and benchmark the solver.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 budget exceeded.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "paleyvec/sweep.hpp"

using json = nlohmann::ordered_json;
using namespace paleyvec;

namespace {

constexpr int kOk = 0, kVerifyFailed = 1, kUsage = 2, kBudget = 3;

struct RunConfig {
  std::string field;
  std::string subspace;
  std::string mode = "both";
  unsigned workers = 1;
  double time_limit = 0;
  std::uint64_t max_vertices = 0;
  std::uint64_t max_cliques = kDefaultCliqueCap;
  bool no_rule = false;
  bool no_timing = false;
};

[[noreturn]] void parse_error(const std::string& msg) { throw Error(Errc::ParseError, msg); }

std::uint32_t to_uint(const std::string& s, const std::string& what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) parse_error("bad " + what + ": '" + s + "'");
  try {
    return static_cast<std::uint32_t>(std::stoul(s));
  } catch (const std::exception&) {
    parse_error("bad " + what + ": '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, sep);) out.push_back(part);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

/// q given as "p^m" or as a plain prime power.
std::pair<std::uint32_t, std::uint32_t> parse_q(const std::string& s) {
  const auto parts = split(s, '^');
  if (parts.size() == 2) return {to_uint(parts[0], "prime"), to_uint(parts[1], "degree")};
  if (parts.size() != 1) parse_error("bad q: '" + s + "'");
  const std::uint32_t q = to_uint(s, "q");
  const auto pf = detail::prime_factors(q);
  if (q < 2 || pf.size() != 1) parse_error(s + " is not a prime power");
  const auto p = static_cast<std::uint32_t>(pf.front());
  std::uint32_t m = 0;
  for (std::uint32_t v = q; v > 1; v /= p) ++m;
  return {p, m};
}

/// "p^m^n", "q^n" or "q=<p^m or q>,n=<n>".
FieldCtx parse_field(const std::string& spec) {
  std::smatch mt;
  static const std::regex kv(R"(q=([0-9^]+),n=([0-9]+))");
  if (std::regex_match(spec, mt, kv)) {
    const auto [p, m] = parse_q(mt[1]);
    return FieldCtx::build(p, m, to_uint(mt[2], "n"));
  }
  const auto parts = split(spec, '^');
  if (parts.size() == 3)
    return FieldCtx::build(to_uint(parts[0], "p"), to_uint(parts[1], "m"), to_uint(parts[2], "n"));
  if (parts.size() == 2) {
    const auto [p, m] = parse_q(parts[0]);
    return FieldCtx::build(p, m, to_uint(parts[1], "n"));
  }
  parse_error("field spec must be p^m^n, q^n or q=<q>,n=<n>: '" + spec + "'");
}

Subspace parse_subspace(const FieldCtx& f, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) parse_error("subspace spec must be basis=<i,j,...> or ker-trace-of=<c>");
  const std::string key = spec.substr(0, eq), val = spec.substr(eq + 1);
  auto element = [&](const std::string& s) {
    const std::uint32_t v = to_uint(s, "element index");
    if (v >= f.order()) parse_error("element index " + s + " is outside the field");
    return Element(v);
  };
  if (key == "basis") {
    std::vector<Element> gens;
    if (!val.empty())
      for (const auto& s : split(val, ',')) gens.push_back(element(s));
    return span(f, gens);
  }
  if (key == "ker-trace-of") return hyperplane_from_functional(f, element(val));
  parse_error("unknown subspace form '" + key + "'");
}

std::vector<std::uint32_t> indices(const std::vector<Element>& v) {
  std::vector<std::uint32_t> out;
  for (auto e : v) out.push_back(e.idx);
  return out;
}

OmegaOptions omega_options(const RunConfig& cfg) {
  OmegaOptions o;
  o.workers = cfg.workers;
  o.use_structure_rule = !cfg.no_rule;
  if (cfg.time_limit > 0)
    o.deadline = std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(cfg.time_limit));
  return o;
}

std::uint64_t vertex_cap(const RunConfig& cfg) { return cfg.max_vertices ? cfg.max_vertices : vertex_budget(); }

json prediction_json(const OmegaPrediction& p) {
  json j;
  j["kind"] = kind_name(p.kind);
  if (auto v = p.value()) j["value"] = *v;
  j["lo"] = p.lo;
  j["hi"] = p.hi;
  j["candidates"] = p.candidates;
  j["provenance"] = p.provenance;
  return j;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) o += c == '"' ? std::string("\"\"") : std::string(1, c);
  return o + "\"";
}

int cmd_field(const RunConfig& cfg, bool print_modulus) {
  const auto f = parse_field(cfg.field);
  auto join = [](const detail::Poly& p) {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
    return s;
  };
  if (print_modulus) {
    std::cout << join(f.base_modulus()) << "\n" << join(f.ext_modulus()) << "\n";
    return kOk;
  }
  json j;
  j["schema"] = 1;
  j["field"] = f.spec_string();
  j["p"] = f.p();
  j["m"] = f.m();
  j["n"] = f.n();
  j["q"] = f.q();
  j["order"] = f.order();
  j["base_modulus"] = f.base_modulus();
  j["ext_modulus"] = f.ext_modulus();
  j["generator"] = f.generator().idx;
  j["tables"] = f.has_tables();
  std::cout << j.dump(2) << "\n";
  return kOk;
}

int cmd_omega(const RunConfig& cfg) {
  if (cfg.mode != "exact" && cfg.mode != "predict" && cfg.mode != "both") parse_error("mode must be exact, predict or both");
  const auto f = parse_field(cfg.field);
  const Subspace U = parse_subspace(f, cfg.subspace);
  const auto t0 = std::chrono::steady_clock::now();
  json j;
  j["schema"] = 1;
  j["field"] = f.spec_string();
  j["subspace"] = U.to_string();
  j["dim"] = U.dim();
  std::optional<std::uint64_t> exact;
  std::optional<OmegaPrediction> pred;
  if (cfg.mode != "exact") pred = predict_omega(f, U);
  if (cfg.mode != "predict") {
    const auto G = GraphGU::build(f, U, vertex_cap(cfg));
    const auto r = clique_number_exact(G, omega_options(cfg));
    exact = r.size;
    j["omega"] = r.size;
    j["witness"] = r.witness;
    const auto dec = decompose_clique(G, r.witness);
    j["decomposition"] = {{"t", dec.t}, {"r", dec.r}};
    j["exact"] = r.size;
  }
  if (pred) {
    if (auto v = pred->value()) j["predicted"] = *v;
    else j["predicted"] = nullptr;
    j["prediction"] = prediction_json(*pred);
  }
  bool consistent = true;
  if (exact && pred) {
    consistent = pred->admits(*exact);
    j["consistent"] = consistent;
  }
  if (!cfg.no_timing)
    j["runtime_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  std::cout << j.dump(2) << "\n";
  return consistent ? kOk : kVerifyFailed;
}

std::vector<std::uint32_t> parse_dims(const std::string& s, std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (const auto& part : split(s, ',')) {
    if (part == "n-1") out.push_back(n - 1);
    else out.push_back(to_uint(part, "dimension"));
  }
  for (auto d : out)
    if (d < 1 || d >= n) throw Error(Errc::DimensionOutOfRange, "survey dimensions must lie in [1, n-1]");
  return out;
}

int cmd_survey(const RunConfig& cfg, const std::string& dims, bool pretty) {
  const auto f = parse_field(cfg.field);
  if (f.order() > vertex_cap(cfg)) throw Error(Errc::BudgetExceeded, "field exceeds the vertex budget");
  bool ok = true;
  std::cout << "basis,d_U,has_square,D_U,s_U,predicted,exact,match\n";
  for (auto d : parse_dims(dims, f.n())) {
    for_each_subspace(f, d, [&](const Subspace& U) {
      std::string basis;
      for (auto e : U.basis()) basis += (basis.empty() ? "" : ";") + (pretty ? f.to_string(e) : std::to_string(e.idx));
      const bool sq = contains_nonzero_square(f, U);
      const std::string D = sq ? std::to_string(D_invariant(f, U)) : "";
      const std::string s = (f.odd() && f.n() % 2 == 0 && d + 1 == f.n()) ? std::to_string(s_invariant(f, U)) : "";
      const auto pred = predict_omega(f, U);
      const auto w = clique_number_exact(GraphGU::build(f, U, vertex_cap(cfg)), omega_options(cfg)).size;
      const bool match = pred.admits(w);
      ok = ok && match;
      std::cout << csv_quote(basis) << ',' << d << ',' << (sq ? 1 : 0) << ',' << D << ',' << s << ','
                << csv_quote(pred.to_string()) << ',' << w << ',' << (match ? "true" : "false") << '\n';
    });
  }
  return ok ? kOk : kVerifyFailed;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite, std::uint32_t qmax, std::uint32_t nmax,
               std::uint64_t max_order, bool orbits) {
  const auto fields = field_grid(qmax, nmax, max_order);
  OmegaOptions opt;
  opt.workers = cfg.workers;
  OmegaEngine eng(opt);
  Report rep;
  if (suite == "main") rep = suite_max_over_hyperplanes(fields, eng);
  else if (suite == "n-1") rep = suite_hyperplanes(fields, eng);
  else if (suite == "prop-basic") rep = suite_low_dimension(fields, eng);
  else if (suite == "main1") rep = suite_structure(fields, cfg.max_cliques);
  else if (suite == "main3") rep = suite_bounds(fields, eng, orbits);
  else if (suite == "crucial") rep = suite_forms(fields, 100, 50, cfg.workers);
  else if (suite == "trace-equiv") rep = suite_trace_equivalence(fields);
  else if (suite == "basis") rep = suite_special_basis(fields);
  else if (suite == "sumproduct") rep = suite_sum_product(fields);
  else if (suite == "census") rep = suite_census(fields, opt);
  else parse_error("unknown suite '" + suite + "'");
  json j;
  j["schema"] = 1;
  j["suite"] = suite;
  j["instances"] = rep.instances;
  j["passes"] = rep.passes;
  j["failures"] = rep.failures;
  std::cout << j.dump(2) << "\n";
  return rep.ok() ? kOk : kVerifyFailed;
}

int cmd_form(const RunConfig& cfg, std::uint32_t lambda) {
  const auto f = parse_field(cfg.field);
  if (lambda == 0 || lambda >= f.order()) parse_error("lambda must be a nonzero element index");
  const auto B = FormSpec::trace_form(f, Element(lambda));
  json j;
  j["schema"] = 1;
  j["field"] = f.spec_string();
  j["lambda"] = lambda;
  json gram = json::array();
  for (std::size_t i = 0; i < B.gram().rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < B.gram().cols(); ++k) row.push_back(B.gram()(i, k));
    gram.push_back(row);
  }
  j["gram"] = gram;
  if (f.odd()) j["chi"] = chi_of_form(f, B);
  const auto t = t_of_form(f, B);
  j["t"] = t.t;
  j["t_witness"] = indices(t.witness.basis());
  if (f.order() > vertex_cap(cfg)) throw Error(Errc::BudgetExceeded, "orthogonality graph exceeds the vertex budget");
  const auto M = M_of_form(f, B, cfg.workers);
  j["M"] = M.M;
  j["M_witness"] = indices(M.witness);
  if (M.closed_form) j["M_closed_form"] = *M.closed_form;
  if (M.upper_bound) j["M_upper_bound"] = *M.upper_bound;
  std::cout << j.dump(2) << "\n";
  const bool ok = !M.closed_form || *M.closed_form == M.M;
  return ok && (!M.upper_bound || M.M <= *M.upper_bound) ? kOk : kVerifyFailed;
}

int cmd_bench(const RunConfig& cfg, const std::string& dims, unsigned repeat) {
  const auto f = parse_field(cfg.field);
  struct Row {
    std::vector<double> with_rule, without_rule;
    std::uint64_t omega = 0;
    bool agree = true;
  };
  std::map<std::string, Row> rows;
  auto time_one = [&](const GraphGU& G, bool rule, std::uint64_t& w) {
    RunConfig c = cfg;
    c.no_rule = !rule;
    const auto t0 = std::chrono::steady_clock::now();
    w = clique_number_exact(G, omega_options(c)).size;
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  };
  for (auto d : parse_dims(dims, f.n())) {
    for_each_subspace(f, d, [&](const Subspace& U) {
      std::string cls = "d=" + std::to_string(d);
      if (!contains_nonzero_square(f, U)) cls += " square-free";
      else if (f.odd() && f.n() % 2 == 0 && d + 1 == f.n()) cls += s_invariant(f, U) == 1 ? " s=+1" : " s=-1";
      const auto G = GraphGU::build(f, U, vertex_cap(cfg));
      auto& row = rows[cls];
      for (unsigned r = 0; r < repeat; ++r) {
        std::uint64_t a = 0, b = 0;
        row.with_rule.push_back(time_one(G, true, a));
        row.without_rule.push_back(time_one(G, false, b));
        row.agree = row.agree && a == b && (row.omega == 0 || row.omega == a);
        row.omega = a;
      }
    });
  }
  auto quantile = [](std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    return v[std::min(v.size() - 1, static_cast<std::size_t>(q * static_cast<double>(v.size() - 1) + 0.5))];
  };
  bool ok = true;
  std::printf("%-18s %6s %6s %12s %12s %12s %12s %8s %6s\n", "class", "runs", "omega", "median_rule", "p95_rule",
              "median_plain", "p95_plain", "speedup", "agree");
  for (const auto& [cls, row] : rows) {
    const double mr = quantile(row.with_rule, 0.5), mp = quantile(row.without_rule, 0.5);
    std::printf("%-18s %6zu %6llu %12.3f %12.3f %12.3f %12.3f %8.2f %6s\n", cls.c_str(), row.with_rule.size(),
                static_cast<unsigned long long>(row.omega), mr, quantile(row.with_rule, 0.95), mp,
                quantile(row.without_rule, 0.95), mr > 0 ? mp / mr : 0.0, row.agree ? "yes" : "no");
    ok = ok && row.agree;
  }
  return ok ? kOk : kVerifyFailed;
}

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::BudgetExceeded:
    case Errc::CapExceeded:
    case Errc::TimeLimit: return kBudget;
    case Errc::StructureViolation: return kVerifyFailed;
    default: return kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clique numbers of the graphs G_U over finite fields"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--workers", cfg.workers, "solver threads")->check(CLI::PositiveNumber);
    sub->add_option("--max-vertices", cfg.max_vertices, "vertex cap (default PALEYVEC_BUDGET_VERTICES or 65536)")
        ->check(CLI::PositiveNumber);
  };

  auto* field = app.add_subcommand("field", "describe a field");
  bool print_modulus = false;
  field->add_option("--field", cfg.field, "p^m^n, q^n or q=<q>,n=<n>")->required();
  field->add_flag("--print-modulus", print_modulus, "print both moduli, constant term first");

  auto* omega = app.add_subcommand("omega", "exact and/or predicted clique number of G_U");
  omega->add_option("--field", cfg.field)->required();
  omega->add_option("--subspace", cfg.subspace, "basis=<i,j,...> or ker-trace-of=<c>")->required();
  omega->add_option("--mode", cfg.mode, "exact, predict or both")->check(CLI::IsMember({"exact", "predict", "both"}));
  omega->add_option("--time-limit", cfg.time_limit, "seconds")->check(CLI::PositiveNumber);
  omega->add_flag("--no-rule", cfg.no_rule, "disable the structure pruning rule");
  omega->add_flag("--no-timing", cfg.no_timing, "omit runtime_ms for byte-stable output");
  add_common(omega);

  auto* survey = app.add_subcommand("survey", "CSV table over all subspaces of given dimensions");
  std::string dims = "n-1";
  bool pretty = false;
  survey->add_option("--field", cfg.field)->required();
  survey->add_option("--dim", dims, "comma-separated dimensions; n-1 allowed");
  survey->add_flag("--pretty", pretty, "render basis elements as polynomials");
  add_common(survey);

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite;
  std::uint32_t qmax = 5, nmax = 4;
  std::uint64_t max_order = 256;
  bool orbits = false;
  verify->add_option("--suite", suite)
      ->required()
      ->check(CLI::IsMember({"main", "main1", "main3", "prop-basic", "n-1", "crucial", "basis", "trace-equiv",
                             "sumproduct", "census"}));
  verify->add_option("--qmax", qmax)->check(CLI::Range(2u, 1u << 16));
  verify->add_option("--nmax", nmax)->check(CLI::Range(2u, 30u));
  verify->add_option("--max-order", max_order, "largest field order included")->check(CLI::PositiveNumber);
  verify->add_option("--max-cliques", cfg.max_cliques, "cap for maximal clique enumeration")->check(CLI::PositiveNumber);
  verify->add_flag("--orbits", orbits, "main3: one subspace per orbit under x -> a^2 x and Frobenius");
  add_common(verify);

  auto* form = app.add_subcommand("form", "invariants of the trace form Tr(lambda x y)");
  std::uint32_t lambda = 1;
  form->add_option("--field", cfg.field)->required();
  form->add_option("--lambda", lambda, "element index of lambda");
  add_common(form);

  auto* bench = app.add_subcommand("bench", "solver timings with and without the structure rule");
  unsigned repeat = 3;
  bench->add_option("--field", cfg.field)->required();
  bench->add_option("--dim", dims, "comma-separated dimensions; n-1 allowed");
  bench->add_option("--repeat", repeat)->check(CLI::PositiveNumber);
  bench->add_option("--time-limit", cfg.time_limit, "seconds per solve")->check(CLI::PositiveNumber);
  add_common(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*field) return cmd_field(cfg, print_modulus);
    if (*omega) return cmd_omega(cfg);
    if (*survey) return cmd_survey(cfg, dims, pretty);
    if (*verify) return cmd_verify(cfg, suite, qmax, nmax, max_order, orbits);
    if (*form) return cmd_form(cfg, lambda);
    if (*bench) return cmd_bench(cfg, dims, repeat);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kUsage;
}
