#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "aoa/constructions.hpp"
#include "aoa/design.hpp"
#include "aoa/discrepancy.hpp"
#include "aoa/io.hpp"
#include "aoa/ip_model.hpp"
#include "aoa/metrics.hpp"
#include "aoa/search.hpp"
#include "aoa/symmetry.hpp"

namespace fs = std::filesystem;
using namespace aoa;

namespace {

constexpr int kUsage = 1;
constexpr int kParse = 2;
constexpr int kVerify = 3;

std::string fmt(double v) {
  std::ostringstream o;
  o << std::setprecision(10) << v;
  return o.str();
}

ip::IpInstance make_instance(int s, int k, int lambda, int p, int eps, const std::string& sym) {
  ip::IpInstance in;
  in.s = s;
  in.k = k;
  in.lambda = lambda;
  in.p = p;
  in.epsilon = eps;
  const auto colon = sym.find(':');
  const std::string kind = sym.substr(0, colon);
  if (kind == "none")
    in.symmetry = ip::SymmetryKind::none;
  else if (kind == "semicyclic")
    in.symmetry = ip::SymmetryKind::semicyclic;
  else if (kind == "klein")
    in.symmetry = ip::SymmetryKind::klein;
  else if (kind == "both")
    in.symmetry = ip::SymmetryKind::both;
  else
    throw std::invalid_argument("unknown symmetry '" + sym + "'");
  if (in.symmetry == ip::SymmetryKind::semicyclic || in.symmetry == ip::SymmetryKind::both) {
    if (colon == std::string::npos) throw std::invalid_argument("semicyclic symmetry needs ':mbar'");
    in.mbar = std::stoi(sym.substr(colon + 1));
  }
  ip::validate(in);
  return in;
}

int run_eval(const std::string& path, int t, const std::vector<int>& ps, const std::vector<double>& contrast,
             bool discrepancies, bool criteria) {
  const auto file = io::read_array_file(path);
  const Array& a = file.array;
  std::cout << "N: " << a.runs() << "\nk: " << a.factors() << "\ns: " << a.levels() << "\n";
  if (t < 1 || t > a.factors()) throw std::invalid_argument("strength out of range");
  std::cout << "is_oa: " << (is_oa(a, t) ? "true" : "false") << "\n";
  std::cout << "tol: " << tolerance(a, t) << "\n";
  for (int p : ps) std::cout << "unb" << p << ": " << unbalance(a, t, p) << "\n";
  std::cout << "bandwidth: " << bandwidth(a, t) << "\n";
  if (criteria) {
    if (a.factors() < 2) throw std::invalid_argument("D criteria need k >= 2");
    std::cout << "D1: " << design::d1(a) << " (" << fmt(design::d1(a).to_double()) << ")\n";
    std::cout << "D2: " << design::d2(a) << " (" << fmt(design::d2(a).to_double()) << ")\n";
    const auto f = contrast.empty() ? design::default_contrast(a.levels()) : design::LevelContrast(contrast);
    try {
      std::cout << "D_f: " << fmt(design::d_value(a, f)) << "\n";
      std::cout << "J2: " << fmt(design::j2(a, f)) << "\n";
    } catch (const design::SingularColumnError& e) {
      std::cout << "D_f: undefined (" << e.what() << ")\n";
    }
  }
  if (discrepancies) {
    std::cout << "CD2: " << fmt(disc::cd_squared(a)) << "\n";
    std::cout << "WD2: " << fmt(disc::wd_squared(a)) << "\n";
    std::cout << "MD2: " << fmt(disc::md_squared(a)) << "\n";
  }
  return 0;
}

int run_construct(const std::string& variant, int s, int ell, int kappa, const std::string& out) {
  construct::ConstructionSpec spec{s, ell, kappa, construct::parse_variant(variant)};
  construct::validate(spec);
  const Array a = construct::build(spec);
  const auto rep = construct::verify_construction(a, spec);
  io::Metadata meta{{"construction", variant},
                    {"s", std::to_string(s)},
                    {"ell", std::to_string(ell)},
                    {"kappa", std::to_string(kappa)}};
  std::ostream& report = out.empty() ? std::cerr : std::cout;
  if (out.empty())
    std::cout << io::serialize_array(a, meta);
  else
    io::write_text_file(out, io::serialize_array(a, meta));
  report << "array: " << a.runs() << "x" << a.factors() << "\n";
  for (const auto& it : rep.items)
    report << (it.pass ? "PASS " : "FAIL ") << it.name << (it.detail.empty() ? "" : "  " + it.detail) << "\n";
  return rep.all_pass() ? 0 : kVerify;
}

int run_search(int n, int k, int s, const search::SearchConfig& cfg, const std::string& out_dir) {
  const auto res = search::local_pareto_search(n, k, s, cfg);
  const auto arrays = res.arrays();
  nlohmann::json summary;
  summary["N"] = n;
  summary["k"] = k;
  summary["s"] = s;
  summary["p"] = cfg.p;
  summary["radius"] = cfg.radius;
  summary["seed"] = cfg.seed;
  summary["encoding"] = search::encoding_name(cfg.encoding);
  summary["restarts"] = cfg.restarts;
  summary["complete"] = res.front.complete;
  summary["members"] = nlohmann::json::array();
  std::string csv = "member,unbalance,tolerance\n";
  for (std::size_t i = 0; i < res.front.members.size(); ++i) {
    const auto& o = res.front.members[i].objective;
    std::cout << "member " << i << ": unb" << cfg.p << "=" << o.unbalance << " tol=" << o.tolerance << "\n";
    summary["members"].push_back({{"file", "member_" + std::to_string(i) + ".txt"},
                                  {"unbalance", o.unbalance.str()},
                                  {"tolerance", o.tolerance.str()}});
    csv += std::to_string(i) + "," + o.unbalance.str() + "," + o.tolerance.str() + "\n";
  }
  if (!res.front.complete) std::cout << "front incomplete: budget exhausted\n";
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    for (std::size_t i = 0; i < arrays.size(); ++i)
      io::write_text_file(fs::path(out_dir) / ("member_" + std::to_string(i) + ".txt"),
                          io::serialize_array(arrays[i], {{"provenance", "search"}, {"seed", std::to_string(cfg.seed)}}));
    io::write_text_file(fs::path(out_dir) / "front.json", summary.dump(2) + "\n");
    io::write_text_file(fs::path(out_dir) / "front.csv", csv);
  }
  return 0;
}

int run_ip(const ip::IpInstance& in, const std::string& out, const std::string& mps) {
  const auto model = ip::build_model(in);
  const auto lp = ip::emit_lp(model);
  if (out.empty())
    std::cout << lp;
  else
    io::write_text_file(out, lp);
  if (!mps.empty()) io::write_text_file(mps, ip::emit_mps(model));
  std::cerr << "variables: " << model.vars.size() << "  constraints: " << model.constraints.size() << "\n";
  return 0;
}

int run_ip_verify(const ip::IpInstance& in, const std::string& solution, const std::string& out) {
  const auto model = ip::build_model(in);
  const auto assignment = ip::parse_solution(io::read_text_file(solution));
  ip::SolutionReport rep;
  try {
    rep = ip::verify_solution(in, model, assignment);
  } catch (const ip::VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kVerify;
  }
  std::cout << "objective: " << fmt(rep.objective) << "\n";
  std::cout << "d1 term: " << fmt(rep.d1_term) << "\n";
  std::cout << "unb" << in.p << ": " << rep.unbalance << "\n";
  std::cout << "tol: " << rep.tolerance << "\n";
  std::cout << "objective identity: " << (rep.objective_ok ? "ok" : "FAILED") << "\n";
  std::cout << "z consistency: " << (rep.z_ok ? "ok" : "FAILED") << "\n";
  std::cout << "constraints: " << (rep.constraints_ok ? "ok" : "FAILED") << "\n";
  for (const auto& p : rep.problems) std::cout << "  " << p << "\n";
  if (!out.empty()) io::write_text_file(out, io::serialize_array(rep.array, {{"provenance", "ip"}}));
  return rep.ok() ? 0 : kVerify;
}

void print_entry(const io::CatalogEntry& e) {
  std::cout << e.id << "  N=" << e.runs << " k=" << e.factors << " s=" << e.levels << " " << e.provenance
            << "  tol=" << e.metrics.tol << " unb1=" << e.metrics.unb1 << " unb2=" << e.metrics.unb2 << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Almost-orthogonal array workbench"};
  app.require_subcommand(1);

  std::string path, out, mps, solution, variant, encoding = "plain", sym = "none", provenance, config_text, catalog_dir;
  int t = 2, s = 0, k = 0, n = 0, ell = 2, kappa = 1, lambda = 1, p = 1, eps = 1, radius = 2, r = 0, restarts = 1;
  std::vector<int> ps{1, 2};
  std::vector<double> contrast;
  bool discrepancies = false, criteria = false, log = false, verify_incremental = false;
  std::uint64_t seed = 0;
  double budget = 0;
  long max_passes = 0;
  std::string tol_cap;
  std::optional<int> f_n, f_k, f_s;
  std::string f_prov;

  auto* eval = app.add_subcommand("eval", "Report metrics of an array file");
  eval->add_option("path", path, "Array file")->required();
  eval->add_option("--t", t, "Strength");
  eval->add_option("--p", ps, "Unbalance exponents")->delimiter(',');
  eval->add_option("--contrast", contrast, "Level contrast values")->delimiter(',');
  eval->add_flag("--discrepancy", discrepancies, "Squared CD, WD and MD");
  eval->add_flag("--d-criteria", criteria, "D1, D2, D_f and J2");

  auto* cons = app.add_subcommand("construct", "Build and verify a finite-field construction");
  cons->add_option("variant", variant, "half, odd-ext or even-ext")->required();
  cons->add_option("s", s, "Levels")->required();
  cons->add_option("ell", ell, "Field power")->required();
  cons->add_option("kappa", kappa, "Extension columns")->required();
  cons->add_option("-o,--out", out, "Output array file");

  auto* srch = app.add_subcommand("search", "Local Pareto front search");
  srch->add_option("N", n)->required();
  srch->add_option("k", k)->required();
  srch->add_option("s", s)->required();
  srch->add_option("--p", p, "Unbalance exponent (1 or 2)");
  srch->add_option("--encoding", encoding, "plain, bicyclic or quasicyclic");
  srch->add_option("--r", r, "Bicyclic column cycle length");
  srch->add_option("--seed", seed);
  srch->add_option("--radius", radius);
  srch->add_option("--budget", budget, "Seconds, 0 for none");
  srch->add_option("--max-passes", max_passes);
  srch->add_option("--restarts", restarts);
  srch->add_option("--tol-cap", tol_cap, "Tolerance cap for the lexicographic mode");
  srch->add_option("--out", out, "Directory for front files");
  srch->add_flag("--log", log, "Progress lines on stderr");
  srch->add_flag("--check-incremental", verify_incremental, "Recompute every candidate in full");

  auto* brute = app.add_subcommand("brute", "Exhaustive optimum for tiny instances");
  brute->add_option("N", n)->required();
  brute->add_option("k", k)->required();
  brute->add_option("s", s)->required();
  brute->add_option("--p", p);
  brute->add_option("--tol-cap", tol_cap);

  auto* ipc = app.add_subcommand("ip", "Emit the integer program");
  ipc->add_option("s", s)->required();
  ipc->add_option("k", k)->required();
  ipc->add_option("lambda", lambda)->required();
  ipc->add_option("--p", p);
  ipc->add_option("--eps", eps);
  ipc->add_option("--sym", sym, "none, semicyclic:M, klein or both:M");
  ipc->add_option("-o,--out", out, "LP file");
  ipc->add_option("--mps", mps, "Also write an MPS file");

  auto* ipv = app.add_subcommand("ip-verify", "Check a solver solution");
  ipv->add_option("s", s)->required();
  ipv->add_option("k", k)->required();
  ipv->add_option("lambda", lambda)->required();
  ipv->add_option("solution", solution)->required();
  ipv->add_option("--p", p);
  ipv->add_option("--eps", eps);
  ipv->add_option("--sym", sym);
  ipv->add_option("-o,--out", out, "Write the rebuilt array");

  auto* enc = app.add_subcommand("encode", "Compress an array into a symmetric encoding");
  enc->add_option("path", path)->required();
  enc->add_option("--kind", encoding, "bicyclic, semicyclic or klein")->required();
  enc->add_option("--param", r, "r for bicyclic, a for semicyclic");

  auto* exp = app.add_subcommand("expand", "Expand an encoding file into an array");
  exp->add_option("path", path)->required();

  auto* cat = app.add_subcommand("catalog", "Array catalog");
  cat->require_subcommand(1);
  auto* cat_add = cat->add_subcommand("add", "Add an array file");
  cat_add->add_option("dir", catalog_dir)->required();
  cat_add->add_option("path", path)->required();
  cat_add->add_option("--provenance", provenance, "construction, search, ip or imported")->required();
  cat_add->add_option("--config", config_text, "JSON object stored with the entry");
  auto* cat_list = cat->add_subcommand("list", "List entries");
  cat_list->add_option("dir", catalog_dir)->required();
  cat_list->add_option("--N", f_n);
  cat_list->add_option("--k", f_k);
  cat_list->add_option("--s", f_s);
  cat_list->add_option("--provenance", f_prov);
  auto* cat_re = cat->add_subcommand("recheck", "Recompute every stored metric");
  cat_re->add_option("dir", catalog_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*eval) return run_eval(path, t, ps, contrast, discrepancies, criteria);
    if (*cons) return run_construct(variant, s, ell, kappa, out);
    if (*srch) {
      search::SearchConfig cfg;
      cfg.p = p;
      cfg.radius = radius;
      cfg.seed = seed;
      cfg.encoding = search::parse_encoding(encoding);
      cfg.bicyclic_r = r;
      cfg.max_passes = max_passes;
      cfg.time_budget_s = budget;
      cfg.restarts = restarts;
      cfg.verify_incremental = verify_incremental;
      if (!tol_cap.empty()) cfg.tol_cap = Rational(std::stoll(tol_cap));
      if (log) cfg.log = &std::cerr;
      return run_search(n, k, s, cfg, out);
    }
    if (*brute) {
      std::optional<Rational> cap;
      if (!tol_cap.empty()) cap = Rational(std::stoll(tol_cap));
      const auto res = search::brute_force_optimum(n, k, s, p, cap);
      std::cout << "min_unb" << p << ": " << (res.feasible ? res.min_unbalance.str() : "infeasible") << "\n";
      std::cout << "min_tol: " << res.min_tolerance << "\n";
      std::cout << "states: " << res.states << "\n";
      if (!res.witnesses.empty()) std::cout << io::serialize_array(res.witnesses.front());
      return 0;
    }
    if (*ipc) return run_ip(make_instance(s, k, lambda, p, eps, sym), out, mps);
    if (*ipv) return run_ip_verify(make_instance(s, k, lambda, p, eps, sym), solution, out);
    if (*enc) {
      const auto a = io::read_array_file(path).array;
      std::cout << io::serialize_encoding(sym::compress(a, sym::parse_kind(encoding), r));
      return 0;
    }
    if (*exp) {
      std::cout << io::serialize_array(sym::expand(io::parse_encoding(io::read_text_file(path))));
      return 0;
    }
    if (*cat_add) {
      const auto a = io::read_array_file(path).array;
      const auto config = config_text.empty() ? nlohmann::json::object() : nlohmann::json::parse(config_text);
      std::cout << io::catalog_add(catalog_dir, a, provenance, config) << "\n";
      return 0;
    }
    if (*cat_list) {
      io::CatalogFilter f{f_n, f_k, f_s, f_prov.empty() ? std::nullopt : std::optional<std::string>(f_prov)};
      const auto listing = io::catalog_list(catalog_dir, f);
      for (const auto& e : listing.entries) print_entry(e);
      for (const auto& pr : listing.problems) std::cerr << "problem: " << pr.id << ": " << pr.message << "\n";
      return listing.problems.empty() ? 0 : kVerify;
    }
    if (*cat_re) {
      const auto problems = io::catalog_recheck(catalog_dir);
      for (const auto& pr : problems) std::cout << "MISMATCH " << pr.id << ": " << pr.message << "\n";
      if (problems.empty()) std::cout << "all entries consistent\n";
      return problems.empty() ? 0 : kVerify;
    }
  } catch (const io::FormatError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ip::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
