// Command-line driver: classification, identity checks, element tables,
// convention calibration, and cross-field interpolation, with optional
// persistent structure-constant caching.
//
// Exit codes: 0 success / all checks pass, 1 check failure, 2 usage or
// parse error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef KRON_HAVE_OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "kron/expr.hpp"
#include "kron/json_io.hpp"
#include "kron/verify.hpp"

using namespace kron;

namespace {

constexpr int kHardDimCeiling = 10;
const std::vector<int> kSupportedQ = {2, 3, 5, 7, 11};

std::vector<int> parse_q_list(const std::string& csv) {
  std::vector<int> qs;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    int q = 0;
    try {
      q = std::stoi(tok);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--q", "not an integer: " + tok);
    }
    bool ok = false;
    for (int s : kSupportedQ) ok |= s == q;
    if (!ok)
      throw CLI::ValidationError(
          "--q", "unsupported field size " + tok + " (use 2,3,5,7,11)");
    qs.push_back(q);
  }
  if (qs.empty()) throw CLI::ValidationError("--q", "empty field list");
  return qs;
}

TwistConvention convention_from_string(const std::string& s) {
  if (s.empty() || s == "calibrated") return TwistConvention::calibrated();
  if (s == "perturbed") return perturbed_convention();
  throw CLI::ValidationError("--convention",
                             "expected 'calibrated' or 'perturbed'");
}

void apply_jobs(int jobs) {
  if (jobs <= 0) return;
#ifdef KRON_HAVE_OPENMP
  omp_set_num_threads(jobs);
#else
  if (jobs > 1)
    std::cerr << "note: built without OpenMP; --jobs has no effect\n";
#endif
}

std::string hex_hash(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

void print_reports(const std::vector<CheckReport>& reports,
                   const std::string& format) {
  if (format == "json") {
    Json arr = Json::array();
    for (const CheckReport& r : reports) arr.push_back(check_report_to_json(r));
    std::cout << arr.dump(2) << "\n";
  } else {
    for (const CheckReport& r : reports) std::cout << r.to_string() << "\n";
  }
}

bool all_pass(const std::vector<CheckReport>& reports) {
  for (const CheckReport& r : reports)
    if (!r.pass) return false;
  return true;
}

struct CheckParams {
  std::optional<int> i, n, N, k, l, r, s, m;
  std::optional<std::string> lambda;
};

Partition parse_partition(const std::string& csv) {
  Partition p;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) p.push_back(std::stoi(tok));
  for (size_t i = 1; i < p.size(); ++i)
    if (p[i] > p[i - 1])
      throw CLI::ValidationError("--lambda",
                                 "partition parts must be weakly decreasing");
  if (p.empty() || p[0] <= 0)
    throw CLI::ValidationError("--lambda", "expected a nonempty partition");
  return p;
}

CheckReport dispatch_one(VerifyContext& ctx, const std::string& id, int q,
                         const CheckParams& p) {
  if (id == "serre") return check_serre(ctx, p.i.value_or(0), q);
  if (id == "rho-recursion")
    return check_rho_recursion(ctx, p.n.value_or(2), q);
  if (id == "generating-series")
    return check_generating_series(ctx, p.N.value_or(p.n.value_or(2)), q);
  if (id == "cross-commutator")
    return check_cross_commutator(ctx, p.k.value_or(1), p.l.value_or(1), q);
  if (id == "straightening")
    return check_straightening(ctx, p.r.value_or(1), p.s.value_or(1), q);
  if (id.rfind("drinfeld-", 0) == 0 && id.size() == 10) {
    int rel = id[9] - '0';
    int a = 0, b = 0;
    switch (rel) {
      case 1: a = p.s.value_or(1), b = p.r.value_or(0); break;
      case 2: a = p.s.value_or(1), b = p.r.value_or(1); break;
      case 3: a = p.r.value_or(0), b = p.s.value_or(0); break;
      case 4: a = p.r.value_or(1), b = p.s.value_or(1); break;
      case 5: a = p.r.value_or(0), b = p.s.value_or(1); break;
      default:
        throw CLI::ValidationError("--suite", "unknown suite id: " + id);
    }
    return check_drinfeld(ctx, rel, a, b, q);
  }
  if (id == "q-number-identity")
    return check_q_number_identity(p.m.value_or(3), q);
  if (id == "kostka")
    return check_kostka(
        ctx, p.lambda ? parse_partition(*p.lambda) : Partition{1, 1}, q);
  if (id == "rho-coproduct") return check_rho_coproduct(ctx, p.k.value_or(2), q);
  if (id == "regular-projection")
    return check_regular_projection(ctx, p.n.value_or(2), q);
  if (id == "regular-expressibility")
    return check_regular_expressibility(ctx, p.n.value_or(2), q);
  if (id == "transpose-invariance")
    return check_transpose_invariance(p.k.value_or(2), q);
  if (id == "line-submodule-count")
    return check_line_submodule_count(p.n.value_or(2), q);
  throw CLI::ValidationError(
      "--suite", "suite id '" + id + "' does not take point parameters");
}

MatrixFq matrix_from_json(int q, const Json& rows, const char* name) {
  if (!rows.is_array() || rows.empty())
    throw std::invalid_argument(std::string(name) +
                                ": expected a nonempty array of rows");
  std::vector<std::vector<int>> m;
  size_t width = 0;
  for (const Json& row : rows) {
    if (!row.is_array() || (width && row.size() != width))
      throw std::invalid_argument(std::string(name) +
                                  ": rows must be arrays of equal length");
    width = row.size();
    std::vector<int> r;
    for (const Json& v : row) {
      if (!v.is_number_integer())
        throw std::invalid_argument(std::string(name) +
                                    ": entries must be integers");
      long long x = v.get<long long>() % q;
      if (x < 0) x += q;
      r.push_back(int(x));
    }
    if (r.empty())
      throw std::invalid_argument(std::string(name) + ": empty row");
    m.push_back(std::move(r));
  }
  return MatrixFq::from_rows(q, m);
}

int cmd_classify(const std::string& file, int max_dim,
                 const std::string& format) {
  Json input;
  if (file == "-") {
    input = Json::parse(std::cin);
  } else {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("cannot open " + file);
    input = Json::parse(in);
  }
  int q = input.at("q").get<int>();
  bool supported = false;
  for (int s : kSupportedQ) supported |= s == q;
  if (!supported)
    throw std::invalid_argument("unsupported field size " +
                                std::to_string(q));
  MatrixFq x1 = matrix_from_json(q, input.at("x1"), "x1");
  MatrixFq x2 = matrix_from_json(q, input.at("x2"), "x2");
  if (x1.rows() != x2.rows() || x1.cols() != x2.cols())
    throw std::invalid_argument("x1 and x2 must have the same shape");
  int d1 = x1.rows(), d0 = x1.cols();
  if (d0 + d1 > max_dim)
    throw std::invalid_argument("total dimension " + std::to_string(d0 + d1) +
                                " exceeds --max-dim " +
                                std::to_string(max_dim));
  Rep rep{q, d0, d1, x1, x2};
  ClassTable table(q, d0, d1);
  const IsoClass& c = table.classify(rep);
  Json out;
  out["q"] = q;
  out["dim"] = {d0, d1};
  out["class"] = iso_class_to_json(c);
  out["class_string"] = c.to_string();
  if (format == "table")
    std::cout << c.to_string() << "\n";
  else
    std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_check(const std::string& suite, const std::vector<int>& qs, bool full,
              const TwistConvention& conv, const std::string& cache_dir,
              int max_dim, const std::string& format, const CheckParams& p,
              bool has_params) {
  std::vector<std::string> ids = suite_check_ids();
  std::string id = suite == "relation" ? "rho-recursion" : suite;
  if (id != "all" &&
      std::find(ids.begin(), ids.end(), id) == ids.end())
    throw CLI::ValidationError("--suite", "unknown suite id: " + suite);

  VerifyContext ctx(conv, cache_dir);
  if (max_dim > 0)
    for (int q : qs) ctx.reserve(q, max_dim, max_dim);
  std::vector<CheckReport> reports;
  if (id == "all") {
    SuiteOptions opt;
    opt.qs = qs;
    opt.full = full;
    reports = run_suite(ctx, opt);
  } else if (has_params) {
    for (int q : qs) reports.push_back(dispatch_one(ctx, id, q, p));
  } else {
    SuiteOptions opt;
    opt.qs = qs;
    opt.full = full;
    for (CheckReport& r : run_suite(ctx, opt))
      if (r.id == id) reports.push_back(std::move(r));
  }
  print_reports(reports, format);
  return all_pass(reports) ? 0 : 1;
}

int cmd_table(const std::string& expr, int q, const TwistConvention& conv,
              const std::string& cache_dir, int max_dim,
              const std::string& format) {
  VerifyContext ctx(conv, cache_dir);
  if (max_dim > 0) ctx.reserve(q, max_dim, max_dim);
  HallElem f = parse_element(expr, ctx.named(q));
  if (format == "table") {
    for (auto& [cls, v] : f)
      std::cout << v.to_string() << "\t" << cls.to_string() << "\n";
    if (f.empty()) std::cout << "0\n";
    return 0;
  }
  Json out;
  out["expr"] = expr;
  out["q"] = q;
  out["convention"] = hex_hash(conv.hash());
  Json terms = Json::array();
  for (auto& [cls, v] : f) {
    Json t;
    t["class"] = iso_class_to_json(cls);
    t["class_string"] = cls.to_string();
    t["coeff"] = qeps_to_string_exact(v);
    t["display"] = v.to_string();
    terms.push_back(std::move(t));
  }
  out["terms"] = std::move(terms);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_calibrate(const std::vector<int>& qs, int bound,
                  const std::string& format) {
  try {
    CalibrationOutcome outcome = calibrate(qs, bound);
    if (format == "table") {
      std::cout << outcome.report << "\n";
      for (const TwistConvention& c : outcome.survivors)
        std::cout << "survivor " << hex_hash(c.hash()) << ": "
                  << c.canonical_string() << "\n";
      return 0;
    }
    Json out;
    out["survivors"] = Json::array();
    for (const TwistConvention& c : outcome.survivors) {
      Json s;
      s["convention"] = hex_hash(c.hash());
      s["description"] = c.canonical_string();
      out["survivors"].push_back(std::move(s));
    }
    out["full_stratum_exponents"] = outcome.full_stratum_exponents;
    out["commutator_scalar_exponent"] = outcome.commutator_scalar_exponent;
    out["report"] = outcome.report;
    std::cout << out.dump(2) << "\n";
    return 0;
  } catch (const NoConventionFound& e) {
    std::cerr << "calibration failed: " << e.what() << "\n";
    return 1;
  }
}

int cmd_interpolate(const std::string& expr, const std::vector<int>& qs,
                    int degree, bool require_integral,
                    const TwistConvention& conv, const std::string& cache_dir,
                    int max_dim, const std::string& format) {
  VerifyContext ctx(conv, cache_dir);
  if (max_dim > 0)
    for (int q : qs) ctx.reserve(q, max_dim, max_dim);
  auto builder = [&expr](NamedElements& el) {
    return parse_element(expr, el);
  };
  InterpolationReport ir = interpolate_constants(ctx, builder, qs, degree);
  bool ok = ir.ok;
  if (ok && require_integral)
    for (auto& [lab, fit] : ir.fits) {
      (void)lab;
      ok &= fit.integral();
    }
  if (format == "table") {
    if (!ir.ok) {
      std::cout << "failure: " << ir.error << "\n";
    } else {
      for (auto& [lab, fit] : ir.fits)
        std::cout << lab.to_string() << "\t" << fit.to_string()
                  << (fit.integral() ? "" : "\t(non-integral)") << "\n";
    }
    return ok ? 0 : 1;
  }
  Json out;
  out["expr"] = expr;
  out["qs"] = qs;
  out["degree_bound"] = degree;
  out["ok"] = ok;
  if (!ir.ok) out["error"] = ir.error;
  Json fits = Json::object();
  for (auto& [lab, fit] : ir.fits) {
    Json f;
    f["laurent"] = fit.to_string();
    f["integral"] = fit.integral();
    fits[lab.to_string()] = std::move(f);
  }
  out["fits"] = std::move(fits);
  std::cout << out.dump(2) << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "kronhall: exact twisted Hall algebra of the double-arrow quiver over "
      "small finite fields"};
  app.require_subcommand(1);
  int rc = 0;

  std::string q_csv = "2,3";
  std::string convention = "calibrated";
  std::string cache_dir;
  std::string format = "table";
  int max_dim = 5;
  int jobs = 0;

  auto add_common = [&](CLI::App* sub, bool with_conv = true,
                        bool with_q = true) {
    if (with_q)
      sub->add_option("--q", q_csv, "comma-separated field sizes")
          ->capture_default_str();
    sub->add_option("--max-dim", max_dim,
                    "dimension box bound per vertex (ceiling 10)")
        ->check(CLI::Range(1, kHardDimCeiling))
        ->capture_default_str();
    if (with_conv)
      sub->add_option("--convention", convention,
                      "'calibrated' or 'perturbed'")
          ->capture_default_str();
    sub->add_option("--cache-dir", cache_dir,
                    "directory for persistent structure-constant cache");
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "table"}))
        ->capture_default_str();
    sub->add_option("--jobs", jobs, "kernel parallelism width (OpenMP)");
  };

  // classify
  std::string classify_file;
  CLI::App* classify =
      app.add_subcommand("classify", "classify a representation from JSON "
                                     "{\"q\",\"x1\",\"x2\"} (file or '-')");
  classify->add_option("file", classify_file, "input JSON path or '-'")
      ->required();
  add_common(classify, false);
  classify->callback([&] {
    apply_jobs(jobs);
    int cap = classify->count("--max-dim") ? max_dim : kHardDimCeiling;
    rc = cmd_classify(classify_file, cap, format);
  });

  // check
  std::string suite_pos, suite_flag;
  bool full = false;
  CheckParams params;
  CLI::App* check = app.add_subcommand(
      "check", "run identity checks; suite id or 'all' (see --list)");
  check->add_option("suite_id", suite_pos, "suite id or 'all'");
  check->add_option("--suite", suite_flag, "suite id or 'all'");
  check->add_flag("--full", full, "full parameter grid instead of the quick one");
  bool list_ids = false;
  check->add_flag("--list", list_ids, "print available suite ids and exit");
  check->add_option("--i", params.i, "vertex index (serre)");
  check->add_option("--n", params.n, "degree parameter");
  check->add_option("--N", params.N, "series truncation order");
  check->add_option("--k", params.k, "first index");
  check->add_option("--l", params.l, "second index");
  check->add_option("--r", params.r, "first Drinfeld/straightening index");
  check->add_option("--s", params.s, "second Drinfeld/straightening index");
  check->add_option("--m", params.m, "q-number identity order");
  check->add_option("--lambda", params.lambda, "partition, e.g. 2,1");
  add_common(check);
  check->callback([&] {
    apply_jobs(jobs);
    if (list_ids) {
      for (const std::string& id : suite_check_ids()) std::cout << id << "\n";
      rc = 0;
      return;
    }
    std::string suite =
        !suite_flag.empty() ? suite_flag : (!suite_pos.empty() ? suite_pos : "");
    if (suite.empty())
      throw CLI::ValidationError("--suite", "missing suite id (or 'all')");
    bool has_params = params.i || params.n || params.N || params.k ||
                      params.l || params.r || params.s || params.m ||
                      params.lambda;
    rc = cmd_check(suite, parse_q_list(q_csv), full,
                   convention_from_string(convention), cache_dir,
                   check->count("--max-dim") ? max_dim : 0, format, params,
                   has_params);
  });

  // table
  std::string table_expr;
  int table_q = 2;
  CLI::App* table =
      app.add_subcommand("table", "evaluate an element expression and print "
                                   "its class/coefficient table");
  table->add_option("expr", table_expr, "element expression, e.g. 'mu1*mu0'")
      ->required();
  table->add_option("--q", table_q, "field size")
      ->check(CLI::IsMember(kSupportedQ))
      ->capture_default_str();
  add_common(table, true, false);
  table->callback([&] {
    apply_jobs(jobs);
    rc = cmd_table(table_expr, table_q, convention_from_string(convention),
                   cache_dir, table->count("--max-dim") ? max_dim : 0, format);
  });

  // calibrate
  int bound = 3;
  CLI::App* cal = app.add_subcommand(
      "calibrate", "scan factor orders and twist arrays against the anchor "
                   "identities");
  cal->add_option("--bound", bound, "twist entry bound")
      ->check(CLI::Range(1, 4))
      ->capture_default_str();
  add_common(cal, false);
  cal->callback([&] {
    apply_jobs(jobs);
    rc = cmd_calibrate(parse_q_list(q_csv), bound, format);
  });

  // interpolate
  std::string interp_expr;
  std::string interp_q_csv = "2,3,5,7";
  int degree = 2;
  bool require_integral = false;
  CLI::App* interp = app.add_subcommand(
      "interpolate", "fit exact Laurent polynomials in v = eps across fields");
  interp->add_option("expr", interp_expr, "element expression")->required();
  interp->add_option("--q", interp_q_csv, "comma-separated field sizes")
      ->capture_default_str();
  interp->add_option("--degree", degree, "per-parity degree bound")
      ->check(CLI::Range(0, 6))
      ->capture_default_str();
  interp->add_flag("--require-integral", require_integral,
                   "fail unless every fitted coefficient is an integer");
  add_common(interp, true, false);
  interp->callback([&] {
    apply_jobs(jobs);
    rc = cmd_interpolate(interp_expr, parse_q_list(interp_q_csv), degree,
                         require_integral, convention_from_string(convention),
                         cache_dir, interp->count("--max-dim") ? max_dim : 0,
                         format);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
