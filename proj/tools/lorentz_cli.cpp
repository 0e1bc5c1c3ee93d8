// Command-line front end: norms, rearrangements, transfer checks, Khintchine
// witnesses, Bernstein width curves, the growth demo and the inductive
// construction.  Exit codes: 0 ok, 2 usage, 3 validation, 4 construction
// failure, 5 I/O.

#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lorentz/construction.hpp"
#include "lorentz/norms.hpp"
#include "lorentz/rademacher.hpp"
#include "lorentz/report.hpp"
#include "lorentz/seq.hpp"
#include "lorentz/stepfun.hpp"
#include "lorentz/version.hpp"
#include "lorentz/widths.hpp"

namespace {

using namespace lorentz;
using nlohmann::ordered_json;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exponent flags accept "inf" (where legal) or a positive finite decimal.
double parse_exp(const std::string& text, const std::string& flag, bool allow_inf) {
  if (text == "inf") {
    if (!allow_inf) throw usage_error(flag + " cannot be inf");
    return kInf;
  }
  double v = 0;
  size_t pos = 0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != text.size())
    throw usage_error(flag + ": cannot parse '" + text + "' as an exponent");
  if (!(v > 0) || std::isinf(v) || std::isnan(v))
    throw usage_error(flag + " must be positive and finite, or 'inf'");
  return v;
}

Seq read_seq(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::ostringstream oss;
    oss << std::cin.rdbuf();
    text = oss.str();
  } else {
    text = read_file(path);
  }
  try {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_array()) throw std::runtime_error("expected a JSON array of numbers");
    return Seq(j.get<std::vector<double>>());
  } catch (const std::exception& ex) {
    throw io_error("invalid sequence input '" + path + "': " + ex.what());
  }
}

void emit(const std::string& out, const std::string& body) {
  if (out.empty())
    std::cout << body;
  else
    write_file(out, body);
}

std::string json_text(ordered_json j) {
  return j.dump(2) + "\n";
}

// Every JSON payload leads with the same version + config header that CSV
// outputs carry in their comment line.
ordered_json json_shell(const std::string& config) {
  ordered_json j;
  j["header"] = std::string("lorentz ") + kVersion + " | " + config;
  return j;
}

std::string svg_with_header(const std::string& config, const std::string& svg) {
  return "<!-- lorentz " + std::string(kVersion) + " | " + config + " -->\n" + svg;
}

std::vector<int> half_octave_counts(int n_max) {
  std::vector<int> counts;
  for (double v = 1.0; v < static_cast<double>(n_max); v *= std::sqrt(2.0)) {
    int c = static_cast<int>(std::lround(v));
    if (counts.empty() || c > counts.back()) counts.push_back(c);
  }
  if (counts.empty() || counts.back() != n_max) counts.push_back(n_max);
  return counts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lorentz: Lorentz sequence-space quasi-norm toolkit"};
  app.set_version_flag("--version", std::string("lorentz ") + kVersion);
  app.require_subcommand(1);

  // norm
  auto* c_norm = app.add_subcommand("norm", "quasi-norm of a JSON sequence");
  std::string norm_in, norm_p = "2", norm_q = "1";
  c_norm->add_option("input", norm_in, "JSON array file, or - for stdin")->required();
  c_norm->add_option("--p", norm_p, "primary exponent (finite, > 0)");
  c_norm->add_option("--q", norm_q, "secondary exponent (> 0 or 'inf')");

  // rearrange
  auto* c_re = app.add_subcommand("rearrange", "decreasing or support rearrangement");
  std::string re_in, re_out;
  bool re_support = false;
  c_re->add_option("input", re_in, "JSON array file, or - for stdin")->required();
  c_re->add_flag("--on-support", re_support, "place sorted moduli on the original support");
  c_re->add_option("--out", re_out, "output path (stdout if omitted)");

  // transfer-check
  auto* c_tc = app.add_subcommand("transfer-check",
                                  "sequence vs dyadic step function norm transfer");
  std::string tc_in, tc_p = "2", tc_q = "1", tc_out;
  int tc_level = -1;
  c_tc->add_option("input", tc_in, "JSON array file, or - for stdin")->required();
  c_tc->add_option("--p", tc_p, "primary exponent");
  c_tc->add_option("--q", tc_q, "secondary exponent (finite)");
  c_tc->add_option("--level", tc_level, "dyadic level n (default: smallest fitting)");
  c_tc->add_option("--out", tc_out, "output path (stdout if omitted)");

  // khintchine
  auto* c_kh = app.add_subcommand("khintchine", "empirical Khintchine constants");
  std::string kh_p = "2", kh_q = "1", kh_method = "exhaustive", kh_out;
  int kh_n = 8, kh_budget = 32;
  std::uint64_t kh_seed = 1;
  c_kh->add_option("--p", kh_p, "primary exponent");
  c_kh->add_option("--q", kh_q, "secondary exponent (> 0 or 'inf')");
  c_kh->add_option("--n", kh_n, "number of Rademacher functions")->check(CLI::Range(1, 22));
  c_kh->add_option("--method", kh_method, "exhaustive | search");
  c_kh->add_option("--seed", kh_seed, "search seed");
  c_kh->add_option("--budget", kh_budget, "search restarts");
  c_kh->add_option("--out", kh_out, "output path (stdout if omitted)");

  // bernstein
  auto* c_bn = app.add_subcommand("bernstein", "width lower bounds on Rademacher subspaces");
  std::string bn_p = "2", bn_q = "1", bn_r = "inf", bn_out, bn_svg, bn_format = "csv";
  OptimConfig bn_cfg;
  int bn_nmax = 8;
  c_bn->add_option("--p", bn_p, "primary exponent");
  c_bn->add_option("--q", bn_q, "source secondary exponent");
  c_bn->add_option("--r", bn_r, "target secondary exponent (q < r)");
  c_bn->add_option("--n-max", bn_nmax, "largest subspace dimension")->check(CLI::Range(1, 20));
  c_bn->add_option("--seed", bn_cfg.seed, "optimizer seed");
  c_bn->add_option("--restarts", bn_cfg.restarts, "optimizer restarts")->check(CLI::PositiveNumber);
  c_bn->add_option("--format", bn_format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  c_bn->add_option("--out", bn_out, "output path (stdout if omitted)");
  c_bn->add_option("--svg", bn_svg, "also write an SVG chart here");

  // demo-growth
  auto* c_dg = app.add_subcommand("demo-growth",
                                  "partial-sum growth of the block construction");
  std::string dg_p = "2", dg_q = "1", dg_r = "2", dg_out, dg_svg, dg_format = "csv";
  int dg_nmax = 4096, dg_fitmin = 16;
  Index dg_firstlen = 65536;
  double dg_rho = 1.00114;
  c_dg->add_option("--p", dg_p, "primary exponent");
  c_dg->add_option("--q", dg_q, "source secondary exponent (finite)");
  c_dg->add_option("--r", dg_r, "target secondary exponent (q < r)");
  c_dg->add_option("--N-max", dg_nmax, "number of stages")->check(CLI::Range(1, kStageCap));
  c_dg->add_option("--first-len", dg_firstlen, "width of the first block");
  c_dg->add_option("--rho", dg_rho, "geometric block-width growth factor");
  c_dg->add_option("--fit-min", dg_fitmin, "smallest N in the fit window");
  c_dg->add_option("--format", dg_format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  c_dg->add_option("--out", dg_out, "output path (stdout if omitted)");
  c_dg->add_option("--svg", dg_svg, "also write an SVG chart here");

  // construct
  auto* c_cn = app.add_subcommand("construct", "inductive gliding-hump construction");
  std::string cn_p = "1", cn_q = "2", cn_mode = "planned", cn_out, cn_replay;
  int cn_N = 8;
  double cn_delta = 0, cn_headroom = 6.0;
  c_cn->add_option("--p", cn_p, "primary exponent");
  c_cn->add_option("--q", cn_q, "secondary exponent (finite)");
  c_cn->add_option("--N", cn_N, "stages to build")->check(CLI::Range(1, kStageCap));
  c_cn->add_option("--delta", cn_delta, "tail budget, 0 < delta < 1/T (default 1/(4T))");
  c_cn->add_option("--mode", cn_mode, "planned | dyadic | demo")
      ->check(CLI::IsMember({"planned", "dyadic", "demo"}));
  c_cn->add_option("--headroom", cn_headroom, "planned-mode envelope headroom (> 1)");
  c_cn->add_option("--out", cn_out, "write the state JSON here");
  c_cn->add_option("--replay", cn_replay, "verify a previously saved state instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*c_norm) {
      Exponents e(parse_exp(norm_p, "--p", false), parse_exp(norm_q, "--q", true));
      std::cout << format_g15(quasi_norm(read_seq(norm_in), e)) << "\n";
    } else if (*c_re) {
      Seq s = read_seq(re_in);
      Seq r = re_support ? rearrange_on_support(s) : rearrange(s);
      ordered_json arr = std::vector<double>(r.values().data(),
                                             r.values().data() + r.values().size());
      emit(re_out, arr.dump() + "\n");
    } else if (*c_tc) {
      Exponents e(parse_exp(tc_p, "--p", false), parse_exp(tc_q, "--q", false));
      Seq a = read_seq(tc_in);
      int level = tc_level;
      if (level < 0) {
        level = 0;
        while ((Index(1) << level) < a.length()) ++level;
      }
      std::ostringstream conf;
      conf << "transfer-check p=" << format_g15(e.p) << " q=" << format_g15(e.q)
           << " level=" << level;
      ordered_json j = json_shell(conf.str());
      j["level"] = level;
      j["report"] = to_json_obj(transfer_check(a, level, e));
      emit(tc_out, json_text(std::move(j)));
    } else if (*c_kh) {
      double p = parse_exp(kh_p, "--p", false), q = parse_exp(kh_q, "--q", true);
      KhMethod method;
      if (kh_method == "exhaustive" || kh_method == "exhaustive_signs")
        method = KhMethod::exhaustive_signs;
      else if (kh_method == "search" || kh_method == "seeded_search")
        method = KhMethod::seeded_search;
      else
        throw usage_error("--method must be 'exhaustive' or 'search'");
      KhintchineEstimate est = khintchine_estimate(p, q, kh_n, method, kh_seed, kh_budget);
      std::ostringstream conf;
      conf << "khintchine p=" << format_g15(p) << " q=" << format_exponent(q)
           << " n=" << kh_n << " method=" << kh_method << " seed=" << kh_seed
           << " budget=" << kh_budget;
      ordered_json j = json_shell(conf.str());
      j["estimate"] = to_json_obj(est);
      emit(kh_out, json_text(std::move(j)));
    } else if (*c_bn) {
      double p = parse_exp(bn_p, "--p", false), q = parse_exp(bn_q, "--q", true);
      double r = parse_exp(bn_r, "--r", true);
      if (!(q < r)) throw usage_error("bernstein requires q < r");
      BernsteinCurve curve = bernstein_lower_curve(bn_nmax, p, q, r, bn_cfg);
      std::string config = bernstein_config(p, q, r, bn_nmax, bn_cfg);
      if (bn_format == "csv") {
        emit(bn_out, bernstein_csv(curve, p, q, r, bn_cfg));
      } else {
        ordered_json j = json_shell(config);
        j["curve"] = to_json_obj(curve);
        emit(bn_out, json_text(std::move(j)));
      }
      if (!bn_svg.empty()) {
        SvgSeries vals{"width lower bound", {}, {}}, alpha{"alpha bound", {}, {}};
        for (const WidthReport& w : curve.reports) {
          vals.x.push_back(w.n);
          vals.y.push_back(w.value);
          alpha.x.push_back(w.n);
          alpha.y.push_back(w.alpha_bound);
        }
        write_file(bn_svg, svg_with_header(config,
                                           svg_line_chart("Bernstein width lower bounds", "n",
                                                          "ratio", {vals, alpha})));
      }
    } else if (*c_dg) {
      double p = parse_exp(dg_p, "--p", false), q = parse_exp(dg_q, "--q", false);
      double r = parse_exp(dg_r, "--r", true);
      if (!(q < r)) throw usage_error("demo-growth requires q < r");
      Exponents e(p, q);
      BlockSubspaceSpec spec = BlockSubspaceSpec::demo_blocks(dg_firstlen, dg_rho, dg_nmax);
      ConstructionState st = build_block_demo(spec, e, dg_nmax);
      GrowthCurve curve = growth_curve(st, r, half_octave_counts(dg_nmax), dg_fitmin);
      std::string config = growth_config(p, q, r);
      if (dg_format == "csv") {
        emit(dg_out, growth_csv(curve, p, q));
      } else {
        ordered_json j = json_shell(config);
        j["curve"] = to_json_obj(curve);
        emit(dg_out, json_text(std::move(j)));
      }
      if (curve.fit.points >= 2)
        std::cerr << "fit: a=" << format_g15(curve.fit.a) << " b=" << format_g15(curve.fit.b)
                  << " r2=" << format_g15(curve.fit.r2) << " points=" << curve.fit.points
                  << "\n";
      if (!dg_svg.empty()) {
        SvgSeries spq{"norm (p,q)", {}, {}}, spr{"norm (p,r)", {}, {}};
        for (const GrowthRow& row : curve.rows) {
          spq.x.push_back(row.count);
          spq.y.push_back(row.norm_pq);
          spr.x.push_back(row.count);
          spr.y.push_back(row.norm_pr);
        }
        write_file(dg_svg, svg_with_header(config,
                                           svg_line_chart("Partial-sum growth", "N", "norm",
                                                          {spq, spr}, true)));
      }
    } else if (*c_cn) {
      ConstructionState st;
      if (!cn_replay.empty()) {
        try {
          st = state_from_json(read_file(cn_replay));
        } catch (const io_error&) {
          throw;
        } catch (const std::exception& ex) {
          throw io_error("invalid state file '" + cn_replay + "': " + ex.what());
        }
      } else {
        Exponents e(parse_exp(cn_p, "--p", false), parse_exp(cn_q, "--q", false));
        double T = quasi_triangle_constant(e).value;
        double delta = cn_delta > 0 ? cn_delta : 1.0 / (4.0 * T);
        if (cn_mode == "planned") {
          PlannedInputs plan = plan_construction_inputs(e, cn_N, delta, cn_headroom);
          st = build_construction(plan.spec, e, cn_N, delta, plan.atilde);
        } else if (cn_mode == "dyadic") {
          st = build_construction(BlockSubspaceSpec::dyadic_blocks(), e, cn_N, delta,
                                  AtildeSpec::geometric(e));
        } else {
          st = build_block_demo(BlockSubspaceSpec::demo_blocks(), e, cn_N);
        }
      }
      std::vector<CheckResult> checks = verify_construction(st);
      int failed = 0;
      for (const CheckResult& c : checks)
        if (!c.ok) {
          ++failed;
          std::cerr << "FAIL " << c.condition << " k=" << c.k
                    << " lhs=" << format_g15(c.lhs) << " rhs=" << format_g15(c.rhs) << "\n";
        }
      std::cout << "stages=" << st.stage_count() << " n_N=" << st.n(st.stage_count())
                << " checks=" << (checks.size() - failed) << "/" << checks.size() << " ok\n";
      if (!cn_out.empty()) write_file(cn_out, to_json(st) + "\n");
      if (failed > 0)
        throw construction_error("verification", std::to_string(failed) +
                                                     " construction checks failed");
    }
  } catch (const usage_error& ex) {
    std::cerr << "usage error: " << ex.what() << "\n";
    return 2;
  } catch (const construction_error& ex) {
    std::cerr << "construction failure [" << ex.condition << "]: " << ex.what() << "\n";
    return 4;
  } catch (const io_error& ex) {
    std::cerr << "io error: " << ex.what() << "\n";
    return 5;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 3;
  }
  return 0;
}
