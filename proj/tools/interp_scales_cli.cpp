#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "interp_scales/interp_scales.hpp"
#include "interp_scales/io.hpp"

namespace is = interp_scales;
using is::Json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

// Raised while turning flags into library objects; maps to the usage exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

template <class F>
auto usage_guard(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const is::Error& e) {
    throw UsageError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(e.what());
  }
}

struct Output {
  std::string path;

  void write(const std::string& text) const {
    if (path.empty() || path == "-") {
      std::cout << text;
      return;
    }
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
  }
  void write(const Json& j) const { write(j.dump(2) + "\n"); }
};

struct SequenceInput {
  std::string file;
  std::string values;

  [[nodiscard]] is::DecreasingSequence load() const {
    return usage_guard([&] {
      if (file.empty() == values.empty()) throw is::InvalidInput("give exactly one of --seq or --values");
      const std::string text = file.empty() ? values : is::read_text_file(file);
      const auto raw = is::parse_sequence_text(text);
      if (raw.empty()) throw is::InvalidInput("empty sequence");
      return is::decreasing_rearrangement(raw);
    });
  }
};

void add_sequence_flags(CLI::App* cmd, SequenceInput& in) {
  cmd->add_option("--seq", in.file, "sequence file (JSON array or whitespace/comma separated numbers)");
  cmd->add_option("--values", in.values, "inline sequence, e.g. 1,0.5,0.25");
}

// Defaults shared by every verification subcommand.
struct VerifyFlags {
  std::size_t samples = 100;
  std::size_t n = 256;
  std::uint64_t seed = 42;
  std::string profiles = "geometric,polynomial";
  double spread_max = 16.0;
  double stability_tol = 0.2;
  bool gate_rank = false;
  unsigned threads = 0;
  double window = 30.0;
  std::size_t panels = 4096;
  std::string out;
};

void add_verify_flags(CLI::App* cmd, VerifyFlags& f) {
  cmd->add_option("--samples", f.samples, "number of samples")->capture_default_str();
  cmd->add_option("--n", f.n, "truncation length N (N2 = 2N)")->capture_default_str();
  cmd->add_option("--seed", f.seed, "batch seed")->capture_default_str();
  cmd->add_option("--profiles", f.profiles, "decay profiles, cycled: geometric,polynomial,mixed,plateau")
      ->capture_default_str();
  cmd->add_option("--spread-max", f.spread_max, "largest accepted ratio spread")->capture_default_str();
  cmd->add_option("--stability", f.stability_tol, "largest accepted relative spread change N -> 2N")
      ->capture_default_str();
  cmd->add_flag("--gate-rank-correlation", f.gate_rank, "fail on |rank correlation| >= 0.8 instead of warning");
  cmd->add_option("--threads", f.threads, "worker threads (0: INTERP_SCALES_THREADS or hardware)");
  cmd->add_option("--window", f.window, "initial quadrature half-window, log2 units")->capture_default_str();
  cmd->add_option("--panels", f.panels, "panels across the initial window")->capture_default_str();
  cmd->add_option("--out", f.out, "write the JSON report here instead of stdout");
}

std::vector<is::DecayProfile> parse_profiles(const std::string& list) {
  std::vector<is::DecayProfile> out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "geometric") out.push_back(is::DecayProfile::geometric());
    else if (tok == "polynomial") out.push_back(is::DecayProfile::polynomial());
    else if (tok == "mixed") out.push_back(is::DecayProfile::mixed());
    else if (tok == "plateau") out.push_back(is::DecayProfile::plateau());
    else throw UsageError("unknown decay profile '" + tok + "'");
  }
  if (out.empty()) throw UsageError("no decay profile given");
  return out;
}

struct VerifySetup {
  is::SampleSpec spec;
  is::VerifyOptions opt;
  Json config;
};

VerifySetup make_verify_setup(const VerifyFlags& f) {
  VerifySetup s;
  s.spec.count = f.samples;
  s.spec.n = f.n;
  s.spec.seed = f.seed;
  s.spec.profiles = parse_profiles(f.profiles);
  usage_guard([&] {
    s.spec.validate();
    return 0;
  });
  s.opt.spread_max = f.spread_max;
  s.opt.stability_tol = f.stability_tol;
  s.opt.gate_rank_correlation = f.gate_rank;
  s.opt.threads = f.threads;
  s.opt.quadrature.half_window_log2 = f.window;
  s.opt.quadrature.panels = f.panels;
  s.config = Json{{"samples", f.samples},
                  {"N", f.n},
                  {"seed", f.seed},
                  {"profiles", f.profiles},
                  {"spread_max", f.spread_max},
                  {"stability", f.stability_tol},
                  {"gate_rank_correlation", f.gate_rank},
                  {"quadrature",
                   {{"half_window_log2", f.window},
                    {"panels", f.panels},
                    {"max_half_window_log2", s.opt.quadrature.max_half_window_log2},
                    {"tail_rel_tol", s.opt.quadrature.tail_rel_tol}}},
                  {"dilation_grid", {{"lo", 1e-6}, {"hi", 1e6}, {"points", 2001}}}};
  return s;
}

/// Emits a report and returns the exit code.
int emit_report(Json report, const Json& config, const std::string& out) {
  report["config"] = config;
  report["timestamp"] = utc_timestamp();
  Output{out}.write(report);
  return report.value("pass", false) ? kExitPass : kExitFail;
}

int emit_precheck_failure(const std::string& theorem, const std::string& what, const Json& config,
                          const std::string& out) {
  Json j;
  j["theorem"] = theorem;
  j["pass"] = false;
  j["precheck_failure"] = what;
  return emit_report(j, config, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpolation of approximation spaces: norms, K-functionals, Boyd indices, reiteration checks"};
  app.require_subcommand(1);

  // norm -----------------------------------------------------------------------
  SequenceInput norm_in;
  std::string norm_matrix, norm_space, norm_out;
  auto* norm = app.add_subcommand("norm", "evaluate a sequence-space quasi-norm on a sequence or a matrix's singular values");
  add_sequence_flags(norm, norm_in);
  norm->add_option("--matrix", norm_matrix, "matrix JSON file; the norm is taken of its approximation numbers");
  norm->add_option("--space", norm_space, "lp:<p> | lm:<q>:<function> | phi:<snf>")->required();
  norm->add_option("--out", norm_out, "output path");

  // kcurve ---------------------------------------------------------------------
  SequenceInput kc_in;
  std::string kc_e0 = "lp:1", kc_e1 = "lp:inf", kc_method = "truncation", kc_out;
  double kc_tmin = std::exp2(-10.0), kc_tmax = std::exp2(10.0);
  std::size_t kc_points = 41;
  auto* kcurve = app.add_subcommand("kcurve", "emit K(t, x) as CSV (t,K,method)");
  add_sequence_flags(kcurve, kc_in);
  kcurve->add_option("--e0", kc_e0, "first space of the couple")->capture_default_str();
  kcurve->add_option("--e1", kc_e1, "second space of the couple")->capture_default_str();
  kcurve->add_option("--method", kc_method, "exact | truncation | convex")->capture_default_str();
  kcurve->add_option("--tmin", kc_tmin, "smallest t")->capture_default_str();
  kcurve->add_option("--tmax", kc_tmax, "largest t")->capture_default_str();
  kcurve->add_option("--points", kc_points, "log-uniform grid size")->capture_default_str();
  kcurve->add_option("--out", kc_out, "output path");

  // interpnorm -----------------------------------------------------------------
  SequenceInput in_in;
  std::string in_e0 = "lp:1", in_e1 = "lp:inf", in_phi, in_method = "truncation", in_out;
  std::string in_q = "2";
  auto* interp = app.add_subcommand("interpnorm", "interpolation quasi-norm of a sequence, JSON {value, tail_bound, panels}");
  add_sequence_flags(interp, in_in);
  interp->add_option("--e0", in_e0, "first space of the couple")->capture_default_str();
  interp->add_option("--e1", in_e1, "second space of the couple")->capture_default_str();
  interp->add_option("--phi", in_phi, "parameter function")->required();
  interp->add_option("--q", in_q, "exponent, number or inf")->capture_default_str();
  interp->add_option("--method", in_method, "K method: exact | truncation | convex")->capture_default_str();
  interp->add_option("--out", in_out, "output path");

  // boyd -----------------------------------------------------------------------
  std::string boyd_fn, boyd_out;
  std::vector<double> boyd_t{0.25, 4.0};
  auto* boyd = app.add_subcommand("boyd", "dilation function and Boyd-index report");
  boyd->add_option("--fn", boyd_fn, "function spec")->required();
  boyd->add_option("--t", boyd_t, "dilation probe points")->capture_default_str();
  boyd->add_option("--out", boyd_out, "output path");

  // weights validate -----------------------------------------------------------
  auto* weights = app.add_subcommand("weights", "weight-sequence tools");
  weights->require_subcommand(1);
  std::optional<double> w_a;
  std::string w_file, w_out;
  std::size_t w_n = 4096;
  auto* wval = weights->add_subcommand("validate", "weight-sequence property report");
  wval->add_option("--a", w_a, "use the weights n^-a");
  wval->add_option("--seq", w_file, "weights from a file instead");
  wval->add_option("--n", w_n, "stored length for --a")->capture_default_str();
  wval->add_option("--out", w_out, "output path");

  // verify ---------------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "reiteration and embedding checks");
  verify->require_subcommand(1);

  VerifyFlags f13;
  std::string t13_phi;
  std::string t13_p0 = "1", t13_p1 = "inf", t13_q = "2";
  auto* thm13 = verify->add_subcommand("thm13", "(G_p0, G_p1)_{rho,q} against G_{phi,q}");
  thm13->add_option("--phi", t13_phi, "function spec")->required();
  thm13->add_option("--p0", t13_p0, "p0")->capture_default_str();
  thm13->add_option("--p1", t13_p1, "p1 (number or inf)")->capture_default_str();
  thm13->add_option("--q", t13_q, "q")->capture_default_str();
  add_verify_flags(thm13, f13);

  VerifyFlags f12;
  std::string t12_chi, t12_phi0, t12_phi1;
  double t12_q0 = 2, t12_q1 = 2, t12_q = 2, t12_margin = 0.02;
  auto* thm12 = verify->add_subcommand("thm12", "(G_{phi0,q0}, G_{phi1,q1})_{chi,q} against G_{rho,q}");
  thm12->add_option("--chi", t12_chi, "interpolation parameter")->required();
  thm12->add_option("--phi0", t12_phi0, "first space function")->required();
  thm12->add_option("--phi1", t12_phi1, "second space function")->required();
  thm12->add_option("--q0", t12_q0, "q0 (>= 1)")->capture_default_str();
  thm12->add_option("--q1", t12_q1, "q1 (>= 1)")->capture_default_str();
  thm12->add_option("--q", t12_q, "q")->capture_default_str();
  thm12->add_option("--margin", t12_margin, "index hypothesis margin")->capture_default_str();
  add_verify_flags(thm12, f12);

  VerifyFlags f17;
  double t17_alpha = 0.5, t17_beta = 0.75, t17_p = 2, t17_q = 2, t17_l = 2;
  std::size_t t17_len = 4096;
  auto* thm17 = verify->add_subcommand("thm17", "weighted reiteration with alpha = n^-a, beta = n^-b");
  thm17->add_option("--alpha", t17_alpha, "exponent a of alpha_n = n^-a")->capture_default_str();
  thm17->add_option("--beta", t17_beta, "exponent b of beta_n = n^-b")->capture_default_str();
  thm17->add_option("--p", t17_p, "p")->capture_default_str();
  thm17->add_option("--q", t17_q, "q")->capture_default_str();
  thm17->add_option("--l", t17_l, "l")->capture_default_str();
  thm17->add_option("--weights-n", t17_len, "stored weight length used by the prechecks")->capture_default_str();
  add_verify_flags(thm17, f17);

  VerifyFlags fem;
  std::string em_e0 = "lp:1", em_e1 = "lp:inf", em_phi = "power:0.5", em_q = "2";
  auto* embed = verify->add_subcommand("embed", "E_Delta -> (E0,E1)_{phi,q} -> E_Sigma ratio maxima");
  embed->add_option("--e0", em_e0, "first space")->capture_default_str();
  embed->add_option("--e1", em_e1, "second space")->capture_default_str();
  embed->add_option("--phi", em_phi, "parameter function")->capture_default_str();
  embed->add_option("--q", em_q, "q")->capture_default_str();
  add_verify_flags(embed, fem);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  const auto real = [](const std::string& s) { return usage_guard([&] { return is::parse_real(s, s); }); };

  try {
    if (*norm) {
      const auto space = usage_guard([&] { return is::parse_descriptor(norm_space); });
      is::DecreasingSequence x;
      Json j;
      if (!norm_matrix.empty()) {
        const auto m = usage_guard([&] { return is::parse_matrix_json(is::read_text_file(norm_matrix)); });
        x = is::approximation_numbers(m);
        j["approximation_numbers"] = is::json_numbers(std::vector<double>(x.values().begin(), x.values().end()));
      } else {
        x = norm_in.load();
      }
      j["space"] = space.describe();
      j["N"] = x.size();
      j["value"] = is::json_number(space.norm(x));
      Output{norm_out}.write(j);
      return kExitPass;
    }
    if (*kcurve) {
      const auto x = kc_in.load();
      const is::SequenceCouple couple{usage_guard([&] { return is::parse_descriptor(kc_e0); }),
                                      usage_guard([&] { return is::parse_descriptor(kc_e1); })};
      const auto method = usage_guard([&] { return is::parse_k_method(kc_method); });
      const auto curve = is::k_curve(x, couple, method, kc_tmin, kc_tmax, kc_points);
      Output{kc_out}.write(is::to_csv(curve));
      return kExitPass;
    }
    if (*interp) {
      const auto x = in_in.load();
      const is::SequenceCouple couple{usage_guard([&] { return is::parse_descriptor(in_e0); }),
                                      usage_guard([&] { return is::parse_descriptor(in_e1); })};
      const auto phi = usage_guard([&] { return is::parse_boyd(in_phi); });
      const auto method = usage_guard([&] { return is::parse_k_method(in_method); });
      const auto r = is::interpolation_norm(x, couple, phi, real(in_q), method);
      Json j = is::to_json(r);
      j["couple"] = couple.describe();
      j["phi"] = phi.describe();
      j["q"] = in_q;
      j["method"] = in_method;
      Output{in_out}.write(j);
      return kExitPass;
    }
    if (*boyd) {
      const auto phi = usage_guard([&] { return is::parse_boyd(boyd_fn); });
      const is::DilationGrid grid;
      const auto idx = is::boyd_indices(phi, grid);
      Json j = is::to_json(idx);
      j["function"] = phi.describe();
      Json dil = Json::array();
      for (double t : boyd_t) {
        const auto d = is::dilation(phi, t, grid);
        dil.push_back(Json{{"t", t}, {"value", is::json_number(d.value)}, {"exact", d.exact}});
      }
      j["dilation"] = dil;
      j["grid"] = Json{{"lo", grid.lo}, {"hi", grid.hi}, {"points", grid.points}};
      Output{boyd_out}.write(j);
      return kExitPass;
    }
    if (*wval) {
      const auto w = usage_guard([&] {
        if (w_a.has_value() == !w_file.empty()) throw is::InvalidInput("give exactly one of --a or --seq");
        if (w_a) return is::power_weights(*w_a, w_n);
        return is::WeightSequence::from_values(is::parse_sequence_text(is::read_text_file(w_file)));
      });
      const auto v = usage_guard([&] { return is::validate_weight_sequence(w); });
      Json j = is::to_json(v);
      j["weights"] = w.label();
      Output{w_out}.write(j);
      return v.definition_pass() ? kExitPass : kExitFail;
    }
    if (*thm13) {
      auto s = make_verify_setup(f13);
      const auto phi = usage_guard([&] { return is::parse_boyd(t13_phi); });
      const double p0 = real(t13_p0), p1 = real(t13_p1), q = real(t13_q);
      s.config["phi"] = t13_phi;
      s.config["p0"] = t13_p0;
      s.config["p1"] = t13_p1;
      s.config["q"] = t13_q;
      try {
        return emit_report(is::to_json(is::verify_theorem13(phi, p0, p1, q, s.spec, s.opt)), s.config, f13.out);
      } catch (const is::InvalidParameter& e) {
        return emit_precheck_failure("thm13", e.what(), s.config, f13.out);
      }
    }
    if (*thm12) {
      auto s = make_verify_setup(f12);
      s.opt.hypothesis_margin = t12_margin;
      const auto chi = usage_guard([&] { return is::parse_boyd(t12_chi); });
      const auto phi0 = usage_guard([&] { return is::parse_boyd(t12_phi0); });
      const auto phi1 = usage_guard([&] { return is::parse_boyd(t12_phi1); });
      s.config["chi"] = t12_chi;
      s.config["phi0"] = t12_phi0;
      s.config["phi1"] = t12_phi1;
      s.config["q0"] = t12_q0;
      s.config["q1"] = t12_q1;
      s.config["q"] = t12_q;
      s.config["margin"] = t12_margin;
      try {
        return emit_report(is::to_json(is::verify_theorem12(chi, phi0, phi1, t12_q0, t12_q1, t12_q, s.spec, s.opt)),
                           s.config, f12.out);
      } catch (const is::InvalidParameter& e) {
        return emit_precheck_failure("thm12", e.what(), s.config, f12.out);
      } catch (const is::UnsupportedParameters& e) {
        return emit_precheck_failure("thm12", e.what(), s.config, f12.out);
      }
    }
    if (*thm17) {
      auto s = make_verify_setup(f17);
      const auto alpha = usage_guard([&] { return is::power_weights(t17_alpha, t17_len); });
      const auto beta = usage_guard([&] { return is::power_weights(t17_beta, t17_len); });
      s.config["alpha"] = alpha.label();
      s.config["beta"] = beta.label();
      s.config["p"] = t17_p;
      s.config["q"] = t17_q;
      s.config["l"] = t17_l;
      s.config["weights_n"] = t17_len;
      try {
        return emit_report(is::to_json(is::verify_theorem17(alpha, beta, t17_p, t17_q, t17_l, s.spec, s.opt)),
                           s.config, f17.out);
      } catch (const is::InvalidParameter& e) {
        return emit_precheck_failure("thm17", e.what(), s.config, f17.out);
      }
    }
    if (*embed) {
      auto s = make_verify_setup(fem);
      const is::SequenceCouple couple{usage_guard([&] { return is::parse_descriptor(em_e0); }),
                                      usage_guard([&] { return is::parse_descriptor(em_e1); })};
      const auto phi = usage_guard([&] { return is::parse_boyd(em_phi); });
      s.config["e0"] = em_e0;
      s.config["e1"] = em_e1;
      s.config["phi"] = em_phi;
      s.config["q"] = em_q;
      return emit_report(is::to_json(is::verify_embeddings(couple, phi, real(em_q), s.spec, s.opt)), s.config,
                         fem.out);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const is::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
