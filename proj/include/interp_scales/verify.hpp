#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "interp_scales/approx_spaces.hpp"
#include "interp_scales/boyd.hpp"
#include "interp_scales/error.hpp"
#include "interp_scales/kfunc.hpp"
#include "interp_scales/sequences.hpp"
#include "interp_scales/snorm.hpp"

namespace interp_scales {

// ---------------------------------------------------------------------------
// Samples
// ---------------------------------------------------------------------------

/// Shape of a sampled sequence. `param` fixes the shape parameter; NaN draws
/// it per sample (geometric r in [0.3, 0.95], polynomial a in [0.6, 3],
/// plateau length k in [1, N]).
struct DecayProfile {
  enum class Kind { Geometric, Polynomial, Mixed, Plateau };
  Kind kind = Kind::Geometric;
  double param = std::numeric_limits<double>::quiet_NaN();

  static DecayProfile geometric(double r = std::numeric_limits<double>::quiet_NaN()) { return {Kind::Geometric, r}; }
  static DecayProfile polynomial(double a = std::numeric_limits<double>::quiet_NaN()) {
    return {Kind::Polynomial, a};
  }
  static DecayProfile mixed() { return {Kind::Mixed, std::numeric_limits<double>::quiet_NaN()}; }
  static DecayProfile plateau(double k = std::numeric_limits<double>::quiet_NaN()) { return {Kind::Plateau, k}; }
};

inline std::string to_string(const DecayProfile& p) {
  std::ostringstream os;
  switch (p.kind) {
    case DecayProfile::Kind::Geometric:
      os << "geometric";
      break;
    case DecayProfile::Kind::Polynomial:
      os << "polynomial";
      break;
    case DecayProfile::Kind::Mixed:
      os << "mixed";
      break;
    case DecayProfile::Kind::Plateau:
      os << "plateau";
      break;
  }
  if (!std::isnan(p.param)) os << "(" << p.param << ")";
  return os.str();
}

struct SampleSpec {
  std::uint64_t seed = 42;
  std::size_t count = 100;
  std::size_t n = 256;
  /// Cycled across samples: sample i uses profiles[i % size].
  std::vector<DecayProfile> profiles{DecayProfile::geometric(), DecayProfile::polynomial()};

  void validate() const {
    if (count < 1) throw InvalidParameter("sample spec: count must be >= 1");
    if (n < 4) throw InvalidParameter("sample spec: N must be >= 4");
    if (profiles.empty()) throw InvalidParameter("sample spec: no decay profile");
  }
};

struct Sample {
  DecreasingSequence x;
  DecayProfile profile;
  double decay_param = 0.0;  ///< the shape parameter actually used
};

namespace detail {

inline std::mt19937_64 sample_rng(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(static_cast<std::uint64_t>(index) >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace detail

/// Sample `index` of a batch. Parameters are drawn before the length is used,
/// so the geometric, polynomial and mixed profiles at N are prefixes of the
/// same sample at 2N.
inline Sample make_sample(const SampleSpec& spec, std::size_t index) {
  auto rng = detail::sample_rng(spec.seed, index);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const DecayProfile prof = spec.profiles[index % spec.profiles.size()];
  const std::size_t n = spec.n;
  const double u = unit(rng);
  std::vector<double> v(n, 0.0);
  Sample s{DecreasingSequence{}, prof, 0.0};
  switch (prof.kind) {
    case DecayProfile::Kind::Geometric: {
      const double r = std::isnan(prof.param) ? 0.3 + 0.65 * u : prof.param;
      if (!(r > 0.0 && r <= 1.0)) throw InvalidParameter("geometric profile: r must lie in (0,1]");
      for (std::size_t k = 0; k < n; ++k) v[k] = std::pow(r, static_cast<double>(k));
      s.decay_param = r;
      break;
    }
    case DecayProfile::Kind::Polynomial:
    case DecayProfile::Kind::Mixed: {
      const double a = (std::isnan(prof.param) || prof.kind == DecayProfile::Kind::Mixed) ? 0.6 + 2.4 * u : prof.param;
      if (!(a >= 0.0)) throw InvalidParameter("polynomial profile: a must be >= 0");
      for (std::size_t k = 0; k < n; ++k) v[k] = std::pow(static_cast<double>(k + 1), -a);
      s.decay_param = a;
      if (prof.kind == DecayProfile::Kind::Mixed) {
        // Flatten random blocks to their first value.
        std::uniform_int_distribution<std::size_t> block(1, 8);
        for (std::size_t start = 0; start < n;) {
          const std::size_t len = block(rng);
          for (std::size_t k = start + 1; k < std::min(n, start + len); ++k) v[k] = v[start];
          start += len;
        }
      }
      break;
    }
    case DecayProfile::Kind::Plateau: {
      std::size_t k = std::isnan(prof.param) ? 1 + static_cast<std::size_t>(u * static_cast<double>(n))
                                             : static_cast<std::size_t>(prof.param);
      k = std::clamp<std::size_t>(k, 1, n);
      for (std::size_t i = 0; i < k; ++i) v[i] = 1.0;
      s.decay_param = static_cast<double>(k);
      break;
    }
  }
  s.x = DecreasingSequence::from_values(std::move(v));
  return s;
}

inline std::vector<Sample> sample_batch(const SampleSpec& spec) {
  spec.validate();
  std::vector<Sample> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) out.push_back(make_sample(spec, i));
  return out;
}

inline std::vector<DecreasingSequence> sample_sequences(const SampleSpec& spec) {
  std::vector<DecreasingSequence> out;
  for (auto& s : sample_batch(spec)) out.push_back(std::move(s.x));
  return out;
}

// ---------------------------------------------------------------------------
// Parallel map
// ---------------------------------------------------------------------------

/// Worker count: INTERP_SCALES_THREADS when set and positive, otherwise the
/// hardware concurrency.
inline unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("INTERP_SCALES_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(std::min<long>(v, 1024));
  }
  return hw;
}

/// out[i] = f(i) for i < count, evaluated on up to `threads` workers. The first
/// exception thrown by any task is rethrown.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, F&& f, unsigned threads = 0) {
  std::vector<T> out(count);
  if (threads == 0) threads = worker_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  const auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        out[i] = f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < threads; ++k) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
  return out;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct VerifyOptions {
  double spread_max = 16.0;
  double stability_tol = 0.2;  ///< |spread(N2)/spread(N) - 1|
  double rank_corr_max = 0.8;
  bool gate_rank_correlation = false;
  std::size_t calibration_samples = 4;
  std::size_t calibration_points = 16;  ///< t-values in [2^-10, 2^10]
  double hypothesis_margin = 0.02;
  QuadratureOptions quadrature{};
  unsigned threads = 0;
};

struct EquivalenceReport {
  std::string theorem;
  std::vector<std::pair<std::string, std::string>> params;
  std::size_t n_samples = 0;
  std::size_t n = 0;
  std::size_t n2 = 0;
  std::vector<double> ratios;
  std::vector<double> ratios_n2;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double spread = 0.0;
  double ratio_min_n2 = 0.0;
  double ratio_max_n2 = 0.0;
  double spread_n2 = 0.0;
  double spread_change = 0.0;
  double c_emp = 1.0;
  double rank_correlation = 0.0;
  double max_tail_bound = 0.0;
  bool pass = false;
  std::vector<std::size_t> failures;
  std::vector<std::string> reasons;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = r;
    i = j + 1;
  }
  return rank;
}

}  // namespace detail

/// Spearman rank correlation; 0 when either side is constant.
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) return 0.0;
  const auto ra = detail::average_ranks(a);
  const auto rb = detail::average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - mean) * (rb[i] - mean);
    saa += (ra[i] - mean) * (ra[i] - mean);
    sbb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

/// max over t in a log grid on [2^-10, 2^10] and the first few samples of
/// k_truncation / k_convex.
inline double calibrate_truncation(const SequenceCouple& couple, const std::vector<Sample>& samples,
                                   const VerifyOptions& opt) {
  const std::size_t m = std::min(opt.calibration_samples, samples.size());
  if (m == 0 || !couple.e0.convex_regime() || !couple.e1.convex_regime()) return 1.0;
  const auto ts = detail::log_grid(std::exp2(-10.0), std::exp2(10.0), opt.calibration_points);
  const auto per = parallel_map<double>(
      m * ts.size(),
      [&](std::size_t k) {
        const auto& x = samples[k / ts.size()].x;
        const double t = ts[k % ts.size()];
        const double kc = k_convex(t, x, couple);
        return kc > 0.0 ? k_truncation(t, x, couple) / kc : 1.0;
      },
      opt.threads);
  return *std::max_element(per.begin(), per.end());
}

struct RatioSide {
  double value = 0.0;
  double tail_bound = 0.0;
};

/// Shared driver: per-sample ratio lhs(x)/rhs(x) at N and 2N plus statistics.
inline EquivalenceReport run_equivalence(std::string theorem, std::vector<std::pair<std::string, std::string>> params,
                                         const SampleSpec& spec, const std::function<RatioSide(const DecreasingSequence&)>& lhs,
                                         const std::function<double(const DecreasingSequence&)>& rhs,
                                         const std::optional<SequenceCouple>& couple, const VerifyOptions& opt) {
  spec.validate();
  EquivalenceReport rep;
  rep.theorem = std::move(theorem);
  rep.params = std::move(params);
  rep.n_samples = spec.count;
  rep.n = spec.n;
  rep.n2 = 2 * spec.n;
  SampleSpec spec2 = spec;
  spec2.n = rep.n2;

  struct Out {
    double r = 0.0, r2 = 0.0, tb = 0.0, decay = 0.0;
    std::size_t profile = 0;
  };
  const auto outs = parallel_map<Out>(
      spec.count,
      [&](std::size_t i) {
        const auto s = make_sample(spec, i);
        const auto s2 = make_sample(spec2, i);
        const auto l = lhs(s.x);
        const auto l2 = lhs(s2.x);
        Out o;
        o.r = l.value / rhs(s.x);
        o.r2 = l2.value / rhs(s2.x);
        o.tb = std::max(l.tail_bound, l2.tail_bound);
        o.decay = s.decay_param;
        o.profile = i % spec.profiles.size();
        return o;
      },
      opt.threads);

  rep.ratio_min = rep.ratio_min_n2 = detail::kInf;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    const auto& o = outs[i];
    rep.ratios.push_back(o.r);
    rep.ratios_n2.push_back(o.r2);
    rep.max_tail_bound = std::max(rep.max_tail_bound, o.tb);
    const bool ok = std::isfinite(o.r) && o.r > 0.0 && std::isfinite(o.r2) && o.r2 > 0.0;
    if (!ok) {
      rep.failures.push_back(i);
      continue;
    }
    rep.ratio_min = std::min(rep.ratio_min, o.r);
    rep.ratio_max = std::max(rep.ratio_max, o.r);
    rep.ratio_min_n2 = std::min(rep.ratio_min_n2, o.r2);
    rep.ratio_max_n2 = std::max(rep.ratio_max_n2, o.r2);
  }
  if (rep.failures.size() == outs.size()) {
    rep.ratio_min = rep.ratio_max = rep.ratio_min_n2 = rep.ratio_max_n2 = 0.0;
    rep.spread = rep.spread_n2 = detail::kInf;
  } else {
    rep.spread = rep.ratio_max / rep.ratio_min;
    rep.spread_n2 = rep.ratio_max_n2 / rep.ratio_min_n2;
  }
  rep.spread_change = rep.spread_n2 / rep.spread - 1.0;

  // Drift: rank correlation between the decay parameter and the ratio, per profile.
  for (std::size_t p = 0; p < spec.profiles.size(); ++p) {
    std::vector<double> d, r;
    for (std::size_t i = 0; i < outs.size(); ++i) {
      if (outs[i].profile == p && std::isfinite(outs[i].r)) {
        d.push_back(outs[i].decay);
        r.push_back(outs[i].r);
      }
    }
    const double rho = spearman(d, r);
    if (std::abs(rho) > std::abs(rep.rank_correlation)) rep.rank_correlation = rho;
  }

  if (couple) rep.c_emp = calibrate_truncation(*couple, sample_batch(spec), opt);

  if (!rep.failures.empty()) rep.reasons.push_back(std::to_string(rep.failures.size()) + " non-finite or non-positive ratios");
  if (!(rep.spread <= opt.spread_max)) rep.reasons.push_back("spread " + detail::fmt(rep.spread) + " > " + detail::fmt(opt.spread_max));
  if (!(rep.spread_n2 <= opt.spread_max)) {
    rep.reasons.push_back("spread at N2 " + detail::fmt(rep.spread_n2) + " > " + detail::fmt(opt.spread_max));
  }
  if (!(std::abs(rep.spread_change) <= opt.stability_tol)) {
    rep.reasons.push_back("spread changes by " + detail::fmt(rep.spread_change) + " from N to N2");
  }
  if (std::abs(rep.rank_correlation) >= opt.rank_corr_max) {
    const std::string msg = "rank correlation between decay parameter and ratio " + detail::fmt(rep.rank_correlation);
    if (opt.gate_rank_correlation) rep.reasons.push_back(msg);
    else rep.warnings.push_back(msg);
  }
  rep.pass = rep.reasons.empty();
  return rep;
}

// ---------------------------------------------------------------------------
// Reiteration drivers
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt_index_window(const BoydIndices& idx) {
  return "[" + fmt(idx.lower) + ", " + fmt(idx.upper) + "]";
}

inline RatioSide as_side(const InterpolationResult& r) { return {r.value, r.tail_bound}; }

}  // namespace detail

/// (G_p0, G_p1)_{rho,q} against G_{phi,q} with rho = rho_theorem13(phi, p0, p1).
inline EquivalenceReport verify_theorem13(const BoydFunction& phi, double p0, double p1, double q,
                                          const SampleSpec& spec, const VerifyOptions& opt = {}) {
  if (!(q > 0.0)) throw InvalidParameter("verify_theorem13: q must be > 0");
  const auto idx = boyd_indices(phi);
  const double lo = detail::is_pos_inf(p1) ? 0.0 : 1.0 / p1;
  const double hi = 1.0 / p0;
  if (!(idx.lower > lo && idx.upper < hi)) {
    throw InvalidParameter("verify_theorem13: Boyd indices of phi " + detail::fmt_index_window(idx) +
                           " not inside the window (1/p1, 1/p0) = (" + detail::fmt(lo) + ", " + detail::fmt(hi) + ")");
  }
  const SequenceCouple couple{SequenceSpaceDescriptor::lp(p0), SequenceSpaceDescriptor::lp(p1)};
  const auto rho = rho_theorem13(phi, p0, p1);
  const InterpolationIntegrator integ(rho, q, opt.quadrature);
  auto rep = run_equivalence(
      "thm13",
      {{"phi", phi.describe()}, {"p0", detail::fmt(p0)}, {"p1", detail::fmt(p1)}, {"q", detail::fmt(q)},
       {"rho", rho.describe()}},
      spec, [&](const DecreasingSequence& x) { return detail::as_side(integ(x, couple)); },
      [&](const DecreasingSequence& x) { return lorentz_marcinkiewicz_norm(x, phi, q); }, couple, opt);
  return rep;
}

struct Theorem12Hypotheses {
  BoydIndices chi, phi0, phi1, quotient;
};

/// Index hypotheses of the reiteration theorem for Lorentz–Marcinkiewicz
/// couples, each checked with a margin; throws InvalidParameter naming the
/// first condition that fails or is indeterminate.
inline Theorem12Hypotheses check_theorem12_hypotheses(const BoydFunction& chi, const BoydFunction& phi0,
                                                      const BoydFunction& phi1, double margin) {
  Theorem12Hypotheses h{boyd_indices(chi), boyd_indices(phi0), boyd_indices(phi1),
                        boyd_indices(BoydFunction::quotient(phi0, phi1))};
  const auto fail = [](const std::string& what, const BoydIndices& idx) {
    throw InvalidParameter("hypothesis " + what + " fails: estimated indices " +
                           detail::fmt_index_window(idx));
  };
  if (!(h.chi.lower > margin && h.chi.upper < 1.0 - margin && h.chi.lower <= h.chi.upper + margin)) {
    fail("0 < beta(chi) <= alpha(chi) < 1", h.chi);
  }
  if (!(h.phi0.lower > margin)) fail("beta(phi0) > 0", h.phi0);
  if (!(h.phi1.lower > margin)) fail("beta(phi1) > 0", h.phi1);
  if (!(h.quotient.lower > margin || h.quotient.upper < -margin)) {
    fail("beta(phi0/phi1) > 0 or alpha(phi0/phi1) < 0 (indeterminate within margin " + detail::fmt(margin) + ")",
         h.quotient);
  }
  return h;
}

/// (G_{phi0,q0}, G_{phi1,q1})_{chi,q} against G_{rho,q}.
inline EquivalenceReport verify_theorem12(const BoydFunction& chi, const BoydFunction& phi0, const BoydFunction& phi1,
                                          double q0, double q1, double q, const SampleSpec& spec,
                                          const VerifyOptions& opt = {}) {
  if (!(q0 >= 1.0 && q1 >= 1.0)) {
    throw UnsupportedParameters("verify_theorem12: q0, q1 must be >= 1 for the splitting solver");
  }
  if (!(q > 0.0)) throw InvalidParameter("verify_theorem12: q must be > 0");
  check_theorem12_hypotheses(chi, phi0, phi1, opt.hypothesis_margin);
  const SequenceCouple couple{SequenceSpaceDescriptor::lorentz(phi0, q0), SequenceSpaceDescriptor::lorentz(phi1, q1)};
  const auto rho = rho_theorem12(chi, phi0, phi1);
  const InterpolationIntegrator integ(chi, q, opt.quadrature);
  return run_equivalence(
      "thm12",
      {{"chi", chi.describe()}, {"phi0", phi0.describe()}, {"phi1", phi1.describe()}, {"q0", detail::fmt(q0)},
       {"q1", detail::fmt(q1)}, {"q", detail::fmt(q)}, {"rho", rho.describe()}},
      spec, [&](const DecreasingSequence& x) { return detail::as_side(integ(x, couple)); },
      [&](const DecreasingSequence& x) { return lorentz_marcinkiewicz_norm(x, rho, q); }, couple, opt);
}

/// Prechecks for the weighted reiteration theorem; throws InvalidParameter
/// naming the failed hypothesis.
inline Theorem17Weights check_theorem17_hypotheses(const WeightSequence& alpha, const WeightSequence& beta, double p,
                                                   double q, double l) {
  const auto check = [](const WeightSequence& w, const char* name) {
    const auto v = validate_weight_sequence(w);
    if (!v.definition_pass()) {
      throw InvalidParameter(std::string("verify_theorem17: ") + name + " (" + w.label() +
                             ") fails the weight-sequence properties");
    }
    if (!v.limit_condition) {
      throw InvalidParameter(std::string("verify_theorem17: ") + name + " (" + w.label() +
                             ") fails the limit condition lim M(1/t) t = 0 (log-log slope " + detail::fmt(v.limit_slope) +
                             ")");
    }
  };
  check(alpha, "alpha");
  check(beta, "beta");
  const std::size_t n = std::min(alpha.size(), beta.size());
  for (std::size_t k = 1; k <= n; ++k) {
    if (beta(k) > alpha(k)) {
      throw InvalidParameter("verify_theorem17: beta_n <= alpha_n fails at n = " + std::to_string(k));
    }
  }
  return gamma_theorem17(alpha, beta, p, q, l);
}

/// (G_{Phi^alpha_(p)}, G_{Phi^beta_(q)})_{t^(1/l), r} against G_{Phi^gamma_(r)}.
inline EquivalenceReport verify_theorem17(const WeightSequence& alpha, const WeightSequence& beta, double p, double q,
                                          double l, const SampleSpec& spec, const VerifyOptions& opt = {}) {
  const auto tw = check_theorem17_hypotheses(alpha, beta, p, q, l);
  const std::size_t need = 2 * spec.n;
  for (const auto* w : {&alpha, &beta, &tw.gamma}) {
    if (w->size() < need && !w->has_generator()) {
      throw TruncationError("verify_theorem17: weight sequence " + w->label() + " has " + std::to_string(w->size()) +
                            " terms, " + std::to_string(need) + " needed");
    }
  }
  const SequenceCouple couple{SequenceSpaceDescriptor::phi_type(SymmetricNormingFunction::convexified(alpha, p)),
                              SequenceSpaceDescriptor::phi_type(SymmetricNormingFunction::convexified(beta, q))};
  const auto target = SymmetricNormingFunction::convexified(tw.gamma, tw.r);
  const InterpolationIntegrator integ(BoydFunction::power(1.0 / l), tw.r, opt.quadrature);
  return run_equivalence(
      "thm17",
      {{"alpha", alpha.label()}, {"beta", beta.label()}, {"p", detail::fmt(p)}, {"q", detail::fmt(q)},
       {"l", detail::fmt(l)}, {"r", detail::fmt(tw.r)}, {"gamma", tw.gamma.label()}},
      spec, [&](const DecreasingSequence& x) { return detail::as_side(integ(x, couple)); },
      [&](const DecreasingSequence& x) { return phi_type_norm(x, target); }, couple, opt);
}

struct EmbeddingReport {
  std::vector<std::pair<std::string, std::string>> params;
  std::size_t n_samples = 0;
  std::size_t n = 0;
  std::size_t n2 = 0;
  double sum_ratio_max = 0.0;     ///< max |x|_Sigma / |x|_{phi,q}
  double sum_ratio_max_n2 = 0.0;
  double inter_ratio_max = 0.0;   ///< max |x|_{phi,q} / |x|_Delta
  double inter_ratio_max_n2 = 0.0;
  bool pass = false;
  std::vector<std::size_t> failures;
  std::vector<std::string> reasons;
  std::vector<std::string> warnings;
};

/// Both embeddings E_Delta -> (E0,E1)_{phi,q} -> E_Sigma, as maxima of the
/// norm ratios over a batch, at N and 2N.
inline EmbeddingReport verify_embeddings(const SequenceCouple& couple, const BoydFunction& phi, double q,
                                         const SampleSpec& spec, const VerifyOptions& opt = {}) {
  spec.validate();
  EmbeddingReport rep;
  rep.params = {{"couple", couple.describe()}, {"phi", phi.describe()}, {"q", detail::fmt(q)}};
  rep.n_samples = spec.count;
  rep.n = spec.n;
  rep.n2 = 2 * spec.n;
  const InterpolationIntegrator integ(phi, q, opt.quadrature);
  rep.warnings = integ(DecreasingSequence::from_values({0.0}), couple).warnings;
  SampleSpec spec2 = spec;
  spec2.n = rep.n2;
  struct Out {
    double s = 0, s2 = 0, i = 0, i2 = 0;
  };
  const auto outs = parallel_map<Out>(
      spec.count,
      [&](std::size_t k) {
        Out o;
        const auto x = make_sample(spec, k).x;
        const auto x2 = make_sample(spec2, k).x;
        const double v = integ(x, couple).value;
        const double v2 = integ(x2, couple).value;
        o.s = sum_norm(x, couple) / v;
        o.s2 = sum_norm(x2, couple) / v2;
        o.i = v / intersection_norm(x, couple);
        o.i2 = v2 / intersection_norm(x2, couple);
        return o;
      },
      opt.threads);
  for (std::size_t k = 0; k < outs.size(); ++k) {
    const auto& o = outs[k];
    if (!(std::isfinite(o.s) && std::isfinite(o.s2) && std::isfinite(o.i) && std::isfinite(o.i2) && o.s > 0 &&
          o.i > 0)) {
      rep.failures.push_back(k);
      continue;
    }
    rep.sum_ratio_max = std::max(rep.sum_ratio_max, o.s);
    rep.sum_ratio_max_n2 = std::max(rep.sum_ratio_max_n2, o.s2);
    rep.inter_ratio_max = std::max(rep.inter_ratio_max, o.i);
    rep.inter_ratio_max_n2 = std::max(rep.inter_ratio_max_n2, o.i2);
  }
  if (!rep.failures.empty()) rep.reasons.push_back(std::to_string(rep.failures.size()) + " non-finite ratios");
  const auto stable = [&](double a, double b, const char* what) {
    if (!(std::abs(b / a - 1.0) <= opt.stability_tol)) {
      rep.reasons.push_back(std::string(what) + " ratio maximum changes from " + detail::fmt(a) + " to " +
                            detail::fmt(b) + " when N doubles");
    }
  };
  stable(rep.sum_ratio_max, rep.sum_ratio_max_n2, "sum-space");
  stable(rep.inter_ratio_max, rep.inter_ratio_max_n2, "intersection-space");
  rep.pass = rep.reasons.empty();
  return rep;
}

}  // namespace interp_scales
