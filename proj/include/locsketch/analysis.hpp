#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "locsketch/decode.hpp"
#include "locsketch/io.hpp"
#include "locsketch/lexorder.hpp"
#include "locsketch/minhash.hpp"
#include "locsketch/model.hpp"
#include "locsketch/parallel.hpp"
#include "locsketch/rng.hpp"
#include "locsketch/sketch.hpp"

namespace locsketch {

// ---------------------------------------------------------------------------
// Analytic bound curves
// ---------------------------------------------------------------------------

enum class UpperVariant {
  Result,  // 2^{-2(v-1)} + (u+1) exp(-2u (a0/12 - 2^{-(v-1)})^2)
  Proof,   // 2^{-2(v-1)} + 2 exp(-2u (a0/12 - u 2^{-(v-1)})^2)
};

// Distortion upper bound for a (u, v) sketch. Returns 1 (vacuous) when the
// variant's validity condition fails.
inline double bound_upper_uv(double u, double v, double alpha0, UpperVariant variant = UpperVariant::Result) {
  const double quant = std::pow(2.0, -2.0 * (v - 1.0));
  const double step = std::pow(2.0, -(v - 1.0));
  double value = 1.0;
  if (variant == UpperVariant::Result) {
    const double gap = alpha0 / 12.0 - step;
    if (gap <= 0.0) return 1.0;
    value = quant + (u + 1.0) * std::exp(-2.0 * u * gap * gap);
  } else {
    const double gap = alpha0 / 12.0 - u * step;
    if (gap <= 0.0) return 1.0;
    value = quant + 2.0 * std::exp(-2.0 * u * gap * gap);
  }
  return std::clamp(value, 0.0, 1.0);
}

// 3 exp(-sqrt(B) alpha0 / 24), clamped to [0, 1].
inline double bound_theorem(double B, double alpha0) {
  return std::clamp(3.0 * std::exp(-std::sqrt(B) * alpha0 / 24.0), 0.0, 1.0);
}

inline double bound_theorem_noisy(double B, double alpha0, double beta) {
  return bound_theorem(B, alpha0 * std::exp(-6.0 * beta));
}

// Sketch size sufficient for distortion D: 24^2 e^{12 beta} / alpha0^2 ln^2(3 / D).
inline double sketch_size_for_distortion(double D, double alpha0, double beta = 0.0) {
  const double l = std::log(3.0 / D);
  return 576.0 * std::exp(12.0 * beta) / (alpha0 * alpha0) * l * l;
}

// Converse: no scheme with B bits achieves D below (1 - theta0) 2^{-8B}.
inline double bound_lower(double B, double theta0) { return (1.0 - theta0) * std::exp2(-8.0 * B); }

enum class BoundKind { UpperUv, UpperTheorem, LowerConverse, NoisyTheorem };

struct LocationalBudget {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
};

// Splits a budget of B bits into (u, v). Starts from v = round(alpha0 sqrt(B)
// / 24) with a floor of 4, then raises v to the smallest value for which
// alpha0/12 > u 2^{-(v-1)} holds with u = floor(B / v), when such a v <= 32
// exists. Returns nullopt when no entry fits.
inline std::optional<LocationalBudget> locational_params_for_budget(std::uint64_t B, double alpha0) {
  std::uint32_t v = static_cast<std::uint32_t>(std::max<long>(4, std::lround(alpha0 * std::sqrt(double(B)) / 24.0)));
  for (std::uint32_t cand = 1; cand <= 32 && cand <= B; ++cand) {
    const double u = static_cast<double>(B / cand);
    if (alpha0 / 12.0 > u * std::pow(2.0, -(cand - 1.0))) {
      v = std::max(v, cand);
      break;
    }
  }
  v = std::min<std::uint32_t>(v, 32);
  if (B < v) return std::nullopt;
  return LocationalBudget{static_cast<std::uint32_t>(B / v), v};
}

struct BoundCurve {
  BoundKind kind = BoundKind::UpperTheorem;

  const char* name() const noexcept {
    switch (kind) {
      case BoundKind::UpperUv: return "upper_uv";
      case BoundKind::UpperTheorem: return "upper_theorem";
      case BoundKind::LowerConverse: return "lower_converse";
      case BoundKind::NoisyTheorem: return "noisy_theorem";
    }
    return "?";
  }

  // upper_uv uses the budget split of locational_params_for_budget.
  double evaluate(double B, double theta0, double beta = 0.0, UpperVariant variant = UpperVariant::Result) const {
    const double alpha0 = alpha_of_theta(theta0);
    switch (kind) {
      case BoundKind::UpperUv: {
        const auto split = locational_params_for_budget(static_cast<std::uint64_t>(B), alpha0);
        return split ? bound_upper_uv(split->u, split->v, alpha0, variant) : 1.0;
      }
      case BoundKind::UpperTheorem: return bound_theorem(B, alpha0);
      case BoundKind::LowerConverse: return std::clamp(bound_lower(B, theta0), 0.0, 1.0);
      case BoundKind::NoisyTheorem: return bound_theorem_noisy(B, alpha0, beta);
    }
    return 1.0;
  }
};

// Index of the first grid point from which lower <= upper_theorem holds at
// every remaining point (the numerical crossover). grid.size() if it fails
// at the last point.
inline std::size_t sandwich_start(const std::vector<double>& B_grid, double theta0) {
  const double alpha0 = alpha_of_theta(theta0);
  std::size_t start = B_grid.size();
  for (std::size_t i = B_grid.size(); i-- > 0;) {
    if (bound_lower(B_grid[i], theta0) <= bound_theorem(B_grid[i], alpha0)) {
      start = i;
    } else {
      break;
    }
  }
  return start;
}

enum class TailVariant {
  Coarse,  // u 2^{-(v-1)} inside the exponent
  Fine,    // u 2^{-v}
};

struct TailBound {
  double value = 1.0;
  bool valid = false;  // alpha0/12 > u step
};

// Probability bound that some off-target difference appears more than
// alpha0 u / 12 times.
inline TailBound multiplicity_tail_bound(double u, double v, double alpha0, TailVariant variant = TailVariant::Coarse) {
  const double step = std::pow(2.0, variant == TailVariant::Coarse ? -(v - 1.0) : -v);
  const double gap = alpha0 / 12.0 - u * step;
  if (gap <= 0.0) return {1.0, false};
  return {std::exp(-2.0 * u * gap * gap), true};
}

// ---------------------------------------------------------------------------
// Monte Carlo distortion
// ---------------------------------------------------------------------------

enum class Scheme { Locational, MinHash };

inline const char* scheme_name(Scheme s) { return s == Scheme::Locational ? "locational" : "minhash"; }

// 0, theta0, theta0 + step, ..., 1.
inline std::vector<double> default_theta_grid(double theta0, double step = 0.05) {
  std::vector<double> grid{0.0};
  for (int i = 0;; ++i) {
    const double t = theta0 + step * i;
    if (t > 1.0 + 1e-9) break;
    grid.push_back(std::min(t, 1.0));
  }
  if (grid.back() < 1.0) grid.push_back(1.0);
  return grid;
}

struct ExperimentConfig {
  std::size_t n = std::size_t{1} << 14;
  std::vector<double> theta_grid{0.0, 0.5, 0.7, 0.9, 1.0};
  double theta0 = 0.5;
  std::uint32_t u = 64;
  std::uint32_t v = 12;
  std::size_t trials = 100;
  NoiseSpec noise;
  std::uint64_t master_seed = 1;
  Scheme scheme = Scheme::Locational;
  std::uint32_t minhash_H = 48;
  std::uint32_t minhash_b = 16;
  std::uint32_t minhash_k = 0;  // 0 selects ceil(3 log2 n)
  double threshold_fraction = 1.0 / 6.0;
  bool swap_roles = false;      // decode (x2, x1) instead of (x1, x2)

  DecodeParams decode_params() const { return DecodeParams{theta0, threshold_fraction, noise.beta}; }

  void validate() const {
    if (n < 2) throw InvalidArgument("experiment: n must be at least 2");
    if (trials == 0) throw InvalidArgument("experiment: trials must be positive");
    if (theta_grid.empty()) throw InvalidArgument("experiment: empty theta grid");
    for (const double t : theta_grid) {
      if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("experiment: theta grid values must lie in [0, 1]");
    }
    if (!(noise.p >= 0.0 && noise.p <= 1.0)) throw InvalidArgument("experiment: p must lie in [0, 1]");
    decode_params().validate();
    if (scheme == Scheme::Locational) {
      SketchParams{u, v, 0, n}.validate();
    } else {
      MinHashParams{minhash_k == 0 ? default_kmer_length(n) : minhash_k, minhash_H, minhash_b, 0, n}.validate();
    }
  }
};

struct ExperimentRecord {
  std::size_t theta_index = 0;
  std::size_t trial = 0;
  std::uint64_t trial_seed = 0;
  double theta_actual = 0.0;
  double theta_hat = 0.0;
  double squared_error = 0.0;
  bool abstained = false;
  bool mode_in_K = false;  // the decoder's mode lies within 2^{-(v-1)} of 1 - theta
  std::int64_t mode_value = 0;
  std::uint32_t mode_count = 0;
};

struct ThetaSummary {
  double theta = 0.0;
  double theta_actual = 0.0;
  std::size_t trials = 0;
  double mse = 0.0;
  double mse_stderr = 0.0;
  double abstention_rate = 0.0;
  double mode_in_K_rate = 0.0;
  double hit_rate = 0.0;  // not abstained and mode in K
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ThetaSummary> per_theta;
  std::vector<ExperimentRecord> records;  // theta-major, trial-minor

  double worst_mse() const {
    double w = 0.0;
    for (const auto& s : per_theta) w = std::max(w, s.mse);
    return w;
  }

  const ExperimentRecord& record(std::size_t theta_index, std::size_t trial) const {
    return records[theta_index * config.trials + trial];
  }
};

// Whether |k 2^{-v} - shift / n| <= 2^{-(v-1)}, evaluated exactly.
inline bool in_target_bins(std::int64_t k, std::uint64_t shift, std::uint64_t n, std::uint32_t v) {
  const __int128 lhs = static_cast<__int128>(k) * n - (static_cast<__int128>(shift) << v);
  const __int128 mag = lhs < 0 ? -lhs : lhs;
  return mag <= static_cast<__int128>(2) * n;
}

inline std::vector<std::int64_t> target_bins(std::uint64_t shift, std::uint64_t n, std::uint32_t v) {
  std::vector<std::int64_t> bins;
  const auto centre = static_cast<std::int64_t>((static_cast<unsigned __int128>(shift) << v) / n);
  for (std::int64_t k = centre - 3; k <= centre + 3; ++k) {
    if (in_target_bins(k, shift, n, v)) bins.push_back(k);
  }
  return bins;
}

inline std::uint64_t trial_seed(std::uint64_t master, std::size_t theta_index, std::size_t trial) {
  return derive_seed(master, theta_index, trial);
}

// Seeds for the roles inside one trial.
enum class TrialRole : std::uint64_t { Instance = 1, Noise1 = 2, Noise2 = 3, Orderings = 4, MinHash = 5 };

inline std::uint64_t role_seed(std::uint64_t trial, TrialRole role) {
  return derive_seed(trial, static_cast<std::uint64_t>(role));
}

inline ExperimentRecord run_trial(const ExperimentConfig& cfg, std::size_t theta_index, std::size_t trial) {
  ExperimentRecord rec;
  rec.theta_index = theta_index;
  rec.trial = trial;
  rec.trial_seed = trial_seed(cfg.master_seed, theta_index, trial);

  OverlapInstance inst = generate_pair(cfg.n, cfg.theta_grid[theta_index], role_seed(rec.trial_seed, TrialRole::Instance));
  rec.theta_actual = inst.theta_actual;
  BitSequence a = std::move(inst.x1);
  BitSequence b = std::move(inst.x2);
  if (!cfg.noise.noiseless()) {
    a = apply_bsc(a, cfg.noise.p, role_seed(rec.trial_seed, TrialRole::Noise1));
    b = apply_bsc(b, cfg.noise.p, role_seed(rec.trial_seed, TrialRole::Noise2));
  }
  if (cfg.swap_roles) std::swap(a, b);

  if (cfg.scheme == Scheme::Locational) {
    const OrderingSet orderings = make_orderings(role_seed(rec.trial_seed, TrialRole::Orderings), cfg.u, cfg.n);
    const LocationalSketch s1 = make_sketch(a, orderings, cfg.v);
    const LocationalSketch s2 = make_sketch(b, orderings, cfg.v);
    const DecodeResult r = estimate_overlap(s1, s2, cfg.decode_params());
    rec.theta_hat = r.theta_hat;
    rec.abstained = r.abstained;
    rec.mode_value = r.mode_value;
    rec.mode_count = r.mode_count;
    rec.mode_in_K = in_target_bins(r.mode_value, inst.shift, cfg.n, cfg.v);
  } else {
    MinHashParams p{cfg.minhash_k == 0 ? default_kmer_length(cfg.n) : cfg.minhash_k, cfg.minhash_H, cfg.minhash_b,
                    role_seed(rec.trial_seed, TrialRole::MinHash), cfg.n};
    rec.theta_hat = minhash_estimate(minhash_sketch(a, p), minhash_sketch(b, p));
  }
  const double e = rec.theta_actual - rec.theta_hat;
  rec.squared_error = e * e;
  return rec;
}

inline ExperimentResult run_distortion_mc(const ExperimentConfig& cfg, unsigned threads = default_thread_count()) {
  cfg.validate();
  ExperimentResult res;
  res.config = cfg;
  const std::size_t G = cfg.theta_grid.size();
  res.records.resize(G * cfg.trials);
  parallel_for(res.records.size(), threads, [&](std::size_t idx) {
    const std::size_t ti = idx / cfg.trials;
    const std::size_t tr = idx % cfg.trials;
    try {
      res.records[idx] = run_trial(cfg, ti, tr);
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << e.what() << " (trial seed " << trial_seed(cfg.master_seed, ti, tr) << ")";
      throw Error(msg.str());
    }
  });

  for (std::size_t ti = 0; ti < G; ++ti) {
    ThetaSummary s;
    s.theta = cfg.theta_grid[ti];
    s.trials = cfg.trials;
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t abstained = 0;
    std::size_t in_k = 0;
    std::size_t hits = 0;
    for (std::size_t tr = 0; tr < cfg.trials; ++tr) {
      const auto& r = res.record(ti, tr);
      s.theta_actual = r.theta_actual;
      sum += r.squared_error;
      sum_sq += r.squared_error * r.squared_error;
      abstained += r.abstained;
      in_k += r.mode_in_K;
      hits += !r.abstained && r.mode_in_K;
    }
    const double T = static_cast<double>(cfg.trials);
    s.mse = sum / T;
    const double var = cfg.trials > 1 ? std::max(0.0, (sum_sq - T * s.mse * s.mse) / (T - 1.0)) : 0.0;
    s.mse_stderr = std::sqrt(var / T);
    s.abstention_rate = static_cast<double>(abstained) / T;
    s.mode_in_K_rate = static_cast<double>(in_k) / T;
    s.hit_rate = static_cast<double>(hits) / T;
    res.per_theta.push_back(s);
  }
  return res;
}

struct WorstCaseComparison {
  double worst_a = 0.0;
  double worst_b = 0.0;
  double gap = 0.0;           // worst_b - worst_a
  double gap_lower_05 = 0.0;  // 5th percentile of the bootstrapped gap
  std::size_t resamples = 0;
};

// Paired bootstrap of worst_b - worst_a: each resample draws the same trial
// indices for both runs at every theta. Both runs must share grid and trials.
inline WorstCaseComparison compare_worst_case(const ExperimentResult& a, const ExperimentResult& b,
                                              std::size_t resamples, std::uint64_t seed) {
  if (a.config.theta_grid != b.config.theta_grid || a.config.trials != b.config.trials) {
    throw InvalidArgument("compare_worst_case: runs are not paired");
  }
  const std::size_t G = a.config.theta_grid.size();
  const std::size_t T = a.config.trials;
  WorstCaseComparison out;
  out.worst_a = a.worst_mse();
  out.worst_b = b.worst_mse();
  out.gap = out.worst_b - out.worst_a;
  out.resamples = resamples;
  std::vector<double> gaps(resamples);
  for (std::size_t r = 0; r < resamples; ++r) {
    CounterRng rng(seed, r);
    double wa = 0.0;
    double wb = 0.0;
    for (std::size_t ti = 0; ti < G; ++ti) {
      double sa = 0.0;
      double sb = 0.0;
      for (std::size_t k = 0; k < T; ++k) {
        const std::size_t tr = static_cast<std::size_t>(rng.next() % T);
        sa += a.record(ti, tr).squared_error;
        sb += b.record(ti, tr).squared_error;
      }
      wa = std::max(wa, sa / static_cast<double>(T));
      wb = std::max(wb, sb / static_cast<double>(T));
    }
    gaps[r] = wb - wa;
  }
  std::sort(gaps.begin(), gaps.end());
  out.gap_lower_05 = resamples == 0 ? out.gap : gaps[static_cast<std::size_t>(0.05 * static_cast<double>(resamples))];
  return out;
}

inline std::string summary_csv(const ExperimentResult& res) {
  std::ostringstream os;
  os << "scheme,n,u,v,H,b,theta,theta_actual,trials,mse,mse_stderr,abstention_rate,mode_in_K_rate,hit_rate\n";
  const auto& c = res.config;
  const bool loc = c.scheme == Scheme::Locational;
  for (const auto& s : res.per_theta) {
    os << scheme_name(c.scheme) << ',' << c.n << ',';
    if (loc) {
      os << c.u << ',' << c.v << ",,,";
    } else {
      os << ",," << c.minhash_H << ',' << c.minhash_b << ',';
    }
    os << format_double(s.theta) << ',' << format_double(s.theta_actual) << ',' << s.trials << ','
       << format_double(s.mse) << ',' << format_double(s.mse_stderr) << ',' << format_double(s.abstention_rate) << ','
       << format_double(s.mode_in_K_rate) << ',' << format_double(s.hit_rate) << '\n';
  }
  return os.str();
}

inline std::string records_csv(const ExperimentResult& res) {
  std::ostringstream os;
  os << "theta_index,trial,trial_seed,theta_actual,theta_hat,squared_error,abstained,mode_in_K,mode_value,mode_count\n";
  for (const auto& r : res.records) {
    os << r.theta_index << ',' << r.trial << ',' << r.trial_seed << ',' << format_double(r.theta_actual) << ','
       << format_double(r.theta_hat) << ',' << format_double(r.squared_error) << ',' << int(r.abstained) << ','
       << int(r.mode_in_K) << ',' << r.mode_value << ',' << r.mode_count << '\n';
  }
  return os.str();
}

inline nlohmann::json summary_json(const ExperimentResult& res) {
  nlohmann::json out;
  const auto& c = res.config;
  out["scheme"] = scheme_name(c.scheme);
  out["n"] = c.n;
  out["trials"] = c.trials;
  out["theta0"] = c.theta0;
  out["master_seed"] = c.master_seed;
  if (c.scheme == Scheme::Locational) {
    out["u"] = c.u;
    out["v"] = c.v;
  } else {
    out["H"] = c.minhash_H;
    out["b"] = c.minhash_b;
  }
  out["noise"] = {{"p", c.noise.p}, {"beta", c.noise.beta}};
  out["worst_mse"] = res.worst_mse();
  auto& rows = out["per_theta"] = nlohmann::json::array();
  for (const auto& s : res.per_theta) {
    rows.push_back({{"theta", s.theta},
                    {"theta_actual", s.theta_actual},
                    {"trials", s.trials},
                    {"mse", s.mse},
                    {"mse_stderr", s.mse_stderr},
                    {"abstention_rate", s.abstention_rate},
                    {"mode_in_K_rate", s.mode_in_K_rate},
                    {"hit_rate", s.hit_rate}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rate-distortion sweep
// ---------------------------------------------------------------------------

struct SweepConfig {
  std::vector<std::uint64_t> B_grid{256, 768};
  double theta0 = 0.5;
  std::size_t n = std::size_t{1} << 14;
  std::size_t trials = 50;
  std::uint64_t seed = 1;
  std::vector<Scheme> schemes{Scheme::Locational, Scheme::MinHash};
  std::vector<double> theta_grid;  // empty selects default_theta_grid(theta0)
  NoiseSpec noise;
  std::uint32_t minhash_b = 16;
};

struct SweepRow {
  Scheme scheme = Scheme::Locational;
  std::uint64_t B = 0;
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  std::uint32_t H = 0;
  std::uint32_t b = 0;
  double theta = 0.0;
  double mse = 0.0;
  double abstention_rate = 0.0;
  double worst_mse = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::string> warnings;
};

inline SweepResult sweep_rate_distortion(const SweepConfig& cfg, unsigned threads = default_thread_count()) {
  SweepResult out;
  const double alpha0 = alpha_of_theta(cfg.theta0);
  const auto grid = cfg.theta_grid.empty() ? default_theta_grid(cfg.theta0) : cfg.theta_grid;
  for (const Scheme scheme : cfg.schemes) {
    for (const std::uint64_t B : cfg.B_grid) {
      ExperimentConfig ec;
      ec.n = cfg.n;
      ec.theta_grid = grid;
      ec.theta0 = cfg.theta0;
      ec.trials = cfg.trials;
      ec.noise = cfg.noise;
      ec.master_seed = cfg.seed;
      ec.scheme = scheme;
      SweepRow proto;
      proto.scheme = scheme;
      proto.B = B;
      if (scheme == Scheme::Locational) {
        const auto split = locational_params_for_budget(B, alpha0);
        if (!split) {
          out.warnings.push_back("locational: B=" + std::to_string(B) + " too small for one entry, skipped");
          continue;
        }
        ec.u = proto.u = split->u;
        ec.v = proto.v = split->v;
      } else {
        const std::uint64_t H = B / cfg.minhash_b;
        if (H == 0) {
          out.warnings.push_back("minhash: B=" + std::to_string(B) + " too small for one fingerprint, skipped");
          continue;
        }
        ec.minhash_H = proto.H = static_cast<std::uint32_t>(H);
        ec.minhash_b = proto.b = cfg.minhash_b;
      }
      const ExperimentResult res = run_distortion_mc(ec, threads);
      for (const auto& s : res.per_theta) {
        SweepRow row = proto;
        row.theta = s.theta;
        row.mse = s.mse;
        row.abstention_rate = s.abstention_rate;
        row.worst_mse = res.worst_mse();
        out.rows.push_back(row);
      }
    }
  }
  return out;
}

inline std::string sweep_csv(const SweepResult& res) {
  std::ostringstream os;
  os << "scheme,B,u,v,H,b,theta,mse,abstention_rate,worst_mse\n";
  for (const auto& r : res.rows) {
    os << scheme_name(r.scheme) << ',' << r.B << ',';
    if (r.scheme == Scheme::Locational) {
      os << r.u << ',' << r.v << ",,,";
    } else {
      os << ",," << r.H << ',' << r.b << ',';
    }
    os << format_double(r.theta) << ',' << format_double(r.mse) << ',' << format_double(r.abstention_rate) << ','
       << format_double(r.worst_mse) << '\n';
  }
  return os.str();
}

inline nlohmann::json sweep_json(const SweepResult& res) {
  nlohmann::json out;
  auto& rows = out["rows"] = nlohmann::json::array();
  for (const auto& r : res.rows) {
    nlohmann::json row{{"scheme", scheme_name(r.scheme)}, {"B", r.B}, {"theta", r.theta}, {"mse", r.mse},
                       {"abstention_rate", r.abstention_rate}, {"worst_mse", r.worst_mse}};
    if (r.scheme == Scheme::Locational) {
      row["u"] = r.u;
      row["v"] = r.v;
    } else {
      row["H"] = r.H;
      row["b"] = r.b;
    }
    rows.push_back(row);
  }
  out["warnings"] = res.warnings;
  return out;
}

// ---------------------------------------------------------------------------
// Empirical verifiers
// ---------------------------------------------------------------------------

struct LemmaPmfResult {
  std::size_t trials = 0;
  std::uint32_t v = 0;
  double alpha = 0.0;
  double in_K_mass = 0.0;
  double max_off_K = 0.0;
  std::vector<std::int64_t> K;
  std::vector<double> pmf;  // pmf[k + 2^v - 1] = Pr(d = k)

  double pmf_at(std::int64_t k) const { return pmf[static_cast<std::size_t>(k + (std::int64_t{1} << v) - 1)]; }
};

// Histogram of the single-ordering difference d = [m1/n]_v - [m2/n]_v over
// fresh instances and fresh masks.
inline LemmaPmfResult verify_lemma_pmf(std::size_t n, double theta, std::uint32_t v, std::size_t trials,
                                       std::uint64_t seed, unsigned threads = default_thread_count()) {
  if (v == 0 || v > 20) throw InvalidArgument("verify_lemma_pmf: v must lie in [1, 20]");
  if (trials == 0) throw InvalidArgument("verify_lemma_pmf: trials must be positive");
  const std::size_t shift = shift_for(n, theta);
  std::vector<std::int64_t> diffs(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    const std::uint64_t ts = derive_seed(seed, 0x4C31, t);
    const OverlapInstance inst = generate_pair(n, theta, role_seed(ts, TrialRole::Instance));
    const Mask mask = Mask::random(role_seed(ts, TrialRole::Orderings), 0, n);
    const auto e1 = truncate(first_suffix_position(inst.x1, mask), n, v);
    const auto e2 = truncate(first_suffix_position(inst.x2, mask), n, v);
    diffs[t] = static_cast<std::int64_t>(e1) - static_cast<std::int64_t>(e2);
  });

  LemmaPmfResult res;
  res.trials = trials;
  res.v = v;
  res.alpha = alpha_of_theta(1.0 - static_cast<double>(shift) / static_cast<double>(n));
  const std::int64_t top = (std::int64_t{1} << v) - 1;
  std::vector<std::size_t> counts(static_cast<std::size_t>(2 * top + 1), 0);
  for (const auto d : diffs) ++counts[static_cast<std::size_t>(d + top)];
  res.K = target_bins(shift, n, v);
  if (res.K.size() > 5) throw std::logic_error("verify_lemma_pmf: more than 5 target bins");
  res.pmf.resize(counts.size());
  std::size_t in_k = 0;
  std::size_t max_off = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const std::int64_t k = static_cast<std::int64_t>(i) - top;
    res.pmf[i] = static_cast<double>(counts[i]) / static_cast<double>(trials);
    if (std::find(res.K.begin(), res.K.end(), k) != res.K.end()) {
      in_k += counts[i];
    } else {
      max_off = std::max(max_off, counts[i]);
    }
  }
  res.in_K_mass = static_cast<double>(in_k) / static_cast<double>(trials);
  res.max_off_K = static_cast<double>(max_off) / static_cast<double>(trials);
  return res;
}

// Whether some length-k window of x occurs at two distinct positions.
inline bool has_repeat(const BitSequence& x, std::uint32_t k) {
  if (k == 0) throw InvalidArgument("has_repeat: k must be positive");
  if (k > x.size() || x.size() - k + 1 < 2) return false;
  const std::size_t count = x.size() - k + 1;
  if (k <= 64) {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(count * 2);
    for (std::size_t i = 0; i < count; ++i) {
      if (!seen.insert(detail::kmer_code(x, i, k)).second) return true;
    }
    return false;
  }
  // Digest collisions are confirmed symbol by symbol.
  std::vector<std::pair<std::uint64_t, std::size_t>> digests(count);
  for (std::size_t i = 0; i < count; ++i) digests[i] = {detail::kmer_code(x, i, k), i};
  std::sort(digests.begin(), digests.end());
  for (std::size_t i = 0; i + 1 < count; ++i) {
    for (std::size_t j = i + 1; j < count && digests[j].first == digests[i].first; ++j) {
      const std::size_t p = digests[i].second;
      const std::size_t q = digests[j].second;
      bool equal = true;
      for (std::uint32_t t = 0; t < k && equal; t += 64) {
        const std::uint32_t rem = k - t;
        const std::uint64_t m = detail::low_bits(rem < 64 ? rem : 64);
        equal = (x.window(p + t) & m) == (x.window(q + t) & m);
      }
      if (equal) return true;
    }
  }
  return false;
}

struct RepeatResult {
  std::size_t n = 0;
  std::uint32_t k = 0;
  std::size_t trials = 0;
  std::size_t repeats = 0;
  double frequency = 0.0;
  double bound = 0.0;  // 1/n
  double slack = 0.0;  // 3 sqrt(1 / (n trials))
};

// Frequency of length-k repeats in i.i.d. strings, k = ceil(3 log2 n) unless
// given. `all_zeros` replaces the random draw with the constant string.
inline RepeatResult verify_repeat_bound(std::size_t n, std::size_t trials, std::uint64_t seed, std::uint32_t k = 0,
                                        bool all_zeros = false, unsigned threads = default_thread_count()) {
  if (n == 0 || trials == 0) throw InvalidArgument("verify_repeat_bound: n and trials must be positive");
  RepeatResult res;
  res.n = n;
  res.k = k == 0 ? std::max<std::uint32_t>(1, ceil_3log2(n)) : k;
  res.trials = trials;
  std::vector<std::uint8_t> hit(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    const BitSequence x = all_zeros ? BitSequence(n) : BitSequence::random(n, derive_seed(seed, 0x5245, t));
    hit[t] = has_repeat(x, res.k);
  });
  for (const auto h : hit) res.repeats += h;
  res.frequency = static_cast<double>(res.repeats) / static_cast<double>(trials);
  res.bound = 1.0 / static_cast<double>(n);
  res.slack = 3.0 * std::sqrt(1.0 / (static_cast<double>(n) * static_cast<double>(trials)));
  return res;
}

struct BinsResult {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  std::size_t trials = 0;
  double threshold = 0.0;       // alpha0 u / 12
  double tail_frequency = 0.0;  // Pr[F >= threshold]
  double tail_stderr = 0.0;     // binomial standard error at the bound value
  TailBound bound_coarse;
  TailBound bound_fine;
  std::vector<std::size_t> F_histogram;  // F_histogram[f] = trials with F = f
};

// Distribution of F, the largest multiplicity in the difference multiset of
// two independent (theta = 0) reads, against the concentration bound.
inline BinsResult verify_bins(std::uint32_t u, std::uint32_t v, std::size_t n, double theta0, std::size_t trials,
                              std::uint64_t seed, unsigned threads = default_thread_count()) {
  if (trials == 0) throw InvalidArgument("verify_bins: trials must be positive");
  SketchParams{u, v, 0, n}.validate();
  const double alpha0 = alpha_of_theta(theta0);
  std::vector<std::uint32_t> F(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    const std::uint64_t ts = derive_seed(seed, 0x4C32, t);
    const OverlapInstance inst = generate_pair(n, 0.0, role_seed(ts, TrialRole::Instance));
    const OrderingSet orderings = make_orderings(role_seed(ts, TrialRole::Orderings), u, n);
    const auto d = diff_multiset(make_sketch(inst.x1, orderings, v), make_sketch(inst.x2, orderings, v));
    F[t] = mode_with_ties(d).count;
  });

  BinsResult res;
  res.u = u;
  res.v = v;
  res.trials = trials;
  res.threshold = alpha0 * u / 12.0;
  res.bound_coarse = multiplicity_tail_bound(u, v, alpha0, TailVariant::Coarse);
  res.bound_fine = multiplicity_tail_bound(u, v, alpha0, TailVariant::Fine);
  res.F_histogram.assign(u + 1, 0);
  std::size_t tail = 0;
  for (const auto f : F) {
    ++res.F_histogram[f];
    tail += static_cast<double>(f) >= res.threshold;
  }
  res.tail_frequency = static_cast<double>(tail) / static_cast<double>(trials);
  const double p = res.bound_coarse.value;
  res.tail_stderr = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  return res;
}

}  // namespace locsketch
