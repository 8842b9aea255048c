#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "locsketch/locsketch.hpp"

namespace locsketch::cli {
namespace {

namespace fs = std::filesystem;

// A bad flag value or flag combination detected after CLI11 parsing.
struct UsageError : Error {
  using Error::Error;
};

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
  } else {
    write_text_atomic(out_path, text);
  }
}

std::vector<std::uint8_t> load(const std::string& path) { return read_bytes(path); }

struct SketchOpts {
  std::string in;
  std::string out;
  std::uint32_t u = 64;
  std::uint32_t v = 12;
  std::uint64_t seed = 0;
};

int cmd_sketch(const SketchOpts& o, std::ostream& err) {
  BitSequence x;
  try {
    x = read_sequence_file(o.in);
  } catch (const ParseError& e) {
    err << "error: " << o.in << ": " << e.what() << '\n';
    return kData;
  }
  const SketchParams params{o.u, o.v, o.seed, x.size()};
  try {
    params.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const auto bytes = serialize(make_sketch(x, params));
  write_bytes_atomic(o.out, bytes);
  err << "n=" << params.n << " u=" << params.u << " v=" << params.v << " B=" << params.payload_bits() << '\n';
  return kOk;
}

struct DecodeOpts {
  double theta0 = 0.5;
  double threshold_fraction = 1.0 / 6.0;
  double beta = 0.0;

  DecodeParams params() const {
    DecodeParams p{theta0, threshold_fraction, beta};
    try {
      p.validate();
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    return p;
  }
};

struct EstimateOpts {
  std::string a;
  std::string b;
  DecodeOpts decode;
  bool json = false;
};

int cmd_estimate(const EstimateOpts& o, std::ostream& out) {
  const DecodeParams p = o.decode.params();
  const auto s1 = deserialize(load(o.a));
  const auto s2 = deserialize(load(o.b));
  const DecodeResult r = estimate_overlap(s1, s2, p);
  out << format_double(r.theta_hat) << '\n';
  if (o.json) {
    nlohmann::json j{{"theta_hat", r.theta_hat},
                     {"mode", r.mode_value},
                     {"count", r.mode_count},
                     {"abstained", r.abstained},
                     {"threshold", p.threshold(s1.params.u)}};
    out << j.dump() << '\n';
  }
  return kOk;
}

struct AllPairsOpts {
  std::string dir;
  DecodeOpts decode;
  std::string out;
};

int cmd_allpairs(const AllPairsOpts& o, std::ostream& out, std::ostream& err) {
  const DecodeParams p = o.decode.params();
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(o.dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".lsk") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  if (files.size() < 2) {
    err << "error: need at least two .lsk files in " << o.dir << '\n';
    return kData;
  }
  std::vector<LocationalSketch> sketches;
  sketches.reserve(files.size());
  for (const auto& f : files) {
    try {
      sketches.push_back(deserialize(load(f.string())));
    } catch (const ParseError& e) {
      err << "error: " << f.filename().string() << ": " << e.what() << '\n';
      return kData;
    }
  }
  std::vector<std::string> offenders;
  for (std::size_t i = 1; i < sketches.size(); ++i) {
    try {
      check_compatible(sketches[0].params, sketches[i].params);
    } catch (const IncompatibleSketch& e) {
      offenders.push_back(files[i].filename().string() + " (" + e.field() + ")");
    }
  }
  if (!offenders.empty()) {
    err << "error: sketches incompatible with " << files[0].filename().string() << ':';
    for (const auto& s : offenders) err << ' ' << s;
    err << '\n';
    return kData;
  }

  const std::size_t m = sketches.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  }
  std::vector<double> theta(pairs.size());
  parallel_for(pairs.size(), default_thread_count(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    // Which read is the prefix is unknown, so both directions are decoded.
    theta[k] = std::max(estimate_overlap(sketches[i], sketches[j], p).theta_hat,
                        estimate_overlap(sketches[j], sketches[i], p).theta_hat);
  });
  std::ostringstream csv;
  csv << "file_i,file_j,theta_hat\n";
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    csv << files[pairs[k].first].filename().string() << ',' << files[pairs[k].second].filename().string() << ','
        << format_double(theta[k]) << '\n';
  }
  emit(csv.str(), o.out, out);
  return kOk;
}

struct BaselineSketchOpts {
  std::string in;
  std::string out;
  std::uint32_t H = 48;
  std::uint32_t b = 16;
  std::uint32_t k = 0;
  std::uint64_t seed = 0;
};

int cmd_baseline_sketch(const BaselineSketchOpts& o, std::ostream& err) {
  BitSequence x;
  try {
    x = read_sequence_file(o.in);
  } catch (const ParseError& e) {
    err << "error: " << o.in << ": " << e.what() << '\n';
    return kData;
  }
  const MinHashParams params{o.k == 0 ? default_kmer_length(x.size()) : o.k, o.H, o.b, o.seed, x.size()};
  try {
    params.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  write_bytes_atomic(o.out, serialize(minhash_sketch(x, params)));
  err << "n=" << params.n << " H=" << params.H << " k=" << params.k << " b=" << params.b
      << " B=" << params.payload_bits() << '\n';
  return kOk;
}

struct BaselineEstimateOpts {
  std::string a;
  std::string b;
  bool json = false;
};

int cmd_baseline_estimate(const BaselineEstimateOpts& o, std::ostream& out) {
  const auto s1 = deserialize_minhash(load(o.a));
  const auto s2 = deserialize_minhash(load(o.b));
  const MinHashEstimate e = minhash_estimate_detail(s1, s2);
  out << format_double(e.theta_hat) << '\n';
  if (o.json) {
    nlohmann::json j{{"theta_hat", e.theta_hat}, {"match_fraction", e.match_fraction}, {"jaccard", e.jaccard}};
    out << j.dump() << '\n';
  }
  return kOk;
}

struct SimulateOpts {
  std::size_t n = std::size_t{1} << 14;
  std::vector<double> theta;
  double theta0 = 0.5;
  std::optional<std::uint32_t> u;
  std::optional<std::uint32_t> v;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  double beta = 0.0;
  std::string scheme = "locational";
  std::optional<std::uint32_t> H;
  std::optional<std::uint32_t> b;
  std::optional<std::uint32_t> k;
  double threshold_fraction = 1.0 / 6.0;
  bool swap = false;
  bool records = false;
  bool sweep = false;
  std::vector<std::uint64_t> B;
  bool json = false;
  std::string out;
};

NoiseSpec noise_for(double beta, std::size_t n) {
  if (beta == 0.0) return {};
  try {
    return NoiseSpec::from_beta(beta, n);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

int cmd_simulate(const SimulateOpts& o, std::ostream& out) {
  const bool minhash = o.scheme == "minhash";
  if (o.sweep) {
    if (o.u || o.v || o.H || o.k || o.records || o.swap) {
      throw UsageError("--sweep chooses the sketch parameters; --u/--v/--H/--k/--records/--swap do not apply");
    }
    if (o.B.empty()) throw UsageError("--sweep needs --B");
    SweepConfig sc;
    sc.B_grid = o.B;
    sc.theta0 = o.theta0;
    sc.n = o.n;
    sc.trials = o.trials;
    sc.seed = o.seed;
    sc.theta_grid = o.theta;
    sc.noise = noise_for(o.beta, o.n);
    if (o.b) sc.minhash_b = *o.b;
    if (o.scheme == "locational") sc.schemes = {Scheme::Locational};
    if (minhash) sc.schemes = {Scheme::MinHash};
    const SweepResult res = sweep_rate_distortion(sc);
    emit(o.json ? sweep_json(res).dump(2) + "\n" : sweep_csv(res), o.out, out);
    return kOk;
  }
  if (o.scheme == "both") throw UsageError("--scheme both requires --sweep");
  if (!o.B.empty()) throw UsageError("--B requires --sweep");
  if (minhash && (o.u || o.v)) throw UsageError("--u/--v apply to the locational scheme only");
  if (!minhash && (o.H || o.b || o.k)) throw UsageError("--H/--b/--k apply to the minhash scheme only");

  ExperimentConfig c;
  c.n = o.n;
  c.theta_grid = o.theta.empty() ? default_theta_grid(o.theta0) : o.theta;
  c.theta0 = o.theta0;
  c.u = o.u.value_or(64);
  c.v = o.v.value_or(12);
  c.trials = o.trials;
  c.noise = noise_for(o.beta, o.n);
  c.master_seed = o.seed;
  c.scheme = minhash ? Scheme::MinHash : Scheme::Locational;
  c.minhash_H = o.H.value_or(48);
  c.minhash_b = o.b.value_or(16);
  c.minhash_k = o.k.value_or(0);
  c.threshold_fraction = o.threshold_fraction;
  c.swap_roles = o.swap;
  try {
    c.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const ExperimentResult res = run_distortion_mc(c);
  std::string text;
  if (o.json) {
    text = summary_json(res).dump(2) + "\n";
  } else {
    text = o.records ? records_csv(res) : summary_csv(res);
  }
  emit(text, o.out, out);
  return kOk;
}

struct VerifyOpts {
  std::size_t n = std::size_t{1} << 14;
  double theta = 0.5;
  double theta0 = 0.5;
  std::uint32_t u = 32;
  std::uint32_t v = 6;
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  std::uint32_t k = 0;
  bool all_zeros = false;
  bool pmf = false;
  bool json = false;
  std::string out;
};

std::string kv_csv(const nlohmann::json& obj) {
  std::ostringstream head;
  std::ostringstream row;
  bool first = true;
  for (const auto& [key, value] : obj.items()) {
    if (value.is_array() || value.is_object()) continue;
    if (!first) {
      head << ',';
      row << ',';
    }
    first = false;
    head << key;
    if (value.is_number_float()) {
      row << format_double(value.get<double>());
    } else if (value.is_boolean()) {
      row << (value.get<bool>() ? 1 : 0);
    } else {
      row << value.dump();
    }
  }
  return head.str() + "\n" + row.str() + "\n";
}

int cmd_verify_lemma_pmf(const VerifyOpts& o, std::ostream& out) {
  if (!(o.theta >= 0.0 && o.theta <= 1.0)) throw UsageError("--theta must lie in [0, 1]");
  if (o.n < 2 || o.v == 0 || o.v > 20) throw UsageError("need --n >= 2 and --v in [1, 20]");
  const LemmaPmfResult r = verify_lemma_pmf(o.n, o.theta, o.v, o.trials, o.seed);
  const double off_limit = std::pow(2.0, -(o.v - 1.0));
  nlohmann::json j{{"n", o.n},
                   {"theta", o.theta},
                   {"v", o.v},
                   {"trials", r.trials},
                   {"alpha", r.alpha},
                   {"in_K_mass", r.in_K_mass},
                   {"max_off_K", r.max_off_K},
                   {"K_size", r.K.size()},
                   {"off_K_limit", off_limit}};
  std::string text;
  if (o.pmf) {
    std::ostringstream os;
    os << "k,pmf,in_K\n";
    const std::int64_t top = (std::int64_t{1} << o.v) - 1;
    for (std::int64_t k = -top; k <= top; ++k) {
      os << k << ',' << format_double(r.pmf_at(k)) << ','
         << int(std::find(r.K.begin(), r.K.end(), k) != r.K.end()) << '\n';
    }
    text = os.str();
  } else if (o.json) {
    j["K"] = r.K;
    text = j.dump(2) + "\n";
  } else {
    text = kv_csv(j);
  }
  emit(text, o.out, out);
  return kOk;
}

int cmd_verify_repeat(const VerifyOpts& o, std::ostream& out) {
  if (o.n == 0) throw UsageError("--n must be positive");
  const RepeatResult r = verify_repeat_bound(o.n, o.trials, o.seed, o.k, o.all_zeros);
  nlohmann::json j{{"n", r.n},         {"k", r.k},     {"trials", r.trials},
                   {"repeats", r.repeats}, {"frequency", r.frequency}, {"bound", r.bound},
                   {"slack", r.slack}, {"within_bound", r.frequency <= r.bound + r.slack}};
  emit(o.json ? j.dump(2) + "\n" : kv_csv(j), o.out, out);
  return kOk;
}

int cmd_verify_bins(const VerifyOpts& o, std::ostream& out) {
  if (!(o.theta0 > 0.0 && o.theta0 < 1.0)) throw UsageError("--theta0 must lie in (0, 1)");
  if (o.u == 0 || o.v == 0 || o.v > 32 || o.n < 2) throw UsageError("need --u >= 1, --v in [1, 32], --n >= 2");
  const BinsResult r = verify_bins(o.u, o.v, o.n, o.theta0, o.trials, o.seed);
  nlohmann::json j{{"u", r.u},
                   {"v", r.v},
                   {"n", o.n},
                   {"theta0", o.theta0},
                   {"trials", r.trials},
                   {"threshold", r.threshold},
                   {"tail_frequency", r.tail_frequency},
                   {"bound", r.bound_coarse.value},
                   {"bound_valid", r.bound_coarse.valid},
                   {"bound_fine", r.bound_fine.value},
                   {"bound_fine_valid", r.bound_fine.valid},
                   {"tail_stderr", r.tail_stderr},
                   {"within_bound", r.tail_frequency <= r.bound_coarse.value + 3.0 * r.tail_stderr}};
  if (o.json) j["F_histogram"] = r.F_histogram;
  emit(o.json ? j.dump(2) + "\n" : kv_csv(j), o.out, out);
  return kOk;
}

struct BoundsOpts {
  double theta0 = 0.5;
  std::vector<double> B;
  double beta = 0.0;
  std::string variant = "result";
  bool json = false;
  std::string out;
};

int cmd_bounds(const BoundsOpts& o, std::ostream& out) {
  if (!(o.theta0 > 0.0 && o.theta0 < 1.0)) throw UsageError("--theta0 must lie in (0, 1)");
  if (!(o.beta >= 0.0)) throw UsageError("--beta must be nonnegative");
  std::vector<double> grid = o.B;
  if (grid.empty()) {
    for (int e = 0; e <= 24; ++e) grid.push_back(std::ldexp(1.0, e));
  }
  const UpperVariant variant = o.variant == "proof" ? UpperVariant::Proof : UpperVariant::Result;
  const double alpha0 = alpha_of_theta(o.theta0);
  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream csv;
  csv << "B,u,v,upper_uv,upper_theorem,lower_converse,noisy_theorem\n";
  for (const double B : grid) {
    if (!(B > 0.0)) throw UsageError("--B values must be positive");
    const auto split = locational_params_for_budget(static_cast<std::uint64_t>(B), alpha0);
    const double uv = BoundCurve{BoundKind::UpperUv}.evaluate(B, o.theta0, o.beta, variant);
    const double th = BoundCurve{BoundKind::UpperTheorem}.evaluate(B, o.theta0);
    const double lo = BoundCurve{BoundKind::LowerConverse}.evaluate(B, o.theta0);
    const double no = BoundCurve{BoundKind::NoisyTheorem}.evaluate(B, o.theta0, o.beta);
    csv << format_double(B) << ',';
    if (split) {
      csv << split->u << ',' << split->v << ',';
    } else {
      csv << ",,";
    }
    csv << format_double(uv) << ',' << format_double(th) << ',' << format_double(lo) << ',' << format_double(no)
        << '\n';
    nlohmann::json row{{"B", B}, {"upper_uv", uv}, {"upper_theorem", th}, {"lower_converse", lo}, {"noisy_theorem", no}};
    if (split) {
      row["u"] = split->u;
      row["v"] = split->v;
    }
    rows.push_back(row);
  }
  emit(o.json ? rows.dump(2) + "\n" : csv.str(), o.out, out);
  return kOk;
}

void add_decode_flags(CLI::App* cmd, DecodeOpts& d) {
  cmd->add_option("--theta0", d.theta0, "Smallest overlap to detect, in (0,1)")->required();
  cmd->add_option("--threshold-fraction", d.threshold_fraction, "Abstain below fraction*alpha0*u mode count");
  cmd->add_option("--beta", d.beta, "Noise level beta; scales alpha0 by exp(-6 beta)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"locsketch: locational hashing sketches for overlap estimation"};
  app.require_subcommand(1);
  bool quiet = false;
  bool verbose = false;
  app.add_flag("--quiet", quiet, "Suppress informational messages");
  app.add_flag("--verbose", verbose, "Print timing information");

  SketchOpts sk;
  auto* c_sketch = app.add_subcommand("sketch", "Build a .lsk locational sketch of a sequence file");
  c_sketch->add_option("--in", sk.in, "Sequence file (one line of 0/1)")->required();
  c_sketch->add_option("--out", sk.out, "Output .lsk file")->required();
  c_sketch->add_option("--u", sk.u, "Number of orderings");
  c_sketch->add_option("--v", sk.v, "Bits per entry (1..32)");
  c_sketch->add_option("--seed", sk.seed, "Ordering seed");

  EstimateOpts est;
  auto* c_est = app.add_subcommand("estimate", "Estimate the overlap of two .lsk sketches");
  c_est->add_option("a", est.a, "First sketch (prefix side)")->required();
  c_est->add_option("b", est.b, "Second sketch (suffix side)")->required();
  add_decode_flags(c_est, est.decode);
  c_est->add_flag("--json", est.json, "Also print decoder diagnostics as JSON");

  AllPairsOpts ap;
  auto* c_ap = app.add_subcommand("allpairs", "Estimate overlaps for all pairs of .lsk files in a directory");
  c_ap->add_option("--dir", ap.dir, "Directory of .lsk files")->required();
  add_decode_flags(c_ap, ap.decode);
  c_ap->add_option("--out", ap.out, "Write CSV here instead of stdout");

  auto* c_base = app.add_subcommand("baseline", "Min-hash baseline sketches");
  c_base->require_subcommand(1);
  BaselineSketchOpts bs;
  auto* c_bs = c_base->add_subcommand("sketch", "Build a .mhs min-hash sketch");
  c_bs->add_option("--in", bs.in, "Sequence file")->required();
  c_bs->add_option("--out", bs.out, "Output .mhs file")->required();
  c_bs->add_option("--H", bs.H, "Number of hash functions");
  c_bs->add_option("--b", bs.b, "Fingerprint bits (1..64)");
  c_bs->add_option("--k", bs.k, "k-mer length (default ceil(3 log2 n))");
  c_bs->add_option("--seed", bs.seed, "Hash seed");
  BaselineEstimateOpts be;
  auto* c_be = c_base->add_subcommand("estimate", "Estimate overlap from two .mhs sketches");
  c_be->add_option("a", be.a)->required();
  c_be->add_option("b", be.b)->required();
  c_be->add_flag("--json", be.json);

  SimulateOpts sim;
  auto* c_sim = app.add_subcommand("simulate", "Monte Carlo distortion of the locational or min-hash scheme");
  c_sim->add_option("--n", sim.n, "Read length");
  c_sim->add_option("--theta", sim.theta, "Overlap grid (comma separated)")->delimiter(',');
  c_sim->add_option("--theta0", sim.theta0, "Smallest overlap to detect");
  c_sim->add_option("--u", sim.u);
  c_sim->add_option("--v", sim.v);
  c_sim->add_option("--trials", sim.trials);
  c_sim->add_option("--seed", sim.seed, "Master seed");
  c_sim->add_option("--beta", sim.beta, "BSC noise with p = beta / log2(n)");
  c_sim->add_option("--scheme", sim.scheme)->check(CLI::IsMember({"locational", "minhash", "both"}));
  c_sim->add_option("--H", sim.H);
  c_sim->add_option("--b", sim.b);
  c_sim->add_option("--k", sim.k);
  c_sim->add_option("--threshold-fraction", sim.threshold_fraction);
  c_sim->add_flag("--swap", sim.swap, "Decode with the reads' roles exchanged");
  c_sim->add_flag("--records", sim.records, "Emit per-trial records instead of the summary");
  c_sim->add_flag("--sweep", sim.sweep, "Rate-distortion sweep over --B");
  c_sim->add_option("--B", sim.B, "Bit budgets for --sweep (comma separated)")->delimiter(',');
  c_sim->add_flag("--json", sim.json);
  c_sim->add_option("--out", sim.out);

  VerifyOpts ver;
  auto* c_ver = app.add_subcommand("verify", "Empirical checks of the analytic lemmas");
  c_ver->require_subcommand(1);
  auto* c_pmf = c_ver->add_subcommand("lemma-pmf", "Single-ordering difference pmf");
  c_pmf->add_option("--n", ver.n);
  c_pmf->add_option("--theta", ver.theta);
  c_pmf->add_option("--v", ver.v);
  c_pmf->add_option("--trials", ver.trials);
  c_pmf->add_option("--seed", ver.seed);
  c_pmf->add_flag("--pmf", ver.pmf, "Print the full pmf table");
  auto* c_rep = c_ver->add_subcommand("repeat", "Frequency of length-k repeats");
  c_rep->add_option("--n", ver.n);
  c_rep->add_option("--trials", ver.trials);
  c_rep->add_option("--seed", ver.seed);
  c_rep->add_option("--k", ver.k, "Repeat length (default ceil(3 log2 n))");
  c_rep->add_flag("--all-zeros", ver.all_zeros, "Use the constant string (diagnostic)");
  auto* c_bins = c_ver->add_subcommand("bins", "Tail of the largest difference multiplicity at theta = 0");
  c_bins->add_option("--u", ver.u);
  c_bins->add_option("--v", ver.v);
  c_bins->add_option("--n", ver.n);
  c_bins->add_option("--theta0", ver.theta0);
  c_bins->add_option("--trials", ver.trials);
  c_bins->add_option("--seed", ver.seed);
  for (auto* c : {c_pmf, c_rep, c_bins}) {
    c->add_flag("--json", ver.json);
    c->add_option("--out", ver.out);
  }

  BoundsOpts bo;
  auto* c_bounds = app.add_subcommand("bounds", "Evaluate the distortion bound curves over a B grid");
  c_bounds->add_option("--theta0", bo.theta0)->required();
  c_bounds->add_option("--B", bo.B, "Budgets (comma separated)")->delimiter(',');
  c_bounds->add_option("--beta", bo.beta);
  c_bounds->add_option("--variant", bo.variant, "upper_uv exponent variant")
      ->check(CLI::IsMember({"result", "proof"}));
  c_bounds->add_flag("--json", bo.json);
  c_bounds->add_option("--out", bo.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  std::ostringstream discard;
  std::ostream& info = quiet ? static_cast<std::ostream&>(discard) : err;
  const auto start = std::chrono::steady_clock::now();
  int code = kUsage;
  try {
    if (*c_sketch) {
      code = cmd_sketch(sk, info);
    } else if (*c_est) {
      code = cmd_estimate(est, out);
    } else if (*c_ap) {
      code = cmd_allpairs(ap, out, err);
    } else if (*c_bs) {
      code = cmd_baseline_sketch(bs, info);
    } else if (*c_be) {
      code = cmd_baseline_estimate(be, out);
    } else if (*c_sim) {
      code = cmd_simulate(sim, out);
    } else if (*c_pmf) {
      code = cmd_verify_lemma_pmf(ver, out);
    } else if (*c_rep) {
      code = cmd_verify_repeat(ver, out);
    } else if (*c_bins) {
      code = cmd_verify_bins(ver, out);
    } else if (*c_bounds) {
      code = cmd_bounds(bo, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
  if (verbose && !quiet) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    err << "elapsed " << dt.count() << " s\n";
  }
  return code;
}

}  // namespace locsketch::cli
