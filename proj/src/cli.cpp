#include "ineq/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ineq/constraints.hpp"
#include "ineq/domain.hpp"
#include "ineq/gibbs.hpp"
#include "ineq/io.hpp"
#include "ineq/posterior.hpp"
#include "ineq/random.hpp"
#include "ineq/synth.hpp"
#include "ineq/types.hpp"

namespace ineq::cli {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

// Synthetic-data streams live far above the estimator's (theta 1, error 2,
// household 100+k), so a shared seed never reuses a generator sequence
// between data generation and estimation.
constexpr std::uint64_t kSynthStreamBase = std::uint64_t{1} << 20;

long long ms_since(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                               t0)
      .count();
}

// Filename-safe index name: anything outside [A-Za-z0-9._-] becomes '_',
// runs collapse, edges are trimmed ("p90/p10" -> "p90_p10",
// "atkinson(1.5)" -> "atkinson_1.5").
std::string sanitize_name(const std::string& name) {
  std::string out;
  for (const char ch : name) {
    const bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                      (ch >= '0' && ch <= '9') || ch == '.' || ch == '-';
    if (keep) {
      out += ch;
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "index" : out;
}

// Sanitized names, deduplicated with numeric suffixes so every index gets
// its own trace file.
std::vector<std::string> trace_stems(const std::vector<std::string>& names) {
  std::vector<std::string> stems;
  std::set<std::string> used;
  for (const std::string& name : names) {
    std::string stem = sanitize_name(name);
    std::string candidate = stem;
    for (int k = 2; !used.insert(candidate).second; ++k)
      candidate = stem + "_" + std::to_string(k);
    stems.push_back(candidate);
  }
  return stems;
}

std::string csv_quote(const std::string& text) {
  std::string out = "\"";
  for (const char ch : text) {
    out += ch;
    if (ch == '"') out += '"';
  }
  out += '"';
  return out;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_outdir(const std::string& outdir) {
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec)
    throw input_error("cannot create output directory '" + outdir +
                      "': " + ec.message());
}

json manifest_base(const std::string& command, std::uint64_t seed) {
  json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["seed"] = seed;
  return m;
}

void write_manifest(const std::string& outdir, json m,
                    std::vector<std::string> outputs, Clock::time_point t0) {
  outputs.push_back("manifest.json");
  m["outputs"] = outputs;
  m["timings_ms"]["total"] = ms_since(t0);
  io::write_file(join_path(outdir, "manifest.json"), m.dump(2) + "\n");
}

// Row-level rule check with the row named, before any heavier machinery.
void check_rows(const io::Dataset& data) {
  for (std::size_t i = 0; i < data.households.size(); ++i) {
    const Household& h = data.households[i];
    const auto violations = validate_household(h);
    if (violations.empty()) continue;
    std::string msg =
        "row " + std::to_string(i + 1) + " (id '" + h.id + "'):";
    for (const Violation& v : violations)
      msg += " [" + v.field + ": " + v.rule + "]";
    throw input_error(msg);
  }
}

struct InfeasibleRow {
  std::string id;
  Infeasibility why;
};

// Non-throwing feasibility sweep over every household, so an exit-1 report
// can name all of them instead of the first.
std::vector<InfeasibleRow> scan_feasibility(const io::Dataset& data,
                                            const RunConfig& cfg) {
  std::vector<InfeasibleRow> bad;
  for (const Household& h : data.households) {
    ConstraintSet c = build_constraints(h, cfg);
    if (auto why = try_tighten(c)) bad.push_back({h.id, *why});
  }
  return bad;
}

std::string infeasible_csv(const std::vector<InfeasibleRow>& rows) {
  std::string out = "id,constraint,slack\n";
  for (const InfeasibleRow& r : rows)
    out += r.id + "," + csv_quote(r.why.constraint) + "," +
           io::format_double(r.why.slack) + "\n";
  return out;
}

std::string trace_csv(const std::vector<posterior::TracePoint>& points) {
  std::string out = "n,partial_mean\n";
  for (const posterior::TracePoint& p : points)
    out += std::to_string(p.n) + "," + io::format_double(p.mean) + "\n";
  return out;
}

std::string theta_csv(const gibbs::RunResult& result) {
  std::string out = "sweep";
  for (const std::string& label : result.theta_labels) out += "," + label;
  out += "\n";
  for (Eigen::Index t = 0; t < result.theta_trace.rows(); ++t) {
    out += std::to_string(t + 1);
    for (Eigen::Index c = 0; c < result.theta_trace.cols(); ++c)
      out += "," + io::format_double(result.theta_trace(t, c));
    out += "\n";
  }
  return out;
}

struct ChainRuns {
  std::vector<std::string> names;
  std::vector<posterior::PosteriorSummary> summaries;
  MatX pooled;     // draw matrix the summaries are computed from
  long long burn;  // burn-in offset into `pooled`
  std::vector<gibbs::RunResult> chains;
};

// Runs `chains` independent chains (seeds cfg.seed, cfg.seed+1, ...) and
// pools their post-burn-in draws; a single chain keeps its full series so
// traces show the burn-in transient.
ChainRuns run_chains(const gibbs::PreparedData& prepared, const RunConfig& cfg,
                     int chains, const gibbs::RunOptions& opts) {
  ChainRuns out;
  out.chains.reserve(static_cast<std::size_t>(chains));
  for (int c = 0; c < chains; ++c) {
    RunConfig chain_cfg = cfg;
    chain_cfg.seed = cfg.seed + static_cast<std::uint64_t>(c);
    out.chains.push_back(gibbs::run(prepared, chain_cfg, opts));
  }
  const gibbs::RunResult& first = out.chains.front();
  for (const IndexSpec& spec : first.specs) out.names.push_back(spec.name());

  if (chains == 1) {
    out.pooled = first.series;
    out.burn = cfg.burn_in;
  } else {
    const Eigen::Index keep = first.series.rows() - cfg.burn_in;
    out.pooled.resize(keep * chains, first.series.cols());
    for (int c = 0; c < chains; ++c)
      out.pooled.middleRows(static_cast<Eigen::Index>(c) * keep, keep) =
          out.chains[static_cast<std::size_t>(c)].series.bottomRows(keep);
    out.burn = 0;
  }
  for (Eigen::Index j = 0; j < out.pooled.cols(); ++j)
    out.summaries.push_back(
        posterior::summarize(out.names[static_cast<std::size_t>(j)],
                             out.pooled.col(j), out.burn, cfg.alpha));
  return out;
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateArgs {
  std::string data_path;
  std::string config_path;
  std::string outdir;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  int chains = 1;
  bool trace_theta = false;
  long long progress = 0;
};

int cmd_estimate(const EstimateArgs& a, std::ostream& out, std::ostream& err) {
  const auto t0 = Clock::now();
  const std::string data_text = io::read_file(a.data_path);
  io::Dataset data;
  try {
    data = io::parse_households_csv(data_text);
  } catch (const input_error& e) {
    throw input_error(a.data_path + ": " + e.what());
  }
  const std::string config_text = io::read_file(a.config_path);
  RunConfig cfg;
  try {
    cfg = io::parse_run_config(config_text);
  } catch (const input_error& e) {
    throw input_error(a.config_path + ": " + e.what());
  }
  if (a.seed) cfg.seed = *a.seed;

  check_rows(data);
  ensure_outdir(a.outdir);

  json manifest = manifest_base("estimate", cfg.seed);
  manifest["inputs"]["data"] = {{"path", a.data_path},
                                {"hash", io::content_hash(data_text)}};
  manifest["inputs"]["config"] = {{"path", a.config_path},
                                  {"hash", io::content_hash(config_text)}};
  manifest["config"] = json::parse(io::run_config_json(cfg));
  manifest["households"] = data.households.size();
  manifest["chains"] = a.chains;
  manifest["jobs"] = a.jobs;
  manifest["trace_theta"] = a.trace_theta;

  const auto infeasible = scan_feasibility(data, cfg);
  if (!infeasible.empty()) {
    io::write_file(join_path(a.outdir, "infeasible.csv"),
                   infeasible_csv(infeasible));
    manifest["status"] = "infeasible";
    manifest["infeasible_households"] = infeasible.size();
    write_manifest(a.outdir, std::move(manifest), {"infeasible.csv"}, t0);
    err << "error: " << infeasible.size() << " household(s) have empty "
        << "censoring regions; see " << join_path(a.outdir, "infeasible.csv")
        << "\n";
    for (const InfeasibleRow& r : infeasible)
      err << "  id '" << r.id << "': " << r.why.constraint << " (slack "
          << io::format_double(r.why.slack) << ")\n";
    return 1;
  }

  const auto t_prepare = Clock::now();
  const gibbs::PreparedData prepared = gibbs::prepare(data, cfg);
  manifest["timings_ms"]["prepare"] = ms_since(t_prepare);

  gibbs::RunOptions opts;
  opts.jobs = a.jobs;
  opts.trace_theta = a.trace_theta;
  opts.progress_stride = a.progress;
  opts.progress = a.progress > 0 ? &err : nullptr;

  const auto t_run = Clock::now();
  const ChainRuns runs = run_chains(prepared, cfg, a.chains, opts);
  manifest["timings_ms"]["run"] = ms_since(t_run);

  std::vector<std::string> outputs{"report.csv", "report.txt"};
  const std::string text_report = posterior::report_text(runs.summaries);
  io::write_file(join_path(a.outdir, "report.csv"),
                 posterior::report_csv(runs.summaries));
  io::write_file(join_path(a.outdir, "report.txt"), text_report);

  const std::vector<std::string> stems = trace_stems(runs.names);
  for (Eigen::Index j = 0; j < runs.pooled.cols(); ++j) {
    const std::string name =
        "trace_" + stems[static_cast<std::size_t>(j)] + ".csv";
    io::write_file(
        join_path(a.outdir, name),
        trace_csv(posterior::running_mean_trace(runs.pooled.col(j),
                                                runs.burn)));
    outputs.push_back(name);
  }

  if (a.trace_theta) {
    for (std::size_t c = 0; c < runs.chains.size(); ++c) {
      const std::string name =
          runs.chains.size() == 1
              ? "theta_trace.csv"
              : "theta_trace_chain" + std::to_string(c + 1) + ".csv";
      io::write_file(join_path(a.outdir, name), theta_csv(runs.chains[c]));
      outputs.push_back(name);
    }
  }

  manifest["status"] = "ok";
  write_manifest(a.outdir, std::move(manifest), outputs, t0);
  out << text_report;
  return 0;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string config_path;
  std::string outdir;
  std::optional<std::uint64_t> seed;
};

int cmd_synth(const SynthArgs& a, std::ostream& out, std::ostream&) {
  const auto t0 = Clock::now();
  const std::string config_text = io::read_file(a.config_path);
  synth::SynthConfig cfg;
  try {
    cfg = synth::parse_synth_config(config_text);
  } catch (const input_error& e) {
    throw input_error(a.config_path + ": " + e.what());
  }
  if (a.seed) cfg.seed = *a.seed;

  RngStream generation(cfg.seed, kSynthStreamBase);
  const synth::Population population = synth::generate_population(cfg, generation);
  RngStream selection(cfg.seed, kSynthStreamBase + 1);
  const synth::Sample sample = synth::draw_sample(population, cfg, selection);
  const io::Dataset data = synth::apply_censoring(sample, cfg);

  ensure_outdir(a.outdir);
  io::write_file(join_path(a.outdir, "data.csv"), io::households_csv(data));
  io::write_file(join_path(a.outdir, "truth.csv"), synth::truth_csv(sample));

  json manifest = manifest_base("synth", cfg.seed);
  manifest["inputs"]["config"] = {{"path", a.config_path},
                                  {"hash", io::content_hash(config_text)}};
  manifest["config"] = json::parse(synth::synth_config_json(cfg));
  manifest["population_size"] = cfg.population_size;
  manifest["sample_size"] = cfg.sample_size;
  manifest["status"] = "ok";
  write_manifest(a.outdir, std::move(manifest), {"data.csv", "truth.csv"}, t0);

  out << "population " << cfg.population_size << ", sample "
      << sample.households.size() << ": wrote data.csv and truth.csv under "
      << a.outdir << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// validate

struct ValidateArgs {
  std::string data_path;
  std::optional<std::string> config_path;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
  const io::Dataset data = io::read_households_csv(a.data_path);
  RunConfig cfg;
  if (a.config_path) cfg = io::read_run_config(*a.config_path);

  long long malformed = 0;
  long long infeasible = 0;
  for (std::size_t i = 0; i < data.households.size(); ++i) {
    const Household& h = data.households[i];
    const auto violations = validate_household(h);
    if (!violations.empty()) {
      ++malformed;
      for (const Violation& v : violations)
        err << "row " << i + 1 << " (id '" << h.id << "'): " << v.field
            << ": " << v.rule << "\n";
      continue;
    }
    ConstraintSet c = build_constraints(h, cfg);
    if (const auto why = try_tighten(c)) {
      ++infeasible;
      err << "row " << i + 1 << " (id '" << h.id
          << "'): infeasible: " << why->constraint << " (slack "
          << io::format_double(why->slack) << ")\n";
    }
  }
  if (malformed > 0) return 2;
  if (infeasible > 0) return 1;
  out << a.data_path << ": " << data.households.size()
      << " households, all records valid and feasible\n";
  return 0;
}

// ---------------------------------------------------------------------------
// coverage

struct CoverageArgs {
  std::string config_path;
  std::string outdir;
  int replications = 1;
  std::optional<std::string> run_config_path;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

struct Replication {
  VecX truth;
  std::vector<posterior::PosteriorSummary> summaries;
};

struct ReplicationError {
  int code = 3;
  std::string message;
};

Replication run_replication(int r, const synth::SynthConfig& scfg,
                            const RunConfig& rcfg) {
  const auto rr = static_cast<std::uint64_t>(r);
  RngStream generation(scfg.seed, kSynthStreamBase + 2 * rr);
  const synth::Population population =
      synth::generate_population(scfg, generation);
  RngStream selection(scfg.seed, kSynthStreamBase + 2 * rr + 1);
  const synth::Sample sample = synth::draw_sample(population, scfg, selection);
  const io::Dataset data = synth::apply_censoring(sample, scfg);

  Replication out;
  out.truth = synth::true_indices(population, rcfg.indices);

  RunConfig cfg = rcfg;
  cfg.seed = rcfg.seed + rr;
  const gibbs::PreparedData prepared = gibbs::prepare(data, cfg);
  const gibbs::RunResult result = gibbs::run(prepared, cfg, {});
  for (Eigen::Index j = 0; j < result.series.cols(); ++j)
    out.summaries.push_back(posterior::summarize(
        result.specs[static_cast<std::size_t>(j)].name(), result.series.col(j),
        cfg.burn_in, cfg.alpha));
  return out;
}

int cmd_coverage(const CoverageArgs& a, std::ostream& out, std::ostream& err) {
  const auto t0 = Clock::now();
  const std::string config_text = io::read_file(a.config_path);
  synth::SynthConfig scfg;
  try {
    scfg = synth::parse_synth_config(config_text);
  } catch (const input_error& e) {
    throw input_error(a.config_path + ": " + e.what());
  }
  if (a.seed) scfg.seed = *a.seed;

  RunConfig rcfg;
  std::string run_config_text;
  if (a.run_config_path) {
    run_config_text = io::read_file(*a.run_config_path);
    try {
      rcfg = io::parse_run_config(run_config_text);
    } catch (const input_error& e) {
      throw input_error(*a.run_config_path + ": " + e.what());
    }
  } else {
    rcfg.indices = RunConfig::default_indices();
  }
  // The estimator must invert the same tax algebra the censoring applied.
  rcfg.tax_threshold = scfg.tax_threshold;
  rcfg.dwelling_rebate = scfg.dwelling_rebate;

  const int R = a.replications;
  std::vector<std::optional<Replication>> results(
      static_cast<std::size_t>(R));
  std::vector<std::optional<ReplicationError>> errors(
      static_cast<std::size_t>(R));
  std::atomic<int> next{0};
  std::atomic<int> done{0};
  std::mutex log_mutex;

  const auto worker = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= R) return;
      const auto slot = static_cast<std::size_t>(r);
      const std::string tag = "replication " + std::to_string(r + 1);
      try {
        results[slot] = run_replication(r, scfg, rcfg);
      } catch (const infeasible_error& e) {
        errors[slot] = {1, tag + ": " + e.what()};
      } catch (const input_error& e) {
        errors[slot] = {2, tag + ": " + e.what()};
      } catch (const std::exception& e) {
        errors[slot] = {3, tag + ": " + e.what()};
      }
      const int finished = done.fetch_add(1) + 1;
      std::lock_guard<std::mutex> guard(log_mutex);
      err << tag << " done (" << finished << "/" << R << ")\n";
    }
  };

  const int workers = std::max(1, std::min(a.jobs, R));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  for (const auto& e : errors)
    if (e) {
      err << "error: " << e->message << "\n";
      return e->code;
    }

  std::vector<std::string> names;
  for (const IndexSpec& spec : rcfg.indices) names.push_back(spec.name());
  const std::size_t idx_count = names.size();

  std::string rows = "replication,index,truth,prediction,lower,upper,covered\n";
  std::vector<long long> covered(idx_count, 0);
  for (int r = 0; r < R; ++r) {
    const Replication& rep = *results[static_cast<std::size_t>(r)];
    for (std::size_t j = 0; j < idx_count; ++j) {
      const posterior::PosteriorSummary& s = rep.summaries[j];
      const double truth = rep.truth[static_cast<Eigen::Index>(j)];
      const bool hit = s.lower <= truth && truth <= s.upper;
      covered[j] += hit ? 1 : 0;
      rows += std::to_string(r + 1) + "," + names[j] + "," +
              io::format_double(truth) + "," +
              io::format_double(s.prediction) + "," +
              io::format_double(s.lower) + "," + io::format_double(s.upper) +
              "," + (hit ? "1" : "0") + "\n";
    }
  }
  std::string summary = "index,replications,covered,coverage\n";
  for (std::size_t j = 0; j < idx_count; ++j)
    summary += names[j] + "," + std::to_string(R) + "," +
               std::to_string(covered[j]) + "," +
               io::format_double(static_cast<double>(covered[j]) / R) + "\n";

  ensure_outdir(a.outdir);
  io::write_file(join_path(a.outdir, "coverage.csv"), rows);
  io::write_file(join_path(a.outdir, "coverage_summary.csv"), summary);

  json manifest = manifest_base("coverage", scfg.seed);
  manifest["inputs"]["config"] = {{"path", a.config_path},
                                  {"hash", io::content_hash(config_text)}};
  if (a.run_config_path)
    manifest["inputs"]["run_config"] = {
        {"path", *a.run_config_path},
        {"hash", io::content_hash(run_config_text)}};
  manifest["config"] = json::parse(synth::synth_config_json(scfg));
  manifest["run_config"] = json::parse(io::run_config_json(rcfg));
  manifest["replications"] = R;
  manifest["jobs"] = a.jobs;
  manifest["status"] = "ok";
  write_manifest(a.outdir, std::move(manifest),
                 {"coverage.csv", "coverage_summary.csv"}, t0);

  for (std::size_t j = 0; j < idx_count; ++j)
    out << names[j] << ": " << covered[j] << "/" << R << " covered ("
        << io::format_double(static_cast<double>(covered[j]) / R) << ")\n";
  return 0;
}

}  // namespace

int dispatch(std::vector<std::string> args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{
      "Finite-population inequality indices from bracket-censored, "
      "design-weighted survey data",
      "ineq"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  EstimateArgs est;
  std::uint64_t est_seed = 0;
  CLI::App* estimate =
      app.add_subcommand("estimate",
                         "Run the Gibbs estimator on a censored household "
                         "CSV and write report, traces and manifest");
  estimate->add_option("data", est.data_path, "household CSV")
      ->required()
      ->check(CLI::ExistingFile);
  estimate->add_option("--config", est.config_path, "run configuration JSON")
      ->required()
      ->check(CLI::ExistingFile);
  estimate->add_option("--out", est.outdir, "output directory")->required();
  CLI::Option* est_seed_opt = estimate->add_option(
      "--seed", est_seed, "override the configured seed");
  estimate->add_option("--jobs", est.jobs, "threads for the wealth update")
      ->check(CLI::PositiveNumber);
  estimate
      ->add_option("--chains", est.chains,
                   "independent chains pooled after per-chain burn-in")
      ->check(CLI::PositiveNumber);
  estimate->add_flag("--trace-theta", est.trace_theta,
                     "also record the parameter trace");
  estimate->add_option("--progress", est.progress,
                       "print progress every N sweeps to stderr");

  SynthArgs syn;
  std::uint64_t syn_seed = 0;
  CLI::App* synth_cmd = app.add_subcommand(
      "synth",
      "Generate a synthetic censored survey plus its truth oracle CSV");
  synth_cmd
      ->add_option("--config", syn.config_path, "synthetic-truth JSON config")
      ->required()
      ->check(CLI::ExistingFile);
  synth_cmd->add_option("--out", syn.outdir, "output directory")->required();
  CLI::Option* syn_seed_opt =
      synth_cmd->add_option("--seed", syn_seed, "override the configured seed");

  ValidateArgs val;
  std::string val_config;
  CLI::App* validate = app.add_subcommand(
      "validate", "Check a household CSV row by row and report rule "
                  "violations and empty censoring regions");
  validate->add_option("data", val.data_path, "household CSV")
      ->required()
      ->check(CLI::ExistingFile);
  CLI::Option* val_config_opt =
      validate
          ->add_option("--config", val_config,
                       "run configuration JSON for the tax constraints")
          ->check(CLI::ExistingFile);

  CoverageArgs cov;
  std::uint64_t cov_seed = 0;
  std::string cov_run_config;
  CLI::App* coverage = app.add_subcommand(
      "coverage", "Replicate synth -> estimate and measure how often the "
                  "posterior regions cover the true indices");
  coverage
      ->add_option("--config", cov.config_path, "synthetic-truth JSON config")
      ->required()
      ->check(CLI::ExistingFile);
  coverage
      ->add_option("--replications", cov.replications,
                   "number of independent replications")
      ->required()
      ->check(CLI::PositiveNumber);
  coverage->add_option("--out", cov.outdir, "output directory")->required();
  CLI::Option* cov_run_config_opt =
      coverage
          ->add_option("--run-config", cov_run_config,
                       "run configuration JSON for the estimator (tax fields "
                       "are taken from the synth config)")
          ->check(CLI::ExistingFile);
  CLI::Option* cov_seed_opt = coverage->add_option(
      "--seed", cov_seed, "override the configured synth seed");
  coverage
      ->add_option("--jobs", cov.jobs, "replications to run in parallel")
      ->check(CLI::PositiveNumber);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (app.got_subcommand(estimate)) {
      if (est_seed_opt->count() > 0) est.seed = est_seed;
      return cmd_estimate(est, out, err);
    }
    if (app.got_subcommand(synth_cmd)) {
      if (syn_seed_opt->count() > 0) syn.seed = syn_seed;
      return cmd_synth(syn, out, err);
    }
    if (app.got_subcommand(validate)) {
      if (val_config_opt->count() > 0) val.config_path = val_config;
      return cmd_validate(val, out, err);
    }
    if (app.got_subcommand(coverage)) {
      if (cov_seed_opt->count() > 0) cov.seed = cov_seed;
      if (cov_run_config_opt->count() > 0)
        cov.run_config_path = cov_run_config;
      return cmd_coverage(cov, out, err);
    }
    err << "internal error: no subcommand dispatched\n";
    return 3;
  } catch (const infeasible_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const input_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace ineq::cli
