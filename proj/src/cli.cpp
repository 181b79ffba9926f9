#include "evrisk/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "evrisk/chain.hpp"
#include "evrisk/density.hpp"
#include "evrisk/errors.hpp"
#include "evrisk/format.hpp"
#include "evrisk/grid.hpp"
#include "evrisk/report.hpp"
#include "evrisk/smile_fit.hpp"
#include "evrisk/strategies.hpp"
#include "evrisk/svg.hpp"

namespace fs = std::filesystem;

namespace evrisk {

namespace {

// ---------------------------------------------------------------------------
// shared plumbing
// ---------------------------------------------------------------------------

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

/// Runs fn(0..n-1) on up to `jobs` threads. Work items must be independent;
/// callers write results into per-index slots so ordering never matters.
void parallel_for(size_t n, int jobs,
                  const std::function<void(size_t)>& fn) {
  const size_t workers =
      std::min<size_t>(std::max(jobs, 1), n == 0 ? 1 : n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      while (!failed.load()) {
        const size_t i = next.fetch_add(1);
        if (i >= n) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

[[nodiscard]] std::vector<ChainSnapshot> load_inputs(const RunConfig& config) {
  std::vector<ChainSnapshot> all;
  for (const auto& path : config.inputs) {
    auto part = parse_snapshot_file(path);
    all.insert(all.end(), part.begin(), part.end());
  }
  if (config.rate_override) {
    for (auto& snap : all) snap.rate = *config.rate_override;
  }
  return all;
}

void check_common(const RunConfig& config) {
  if (!(config.step > 0.0)) throw InvariantViolation("step must be positive");
  if (config.padding < 0) throw InvariantViolation("padding must be >= 0");
  if (config.jobs < 1) throw InvariantViolation("jobs must be >= 1");
  FitConfig fit;
  fit.lambda = config.lambda;
  validate_config(fit);
}

[[nodiscard]] std::string snapshot_base(const ChainSnapshot& snap) {
  return snap.ticker + "_" + format_date(snap.snapshot_date) + "_" +
         phase_name(snap.phase);
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

[[nodiscard]] std::string smile_csv(const FittedSmile& smile) {
  std::string out = "moneyness,iv_fitted,observed,iv_observed,residual\n";
  size_t obs = 0;
  for (int j = 0; j < smile.grid.count; ++j) {
    out += format_shortest(smile.grid.node(j));
    out += ',';
    out += format_shortest(smile.sigma[static_cast<size_t>(j)]);
    if (obs < smile.observed_nodes.size() && smile.observed_nodes[obs] == j) {
      out += ",1,";
      out += format_shortest(smile.observed_iv[obs]);
      out += ',';
      out += format_shortest(smile.residuals[obs]);
      ++obs;
    } else {
      out += ",0,,";
    }
    out += '\n';
  }
  return out;
}

[[nodiscard]] std::string sidecar_json(const ChainSnapshot& snap,
                                       const FittedSmile& smile) {
  nlohmann::json doc;
  doc["ticker"] = snap.ticker;
  doc["snapshot_date"] = format_date(snap.snapshot_date);
  doc["phase"] = phase_name(snap.phase);
  doc["lambda_used"] = smile.lambda_used;
  doc["foc_residual_norm"] = smile.foc_residual_norm;
  doc["reductions"] = smile.reductions;
  doc["arbitrage_free"] = smile.arbitrage_free;
  return doc.dump(2) + "\n";
}

[[nodiscard]] std::string density_csv(const RiskNeutralDensity& density,
                                      double spot) {
  std::string out = "moneyness,strike,raw_g,probability,is_mode\n";
  for (size_t k = 0; k < density.probabilities.size(); ++k) {
    const int node = static_cast<int>(k) + 1;
    const bool mode = std::any_of(
        density.modes.begin(), density.modes.end(),
        [&](const Mode& m) { return m.node == node; });
    out += format_shortest(density.grid.node(node));
    out += ',';
    out += format_shortest(density.grid.node(node) * spot);
    out += ',';
    out += format_shortest(density.raw[k]);
    out += ',';
    out += format_shortest(density.probabilities[k]);
    out += mode ? ",1\n" : ",0\n";
  }
  return out;
}

struct FitArtifacts {
  std::string base;
  std::string smile;
  std::string sidecar;
  std::optional<std::string> density;
  bool arbitrage_free = true;
};

}  // namespace

int cmd_fit(const RunConfig& config) {
  check_common(config);
  auto snapshots = load_inputs(config);
  std::stable_sort(snapshots.begin(), snapshots.end(),
                   [](const ChainSnapshot& a, const ChainSnapshot& b) {
                     if (a.ticker != b.ticker) return a.ticker < b.ticker;
                     const int da = serial_day(a.snapshot_date);
                     const int db = serial_day(b.snapshot_date);
                     if (da != db) return da < db;
                     return static_cast<int>(a.phase) < static_cast<int>(b.phase);
                   });

  FitConfig fit_config;
  fit_config.lambda = config.lambda;

  std::vector<FitArtifacts> slots(snapshots.size());
  parallel_for(snapshots.size(), config.jobs, [&](size_t i) {
    const ChainSnapshot& snap = snapshots[i];
    const MoneynessGrid grid =
        build_grid(snap.observations, config.step, config.padding).grid;
    const FittedSmile smile = fit_smile(snap, grid, fit_config);
    FitArtifacts& slot = slots[i];
    slot.base = snapshot_base(snap);
    slot.smile = smile_csv(smile);
    slot.sidecar = sidecar_json(snap, smile);
    slot.arbitrage_free = smile.arbitrage_free;
    if (smile.arbitrage_free) {
      const MarketParams market{snap.spot, snap.rate, snap.tau()};
      slot.density = density_csv(extract_density(smile, market), snap.spot);
    }
  });

  const fs::path out_dir = config.out_dir;
  fs::create_directories(out_dir);
  bool all_clean = true;
  for (const auto& slot : slots) {
    write_file(out_dir / (slot.base + "_smile.csv"), slot.smile);
    write_file(out_dir / (slot.base + "_smile.json"), slot.sidecar);
    if (slot.density) {
      write_file(out_dir / (slot.base + "_density.csv"), *slot.density);
    } else {
      std::fprintf(stderr,
                   "warning: %s: no arbitrage-free fit at the lambda floor; "
                   "density file skipped\n",
                   slot.base.c_str());
      all_clean = false;
    }
    std::printf("fit %s\n", slot.base.c_str());
  }
  return all_clean ? 0 : 2;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

int cmd_analyze(const RunConfig& config) {
  check_common(config);
  if (config.prominence < 0.0 || config.prominence > 1.0) {
    throw InvariantViolation("prominence must lie in [0, 1]");
  }
  if (config.strangle_width < 1) {
    throw InvariantViolation("strangle width must be >= 1 grid step");
  }
  const auto snapshots = load_inputs(config);
  const GroupedStudies grouped = group_event_studies(snapshots);
  for (const auto& gap : grouped.incomplete) {
    std::fprintf(stderr, "warning: %s %s: missing %s snapshot(s); skipped\n",
                 gap.ticker.c_str(), format_date(gap.ead_date).c_str(),
                 gap.missing.c_str());
  }
  if (grouped.studies.empty()) {
    throw MissingPhase("no complete before/after event study in the input");
  }

  EvalConfig eval;
  eval.fit.lambda = config.lambda;
  eval.prominence = config.prominence;
  eval.convexest_offset = config.convexest_offset;
  eval.strangle_width = config.strangle_width;
  eval.strangle_delta_neutral = config.strangle_delta_neutral;
  eval.grid_step = config.step;
  eval.grid_padding = config.padding;

  std::vector<StrategyOutcome> outcomes(grouped.studies.size());
  parallel_for(grouped.studies.size(), config.jobs, [&](size_t i) {
    outcomes[i] = evaluate_event(grouped.studies[i], eval);
  });

  bool all_clean = true;
  for (const auto& outcome : outcomes) {
    for (const auto& warning : outcome.warnings) {
      std::fprintf(stderr, "warning: %s %s: %s\n", outcome.ticker.c_str(),
                   outcome.quarter.c_str(), warning.c_str());
    }
    if (!outcome.arbitrage_free) all_clean = false;
  }

  const ConcaveFilter filter = config.filter == "convexest"
                                   ? ConcaveFilter::Convexest
                                   : ConcaveFilter::Definition;
  std::vector<SummaryTable> tables;
  tables.reserve(kMetricNames.size());
  for (const char* metric : kMetricNames) {
    tables.push_back(summarize(outcomes, metric, filter));
  }

  const fs::path out_dir = config.out_dir;
  fs::create_directories(out_dir);
  write_file(out_dir / "results.csv", write_results_csv(outcomes));
  for (const auto& table : tables) {
    write_file(out_dir / ("summary_" + table.metric + ".csv"),
               write_table_csv(table));
  }
  write_file(out_dir / "report.md",
             render_report(tables, outcomes, filter, ReportFormat::Markdown));
  write_file(out_dir / "report.json",
             render_report(tables, outcomes, filter, ReportFormat::Json));

  size_t concave = 0;
  for (const auto& outcome : outcomes) {
    if (outcome.is_concave) ++concave;
  }
  std::printf("analyzed %zu events (%zu concave, %zu non-concave)\n",
              outcomes.size(), concave, outcomes.size() - concave);
  return all_clean ? 0 : 2;
}

// ---------------------------------------------------------------------------
// plot
// ---------------------------------------------------------------------------

namespace {

[[nodiscard]] std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

[[nodiscard]] double parse_number(const std::string& text,
                                  const std::string& where) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw MalformedRow(where + ": bad number '" + text + "'");
  }
  return value;
}

[[nodiscard]] PlotData load_plot_data(const fs::path& smile_path) {
  std::ifstream in(smile_path);
  if (!in) throw IoError("cannot open " + smile_path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw EmptyFile(smile_path.string());
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "moneyness,iv_fitted,observed,iv_observed,residual") {
    throw MalformedRow(smile_path.string() + ": unexpected header");
  }
  PlotData data;
  std::string stem = smile_path.filename().string();
  const std::string suffix = "_smile.csv";
  if (stem.size() > suffix.size() &&
      stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0) {
    stem.erase(stem.size() - suffix.size());
  } else {
    stem = smile_path.stem().string();
  }
  data.title = stem;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_row(line);
    if (fields.size() != 5) {
      throw MalformedRow(smile_path.string() + ": expected 5 fields");
    }
    data.moneyness.push_back(parse_number(fields[0], smile_path.string()));
    data.fitted_iv.push_back(parse_number(fields[1], smile_path.string()));
    if (fields[2] == "1") {
      data.observed_m.push_back(data.moneyness.back());
      data.observed_iv.push_back(parse_number(fields[3], smile_path.string()));
    }
  }
  if (data.moneyness.empty()) throw EmptyFile(smile_path.string());

  const fs::path density_path =
      smile_path.parent_path() / (stem + "_density.csv");
  if (fs::exists(density_path)) {
    std::ifstream din(density_path);
    if (!din) throw IoError("cannot open " + density_path.string());
    std::getline(din, line);  // header
    while (std::getline(din, line)) {
      if (line.empty() || line == "\r") continue;
      const auto fields = split_csv_row(line);
      if (fields.size() != 5) {
        throw MalformedRow(density_path.string() + ": expected 5 fields");
      }
      data.density_m.push_back(parse_number(fields[0], density_path.string()));
      data.probability.push_back(
          parse_number(fields[3], density_path.string()));
      data.is_mode.push_back(fields[4] == "1" ? 1 : 0);
    }
  }
  return data;
}

}  // namespace

int cmd_plot(const RunConfig& config) {
  if (config.jobs < 1) throw InvariantViolation("jobs must be >= 1");
  struct Rendered {
    std::string name;
    std::string svg;
  };
  std::vector<Rendered> slots(config.inputs.size());
  parallel_for(config.inputs.size(), config.jobs, [&](size_t i) {
    const fs::path path = config.inputs[i];
    const PlotData data = load_plot_data(path);
    slots[i].name = data.title + ".svg";
    slots[i].svg = render_snapshot_svg(data);
  });
  const fs::path out_dir = config.out_dir;
  fs::create_directories(out_dir);
  for (const auto& slot : slots) {
    write_file(out_dir / slot.name, slot.svg);
    std::printf("plot %s\n", slot.name.c_str());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// argv entry point
// ---------------------------------------------------------------------------

namespace {

void add_grid_flags(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--lambda", config.lambda,
                  "Smoothness/fit trade-off (default 0.01)");
  cmd->add_option("--step", config.step,
                  "Moneyness grid spacing (default 0.025)");
  cmd->add_option("--padding", config.padding,
                  "Extra grid nodes beyond the observed range");
  cmd->add_option("--rate", config.rate_override,
                  "Override the risk-free rate for every snapshot");
}

void add_io_flags(CLI::App* cmd, RunConfig& config, const char* input_help) {
  cmd->add_option("inputs", config.inputs, input_help)->required();
  cmd->add_option("--out", config.out_dir,
                  "Output directory (default: current directory)");
  cmd->add_option("--jobs", config.jobs, "Worker threads (default 1)");
  cmd->set_config("--config", "",
                  "Read key=value defaults from a config file");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "Fits arbitrage-free implied-volatility smiles from sparse option "
      "chains, extracts risk-neutral densities, flags pre-announcement "
      "concavity, and scores straddle/strangle hedges around announcements."};
  app.require_subcommand(1);
  RunConfig config;

  CLI::App* fit = app.add_subcommand(
      "fit", "Fit each snapshot; write smile CSV + JSON sidecar (+ density)");
  add_io_flags(fit, config, "Option-chain CSV files");
  add_grid_flags(fit, config);

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Evaluate before/after event studies and summarize");
  add_io_flags(analyze, config, "Option-chain CSV files");
  add_grid_flags(analyze, config);
  analyze->add_option("--prominence", config.prominence,
                      "Mode prominence threshold in [0,1] (default 0.05)");
  analyze->add_option("--convexest-offset", config.convexest_offset,
                      "Convexity-measure offset in moneyness (default: one "
                      "grid step)");
  analyze->add_option("--strangle-width", config.strangle_width,
                      "Strangle legs this many grid steps from ATM "
                      "(default 2)");
  analyze->add_flag("--strangle-delta-neutral",
                    config.strangle_delta_neutral,
                    "Weight strangle legs delta-neutrally instead of "
                    "equal-dollar");
  analyze
      ->add_option("--filter", config.filter,
                   "Concave-group membership: full definition or the sign "
                   "of the convexity measure")
      ->check(CLI::IsMember({"definition", "convexest"}));
  analyze
      ->add_option("--quantile", config.quantile,
                   "Quantile rule for summary tables")
      ->check(CLI::IsMember({"type7"}));

  CLI::App* plot = app.add_subcommand(
      "plot", "Render SVG figures from fitted-smile CSVs written by `fit`");
  add_io_flags(plot, config, "Fitted-smile CSV files (*_smile.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (fit->parsed()) return cmd_fit(config);
    if (analyze->parsed()) return cmd_analyze(config);
    if (plot->parsed()) return cmd_plot(config);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("evrisk");
  for (const auto& arg : args) argv.push_back(arg.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace evrisk
