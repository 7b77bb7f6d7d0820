#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "chainent/chainent.hpp"
#include "cli/config.hpp"

namespace chainent::cli {

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string placement;
  std::string mode;
  std::string grid;
  std::string input;
  bool bits = false;
  bool timing = false;
  int threads = 0;
};

RunConfig resolve(const Flags& f) {
  if (f.config.empty()) throw ConfigError("--config is required");
  RunConfig cfg = load_config(f.config);
  if (!f.placement.empty()) cfg.placement = parse_placement(f.placement);
  if (!f.mode.empty()) cfg.mode = parse_mode(f.mode);
  if (!f.grid.empty()) cfg.grid = parse_grid(f.grid);
  if (!f.out.empty()) cfg.output = f.out;
  if (f.bits) cfg.bits = true;
  if (f.timing) cfg.timing = true;
  if (f.threads > 0) cfg.threads = f.threads;
  return cfg;
}

// Writes to the configured output file, or to `fallback` when none is set.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw ConfigError(fmt::format("cannot open output file '{}'", path));
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

double unit_scale(const RunConfig& cfg) { return cfg.bits ? 1.0 / std::numbers::ln2 : 1.0; }

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const ValidationReport r = validate(cfg.couplings(), cfg.mode, cfg.quadrature_points);
  fmt::print(out, "mode={} min(λ)={:g} min(q)={:g} min(λ−q)={:g} {}\n", to_string(r.mode), r.min_lambda,
             r.min_q, r.min_gap, r.pass ? "pass" : "fail");
  for (const auto& m : r.messages) fmt::print(out, "  {}\n", m);
  return r.pass ? kOk : kValidation;
}

int cmd_entropy(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.block) throw ConfigError("entropy needs a [block] section");
  const Geometry geom = cfg.geometry();
  const BlockSpec block{cfg.block->l_x, cfg.block->l_y, cfg.placement, cfg.block->chains};
  block.check(geom);
  const auto pair = ground_state_correlations(cfg.couplings(), geom, cfg.mode);

  SweepTable table;
  table.fingerprint = fingerprint(pair, cfg.placement);
  const auto start = std::chrono::steady_clock::now();
  const EntropyResult r = block_entropy(pair, block);
  const auto stop = std::chrono::steady_clock::now();
  const double ms = cfg.timing ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
  table.rows.push_back({block.l_x, block.l_y, r.s, r.s1, r.s2, ms});

  Sink sink(cfg.output, out);
  write_sweep_csv(table, sink.get(), unit_scale(cfg));
  const double u = unit_scale(cfg);
  fmt::print(err, "S={:.12g} S1={:.12g} S2={:.12g} {} (clamped eigenvalues: {})\n", r.s * u, r.s1 * u,
             r.s2 * u, cfg.bits ? "bits" : "nats", r.clamp_count);
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.grid) throw ConfigError("sweep needs a grid (--grid or run.grid)");
  const auto pair = ground_state_correlations(cfg.couplings(), cfg.geometry(), cfg.mode);
  const SweepTable table =
      sweep(pair, *cfg.grid, SweepOptions{cfg.placement, cfg.threads, cfg.timing});
  Sink sink(cfg.output, out);
  write_sweep_csv(table, sink.get(), unit_scale(cfg));
  fmt::print(err, "{} rows; {}\n", table.rows.size(), table.fingerprint);
  return kOk;
}

int cmd_fit(const Flags& flags, std::ostream& out, std::ostream& err) {
  std::ifstream in(flags.input, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open sweep CSV '{}'", flags.input));
  const SweepTable table = read_sweep_csv(in);
  const ScalingFit fit = scaling_fit(table);
  Sink sink(flags.out, out);
  auto& o = sink.get();
  fmt::print(o, "b={:.17g}\na1={:.17g}\na2={:.17g}\na0={:.17g}\nrms_residual={:.17g}\n", fit.b, fit.a1,
             fit.a2, fit.a0, fit.rms_residual);
  try {
    const BoundsResidual br = bounds_residual(table);
    fmt::print(o, "residual_r_squared={:.17g}\n", br.r_squared);
  } catch (const Error& e) {
    fmt::print(err, "bounds residual skipped: {}\n", e.what());
  }
  return kOk;
}

int cmd_oracle_check(const RunConfig& cfg, std::ostream& out) {
  const Geometry geom = cfg.geometry();
  const ChainCouplings c = cfg.couplings();
  const auto pair = ground_state_correlations(c, geom, cfg.mode);
  const DenseCorrelations dense = dense_ground_state(c, geom, cfg.dense_cap);

  long blocks = 0;
  long mismatches = 0;
  double max_ds = 0.0;
  double max_dmu = 0.0;
  for (int lx = 1; lx <= geom.n_x; ++lx) {
    for (int ly = 1; ly <= geom.n_y; ++ly) {
      for (int off = 0; off + lx <= geom.n_x; ++off) {
        const BlockSpec block{lx, ly, Placement::offset(off)};
        const EntropyResult r = block_entropy(pair, block);
        const auto idx = block_indices(geom, block);
        const double ds = std::abs(r.s - dense_entropy(dense, idx));
        const auto structured = r.spectrum.multiset();
        const auto reference = dense_block_eigenvalues(dense, idx);
        double dmu = 0.0;
        for (std::size_t i = 0; i < reference.size(); ++i) {
          dmu = std::max(dmu, std::abs(std::max(reference[i], 1.0) - structured[i]));
        }
        max_ds = std::max(max_ds, ds);
        max_dmu = std::max(max_dmu, dmu);
        ++blocks;
        if (ds >= cfg.tolerance || dmu >= cfg.tolerance) {
          ++mismatches;
          fmt::print(out, "mismatch l_x={} l_y={} offset={} dS={:.3e} dmu={:.3e}\n", lx, ly, off, ds, dmu);
        }
      }
    }
  }
  fmt::print(out, "blocks={} mismatches={} max_dS={:.3e} max_dmu={:.3e} tolerance={:g}\n", blocks,
             mismatches, max_ds, max_dmu, cfg.tolerance);
  return mismatches == 0 ? kOk : kAcceptance;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const ChainCouplings c = cfg.couplings();
  Sink sink(cfg.output, out);
  auto& o = sink.get();
  fmt::print(o, "n_y,min_freq,max_freq,min_freq_sqrt_ny\n");
  std::vector<int> nys{cfg.n_y, 4, 16, 64, 256};
  std::sort(nys.begin(), nys.end());
  nys.erase(std::unique(nys.begin(), nys.end()), nys.end());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int ny : nys) {
    const FrequencyRange f = spectrum_gap(c, Geometry(cfg.n_x, ny), cfg.mode);
    const double scaled = f.min_freq * std::sqrt(static_cast<double>(ny));
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
    fmt::print(o, "{},{:.17g},{:.17g},{:.17g}\n", ny, f.min_freq, f.max_freq, scaled);
  }
  fmt::print(o, "# sqrt(n_y) scaling spread = {:.3e}\n", hi - lo);
  return kOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::BlockOutOfRange:
    case ErrorCode::SizeCap:
    case ErrorCode::IndexOutOfRange:
      return kUsage;
    case ErrorCode::ValidationFailed:
      return kValidation;
    default:
      return kNumeric;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement entropy of collectively coupled harmonic chains", "chainent"};
  app.require_subcommand(1);
  Flags flags;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "Configuration file")->required();
    sub->add_option("--placement", flags.placement, "corner|centered|offset=<k>");
    sub->add_option("--mode", flags.mode, "strict|permissive");
    sub->add_option("--out", flags.out, "Write machine-readable output to this file");
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check coupling positivity");
  add_common(validate_cmd);
  auto* entropy_cmd = app.add_subcommand("entropy", "Entropy of one block");
  add_common(entropy_cmd);
  entropy_cmd->add_flag("--bits", flags.bits, "Report entropies in bits");
  entropy_cmd->add_flag("--timing", flags.timing, "Record wall time");
  auto* sweep_cmd = app.add_subcommand("sweep", "Entropy over a grid of block sizes (CSV)");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--grid", flags.grid, "lx=2,4,8;ly=16,32,64");
  sweep_cmd->add_option("--threads", flags.threads, "Worker threads");
  sweep_cmd->add_flag("--bits", flags.bits, "Report entropies in bits");
  sweep_cmd->add_flag("--timing", flags.timing, "Record wall time (output is then not reproducible)");
  auto* fit_cmd = app.add_subcommand("fit", "Fit S ~ b l_x ln l_y + a1 l_x + a2 l_y + a0 to a sweep CSV");
  fit_cmd->add_option("input", flags.input, "Sweep CSV")->required();
  fit_cmd->add_option("--out", flags.out, "Write the fit to this file");
  auto* oracle_cmd = app.add_subcommand("oracle-check", "Structured path vs dense reference on all blocks");
  add_common(oracle_cmd);
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Normal-mode frequency range and sqrt(n_y) scaling");
  add_common(spectrum_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kUsage;
  }

  try {
    if (*fit_cmd) return cmd_fit(flags, out, err);
    const RunConfig cfg = resolve(flags);
    if (*validate_cmd) return cmd_validate(cfg, out);
    if (*entropy_cmd) return cmd_entropy(cfg, out, err);
    if (*sweep_cmd) return cmd_sweep(cfg, out, err);
    if (*oracle_cmd) return cmd_oracle_check(cfg, out);
    if (*spectrum_cmd) return cmd_spectrum(cfg, out);
  } catch (const ConfigError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kUsage;
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return exit_code_for(e.code());
  }
  return kUsage;
}

}  // namespace chainent::cli
