#pragma once

// Command-line front end. `run_cli` is the whole program; tools/rfhom.cpp
// only forwards argv so the commands can be tested in-process.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rfhom/config.hpp"
#include "rfhom/decomposition.hpp"
#include "rfhom/error.hpp"
#include "rfhom/experiment.hpp"
#include "rfhom/interference.hpp"
#include "rfhom/plot.hpp"

namespace rfhom {

enum class OracleKind { phac, single_photon, conditional };

/// Analytic curve on nominal delays (units of tau), in the CSV schema.
/// Single-photon raw values carry the 1/2 baseline of a built two-photon input.
inline HOMCurve oracle_curve(OracleKind kind, std::span<const double> delays,
                             const Decomposition* dec = nullptr) {
  HOMCurve c;
  switch (kind) {
    case OracleKind::phac: c.metadata.mode = "oracle_phac"; break;
    case OracleKind::single_photon: c.metadata.mode = "oracle_single_photon"; break;
    case OracleKind::conditional:
      require(dec != nullptr, ErrorCode::InvalidArgument, "conditional oracle needs a decomposition");
      c.metadata.mode = "oracle_conditional";
      c.metadata.fidelity = dec->fidelity;
      c.metadata.total_weight = dec->total_weight;
      break;
  }
  for (double d : delays) {
    const double f = overlap_f(d, 1.0);
    double raw = 0.0;
    double norm = 0.0;
    if (kind == OracleKind::phac) {
      raw = norm = g2_phac_analytic(f);
    } else if (kind == OracleKind::single_photon) {
      norm = g2_single_analytic(f);
      raw = 0.5 * norm;
    } else {
      const auto g = conditional_g2_analytic(*dec, f);
      raw = g.raw;
      norm = g.normalized;
    }
    c.delays.push_back(d);
    c.g2_raw.push_back(raw);
    c.g2_normalized.push_back(norm);
    c.stderr_.push_back(0.0);
    c.shots.push_back(0);
  }
  return c;
}

namespace detail {

inline std::string with_suffix(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  const auto ext = p.extension().string();
  p.replace_extension();
  return p.string() + suffix + ext;
}

inline void write_file(const std::string& path, const auto& writer) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), ErrorCode::InvalidArgument, "cannot open '" + path + "' for writing");
  writer(os);
  os.flush();
  require(static_cast<bool>(os), ErrorCode::InvalidArgument, "failed writing '" + path + "'");
}

inline Decomposition load_decomposition(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorCode::InvalidArgument, "cannot open '" + path + "'");
  return read_record(is);
}

inline void plot_curve(const std::string& path, const HOMCurve& measured, const HOMCurve& oracle,
                       const std::string& title) {
  const PlotSeries s[] = {{measured.delays, measured.g2_normalized, "#1f4e9c", false},
                          {oracle.delays, oracle.g2_normalized, "#c0392b", true}};
  write_file(path, [&](std::ostream& os) { write_svg_plot(os, s, title); });
}

inline SnrCalibration parse_snr_flag(const std::string& text) {
  const auto at = text.find('@');
  require(at != std::string::npos, ErrorCode::ParseError, "--snr-db expects X@AMP, got '" + text + "'");
  return {parse_real(text.substr(0, at)), parse_real(text.substr(at + 1))};
}

}  // namespace detail

struct CliOptions {
  std::string config_path;
  std::string output;
  std::string plot;
  std::string decomposition;
  std::string dump_trace;
  std::optional<std::uint64_t> seed;
  std::optional<int> shots;
  std::optional<int> phases;
  std::optional<int> delays;
  std::optional<std::string> snr_db;
  std::optional<double> amplitude;
  std::optional<unsigned> threads;
  bool noiseless = false;
};

inline RunConfig resolve_run_config(const CliOptions& o) {
  RunConfig rc;
  if (!o.config_path.empty()) {
    std::ifstream is(o.config_path);
    require(static_cast<bool>(is), ErrorCode::InvalidArgument,
            "cannot open config '" + o.config_path + "'");
    load_config(rc, is);
  }
  if (o.seed) rc.sweep.noise.seed = *o.seed;
  if (o.shots) rc.shots = *o.shots;
  if (o.phases) rc.sweep.phase_count = *o.phases;
  if (o.delays) rc.delay_count = *o.delays;
  if (o.threads) rc.sweep.threads = *o.threads;
  if (o.amplitude) rc.oracle_amplitude = *o.amplitude;
  if (o.snr_db) {
    rc.snr = detail::parse_snr_flag(*o.snr_db);
    rc.source_variance.reset();
  }
  if (o.noiseless) rc.noiseless = true;
  return rc;
}

inline int cmd_fit(const RunConfig& rc, const CliOptions& o, std::ostream& out) {
  const auto target = rc.target_state();
  const auto dec = fit_target(target, rc.fit_grid, rc.bounds(), rc.n_max);
  const std::string path = o.output.empty() ? "decomposition.txt" : o.output;
  detail::write_file(path, [&](std::ostream& os) { write_record(os, dec); });
  char buf[200];
  std::snprintf(buf, sizeof buf, "fidelity=%.9f residual=%.6e negativity=%.6e total_weight=%.9g\n",
                *dec.fidelity, *dec.l2_residual, *dec.negativity, dec.total_weight);
  out << buf;
  for (std::size_t j = 0; j < dec.grid.size(); ++j) {
    std::snprintf(buf, sizeof buf, "c[%zu] alpha=%.6g coefficient=%.12g\n", j, dec.grid[j],
                  dec.coefficients[j]);
    out << buf;
  }
  return 0;
}

inline Decomposition decomposition_for(const RunConfig& rc, const CliOptions& o) {
  if (!o.decomposition.empty()) return detail::load_decomposition(o.decomposition);
  return fit_target(rc.target_state(), rc.fit_grid, rc.bounds(), rc.n_max);
}

inline int cmd_sweep_phac(const RunConfig& rc, const CliOptions& o, std::ostream& out) {
  SweepConfig s = rc.resolved_sweep();
  s.mode = SweepMode::phac_pairs;
  const auto curves = run_phac_hom(s);
  const std::string base = o.output.empty() ? "phac.csv" : o.output;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const std::string path = detail::with_suffix(base, "_a" + std::to_string(i));
    detail::write_file(path, [&](std::ostream& os) { write_curve_csv(os, curves[i]); });
    double lo = curves[i].g2_normalized.front();
    for (double g : curves[i].g2_normalized) lo = std::min(lo, g);
    out << path << " amplitude=" << s.amplitudes[i] << " min_g2_normalized=" << lo << '\n';
    if (!o.plot.empty()) {
      const auto oracle = oracle_curve(OracleKind::phac, curves[i].delays);
      detail::plot_curve(detail::with_suffix(o.plot, "_a" + std::to_string(i)), curves[i], oracle,
                         "PhAC pair, amplitude " + std::to_string(s.amplitudes[i]));
    }
  }
  return 0;
}

inline int cmd_sweep_conditional(const RunConfig& rc, const CliOptions& o, std::ostream& out) {
  SweepConfig s = rc.resolved_sweep();
  s.mode = SweepMode::conditional;
  s.decomposition = decomposition_for(rc, o);
  const auto curve = run_conditional_hom(s);
  const std::string path = o.output.empty() ? "conditional.csv" : o.output;
  detail::write_file(path, [&](std::ostream& os) { write_curve_csv(os, curve); });
  double lo = curve.g2_normalized.front();
  for (double g : curve.g2_normalized) lo = std::min(lo, g);
  out << path << " min_g2_normalized=" << lo << '\n';
  if (!o.plot.empty()) {
    const auto oracle = oracle_curve(OracleKind::conditional, curve.delays, &*s.decomposition);
    detail::plot_curve(o.plot, curve, oracle, "Conditionally built single photon");
  }
  return 0;
}

inline int cmd_oracle(const RunConfig& rc, const CliOptions& o, std::ostream& out) {
  const auto delays = uniform_delays(rc.delay_count, rc.delay_max);
  const std::string base = o.output.empty() ? "oracle.csv" : o.output;
  auto phac = oracle_curve(OracleKind::phac, delays);
  phac.metadata.amplitude = rc.oracle_amplitude;
  const auto single = oracle_curve(OracleKind::single_photon, delays);
  const auto dec = decomposition_for(rc, o);
  const auto cond = oracle_curve(OracleKind::conditional, delays, &dec);
  const std::pair<const char*, const HOMCurve*> outputs[] = {
      {"_phac", &phac}, {"_single", &single}, {"_conditional", &cond}};
  for (const auto& [suffix, curve] : outputs) {
    const std::string path = detail::with_suffix(base, suffix);
    detail::write_file(path, [&](std::ostream& os) { write_curve_csv(os, *curve); });
    out << path << '\n';
  }
  return 0;
}

inline int cmd_snr(const RunConfig& rc, std::ostream& out) {
  const SweepConfig s = rc.resolved_sweep();
  require(!s.noise.noiseless(), ErrorCode::UndefinedSNR, "SNR is undefined for a noiseless run");
  char buf[120];
  std::snprintf(buf, sizeof buf, "source_variance=%.9e\n", s.noise.source_variance);
  out << buf;
  for (double a : rc.fit_grid.values()) {
    const double abs_amp = a * s.amplitude_scale;
    std::snprintf(buf, sizeof buf, "amplitude=%.6g snr_db=%.4f\n", a, snr_db(abs_amp, s.noise));
    out << buf;
  }
  return 0;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rfhom: radio-frequency HOM interference with conditionally built states"};
  app.require_subcommand(1);
  CliOptions o;

  const auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "INI configuration file");
    sub->add_option("--output", o.output, "output path");
    sub->add_option("--seed", o.seed, "noise seed");
    sub->add_flag("--noiseless", o.noiseless, "disable all noise");
    sub->add_option("--shots", o.shots, "noise realizations per phase and point");
    sub->add_option("--phases", o.phases, "relative phases on [-pi, pi)");
    sub->add_option("--delays", o.delays, "number of delays on [-delay_max, delay_max]");
    sub->add_option("--snr-db", o.snr_db, "calibrate source noise: X@AMP means X dB at amplitude AMP");
    sub->add_option("--plot", o.plot, "write an SVG plot next to the CSV");
    sub->add_option("--decomposition", o.decomposition, "decomposition record to use");
    sub->add_option("--amplitude", o.amplitude, "PhAC amplitude annotated on the oracle curve");
    sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    sub->add_option("--dump-trace", o.dump_trace, "write the delay-0 input pulse as text");
  };
  auto* fit = app.add_subcommand("fit", "fit a Fock state with signed PhAC mixtures");
  auto* phac = app.add_subcommand("sweep-phac", "HOM curves of equal-amplitude PhAC pairs");
  auto* cond = app.add_subcommand("sweep-conditional", "HOM curve of the conditionally built state");
  auto* oracle = app.add_subcommand("oracle", "analytic HOM curves");
  auto* snr = app.add_subcommand("snr", "SNR of each grid amplitude under the noise calibration");
  for (auto* sub : {fit, phac, cond, oracle, snr}) common(sub);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    const RunConfig rc = resolve_run_config(o);
    if (!o.dump_trace.empty()) {
      const SweepConfig s = rc.resolved_sweep();
      const auto trace = synthesize(s.pulse, s.amplitude_scale * rc.fit_grid.values().back(), 0.0,
                                    0.0, s.record_length());
      detail::write_file(o.dump_trace, [&](std::ostream& os) { write_trace_text(os, trace); });
    }
    if (fit->parsed()) return cmd_fit(rc, o, out);
    if (phac->parsed()) return cmd_sweep_phac(rc, o, out);
    if (cond->parsed()) return cmd_sweep_conditional(rc, o, out);
    if (oracle->parsed()) return cmd_oracle(rc, o, out);
    return cmd_snr(rc, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: Internal: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace rfhom
