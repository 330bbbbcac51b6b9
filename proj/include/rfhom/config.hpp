#pragma once

// Run configuration: a flat INI file with one section per module. Every key
// is optional; defaults reproduce the 120 MHz / 82-cycle / 16-phase setup
// with the standard six-amplitude grid.
//
//   [pulse]  carrier_freq (Hz), cycles_per_pulse, samples_per_cycle
//   [noise]  source_variance, coupler_variance (per quadrature per sample),
//            snr_db, snr_amplitude (calibration used when source_variance is
//            absent), seed
//   [sweep]  phase_count, delay_count, delay_max (tau), shots, amplitudes,
//            amplitude_scale, record_length_tau, baseline_min_delay (tau),
//            normalization (raw|baseline), subtract_noise_baseline,
//            gate_to_pulses, threads
//   [fit]    amplitudes, bounds (one value or one per amplitude), n_max,
//            target (fock:N or phac:ALPHA)
//   [oracle] amplitude

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "rfhom/decomposition.hpp"
#include "rfhom/error.hpp"
#include "rfhom/experiment.hpp"
#include "rfhom/waveform.hpp"

namespace rfhom {

struct SnrCalibration {
  double snr_db = 25.0;
  double amplitude = 0.4;
};

struct RunConfig {
  SweepConfig sweep;
  int delay_count = 201;
  double delay_max = 1.5;
  std::optional<int> shots;  // defaults to 1 noiseless, 200 noisy
  std::optional<double> source_variance;
  SnrCalibration snr;
  bool noiseless = false;

  AmplitudeGrid fit_grid = AmplitudeGrid::standard();
  std::optional<CoefficientBounds> fit_bounds;  // defaults to 40 per amplitude
  int n_max = kDefaultNMax;
  std::string target = "fock:1";

  std::optional<double> oracle_amplitude;

  /// Fit target: "fock:N" for the N-photon Fock state, "phac:A" for a
  /// phase-averaged coherent state of amplitude A.
  FockVector target_state() const {
    const auto colon = target.find(':');
    require(colon != std::string::npos, ErrorCode::ParseError,
            "fit.target must be fock:N or phac:ALPHA");
    const std::string kind = target.substr(0, colon);
    const std::string arg = target.substr(colon + 1);
    if (kind == "fock") return FockVector::fock_state(static_cast<int>(std::stol(arg)), n_max);
    if (kind == "phac") {
      // Truncated Poisson weights lose the tail; renormalize so the target is a state.
      const auto p = phac_fock(PhacSpec(std::stod(arg)), n_max);
      std::vector<double> w(p.weights().begin(), p.weights().end());
      const double t = p.trace();
      for (double& x : w) x /= t;
      return {std::move(w), FockMode::physical};
    }
    throw Error(ErrorCode::ParseError, "fit.target must be fock:N or phac:ALPHA");
  }

  CoefficientBounds bounds() const {
    return fit_bounds ? *fit_bounds : CoefficientBounds::loose(fit_grid.size());
  }

  /// Folds the derived settings (delay grid, shot count, noise calibration)
  /// into `sweep`.
  SweepConfig resolved_sweep() const {
    SweepConfig s = sweep;
    s.delay_grid = uniform_delays(delay_count, delay_max);
    if (noiseless) {
      s.noise.source_variance = 0.0;
      s.noise.coupler_variance = 0.0;
    } else {
      s.noise.source_variance =
          source_variance ? *source_variance : calibrate_noise(snr.amplitude, snr.snr_db);
    }
    s.shots_per_point = shots ? *shots : (s.noise.noiseless() ? 1 : 200);
    return s;
  }
};

namespace detail {

inline std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    require(b != std::string::npos, ErrorCode::ParseError, "empty list item in '" + text + "'");
    out.push_back(*parse_optional(item.substr(b, e - b + 1)));
  }
  require(!out.empty(), ErrorCode::ParseError, "empty list");
  return out;
}

inline bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(ErrorCode::ParseError, "bad boolean '" + v + "'");
}

inline long parse_int(const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    require(pos == v.size(), ErrorCode::ParseError, "bad integer '" + v + "'");
    return x;
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::ParseError, "bad integer '" + v + "'");
  }
}

inline double parse_real(const std::string& v) { return *parse_optional(v); }

}  // namespace detail

/// Applies one `section.key = value` setting. Unknown keys are errors.
inline void apply_setting(RunConfig& rc, const std::string& section, const std::string& key,
                          const std::string& value) {
  using namespace detail;
  auto& s = rc.sweep;
  const std::string k = section + "." + key;
  if (k == "pulse.carrier_freq") s.pulse.carrier_freq = parse_real(value);
  else if (k == "pulse.cycles_per_pulse") s.pulse.cycles_per_pulse = static_cast<int>(parse_int(value));
  else if (k == "pulse.samples_per_cycle") s.pulse.samples_per_cycle = static_cast<int>(parse_int(value));
  else if (k == "noise.source_variance") rc.source_variance = parse_real(value);
  else if (k == "noise.coupler_variance") s.noise.coupler_variance = parse_real(value);
  else if (k == "noise.snr_db") rc.snr.snr_db = parse_real(value);
  else if (k == "noise.snr_amplitude") rc.snr.amplitude = parse_real(value);
  else if (k == "noise.seed") s.noise.seed = static_cast<std::uint64_t>(parse_int(value));
  else if (k == "sweep.phase_count") s.phase_count = static_cast<int>(parse_int(value));
  else if (k == "sweep.delay_count") rc.delay_count = static_cast<int>(parse_int(value));
  else if (k == "sweep.delay_max") rc.delay_max = parse_real(value);
  else if (k == "sweep.shots") rc.shots = static_cast<int>(parse_int(value));
  else if (k == "sweep.amplitudes") s.amplitudes = AmplitudeGrid(parse_list(value));
  else if (k == "sweep.amplitude_scale") s.amplitude_scale = parse_real(value);
  else if (k == "sweep.record_length_tau") s.record_length_tau = parse_real(value);
  else if (k == "sweep.baseline_min_delay") s.baseline_min_delay = parse_real(value);
  else if (k == "sweep.normalization") {
    if (value == "raw") s.normalization = Normalization::raw;
    else if (value == "baseline") s.normalization = Normalization::baseline;
    else throw Error(ErrorCode::ParseError, "normalization must be raw or baseline");
  } else if (k == "sweep.subtract_noise_baseline") s.subtract_noise_baseline = parse_bool(value);
  else if (k == "sweep.gate_to_pulses") s.gate_to_pulses = parse_bool(value);
  else if (k == "sweep.threads") s.threads = static_cast<unsigned>(parse_int(value));
  else if (k == "sweep.noiseless") rc.noiseless = parse_bool(value);
  else if (k == "fit.amplitudes") rc.fit_grid = AmplitudeGrid(parse_list(value));
  else if (k == "fit.bounds") rc.fit_bounds = CoefficientBounds(parse_list(value));
  else if (k == "fit.n_max") rc.n_max = static_cast<int>(parse_int(value));
  else if (k == "fit.target") rc.target = value;
  else if (k == "oracle.amplitude") rc.oracle_amplitude = parse_real(value);
  else throw Error(ErrorCode::ParseError, "unknown config key '" + k + "'");
}

/// Parses INI text on top of the defaults already in `rc`.
inline void load_config(RunConfig& rc, std::istream& is) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  for (const auto& [section, body] : tree) {
    require(!body.empty(), ErrorCode::ParseError,
            "config key '" + section + "' must live inside a section");
    for (const auto& [key, node] : body) apply_setting(rc, section, key, node.data());
  }
  // A single bound broadcasts over the fit grid.
  if (rc.fit_bounds && rc.fit_bounds->size() == 1 && rc.fit_grid.size() > 1)
    rc.fit_bounds = CoefficientBounds::uniform(rc.fit_grid.size(), (*rc.fit_bounds)[0]);
  if (rc.fit_bounds)
    require(rc.fit_bounds->size() == rc.fit_grid.size(), ErrorCode::ParseError,
            "fit.bounds must have one value or one per amplitude");
}

}  // namespace rfhom
