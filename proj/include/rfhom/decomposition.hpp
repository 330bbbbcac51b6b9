#pragma once

// Signed decomposition of a diagonal target state into phase-averaged
// coherent states, its sign-ancilla form, and the amplitude scaling law.

#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rfhom/box_sum_lsq.hpp"
#include "rfhom/error.hpp"
#include "rfhom/fock.hpp"

namespace rfhom {

/// Strictly increasing, non-negative PhAC amplitudes.
class AmplitudeGrid {
 public:
  AmplitudeGrid() = default;
  explicit AmplitudeGrid(std::vector<double> amplitudes) : amplitudes_(std::move(amplitudes)) {
    require(!amplitudes_.empty(), ErrorCode::InvalidArgument, "amplitude grid is empty");
    for (std::size_t j = 0; j < amplitudes_.size(); ++j) {
      require(std::isfinite(amplitudes_[j]) && amplitudes_[j] >= 0.0,
              ErrorCode::InvalidArgument, "amplitudes must be finite and non-negative");
      if (j > 0)
        require(amplitudes_[j] > amplitudes_[j - 1], ErrorCode::InvalidArgument,
                "amplitudes must be strictly increasing");
    }
  }

  /// The six-amplitude set used for the conditional single-photon build-up.
  static AmplitudeGrid standard() { return AmplitudeGrid({0.05, 0.1, 0.2, 0.4, 0.8, 1.45}); }

  std::size_t size() const noexcept { return amplitudes_.size(); }
  double operator[](std::size_t j) const { return amplitudes_.at(j); }
  const std::vector<double>& values() const noexcept { return amplitudes_; }

  bool operator==(const AmplitudeGrid&) const = default;

 private:
  std::vector<double> amplitudes_;
};

/// Upper bounds B_j on |c_j|.
class CoefficientBounds {
 public:
  CoefficientBounds() = default;
  explicit CoefficientBounds(std::vector<double> limits) : limits_(std::move(limits)) {
    for (double b : limits_)
      require(std::isfinite(b) && b > 0.0, ErrorCode::InvalidArgument,
              "coefficient bounds must be positive and finite");
  }

  static CoefficientBounds uniform(std::size_t count, double limit) {
    return CoefficientBounds(std::vector<double>(count, limit));
  }
  /// |c_j| <= 40 for every j.
  static CoefficientBounds loose(std::size_t count = 6) { return uniform(count, 40.0); }
  /// |c_1| <= 5, |c_{2..}| <= 10: suppresses the noisiest low-amplitude terms.
  static CoefficientBounds noise_suppressing(std::size_t count = 6) {
    auto v = std::vector<double>(count, 10.0);
    if (!v.empty()) v[0] = 5.0;
    return CoefficientBounds(std::move(v));
  }

  std::size_t size() const noexcept { return limits_.size(); }
  double operator[](std::size_t j) const { return limits_.at(j); }
  const std::vector<double>& values() const noexcept { return limits_; }

  bool operator==(const CoefficientBounds&) const = default;

 private:
  std::vector<double> limits_;
};

/// Signed PhAC mixture sum_j c_j rho(alpha_j) with fit diagnostics. The
/// diagnostics are empty once the mixture has been rescaled.
struct Decomposition {
  AmplitudeGrid grid;
  std::vector<double> coefficients;
  double total_weight = 0.0;
  std::optional<double> fidelity;
  std::optional<double> l2_residual;
  std::optional<double> negativity;
  std::optional<CoefficientBounds> bounds;
  int n_max = kDefaultNMax;

  /// Single-amplitude decomposition with c = [1].
  static Decomposition single(double amplitude, int n_max = kDefaultNMax);
};

struct AncillaBranchTerm {
  double amplitude = 0.0;
  double weight = 0.0;
};

/// Positive and negative branches tagged by the |+> and |-> ancilla states.
struct AncillaRepresentation {
  std::vector<AncillaBranchTerm> positive_branch;
  std::vector<AncillaBranchTerm> negative_branch;
  double total_weight = 0.0;

  double positive_sum() const noexcept {
    double s = 0.0;
    for (const auto& t : positive_branch) s += t.weight;
    return s;
  }
  double negative_sum() const noexcept {
    double s = 0.0;
    for (const auto& t : negative_branch) s += t.weight;
    return s;
  }
};

namespace detail {

inline Eigen::MatrixXd phac_basis(const AmplitudeGrid& grid, int n_max) {
  Eigen::MatrixXd basis(n_max + 1, static_cast<Eigen::Index>(grid.size()));
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto p = phac_fock(PhacSpec(grid[j]), n_max);
    for (int n = 0; n <= n_max; ++n) basis(n, static_cast<Eigen::Index>(j)) = p[n];
  }
  return basis;
}

inline double abs_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

}  // namespace detail

inline FockVector reconstruct(const Decomposition& dec, int n_max = kDefaultNMax) {
  require(dec.coefficients.size() == dec.grid.size(), ErrorCode::InvalidArgument,
          "decomposition grid and coefficients differ in length");
  require(n_max >= 0, ErrorCode::InvalidArgument, "n_max must be >= 0");
  std::vector<double> w(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (std::size_t j = 0; j < dec.grid.size(); ++j) {
    const auto p = phac_fock(PhacSpec(dec.grid[j]), n_max);
    for (int n = 0; n <= n_max; ++n) w[static_cast<std::size_t>(n)] += dec.coefficients[j] * p[n];
  }
  return {std::move(w), FockMode::signed_mixture};
}

/// Total negative mass sum_n max(0, -p_n).
inline double negativity(const FockVector& fock) {
  double s = 0.0;
  for (double w : fock.weights())
    if (w < 0.0) s -= w;
  return s;
}

inline Decomposition Decomposition::single(double amplitude, int n_max) {
  Decomposition d;
  d.grid = AmplitudeGrid({amplitude});
  d.coefficients = {1.0};
  d.total_weight = 1.0;
  d.n_max = n_max;
  const auto rec = reconstruct(d, n_max);
  d.fidelity = fidelity_to_single_photon(rec);
  d.negativity = 0.0;
  return d;
}

/// Least-squares fit of `target` by PhAC states on `grid`, with the trace
/// sum(c) = 1 held exactly and |c_j| <= B_j. Deterministic.
inline Decomposition fit_target(const FockVector& target, const AmplitudeGrid& grid,
                                const CoefficientBounds& bounds, int n_max = kDefaultNMax) {
  require(target.mode() == FockMode::physical && target.is_normalized(),
          ErrorCode::InvalidArgument, "fit target must be a normalized physical state");
  require(bounds.size() == grid.size(), ErrorCode::InvalidArgument,
          "grid and bounds must have the same length");
  require(n_max >= 0, ErrorCode::InvalidArgument, "n_max must be >= 0");
  for (std::size_t j = 1; j < grid.size(); ++j)
    require(grid[j] - grid[j - 1] > 1e-12, ErrorCode::DegenerateGrid,
            "grid amplitudes coincide within 1e-12");
  double bound_sum = 0.0;
  for (double b : bounds.values()) bound_sum += b;
  require(bound_sum >= 1.0, ErrorCode::InfeasibleBounds,
          "bounds sum below 1: the trace constraint is unreachable");

  Eigen::VectorXd t = Eigen::VectorXd::Zero(n_max + 1);
  for (int n = 0; n <= std::min(n_max, target.n_max()); ++n) t[n] = target[n];

  const auto basis = detail::phac_basis(grid, n_max);
  const auto solution = solve_box_sum_lsq(basis, t, bounds.values(), 1.0);

  Decomposition dec;
  dec.grid = grid;
  dec.coefficients.assign(solution.x.data(), solution.x.data() + solution.x.size());
  dec.total_weight = detail::abs_sum(dec.coefficients);
  dec.bounds = bounds;
  dec.n_max = n_max;

  const auto rec = reconstruct(dec, n_max);
  double rss = 0.0;
  for (int n = 0; n <= n_max; ++n) rss += (rec[n] - t[n]) * (rec[n] - t[n]);
  dec.fidelity = fidelity_to_single_photon(rec);
  dec.l2_residual = std::sqrt(rss);
  dec.negativity = negativity(rec);
  return dec;
}

inline AncillaRepresentation sign_split(const Decomposition& dec) {
  AncillaRepresentation rep;
  for (std::size_t j = 0; j < dec.coefficients.size(); ++j) {
    const double c = dec.coefficients[j];
    if (c > 0.0) rep.positive_branch.push_back({dec.grid[j], c});
    else if (c < 0.0) rep.negative_branch.push_back({dec.grid[j], -c});
  }
  rep.total_weight = detail::abs_sum(dec.coefficients);
  return rep;
}

/// alpha_j -> x alpha_j. Normally ordered n-th order moments pick up x^{2n};
/// the fit diagnostics no longer describe the scaled mixture and are dropped.
inline Decomposition scale(const Decomposition& dec, double x) {
  require(std::isfinite(x) && x > 0.0, ErrorCode::InvalidArgument, "scale factor must be > 0");
  if (x == 1.0) return dec;
  std::vector<double> a = dec.grid.values();
  for (double& v : a) v *= x;
  Decomposition out = dec;
  out.grid = AmplitudeGrid(std::move(a));
  out.fidelity.reset();
  out.l2_residual.reset();
  out.negativity.reset();
  return out;
}

/// M2 = sum c_j alpha_j^2 and M4 = sum c_j alpha_j^4: the untruncated
/// factorial moments of the mixture.
inline FactorialMoments mixture_moments(const Decomposition& dec) {
  FactorialMoments m;
  for (std::size_t j = 0; j < dec.grid.size(); ++j) {
    const double a2 = dec.grid[j] * dec.grid[j];
    m.m2 += dec.coefficients[j] * a2;
    m.m4 += dec.coefficients[j] * a2 * a2;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Decomposition record: '#'-prefixed header of diagnostics, then one
// "index amplitude coefficient" line per grid point. Values are printed with
// 17 significant digits so a record reloads bit-exactly.

namespace detail {

inline std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string exact_or_na(const std::optional<double>& v) {
  return v ? exact(*v) : std::string("n/a");
}

inline std::optional<double> parse_optional(const std::string& s) {
  if (s == "n/a") return std::nullopt;
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    require(pos == s.size(), ErrorCode::ParseError, "trailing characters in number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::ParseError, "bad number '" + s + "'");
  }
}

}  // namespace detail

inline void write_record(std::ostream& os, const Decomposition& dec) {
  os << "# rfhom decomposition\n";
  os << "# n_max " << dec.n_max << '\n';
  os << "# fidelity " << detail::exact_or_na(dec.fidelity) << '\n';
  os << "# l2_residual " << detail::exact_or_na(dec.l2_residual) << '\n';
  os << "# negativity " << detail::exact_or_na(dec.negativity) << '\n';
  os << "# total_weight " << detail::exact(dec.total_weight) << '\n';
  if (dec.bounds) {
    os << "# bounds";
    for (double b : dec.bounds->values()) os << ' ' << detail::exact(b);
    os << '\n';
  }
  for (std::size_t j = 0; j < dec.grid.size(); ++j)
    os << j << ' ' << detail::exact(dec.grid[j]) << ' ' << detail::exact(dec.coefficients[j])
       << '\n';
}

inline Decomposition read_record(std::istream& is) {
  Decomposition dec;
  std::vector<double> amplitudes;
  std::string line;
  bool have_magic = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      ls >> hash >> key;
      if (key == "rfhom") {
        have_magic = true;
        continue;
      }
      std::vector<std::string> values;
      for (std::string v; ls >> v;) values.push_back(v);
      require(key == "bounds" || values.size() == 1, ErrorCode::ParseError,
              "malformed header line: " + line);
      if (key == "n_max") dec.n_max = std::stoi(values[0]);
      else if (key == "fidelity") dec.fidelity = detail::parse_optional(values[0]);
      else if (key == "l2_residual") dec.l2_residual = detail::parse_optional(values[0]);
      else if (key == "negativity") dec.negativity = detail::parse_optional(values[0]);
      else if (key == "total_weight") dec.total_weight = *detail::parse_optional(values[0]);
      else if (key == "bounds") {
        std::vector<double> b;
        for (const auto& v : values) b.push_back(*detail::parse_optional(v));
        dec.bounds = CoefficientBounds(std::move(b));
      } else {
        throw Error(ErrorCode::ParseError, "unknown header key '" + key + "'");
      }
      continue;
    }
    std::size_t index = 0;
    std::string amp, coef, extra;
    require(static_cast<bool>(ls >> index >> amp >> coef) && !(ls >> extra),
            ErrorCode::ParseError, "malformed decomposition line: " + line);
    require(index == amplitudes.size(), ErrorCode::ParseError,
            "decomposition indices must be consecutive from 0");
    amplitudes.push_back(*detail::parse_optional(amp));
    dec.coefficients.push_back(*detail::parse_optional(coef));
  }
  require(have_magic, ErrorCode::ParseError, "missing '# rfhom decomposition' header");
  require(!amplitudes.empty(), ErrorCode::ParseError, "decomposition has no terms");
  dec.grid = AmplitudeGrid(std::move(amplitudes));
  if (dec.bounds)
    require(dec.bounds->size() == dec.grid.size(), ErrorCode::ParseError,
            "bounds length differs from grid length");
  return dec;
}

}  // namespace rfhom
