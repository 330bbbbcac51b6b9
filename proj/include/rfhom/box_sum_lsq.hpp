#pragma once

// Primal active-set solver for
//
//     minimize ||A x - t||^2   subject to   sum(x) = total,  |x_j| <= B_j.
//
// Each subproblem fixes the active bounds and solves the equality-constrained
// least-squares problem on the free variables in the null space of the sum
// constraint, using a column-pivoted Householder QR of A_free * Z. The normal
// equations are never formed: PhAC bases are badly conditioned (cond(A) is
// around 1e7 on typical grids) and squaring that loses most of the digits.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rfhom/error.hpp"

namespace rfhom {

enum class BoundState { free, lower, upper };

struct BoxSumLsqResult {
  Eigen::VectorXd x;
  std::vector<BoundState> state;
  int iterations = 0;
};

namespace detail {

// Orthonormal basis (k x (k-1)) of the complement of the all-ones vector.
inline Eigen::MatrixXd sum_nullspace(Eigen::Index k) {
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(k, 1);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(ones);
  Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(k - 1);
}

}  // namespace detail

inline BoxSumLsqResult solve_box_sum_lsq(const Eigen::MatrixXd& design,
                                         const Eigen::VectorXd& target,
                                         std::span<const double> bounds,
                                         double total = 1.0) {
  const Eigen::Index cols = design.cols();
  require(cols >= 1, ErrorCode::InvalidArgument, "empty design matrix");
  require(static_cast<Eigen::Index>(bounds.size()) == cols,
          ErrorCode::InvalidArgument, "bounds and design disagree in size");
  require(design.rows() == target.size(), ErrorCode::InvalidArgument,
          "target and design disagree in size");

  double bound_sum = 0.0;
  for (double b : bounds) {
    require(std::isfinite(b) && b > 0.0, ErrorCode::InvalidArgument,
            "coefficient bounds must be positive and finite");
    bound_sum += b;
  }
  const double slack = 1e-12 * std::max(1.0, bound_sum);
  require(bound_sum >= std::abs(total) - slack, ErrorCode::InfeasibleBounds,
          "sum of coefficient bounds is below the required total");

  BoxSumLsqResult out;
  out.x.resize(cols);
  out.state.assign(static_cast<std::size_t>(cols), BoundState::free);

  // The box touches the trace hyperplane in a single point.
  if (std::abs(bound_sum - std::abs(total)) <= slack) {
    const double sign = total >= 0.0 ? 1.0 : -1.0;
    for (Eigen::Index j = 0; j < cols; ++j) {
      out.x[j] = sign * bounds[static_cast<std::size_t>(j)];
      out.state[static_cast<std::size_t>(j)] =
          sign > 0 ? BoundState::upper : BoundState::lower;
    }
    return out;
  }

  // Interior starting point: x_j = B_j * total / sum(B).
  for (Eigen::Index j = 0; j < cols; ++j)
    out.x[j] = bounds[static_cast<std::size_t>(j)] * total / bound_sum;

  const double scale = design.norm() * (target.norm() + design.norm() *
                                        std::max(1.0, *std::max_element(bounds.begin(), bounds.end())));
  const double multiplier_tol = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  const int max_iterations = 200 * static_cast<int>(cols + 1);

  std::vector<Eigen::Index> free_idx;
  for (int iter = 0; iter < max_iterations; ++iter) {
    out.iterations = iter + 1;
    free_idx.clear();
    Eigen::VectorXd residual_target = target;
    double remaining = total;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (out.state[static_cast<std::size_t>(j)] == BoundState::free) {
        free_idx.push_back(j);
      } else {
        residual_target -= design.col(j) * out.x[j];
        remaining -= out.x[j];
      }
    }
    const auto k = static_cast<Eigen::Index>(free_idx.size());

    // Equality-constrained optimum on the free set.
    Eigen::VectorXd candidate(k);
    if (k == 1) {
      candidate[0] = remaining;
    } else {
      Eigen::MatrixXd free_cols(design.rows(), k);
      for (Eigen::Index i = 0; i < k; ++i) free_cols.col(i) = design.col(free_idx[i]);
      const double base = remaining / static_cast<double>(k);
      const Eigen::MatrixXd basis = detail::sum_nullspace(k);
      const Eigen::MatrixXd projected = free_cols * basis;
      const Eigen::VectorXd rhs = residual_target - free_cols.rowwise().sum() * base;
      const Eigen::VectorXd y = projected.colPivHouseholderQr().solve(rhs);
      candidate = Eigen::VectorXd::Constant(k, base) + basis * y;
    }

    // Ratio test along the step; ties go to the lowest index.
    double step = 1.0;
    Eigen::Index blocking = -1;
    BoundState blocking_state = BoundState::free;
    for (Eigen::Index i = 0; i < k; ++i) {
      const Eigen::Index j = free_idx[i];
      const double b = bounds[static_cast<std::size_t>(j)];
      const double delta = candidate[i] - out.x[j];
      if (candidate[i] > b) {
        const double ratio = std::max(0.0, (b - out.x[j]) / delta);
        if (ratio < step) {
          step = ratio;
          blocking = j;
          blocking_state = BoundState::upper;
        }
      } else if (candidate[i] < -b) {
        const double ratio = std::max(0.0, (-b - out.x[j]) / delta);
        if (ratio < step) {
          step = ratio;
          blocking = j;
          blocking_state = BoundState::lower;
        }
      }
    }

    if (blocking >= 0) {
      for (Eigen::Index i = 0; i < k; ++i) {
        const Eigen::Index j = free_idx[i];
        out.x[j] += step * (candidate[i] - out.x[j]);
      }
      const double b = bounds[static_cast<std::size_t>(blocking)];
      out.x[blocking] = blocking_state == BoundState::upper ? b : -b;
      out.state[static_cast<std::size_t>(blocking)] = blocking_state;
      // Restore the trace exactly on the remaining free variables.
      double drift = total - out.x.sum();
      for (Eigen::Index j : free_idx)
        if (j != blocking) {
          out.x[j] += drift / static_cast<double>(k - 1);
          break;
        }
      continue;
    }

    for (Eigen::Index i = 0; i < k; ++i) out.x[free_idx[i]] = candidate[i];

    // Multipliers: g + nu * 1 + mu = 0, with nu fixed by the free variables.
    const Eigen::VectorXd gradient = design.transpose() * (design * out.x - target);
    double nu = 0.0;
    for (Eigen::Index j : free_idx) nu -= gradient[j];
    nu /= static_cast<double>(k);

    Eigen::Index release = -1;
    double worst = multiplier_tol;
    for (Eigen::Index j = 0; j < cols; ++j) {
      const auto s = out.state[static_cast<std::size_t>(j)];
      double violation = 0.0;
      if (s == BoundState::upper) violation = gradient[j] + nu;
      else if (s == BoundState::lower) violation = -(gradient[j] + nu);
      else continue;
      if (violation > worst) {
        worst = violation;
        release = j;
      }
    }
    if (release < 0) return out;
    out.state[static_cast<std::size_t>(release)] = BoundState::free;
  }
  throw Error(ErrorCode::SolverFailure, "active-set iteration limit reached");
}

}  // namespace rfhom
