// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The lsa-pdma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef LSAPDMA_OPTIMIZER_HPP
#define LSAPDMA_OPTIMIZER_HPP

#include <iosfwd>
#include <optional>
#include <vector>

#include "lsapdma/beamforming.hpp"
#include "lsapdma/common.hpp"

namespace lsapdma {

/// Sum-rate maximization over the merged pattern/power matrix P~ with the
/// normalized gains held fixed:
///
///   max  sum_n sum_k log2(1 + gamma_nk)
///   s.t. P~_nk >= delta_nk,  sum P~ <= P_sum,  log2(1 + gamma_nk) >= R_min.
///
/// Entries outside `allowed`, and entries whose gain is below kDeadGain times
/// the largest gain (zero-forcing nulls land around 1e-16), are pinned at
/// their floor and take no part in the Newton system.
inline constexpr double kDeadGain = 1e-9;

struct OptProblem {
  RMatrix gains;             // h_nk >= 0, N x K
  double total_power = 1.0;  // P_sum
  double min_rate = 0.0;     // R_min
  RMatrix floor;             // delta_nk
  SupportMask allowed;       // entries that may carry power

  /// delta = epsilon on the selected pairs, 0 elsewhere. An empty `allowed`
  /// means every entry is allowed.
  static OptProblem make(RMatrix gains, double total_power, double min_rate, const SelectedUserSet& omega,
                         double epsilon, SupportMask allowed = {});

  [[nodiscard]] Eigen::Index beams() const noexcept { return gains.rows(); }
  [[nodiscard]] Eigen::Index users() const noexcept { return gains.cols(); }
  [[nodiscard]] bool is_live(Eigen::Index beam, Eigen::Index user) const {
    return allowed(beam, user) && gains(beam, user) > kDeadGain * gains.maxCoeff();
  }

  /// Throws DomainError/ShapeError/ConfigError on a malformed problem.
  void validate() const;
};

enum class SolveStatus { kConverged, kInfeasible, kMaxIterations, kNumericFailure };

const char* to_string(SolveStatus status) noexcept;

struct OptSolution {
  RMatrix power;                 // P~*
  double objective_value = 0.0;  // sum rate at P~*, bits/s/Hz
  double kkt_residual = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;            // total Newton steps, both phases
  SolveStatus status = SolveStatus::kNumericFailure;
  // Best achieved min over rate slacks; only meaningful when phase I ran.
  std::optional<double> min_rate_slack;
};

/// Per-beam building blocks of the analytic Hessian. `chain` lists the live
/// users of the beam in SIC order; positions below index that list.
struct BeamObjectiveWorkspace {
  std::vector<std::size_t> chain;
  RVector suffix;  // w at each position: power of the users after it
  double alpha0 = 0.0;
  RVector beta;    // beta(m) for m = 0..L-1, beta(0) = 0
};

/// Minimization objective f(P~) = -(sum rate) over the live SIC chains; entries
/// below kDeadGain or outside `allowed` do not contribute.
double objective(const OptProblem& problem, const RMatrix& power);

/// df/dP~ (N x K); zero on pinned entries.
RMatrix gradient(const OptProblem& problem, const RMatrix& power);

BeamObjectiveWorkspace beam_workspace(const OptProblem& problem, const RMatrix& power, Eigen::Index beam);

/// K x K Hessian of the beam-n part of f in user-label coordinates:
/// alpha0 on the row and column of the weakest live user, alpha0 + beta_m
/// below, with m one less than the smaller SIC position. Rows of pinned
/// users are zero.
RMatrix hessian(const OptProblem& problem, const RMatrix& power, Eigen::Index beam);

/// Standard-form constraint values; all <= 0 at a feasible point.
struct ConstraintSlacks {
  RMatrix floor;      // g1 = delta - P~
  double budget = 0;  // g2 = sum P~ - P_sum
  RMatrix rate;       // g3 = R_min - log2(1 + gamma)

  [[nodiscard]] double max_violation() const;
};

ConstraintSlacks check_constraints(const OptProblem& problem, const RMatrix& power);

struct FeasibleStart {
  std::optional<RMatrix> point;  // strictly feasible P~0
  double min_rate_slack = 0.0;   // certificate when infeasible
  int iterations = 0;
};

/// Floor plus half the remaining budget split equally over the live entries;
/// when R_min > 0 and that point misses a rate floor, a phase-I barrier problem
/// maximizes the smallest rate slack.
FeasibleStart feasible_start(const OptProblem& problem);

struct BarrierParams {
  double t0 = 1.0;
  double mu = 20.0;
  double tolerance = 1e-6;         // stop when m / t < tolerance
  double newton_tolerance = 1e-10; // lambda^2 / 2
  double armijo = 0.01;
  double backtrack = 0.5;
  int max_newton_per_centering = 200;
  int max_newton_total = 5000;
  // Extra Newton steps on the last centering until the KKT residual is
  // below this value.
  double kkt_polish = 1e-10;
  std::ostream* trace = nullptr;   // one JSON object per outer iteration
};

/// Log-barrier interior-point method with damped Newton centering.
OptSolution barrier_solve(const OptProblem& problem, const BarrierParams& params = {});

}  // namespace lsapdma

#endif  // LSAPDMA_OPTIMIZER_HPP
