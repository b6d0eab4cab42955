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

#include "lsapdma/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>

#include "lsapdma/receiver.hpp"

namespace lsapdma {
namespace {

// Live entries of the problem, grouped per beam in SIC order. Variable
// offset[n] + j is the user at SIC position j of beam n.
struct Layout {
  std::vector<std::vector<std::size_t>> chains;
  std::vector<Eigen::Index> offset;
  Eigen::Index size = 0;
  RMatrix base;               // pinned values, zero on live entries
  double pinned_total = 0.0;
  RVector floor;
  RVector gains;
};

SupportMask live_mask(const OptProblem& problem) {
  const double threshold = kDeadGain * problem.gains.maxCoeff();
  return problem.allowed && (problem.gains.array() > threshold);
}

Layout make_layout(const OptProblem& problem) {
  Layout layout;
  const SupportMask live = live_mask(problem);
  layout.chains = sic_orders(problem.gains, live);
  layout.base = RMatrix::Zero(problem.beams(), problem.users());
  for (Eigen::Index n = 0; n < problem.beams(); ++n) {
    for (Eigen::Index k = 0; k < problem.users(); ++k) {
      if (!live(n, k)) layout.base(n, k) = problem.allowed(n, k) ? problem.floor(n, k) : 0.0;
    }
  }
  layout.pinned_total = layout.base.sum();
  for (const auto& chain : layout.chains) {
    layout.offset.push_back(layout.size);
    layout.size += static_cast<Eigen::Index>(chain.size());
  }
  layout.floor.resize(layout.size);
  layout.gains.resize(layout.size);
  for (std::size_t n = 0; n < layout.chains.size(); ++n) {
    for (std::size_t j = 0; j < layout.chains[n].size(); ++j) {
      const auto k = static_cast<Eigen::Index>(layout.chains[n][j]);
      const Eigen::Index v = layout.offset[n] + static_cast<Eigen::Index>(j);
      layout.floor(v) = problem.floor(static_cast<Eigen::Index>(n), k);
      layout.gains(v) = problem.gains(static_cast<Eigen::Index>(n), k);
    }
  }
  return layout;
}

RVector gather(const Layout& layout, const RMatrix& power) {
  RVector x(layout.size);
  for (std::size_t n = 0; n < layout.chains.size(); ++n) {
    for (std::size_t j = 0; j < layout.chains[n].size(); ++j) {
      x(layout.offset[n] + static_cast<Eigen::Index>(j)) =
          power(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(layout.chains[n][j]));
    }
  }
  return x;
}

RMatrix scatter(const Layout& layout, const RVector& x) {
  RMatrix power = layout.base;
  for (std::size_t n = 0; n < layout.chains.size(); ++n) {
    for (std::size_t j = 0; j < layout.chains[n].size(); ++j) {
      power(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(layout.chains[n][j])) =
          x(layout.offset[n] + static_cast<Eigen::Index>(j));
    }
  }
  return power;
}

enum class Detail { kValue, kObjective, kRates };

// Objective and rate terms of one SIC chain, in chain coordinates.
//
// With a_j = 1/h_j^2 and S_j the power at positions >= j,
//   rate_j = log2((a_j + S_j) / (a_j + S_{j+1})),
// which makes f = -sum_j rate_j telescope into the alpha0 / beta_m form.
struct ChainTerms {
  double f = 0.0;
  RVector rates;
  RVector suffix;  // w_j = S_{j+1}
  RVector grad_f;
  RMatrix hess_f;
  double alpha0 = 0.0;
  RVector beta;
  std::vector<RVector> grad_rate;
  std::vector<RMatrix> hess_rate;
};

ChainTerms chain_terms(const RVector& h, const RVector& p, Detail detail) {
  const Eigen::Index len = h.size();
  ChainTerms out;
  out.rates.resize(len);
  out.suffix.resize(len);
  double stronger = 0.0;
  for (Eigen::Index j = len - 1; j >= 0; --j) {
    const double h2 = h(j) * h(j);
    out.suffix(j) = stronger;
    out.rates(j) = rate_from_sinr(h2 * p(j) / (1.0 + h2 * stronger));
    stronger += p(j);
  }
  for (Eigen::Index j = 0; j < len; ++j) out.f -= out.rates(j);
  if (detail == Detail::kValue || len == 0) return out;

  RVector a(len);
  for (Eigen::Index j = 0; j < len; ++j) a(j) = 1.0 / (h(j) * h(j));
  const double head = a(0) + out.suffix(0) + p(0);  // a_1 + sum of all chain powers

  out.grad_f.resize(len);
  double running = -1.0 / head;
  out.grad_f(0) = running / kLn2;
  for (Eigen::Index j = 1; j < len; ++j) {
    const double w = out.suffix(j - 1);
    running += 1.0 / (a(j - 1) + w) - 1.0 / (a(j) + w);
    out.grad_f(j) = running / kLn2;
  }

  out.alpha0 = 1.0 / (head * head * kLn2);
  out.beta = RVector::Zero(len);
  for (Eigen::Index m = 1; m < len; ++m) {
    const double w = out.suffix(m - 1);
    const double lower = a(m) + w;
    const double upper = a(m - 1) + w;
    out.beta(m) = out.beta(m - 1) + (1.0 / (lower * lower) - 1.0 / (upper * upper)) / kLn2;
  }
  out.hess_f.resize(len, len);
  for (Eigen::Index i = 0; i < len; ++i) {
    for (Eigen::Index j = 0; j < len; ++j) out.hess_f(i, j) = out.alpha0 + out.beta(std::min(i, j));
  }
  if (detail == Detail::kObjective) return out;

  out.grad_rate.resize(static_cast<std::size_t>(len));
  out.hess_rate.resize(static_cast<std::size_t>(len));
  for (Eigen::Index j = 0; j < len; ++j) {
    const double with_self = 1.0 / (a(j) + out.suffix(j) + p(j));
    const double without = 1.0 / (a(j) + out.suffix(j));
    RVector g = RVector::Zero(len);
    g.tail(len - j).setConstant(with_self);
    g.tail(len - j - 1).array() -= without;
    out.grad_rate[static_cast<std::size_t>(j)] = g / kLn2;
    RMatrix hm = RMatrix::Zero(len, len);
    hm.bottomRightCorner(len - j, len - j).array() -= with_self * with_self;
    hm.bottomRightCorner(len - j - 1, len - j - 1).array() += without * without;
    out.hess_rate[static_cast<std::size_t>(j)] = hm / kLn2;
  }
  return out;
}

struct Eval {
  bool feasible = false;
  double value = 0.0;
  RVector grad;
  RMatrix hess;
};

using Evaluator = std::function<Eval(const RVector&, double, bool)>;

// Phase II: t f(x) - sum log(x - delta) - log(budget slack) [- sum log(rate - R_min)].
Eval phase_two(const OptProblem& problem, const Layout& layout, const RVector& x, double t, bool derivs) {
  Eval out;
  const Eigen::Index size = layout.size;
  const RVector floor_slack = x - layout.floor;
  if ((floor_slack.array() <= 0.0).any()) return out;
  const double budget = problem.total_power - layout.pinned_total - x.sum();
  if (!(budget > 0.0)) return out;
  const bool with_rates = problem.min_rate > 0.0;

  if (derivs) {
    out.grad = RVector::Zero(size);
    out.hess = RMatrix::Zero(size, size);
  }
  double f = 0.0;
  double barrier = -floor_slack.array().log().sum() - std::log(budget);
  for (std::size_t n = 0; n < layout.chains.size(); ++n) {
    const Eigen::Index off = layout.offset[n];
    const auto len = static_cast<Eigen::Index>(layout.chains[n].size());
    if (len == 0) continue;
    const ChainTerms terms = chain_terms(layout.gains.segment(off, len), x.segment(off, len),
                                         !derivs       ? Detail::kValue
                                         : with_rates ? Detail::kRates
                                                      : Detail::kObjective);
    f += terms.f;
    if (with_rates) {
      for (Eigen::Index j = 0; j < len; ++j) {
        const double slack = terms.rates(j) - problem.min_rate;
        if (!(slack > 0.0)) return Eval{};
        barrier -= std::log(slack);
        if (derivs) {
          const RVector& g = terms.grad_rate[static_cast<std::size_t>(j)];
          out.grad.segment(off, len) -= g / slack;
          out.hess.block(off, off, len, len) +=
              g * g.transpose() / (slack * slack) - terms.hess_rate[static_cast<std::size_t>(j)] / slack;
        }
      }
    }
    if (derivs) {
      out.grad.segment(off, len) += t * terms.grad_f;
      out.hess.block(off, off, len, len) += t * terms.hess_f;
    }
  }
  out.feasible = true;
  out.value = t * f + barrier;
  if (derivs) {
    out.grad.array() -= floor_slack.array().inverse();
    out.grad.array() += 1.0 / budget;
    out.hess.diagonal().array() += floor_slack.array().square().inverse();
    out.hess.array() += 1.0 / (budget * budget);
  }
  return out;
}

// Phase I over y = [x; s]: minimize s subject to R_min - rate_i(x) < s plus the floor and budget barriers.
Eval phase_one(const OptProblem& problem, const Layout& layout, const RVector& y, double t, bool derivs) {
  Eval out;
  const Eigen::Index size = layout.size;
  const RVector x = y.head(size);
  const double s = y(size);
  const RVector floor_slack = x - layout.floor;
  if ((floor_slack.array() <= 0.0).any()) return out;
  const double budget = problem.total_power - layout.pinned_total - x.sum();
  if (!(budget > 0.0)) return out;

  if (derivs) {
    out.grad = RVector::Zero(size + 1);
    out.hess = RMatrix::Zero(size + 1, size + 1);
  }
  double barrier = -floor_slack.array().log().sum() - std::log(budget);
  for (std::size_t n = 0; n < layout.chains.size(); ++n) {
    const Eigen::Index off = layout.offset[n];
    const auto len = static_cast<Eigen::Index>(layout.chains[n].size());
    if (len == 0) continue;
    const ChainTerms terms = chain_terms(layout.gains.segment(off, len), x.segment(off, len),
                                         derivs ? Detail::kRates : Detail::kValue);
    for (Eigen::Index j = 0; j < len; ++j) {
      const double slack = terms.rates(j) - problem.min_rate + s;
      if (!(slack > 0.0)) return Eval{};
      barrier -= std::log(slack);
      if (!derivs) continue;
      RVector u = RVector::Zero(size + 1);
      u.segment(off, len) = terms.grad_rate[static_cast<std::size_t>(j)];
      u(size) = 1.0;
      out.grad -= u / slack;
      out.hess += u * u.transpose() / (slack * slack);
      out.hess.block(off, off, len, len) -= terms.hess_rate[static_cast<std::size_t>(j)] / slack;
    }
  }
  out.feasible = true;
  out.value = t * s + barrier;
  if (derivs) {
    out.grad.head(size).array() -= floor_slack.array().inverse();
    out.grad.head(size).array() += 1.0 / budget;
    out.grad(size) += t;
    out.hess.topLeftCorner(size, size).diagonal().array() += floor_slack.array().square().inverse();
    out.hess.topLeftCorner(size, size).array() += 1.0 / (budget * budget);
  }
  return out;
}

// Newton direction with Jacobi equilibration; a diagonal shift is added when
// the barrier Hessian is not positive definite (the rate constraints are not
// convex in general).
std::optional<RVector> newton_direction(const RMatrix& hess, const RVector& grad) {
  const Eigen::Index size = grad.size();
  RVector scale(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const double d = hess(i, i);
    scale(i) = (d > 0.0 && std::isfinite(d)) ? 1.0 / std::sqrt(d) : 1.0;
  }
  const RMatrix scaled = scale.asDiagonal() * hess * scale.asDiagonal();
  const RVector rhs = -scale.cwiseProduct(grad);
  if (!scaled.allFinite() || !rhs.allFinite()) return std::nullopt;
  for (double shift = 0.0; shift <= 1e4; shift = (shift == 0.0 ? 1e-12 : shift * 100.0)) {
    RMatrix m = scaled;
    m.diagonal().array() += shift;
    const Eigen::LLT<RMatrix> llt(m);
    if (llt.info() != Eigen::Success) continue;
    RVector z = llt.solve(rhs);
    if (!z.allFinite()) continue;
    return RVector(scale.cwiseProduct(z));
  }
  return std::nullopt;
}

struct CenterResult {
  int steps = 0;
  bool numeric_failure = false;
  bool stopped_early = false;
};

CenterResult center(const Evaluator& eval, RVector& x, double t, const BarrierParams& params, int budget,
                    bool polish, const std::function<bool(const RVector&)>& stop_early) {
  CenterResult result;
  Eval current = eval(x, t, true);
  if (!current.feasible) {
    result.numeric_failure = true;
    return result;
  }
  int polish_steps = 0;
  while (result.steps < std::min(budget, params.max_newton_per_centering)) {
    const auto direction = newton_direction(current.hess, current.grad);
    if (!direction) {
      result.numeric_failure = true;
      return result;
    }
    const double slope = current.grad.dot(*direction);
    const double decrement = -slope;
    if (decrement / 2.0 <= params.newton_tolerance) {
      if (!polish || current.grad.lpNorm<Eigen::Infinity>() / t <= params.kkt_polish || polish_steps >= 30) break;
      ++polish_steps;
    }

    double step = 1.0;
    Eval trial = eval(x + step * *direction, t, false);
    int halvings = 0;
    while (!trial.feasible && halvings < 200) {
      step *= params.backtrack;
      trial = eval(x + step * *direction, t, false);
      ++halvings;
    }
    // Close to the center the predicted decrease drops below the rounding
    // of the barrier value; there the gradient norm serves as merit.
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(current.value) + 1.0);
    if (trial.feasible && -slope < 1e3 * noise) {
      const double norm = current.grad.lpNorm<Eigen::Infinity>();
      Eval full = eval(x + step * *direction, t, true);
      while (full.feasible && full.grad.lpNorm<Eigen::Infinity>() >= norm && halvings < 60) {
        step *= params.backtrack;
        full = eval(x + step * *direction, t, true);
        ++halvings;
      }
      if (!full.feasible || full.grad.lpNorm<Eigen::Infinity>() >= norm) break;
      x += step * *direction;
      ++result.steps;
      current = std::move(full);
      continue;
    }
    while (trial.feasible && trial.value > current.value + params.armijo * step * slope + noise && halvings < 200) {
      step *= params.backtrack;
      trial = eval(x + step * *direction, t, false);
      ++halvings;
    }
    if (!trial.feasible || halvings >= 200 || !(slope < 0.0)) {
      // No usable descent left; the iterate is centered to working precision.
      if (decrement / 2.0 > 1e3 * params.newton_tolerance) result.numeric_failure = true;
      break;
    }
    x += step * *direction;
    ++result.steps;
    current = eval(x, t, true);
    if (!current.feasible) {
      result.numeric_failure = true;
      return result;
    }
    if (stop_early && stop_early(x)) {
      result.stopped_early = true;
      return result;
    }
  }
  return result;
}

void trace_line(std::ostream* os, int phase, int outer, double t, double gap, int steps, double value) {
  if (os == nullptr) return;
  *os << std::setprecision(12) << "{\"phase\":" << phase << ",\"outer\":" << outer << ",\"t\":" << t
      << ",\"gap\":" << gap << ",\"newton_steps\":" << steps << ",\"objective\":" << value << "}\n";
}

}  // namespace

const char* to_string(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::kConverged:
      return "converged";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kMaxIterations:
      return "max-iterations";
    case SolveStatus::kNumericFailure:
      return "numeric-failure";
  }
  return "unknown";
}

OptProblem OptProblem::make(RMatrix gains, double total_power, double min_rate, const SelectedUserSet& omega,
                            double epsilon, SupportMask allowed) {
  OptProblem problem;
  problem.floor = RMatrix::Zero(gains.rows(), gains.cols());
  for (std::size_t n = 0; n < omega.beams(); ++n) {
    const std::size_t k = omega.user_of_beam[n];
    if (static_cast<Eigen::Index>(n) >= gains.rows() || static_cast<Eigen::Index>(k) >= gains.cols()) {
      throw ShapeError("selected pair outside the gain matrix");
    }
    problem.floor(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)) = epsilon;
  }
  if (allowed.size() == 0) allowed = SupportMask::Constant(gains.rows(), gains.cols(), true);
  problem.gains = std::move(gains);
  problem.total_power = total_power;
  problem.min_rate = min_rate;
  problem.allowed = std::move(allowed);
  return problem;
}

void OptProblem::validate() const {
  if (gains.size() == 0) throw ShapeError("empty gain matrix");
  if (floor.rows() != gains.rows() || floor.cols() != gains.cols()) throw ShapeError("floor must match gains");
  if (allowed.rows() != gains.rows() || allowed.cols() != gains.cols()) throw ShapeError("allowed must match gains");
  if (!gains.allFinite() || (gains.array() < 0.0).any()) throw DomainError("gains must be finite and nonnegative");
  if (!floor.allFinite() || (floor.array() < 0.0).any()) throw DomainError("floors must be finite and nonnegative");
  if (!(total_power > 0.0) || !std::isfinite(total_power)) throw DomainError("P_sum must be positive");
  if (!(min_rate >= 0.0) || !std::isfinite(min_rate)) throw DomainError("R_min must be nonnegative");
  for (Eigen::Index n = 0; n < gains.rows(); ++n) {
    for (Eigen::Index k = 0; k < gains.cols(); ++k) {
      if (!allowed(n, k) && floor(n, k) > 0.0) throw ConfigError("a selected pair lies outside the allowed pattern");
    }
  }
  if (min_rate > 0.0 && !allowed.all()) {
    throw ConfigError("R_min > 0 requires every pair to carry power; incompatible with a fixed sparse pattern");
  }
}

double objective(const OptProblem& problem, const RMatrix& power) {
  if (power.rows() != problem.beams() || power.cols() != problem.users()) throw ShapeError("power shape mismatch");
  const Layout layout = make_layout(problem);
  const RVector x = gather(layout, power);
  double f = 0.0;
  for (std::size_t n = 0; n < layout.chains.size(); ++n) {
    const auto len = static_cast<Eigen::Index>(layout.chains[n].size());
    if (len == 0) continue;
    const Eigen::Index off = layout.offset[n];
    f += chain_terms(layout.gains.segment(off, len), x.segment(off, len), Detail::kValue).f;
  }
  return f;
}

BeamObjectiveWorkspace beam_workspace(const OptProblem& problem, const RMatrix& power, Eigen::Index beam) {
  if (beam < 0 || beam >= problem.beams()) throw ShapeError("beam index out of range");
  const Layout layout = make_layout(problem);
  const auto& chain = layout.chains[static_cast<std::size_t>(beam)];
  const auto len = static_cast<Eigen::Index>(chain.size());
  const Eigen::Index off = layout.offset[static_cast<std::size_t>(beam)];
  const RVector x = gather(layout, power);
  const ChainTerms terms = chain_terms(layout.gains.segment(off, len), x.segment(off, len), Detail::kObjective);
  return BeamObjectiveWorkspace{chain, terms.suffix, terms.alpha0, len > 0 ? terms.beta : RVector()};
}

RMatrix gradient(const OptProblem& problem, const RMatrix& power) {
  const Layout layout = make_layout(problem);
  const RVector x = gather(layout, power);
  RMatrix out = RMatrix::Zero(problem.beams(), problem.users());
  for (std::size_t n = 0; n < layout.chains.size(); ++n) {
    const auto len = static_cast<Eigen::Index>(layout.chains[n].size());
    if (len == 0) continue;
    const Eigen::Index off = layout.offset[n];
    const ChainTerms terms = chain_terms(layout.gains.segment(off, len), x.segment(off, len), Detail::kObjective);
    for (Eigen::Index j = 0; j < len; ++j) {
      out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(layout.chains[n][static_cast<std::size_t>(j)])) =
          terms.grad_f(j);
    }
  }
  return out;
}

RMatrix hessian(const OptProblem& problem, const RMatrix& power, Eigen::Index beam) {
  if (beam < 0 || beam >= problem.beams()) throw ShapeError("beam index out of range");
  const Layout layout = make_layout(problem);
  const auto& chain = layout.chains[static_cast<std::size_t>(beam)];
  const auto len = static_cast<Eigen::Index>(chain.size());
  RMatrix out = RMatrix::Zero(problem.users(), problem.users());
  if (len == 0) return out;
  const Eigen::Index off = layout.offset[static_cast<std::size_t>(beam)];
  const RVector x = gather(layout, power);
  const ChainTerms terms = chain_terms(layout.gains.segment(off, len), x.segment(off, len), Detail::kObjective);
  for (Eigen::Index i = 0; i < len; ++i) {
    for (Eigen::Index j = 0; j < len; ++j) {
      out(static_cast<Eigen::Index>(chain[static_cast<std::size_t>(i)]),
          static_cast<Eigen::Index>(chain[static_cast<std::size_t>(j)])) = terms.hess_f(i, j);
    }
  }
  return out;
}

double ConstraintSlacks::max_violation() const {
  double worst = std::max(0.0, budget);
  if (floor.size() > 0) worst = std::max(worst, floor.maxCoeff());
  if (rate.size() > 0) worst = std::max(worst, rate.maxCoeff());
  return worst;
}

ConstraintSlacks check_constraints(const OptProblem& problem, const RMatrix& power) {
  ConstraintSlacks out;
  out.floor = problem.floor - power;
  out.budget = power.sum() - problem.total_power;
  const LinkState link = evaluate_link(problem.gains, PowerAllocation{power.cwiseMax(0.0)}, problem.allowed);
  out.rate = (-link.rates).array() + problem.min_rate;
  return out;
}

FeasibleStart feasible_start(const OptProblem& problem) {
  problem.validate();
  const Layout layout = make_layout(problem);
  FeasibleStart out;

  const double remaining = problem.total_power - layout.pinned_total - layout.floor.sum();
  if (!(remaining > 0.0)) {
    out.min_rate_slack = -std::numeric_limits<double>::infinity();
    return out;
  }
  RVector x = layout.floor;
  if (layout.size > 0) x.array() += remaining / (2.0 * static_cast<double>(layout.size));

  if (problem.min_rate <= 0.0) {
    out.point = scatter(layout, x);
    return out;
  }

  // The rate floor covers every pair; a pinned pair (zero gain) can never reach R_min.
  if (layout.size < problem.gains.size()) {
    out.min_rate_slack = -problem.min_rate;
    return out;
  }
  // Even the whole budget on a single entry may fall short.
  double bound = std::numeric_limits<double>::infinity();
  for (Eigen::Index v = 0; v < layout.size; ++v) {
    const double h2 = layout.gains(v) * layout.gains(v);
    const double best = rate_from_sinr(h2 * (remaining + layout.floor(v)));
    bound = std::min(bound, best - problem.min_rate);
  }
  if (bound <= 0.0) {
    out.min_rate_slack = bound;
    return out;
  }

  auto min_slack = [&](const RVector& point) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < layout.chains.size(); ++n) {
      const auto len = static_cast<Eigen::Index>(layout.chains[n].size());
      if (len == 0) continue;
      const Eigen::Index off = layout.offset[n];
      const ChainTerms terms = chain_terms(layout.gains.segment(off, len), point.segment(off, len), Detail::kValue);
      worst = std::min(worst, terms.rates.minCoeff() - problem.min_rate);
    }
    return worst;
  };

  if (min_slack(x) > 0.0) {
    out.point = scatter(layout, x);
    return out;
  }

  RVector y(layout.size + 1);
  y.head(layout.size) = x;
  y(layout.size) = -min_slack(x) + 1.0;
  const BarrierParams params;
  const Evaluator eval = [&](const RVector& v, double t, bool d) { return phase_one(problem, layout, v, t, d); };
  const auto done = [&](const RVector& v) { return v(layout.size) < 0.0; };
  const double constraints = static_cast<double>(2 * layout.size + 1);
  int budget = params.max_newton_total;
  for (double t = params.t0;; t *= params.mu) {
    const CenterResult r = center(eval, y, t, params, budget, false, done);
    out.iterations += r.steps;
    budget -= r.steps;
    if (r.stopped_early || done(y)) break;
    if (r.numeric_failure || budget <= 0 || constraints / t < params.tolerance) break;
  }
  const double slack = min_slack(y.head(layout.size));
  out.min_rate_slack = slack;
  if (slack > 0.0) out.point = scatter(layout, y.head(layout.size));
  return out;
}

OptSolution barrier_solve(const OptProblem& problem, const BarrierParams& params) {
  problem.validate();
  OptSolution solution;
  const FeasibleStart start = feasible_start(problem);
  solution.iterations = start.iterations;
  if (problem.min_rate > 0.0) solution.min_rate_slack = start.min_rate_slack;
  if (!start.point) {
    solution.status = SolveStatus::kInfeasible;
    solution.power = RMatrix::Zero(problem.beams(), problem.users());
    return solution;
  }

  const Layout layout = make_layout(problem);
  RVector x = gather(layout, *start.point);
  const double constraints =
      static_cast<double>(layout.size + 1 + (problem.min_rate > 0.0 ? layout.size : 0));
  const Evaluator eval = [&](const RVector& v, double t, bool d) { return phase_two(problem, layout, v, t, d); };

  double t = params.t0;
  bool failed = false;
  bool exhausted = false;
  if (layout.size > 0) {
    int budget = params.max_newton_total - solution.iterations;
    for (int outer = 0;; ++outer) {
      const bool last = constraints / t < params.tolerance;
      const CenterResult r = center(eval, x, t, params, budget, last, nullptr);
      solution.iterations += r.steps;
      budget -= r.steps;
      trace_line(params.trace, 2, outer, t, constraints / t, r.steps, objective(problem, scatter(layout, x)));
      if (r.numeric_failure) {
        failed = true;
        break;
      }
      if (last) break;
      if (budget <= 0) {
        exhausted = true;
        break;
      }
      t *= params.mu;
    }
  }

  solution.power = scatter(layout, x);
  solution.objective_value = -objective(problem, solution.power);
  solution.duality_gap = constraints / t;
  if (layout.size > 0) {
    const Eval final_eval = eval(x, t, true);
    solution.kkt_residual = final_eval.feasible ? final_eval.grad.lpNorm<Eigen::Infinity>() / t
                                                : std::numeric_limits<double>::infinity();
  }
  if (problem.min_rate > 0.0) {
    solution.min_rate_slack = -check_constraints(problem, solution.power).rate.maxCoeff();
  }
  if (failed) {
    solution.status = SolveStatus::kNumericFailure;
  } else if (exhausted) {
    solution.status = SolveStatus::kMaxIterations;
  } else if (solution.kkt_residual >= 1e-6 || check_constraints(problem, solution.power).max_violation() > 1e-8) {
    solution.status = SolveStatus::kNumericFailure;
  } else {
    solution.status = SolveStatus::kConverged;
  }
  return solution;
}

}  // namespace lsapdma
