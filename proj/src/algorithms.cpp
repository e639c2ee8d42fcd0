#include "lrgd/algorithms.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <random>

namespace lrgd {

bool termination_satisfied(const TerminationRule& rule, const Objective& obj,
                           const Vector& point,
                           std::optional<double> proj_grad_norm) {
  if (const auto* gap = std::get_if<SuboptimalityGap>(&rule))
    return eval(obj, point) - gap->f_star <= gap->eps;
  if (const auto* pg = std::get_if<ProjGradNorm>(&rule)) {
    const double n = proj_grad_norm ? *proj_grad_norm
                                    : full_gradient_raw(obj, point).norm();
    return n < pg->eps_hat;
  }
  return full_gradient_raw(obj, point).norm() <= *grad_threshold(rule);
}

namespace {

constexpr double kInvSqrt10 = 0.31622776601683794;

struct CheckOutcome {
  bool satisfied = false;
  std::optional<double> grad_norm; // filled when the rule measured it
};

// Evaluates the outer termination rule at `point`. Gradient-based rules
// charge p instrumentation calls; the suboptimality-gap rule is free.
// ProjGradNorm measures the projected gradient when a subspace is in play.
CheckOutcome check_rule(CountedObjective& cobj, const Vector& point,
                        const TerminationRule& rule,
                        const Subspace* subspace) {
  CheckOutcome out;
  if (const auto* gap = std::get_if<SuboptimalityGap>(&rule)) {
    out.satisfied = cobj.value(point) - gap->f_star <= gap->eps;
    return out;
  }
  if (const auto* pg = std::get_if<ProjGradNorm>(&rule)) {
    if (subspace != nullptr) {
      Vector approx = Vector::Zero(point.size());
      for (Eigen::Index i = 0; i < subspace->rank(); ++i) {
        const Direction dir(subspace->basis_vector(i));
        approx += cobj.directional_derivative(point, dir,
                                              CallCategory::Instrumentation) *
                  dir.coords();
      }
      out.satisfied = approx.norm() < pg->eps_hat;
      return out;
    }
    const Vector g = cobj.full_gradient(point, CallCategory::Instrumentation);
    out.grad_norm = g.norm();
    out.satisfied = *out.grad_norm < pg->eps_hat;
    return out;
  }
  const double threshold = *grad_threshold(rule);
  const Vector g = cobj.full_gradient(point, CallCategory::Instrumentation);
  out.grad_norm = g.norm();
  out.satisfied = *out.grad_norm <= threshold;
  return out;
}

// Tracks "f increased for 10 consecutive updates" divergence.
class DivergenceGuard {
public:
  DivergenceGuard(double f0, double alpha, std::optional<double> L)
      : prev_(f0), alpha_(alpha), L_(L) {}

  void observe(double f) {
    if (f > prev_) {
      if (++streak_ >= 10) {
        std::string msg = "divergence: f increased for 10 consecutive steps "
                          "(alpha=" + std::to_string(alpha_);
        msg += L_ ? ", L=" + std::to_string(*L_) + ")" : ", L unknown)";
        throw DivergenceError(msg);
      }
    } else {
      streak_ = 0;
    }
    prev_ = f;
  }

private:
  double prev_;
  double alpha_;
  std::optional<double> L_;
  int streak_ = 0;
};

void warn_stepsize(const Objective& obj, const AlgoConfig& cfg,
                   const char* algo) {
  if (obj.smoothness_L && cfg.stepsize > 1.0 / *obj.smoothness_L + 1e-15)
    std::cerr << algo << ": stepsize " << cfg.stepsize
              << " exceeds 1/L = " << 1.0 / *obj.smoothness_L << "\n";
}

void record_trace_point(RunTrace& trace, CountedObjective& cobj,
                        const Vector& point, double f,
                        std::optional<double> grad_norm) {
  trace.iterates.push_back(point);
  trace.f_values.push_back(f);
  trace.counted_calls.push_back(cobj.ledger_snapshot().total_counted());
  if (!grad_norm)
    grad_norm =
        cobj.full_gradient(point, CallCategory::Instrumentation).norm();
  trace.grad_norms.push_back(*grad_norm);
}

std::optional<double> initial_gap(const Objective& obj, double f0) {
  if (obj.f_star) return f0 - *obj.f_star;
  return std::nullopt;
}

Vector projected_gradient(CountedObjective& cobj, const Vector& point,
                          const Subspace& S, CallCategory cat) {
  Vector approx = Vector::Zero(point.size());
  for (Eigen::Index i = 0; i < S.rank(); ++i) {
    const Direction dir(S.basis_vector(i));
    approx += cobj.directional_derivative(point, dir, cat) * dir.coords();
  }
  return approx;
}

} // namespace

ActiveSubspace estimate_active_subspace(CountedObjective& cobj,
                                        const AlgoConfig& cfg,
                                        const Vector& center) {
  if (!cfg.rank) throw Error("estimate_active_subspace: cfg.rank required");
  const int r = *cfg.rank;
  const int p = cobj.dim();
  if (r < 1 || r > p) throw Error("estimate_active_subspace: need 1 <= r <= p");

  std::mt19937_64 rng(cfg.sampler.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vector> gradients;
  gradients.reserve(static_cast<std::size_t>(r));
  int redraws = 0;
  while (static_cast<int>(gradients.size()) < r) {
    Vector point(p);
    for (int i = 0; i < p; ++i)
      point[i] = center[i] + cfg.sampler.scale * gauss(rng);
    Vector g = cobj.full_gradient(point, CallCategory::Sampling);
    if (g.norm() > cfg.grad_floor) {
      gradients.push_back(std::move(g));
      continue;
    }
    if (++redraws > cfg.resample_limit)
      throw DegenerateSampleError(
          "degenerate sample: objective near-stationary across the sampling "
          "region (gradient norms <= grad_floor)");
  }
  GradientMatrix G = GradientMatrix::from_gradients(gradients);
  SvdBasis basis = svd_left_basis(G);
  return ActiveSubspace{std::move(basis.span), std::move(G)};
}

RunReport gd(CountedObjective& cobj, const Vector& theta0,
             const AlgoConfig& cfg) {
  validate(cfg.termination);
  warn_stepsize(cobj.objective(), cfg, "gd");
  const int p = cobj.dim();

  RunReport report;
  if (cfg.record_trace) report.trace.emplace();
  Vector theta = theta0;
  double f = cobj.value(theta);
  report.delta0 = initial_gap(cobj.objective(), f);
  DivergenceGuard diverge(f, cfg.stepsize, cobj.objective().smoothness_L);
  const bool grad_rule = grad_threshold(cfg.termination).has_value();

  double best_norm = std::numeric_limits<double>::infinity();
  Vector best_point = theta;
  std::optional<double> final_norm;

  while (true) {
    const CheckOutcome chk = check_rule(cobj, theta, cfg.termination, nullptr);
    final_norm = chk.grad_norm;
    if (report.trace)
      record_trace_point(*report.trace, cobj, theta, f, chk.grad_norm);
    if (cfg.report_best_by_grad_norm) {
      const double n = chk.grad_norm
                           ? *chk.grad_norm
                           : cobj.full_gradient(theta,
                                                CallCategory::Instrumentation)
                                 .norm();
      final_norm = n;
      if (n < best_norm) {
        best_norm = n;
        best_point = theta;
      }
    }
    if (chk.satisfied) {
      report.converged = true;
      break;
    }
    if (report.iterations >= cfg.max_iters) break;

    const Vector g = cobj.full_gradient(theta, CallCategory::Descent);
    theta -= cfg.stepsize * g;
    ++report.iterations;
    f = cobj.value(theta);
    diverge.observe(f);
  }

  const bool use_best = cfg.report_best_by_grad_norm && !report.converged;
  report.final_point = use_best ? best_point : theta;
  report.final_f = cobj.value(report.final_point);
  if (use_best)
    report.final_grad_norm = best_norm;
  else if (final_norm)
    report.final_grad_norm = *final_norm;
  else
    report.final_grad_norm =
        cobj.full_gradient(theta, CallCategory::Instrumentation).norm();
  report.ledger = cobj.ledger_snapshot();
  report.calls_including_guards = report.iterations * p + (grad_rule ? p : 0);
  return report;
}

RunReport lrgd_on_subspace(CountedObjective& cobj, const Vector& theta0,
                           const Subspace& subspace, const AlgoConfig& cfg) {
  validate(cfg.termination);
  warn_stepsize(cobj.objective(), cfg, "lrgd");
  const int p = cobj.dim();
  const std::int64_t r = subspace.rank();

  RunReport report;
  if (cfg.record_trace) {
    report.trace.emplace();
    report.trace->subspaces.push_back(subspace);
  }
  Vector theta = theta0;
  double f = cobj.value(theta);
  report.delta0 = initial_gap(cobj.objective(), f);
  DivergenceGuard diverge(f, cfg.stepsize, cobj.objective().smoothness_L);
  const bool proj_rule = std::holds_alternative<ProjGradNorm>(cfg.termination);
  const bool grad_rule = grad_threshold(cfg.termination).has_value();

  double best_norm = std::numeric_limits<double>::infinity();
  Vector best_point = theta;
  std::optional<double> final_norm;

  while (true) {
    const CheckOutcome chk =
        check_rule(cobj, theta, cfg.termination, &subspace);
    final_norm = chk.grad_norm;
    if (report.trace)
      record_trace_point(*report.trace, cobj, theta, f, chk.grad_norm);
    if (cfg.report_best_by_grad_norm) {
      const double n = chk.grad_norm
                           ? *chk.grad_norm
                           : cobj.full_gradient(theta,
                                                CallCategory::Instrumentation)
                                 .norm();
      final_norm = n;
      if (n < best_norm) {
        best_norm = n;
        best_point = theta;
      }
    }
    if (chk.satisfied) {
      report.converged = true;
      break;
    }
    if (report.iterations >= cfg.max_iters) break;

    const Vector approx =
        projected_gradient(cobj, theta, subspace, CallCategory::Descent);
    theta -= cfg.stepsize * approx;
    ++report.iterations;
    f = cobj.value(theta);
    diverge.observe(f);
  }

  const bool use_best = cfg.report_best_by_grad_norm && !report.converged;
  report.final_point = use_best ? best_point : theta;
  report.final_f = cobj.value(report.final_point);
  if (use_best)
    report.final_grad_norm = best_norm;
  else if (final_norm)
    report.final_grad_norm = *final_norm;
  else
    report.final_grad_norm =
        cobj.full_gradient(theta, CallCategory::Instrumentation).norm();
  report.ledger = cobj.ledger_snapshot();
  // A fused implementation reuses the projected-gradient check for the
  // update; full-gradient rules cost an extra p per check.
  if (proj_rule)
    report.calls_including_guards =
        report.ledger.sampling_calls() + (report.iterations + 1) * r;
  else
    report.calls_including_guards =
        report.ledger.sampling_calls() + report.iterations * r +
        (grad_rule ? (report.iterations + 1) * p : 0);
  return report;
}

RunReport lrgd(CountedObjective& cobj, const Vector& theta0,
               const AlgoConfig& cfg) {
  if (cfg.fixed_subspace)
    return lrgd_on_subspace(cobj, theta0, *cfg.fixed_subspace, cfg);
  ActiveSubspace active = estimate_active_subspace(cobj, cfg, theta0);
  return lrgd_on_subspace(cobj, theta0, active.subspace, cfg);
}

RunReport iterated_lrgd(CountedObjective& cobj, const Vector& theta0,
                        const AlgoConfig& cfg) {
  validate(cfg.termination);
  if (!cfg.rank) throw Error("iterated_lrgd: cfg.rank required");
  warn_stepsize(cobj.objective(), cfg, "iterated_lrgd");
  const int r = *cfg.rank;
  const int p = cobj.dim();
  if (r < 1 || r > p) throw Error("iterated_lrgd: need 1 <= r <= p");

  std::optional<double> inner_thr = cfg.inner_grad_threshold;
  if (!inner_thr) inner_thr = grad_threshold(cfg.termination);
  if (!inner_thr)
    throw Error("iterated_lrgd: inner_grad_threshold required for "
                "non-gradient termination rules");

  RunReport report;
  if (cfg.record_trace) report.trace.emplace();
  Vector theta = theta0;
  double f = cobj.value(theta);
  report.delta0 = initial_gap(cobj.objective(), f);
  DivergenceGuard diverge(f, cfg.stepsize, cobj.objective().smoothness_L);
  const bool grad_rule = grad_threshold(cfg.termination).has_value();

  std::vector<PhaseMark> marks;
  std::int64_t inner_checks = 0;
  bool hit_max_iters = false;
  std::optional<double> final_norm;
  if (report.trace)
    record_trace_point(*report.trace, cobj, theta, f, std::nullopt);

  while (true) {
    const CheckOutcome chk = check_rule(cobj, theta, cfg.termination, nullptr);
    final_norm = chk.grad_norm;
    if (chk.satisfied) {
      report.converged = true;
      break;
    }
    if (hit_max_iters || report.iterations >= cfg.max_iters) break;

    ++report.phases;
    marks.push_back({report.iterations, "gd"});

    // (a) r full-gradient steps; the gradients are kept for the basis.
    std::vector<Vector> phase_gradients;
    phase_gradients.reserve(static_cast<std::size_t>(r));
    for (int k = 0; k < r && report.iterations < cfg.max_iters; ++k) {
      Vector g = cobj.full_gradient(theta, CallCategory::Descent);
      phase_gradients.push_back(g);
      theta -= cfg.stepsize * g;
      ++report.iterations;
      f = cobj.value(theta);
      diverge.observe(f);
      if (report.trace)
        record_trace_point(*report.trace, cobj, theta, f, std::nullopt);
    }
    if (phase_gradients.empty()) break; // max_iters hit before any step

    // (b) orthonormal basis from the phase gradients, no extra oracle cost.
    Subspace S =
        orthonormalize(phase_gradients, default_drop_tol(phase_gradients));
    if (report.trace) report.trace->subspaces.push_back(S);
    marks.push_back({report.iterations, "subspace"});

    // (c) projected descent until the inner guard fails.
    while (true) {
      const Vector guard =
          projected_gradient(cobj, theta, S, CallCategory::Instrumentation);
      ++inner_checks;
      if (guard.norm() < *inner_thr) break;
      if (report.iterations >= cfg.max_iters) {
        hit_max_iters = true;
        break;
      }
      const Vector approx =
          projected_gradient(cobj, theta, S, CallCategory::Descent);
      theta -= cfg.stepsize * approx;
      ++report.iterations;
      f = cobj.value(theta);
      diverge.observe(f);
      if (report.trace)
        record_trace_point(*report.trace, cobj, theta, f, std::nullopt);
    }
  }

  report.final_point = theta;
  report.final_f = cobj.value(theta);
  report.final_grad_norm =
      final_norm ? *final_norm
                 : cobj.full_gradient(theta, CallCategory::Instrumentation)
                       .norm();
  report.ledger = cobj.ledger_snapshot();
  if (report.trace) report.trace->phase_marks = marks;
  report.calls_including_guards =
      report.phases * r * p + inner_checks * r + (grad_rule ? p : 0);
  return report;
}

RunReport adaptive_lrgd(CountedObjective& cobj, const Vector& theta0,
                        const AlgoConfig& cfg) {
  validate(cfg.termination);
  warn_stepsize(cobj.objective(), cfg, "adaptive_lrgd");
  const int p = cobj.dim();

  const std::optional<double> guard_thr = grad_threshold(cfg.termination);
  if (!guard_thr)
    throw Error("adaptive_lrgd: gradient-based termination rule required");
  const double inner_thr = cfg.inner_grad_threshold.value_or(*guard_thr);

  RunReport report;
  if (cfg.record_trace) report.trace.emplace();
  Vector theta = theta0;
  double f = cobj.value(theta);
  report.delta0 = initial_gap(cobj.objective(), f);
  DivergenceGuard diverge(f, cfg.stepsize, cobj.objective().smoothness_L);
  if (report.trace)
    record_trace_point(*report.trace, cobj, theta, f, std::nullopt);

  // Initial probe seeds the basis (and can certify stationarity outright).
  Vector g = cobj.full_gradient(theta, CallCategory::Sampling);
  std::int64_t failing_checks = 0;
  std::vector<Vector> basis;
  std::vector<PhaseMark> marks;
  std::mt19937_64 rng(cfg.sampler.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const auto residual = [&basis](const Vector& v) {
    Vector w = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) w -= b.dot(w) * b;
    return w;
  };

  bool stationary = g.norm() <= *guard_thr;
  if (!stationary) basis.push_back(g / g.norm());

  while (!stationary && static_cast<int>(basis.size()) <= p) {
    ++report.phases;
    marks.push_back(
        {report.iterations, "rank " + std::to_string(basis.size())});
    if (report.trace) {
      Matrix b(p, static_cast<Eigen::Index>(basis.size()));
      for (Eigen::Index j = 0; j < b.cols(); ++j)
        b.col(j) = basis[static_cast<std::size_t>(j)];
      report.trace->subspaces.emplace_back(std::move(b));
    }

    // Projected descent on the current basis.
    bool hit_max_iters = false;
    while (true) {
      Vector approx = Vector::Zero(p);
      for (const auto& u : basis)
        approx += cobj.directional_derivative(theta, Direction(u),
                                              CallCategory::Instrumentation) *
                  u;
      if (approx.norm() < inner_thr) {
        failing_checks += static_cast<std::int64_t>(basis.size());
        break;
      }
      if (report.iterations >= cfg.max_iters) {
        hit_max_iters = true;
        break;
      }
      Vector step = Vector::Zero(p);
      for (const auto& u : basis)
        step += cobj.directional_derivative(theta, Direction(u),
                                            CallCategory::Descent) *
                u;
      theta -= cfg.stepsize * step;
      ++report.iterations;
      f = cobj.value(theta);
      diverge.observe(f);
      if (report.trace)
        record_trace_point(*report.trace, cobj, theta, f, std::nullopt);
    }
    if (hit_max_iters) break;

    // Full-gradient probe: either certifies stationarity or supplies the
    // residual direction that grows the basis.
    g = cobj.full_gradient(theta, CallCategory::Sampling);
    if (g.norm() <= *guard_thr) {
      stationary = true;
      break;
    }
    if (static_cast<int>(basis.size()) >= p) break; // never grows past r = p

    const double drop_tol = 1e-10 * std::max(1.0, g.norm());
    Vector res = residual(g);
    if (res.norm() <= drop_tol)
      throw StalledResidualError(
          "stalled residual: gradient residual vanished while the guard "
          "still fails (inconsistent thresholds)");
    basis.push_back(res / res.norm());

    if (cfg.rank_schedule == RankSchedule::Geometric) {
      // Grow to twice the previous rank with extra sampled probes.
      const int target = std::min(p, 2 * static_cast<int>(basis.size() - 1));
      int rejected = 0;
      while (static_cast<int>(basis.size()) < target &&
             rejected <= cfg.resample_limit) {
        Vector point(p);
        for (int i = 0; i < p; ++i)
          point[i] = theta[i] + cfg.sampler.scale * gauss(rng);
        const Vector gs = cobj.full_gradient(point, CallCategory::Sampling);
        Vector rs = residual(gs);
        if (rs.norm() > 1e-10 * std::max(1.0, gs.norm()))
          basis.push_back(rs / rs.norm());
        else
          ++rejected;
      }
    }
  }

  report.converged = stationary;
  report.final_point = theta;
  report.final_f = cobj.value(theta);
  report.final_grad_norm = g.norm();
  report.final_rank = static_cast<int>(basis.size());
  report.ledger = cobj.ledger_snapshot();
  if (report.trace) report.trace->phase_marks = marks;
  report.calls_including_guards =
      report.ledger.total_counted() + failing_checks;
  return report;
}

double theoretical_budget(BudgetSetting setting, const BudgetParams& prm) {
  if (prm.r <= 0 || prm.p <= 0 || prm.eps <= 0)
    throw Error("theoretical_budget: r, p, eps must be positive");
  const double pr = static_cast<double>(prm.p) * prm.r;
  switch (setting) {
    case BudgetSetting::ExactSC:
      if (prm.kappa <= 0 || prm.delta0 <= prm.eps)
        throw Error("theoretical_budget: need kappa > 0 and delta0 > eps");
      return prm.kappa * prm.r * std::log(prm.delta0 / prm.eps) + pr;
    case BudgetSetting::ApproxSC:
      if (prm.kappa <= 0 || prm.delta0 <= prm.eps)
        throw Error("theoretical_budget: need kappa > 0 and delta0 > eps");
      return 16.0 * prm.kappa * prm.r * std::log(2.0 * prm.delta0 / prm.eps) +
             pr;
    case BudgetSetting::ExactNC:
      if (prm.L <= 0 || prm.delta0 < 0)
        throw Error("theoretical_budget: need L > 0 and delta0 >= 0");
      return 2.0 * prm.r * prm.L * prm.delta0 / (prm.eps * prm.eps) + pr;
    case BudgetSetting::ApproxNC:
      if (prm.L <= 0 || prm.delta0 < 0)
        throw Error("theoretical_budget: need L > 0 and delta0 >= 0");
      return 72.0 * prm.r * prm.L * prm.delta0 / (prm.eps * prm.eps) + pr;
  }
  throw Error("theoretical_budget: unknown setting");
}

bool check_approx_conditions(BudgetSetting setting, double eta, double eps,
                             double eps_prime, double sigma_r, int r,
                             double mu) {
  if (sigma_r <= 0) throw Error("check_approx_conditions: sigma_r must be > 0");
  const double common = eta * (1.0 + 2.0 * r / sigma_r);
  switch (setting) {
    case BudgetSetting::ApproxSC:
      return common + (2.0 * r / (sigma_r * eps_prime)) *
                          std::sqrt(mu * eps / 5.0) <=
             kInvSqrt10;
    case BudgetSetting::ApproxNC:
      return common + 2.0 * r * eps / (3.0 * sigma_r * eps_prime) <=
             kInvSqrt10;
    default:
      throw Error("check_approx_conditions: approximate settings only");
  }
}

} // namespace lrgd
