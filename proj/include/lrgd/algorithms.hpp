#ifndef LRGD_ALGORITHMS_HPP
#define LRGD_ALGORITHMS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lrgd/oracle.hpp"
#include "lrgd/subspace.hpp"
#include "lrgd/termination.hpp"

namespace lrgd {

/// Gaussian sampler for the subspace-identification points: draws
/// theta_j ~ N(center, scale^2 I), seeded for reproducibility.
struct SamplerSpec {
  double scale = 1.0;
  std::uint64_t seed = 0;
};

enum class RankSchedule { Arithmetic, Geometric };

struct AlgoConfig {
  double stepsize = 0.1;                        // alpha
  double target_eps = 1e-3;                     // eps (context for budgets)
  std::optional<int> rank;                      // r
  TerminationRule termination = GradNorm{1e-3}; // outer rule
  std::int64_t max_iters = 1000000;
  SamplerSpec sampler;
  int resample_limit = 20;
  double grad_floor = 1e-9;                     // eps' for sampled gradients
  std::optional<double> inner_grad_threshold;   // inner-loop guard override
  RankSchedule rank_schedule = RankSchedule::Arithmetic;
  bool record_trace = false;
  bool report_best_by_grad_norm = false;        // non-convex runs
  std::optional<Subspace> fixed_subspace;       // skip subspace estimation
};

struct PhaseMark {
  std::int64_t iteration;
  std::string label;
};

struct RunTrace {
  std::vector<Vector> iterates;
  std::vector<double> f_values;
  std::vector<double> grad_norms; // recorded through the instrumentation bucket
  std::vector<std::int64_t> counted_calls; // cumulative counted at each record
  std::vector<PhaseMark> phase_marks;
  std::vector<Subspace> subspaces;
};

struct RunReport {
  Vector final_point;
  double final_f = 0.0;
  double final_grad_norm = 0.0;
  bool converged = false;
  std::int64_t iterations = 0; // update steps actually taken
  CallLedger ledger;
  std::optional<double> delta0; // f(theta0) - f* when f* is known
  std::optional<RunTrace> trace;
  std::int64_t phases = 0;
  /// Oracle evaluations a fused implementation would make, guard checks
  /// included (the alternative accounting for the reported counts).
  std::int64_t calls_including_guards = 0;
  int final_rank = 0; // adaptive: final |U|
};

/// Result of the subspace-identification stage.
struct ActiveSubspace {
  Subspace subspace;
  GradientMatrix gradients;
};

/// Draws cfg.rank points from the sampler around `center`, evaluates full
/// gradients (charged to the sampling bucket), redraws any sample whose
/// gradient norm is <= cfg.grad_floor, and returns the span of the dominant
/// left singular vectors of the normalized gradient matrix.
ActiveSubspace estimate_active_subspace(CountedObjective& cobj,
                                        const AlgoConfig& cfg,
                                        const Vector& center);

/// Plain gradient descent: theta <- theta - alpha * grad f(theta), one full
/// gradient (p calls) per update.
RunReport gd(CountedObjective& cobj, const Vector& theta0,
             const AlgoConfig& cfg);

/// Low-rank gradient descent on a fixed subspace: each update spends exactly
/// r directional derivatives to form the projected gradient.
RunReport lrgd_on_subspace(CountedObjective& cobj, const Vector& theta0,
                           const Subspace& subspace, const AlgoConfig& cfg);

/// Subspace identification followed by projected descent.
RunReport lrgd(CountedObjective& cobj, const Vector& theta0,
               const AlgoConfig& cfg);

/// Repeated phases of r full-gradient steps, a Gram-Schmidt basis from the
/// phase's gradients (reused, no extra oracle cost), and projected descent
/// until the inner guard passes; stops when the outer rule is satisfied.
RunReport iterated_lrgd(CountedObjective& cobj, const Vector& theta0,
                        const AlgoConfig& cfg);

/// Projected descent on a growing orthonormal set seeded with the initial
/// gradient direction; after each inner convergence a full-gradient probe
/// either certifies stationarity or contributes its residual as a new basis
/// direction. The rank grows arithmetically (+1) or geometrically (x2).
RunReport adaptive_lrgd(CountedObjective& cobj, const Vector& theta0,
                        const AlgoConfig& cfg);

enum class BudgetSetting { ExactSC, ApproxSC, ExactNC, ApproxNC };

struct BudgetParams {
  double kappa = 0.0; // SC settings
  double L = 0.0;     // NC settings
  int r = 0;
  int p = 0;
  double delta0 = 0.0;
  double eps = 0.0;
};

/// Oracle-call budgets:
///   ExactSC   kappa * r * log(delta0/eps) + p * r
///   ApproxSC  16 * kappa * r * log(2 * delta0/eps) + p * r
///   ExactNC   2 * r * L * delta0 / eps^2 + p * r
///   ApproxNC  72 * r * L * delta0 / eps^2 + p * r
double theoretical_budget(BudgetSetting setting, const BudgetParams& params);

/// Hypothesis check for the approximate-rank guarantees:
///   ApproxSC  eta (1 + 2r/sigma_r) + (2r/(sigma_r eps')) sqrt(mu eps/5) <= 1/sqrt(10)
///   ApproxNC  eta (1 + 2r/sigma_r) + 2 r eps / (3 sigma_r eps') <= 1/sqrt(10)
bool check_approx_conditions(BudgetSetting setting, double eta, double eps,
                             double eps_prime, double sigma_r, int r,
                             double mu);

} // namespace lrgd

#endif
