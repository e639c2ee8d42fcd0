#ifndef LRGD_TERMINATION_HPP
#define LRGD_TERMINATION_HPP

#include <cmath>
#include <optional>
#include <variant>

#include "lrgd/oracle.hpp"

namespace lrgd {

/// Stop when the full gradient norm is <= eps_hat (eps-stationarity).
struct GradNorm {
  double eps_hat;
};

/// Stop when the full gradient norm is <= sqrt(2 * mu * eps); by the
/// Polyak-Lojasiewicz inequality this certifies an eps-minimizer for
/// mu-strongly convex objectives.
struct PLSuboptimality {
  double mu;
  double eps;
};

/// Stop when the projected gradient norm is < eps_hat (inner-loop guard).
struct ProjGradNorm {
  double eps_hat;
};

/// Stop when f(theta) - f_star <= eps. Function values are free, so this
/// rule costs no oracle calls.
struct SuboptimalityGap {
  double f_star;
  double eps;
};

using TerminationRule =
    std::variant<GradNorm, PLSuboptimality, ProjGradNorm, SuboptimalityGap>;

/// The gradient-norm threshold a rule implies, when it is a gradient rule.
inline std::optional<double> grad_threshold(const TerminationRule& rule) {
  if (const auto* g = std::get_if<GradNorm>(&rule)) return g->eps_hat;
  if (const auto* pl = std::get_if<PLSuboptimality>(&rule))
    return std::sqrt(2.0 * pl->mu * pl->eps);
  if (const auto* pg = std::get_if<ProjGradNorm>(&rule)) return pg->eps_hat;
  return std::nullopt;
}

inline void validate(const TerminationRule& rule) {
  const bool ok = std::visit(
      [](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, GradNorm>) return r.eps_hat > 0;
        else if constexpr (std::is_same_v<T, PLSuboptimality>)
          return r.mu > 0 && r.eps > 0;
        else if constexpr (std::is_same_v<T, ProjGradNorm>)
          return r.eps_hat > 0;
        else
          return r.eps > 0;
      },
      rule);
  if (!ok) throw Error("TerminationRule: thresholds must be positive");
}

/// Uncounted re-check of a rule at a point (for verifying reports).
/// ProjGradNorm needs the projected gradient norm supplied by the caller.
bool termination_satisfied(const TerminationRule& rule, const Objective& obj,
                           const Vector& point,
                           std::optional<double> proj_grad_norm = std::nullopt);

} // namespace lrgd

#endif
