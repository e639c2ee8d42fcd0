#ifndef LRGD_ORACLE_HPP
#define LRGD_ORACLE_HPP

#include <cstdint>

#include "lrgd/objective.hpp"

namespace lrgd {

/// Which ledger bucket an oracle call is charged to.
///
/// Sampling and descent calls together form the reported oracle complexity.
/// Instrumentation covers termination checks and trace recording and is
/// excluded from reported counts.
enum class CallCategory { Sampling, Descent, Instrumentation };

/// Itemized directional-derivative call counts. Counters only grow.
class CallLedger {
public:
  std::int64_t sampling_calls() const { return sampling_; }
  std::int64_t descent_calls() const { return descent_; }
  std::int64_t instrumentation_calls() const { return instrumentation_; }

  /// sampling + descent; instrumentation is never included.
  std::int64_t total_counted() const { return sampling_ + descent_; }

  void charge(CallCategory cat, std::int64_t n) {
    switch (cat) {
      case CallCategory::Sampling: sampling_ += n; break;
      case CallCategory::Descent: descent_ += n; break;
      case CallCategory::Instrumentation: instrumentation_ += n; break;
    }
  }

private:
  std::int64_t sampling_ = 0;
  std::int64_t descent_ = 0;
  std::int64_t instrumentation_ = 0;
};

/// An objective wired to a call ledger. Every directional derivative charges
/// one call and every full gradient charges p calls to the active category,
/// regardless of whether an analytic shortcut produced the numbers.
class CountedObjective {
public:
  explicit CountedObjective(const Objective& obj,
                            CallCategory category = CallCategory::Descent)
      : obj_(&obj), category_(category) {}

  const Objective& objective() const { return *obj_; }
  int dim() const { return obj_->dim; }

  CallCategory category() const { return category_; }
  void set_category(CallCategory c) { category_ = c; }

  /// f(theta); free under the cost model.
  double value(const Vector& point) const { return eval(*obj_, point); }

  /// One oracle call.
  double directional_derivative(const Vector& point, const Direction& dir);
  double directional_derivative(const Vector& point, const Direction& dir,
                                CallCategory cat);

  /// p oracle calls.
  Vector full_gradient(const Vector& point);
  Vector full_gradient(const Vector& point, CallCategory cat);

  /// Immutable snapshot of the current counters.
  CallLedger ledger_snapshot() const { return ledger_; }

private:
  const Objective* obj_;
  CallLedger ledger_;
  CallCategory category_;
};

/// Scoped category switch for a CountedObjective.
class CategoryScope {
public:
  CategoryScope(CountedObjective& cobj, CallCategory cat)
      : cobj_(cobj), saved_(cobj.category()) {
    cobj_.set_category(cat);
  }
  ~CategoryScope() { cobj_.set_category(saved_); }
  CategoryScope(const CategoryScope&) = delete;
  CategoryScope& operator=(const CategoryScope&) = delete;

private:
  CountedObjective& cobj_;
  CallCategory saved_;
};

} // namespace lrgd

#endif
