#pragma once

#include "vflite/conditions.hpp"

#include <atomic>
#include <cstdint>
#include <memory>

namespace vflite {

enum class SatResult : std::uint8_t { Sat, Unsat };

/// Decides feasibility of a path condition. Implementations must be safe to
/// call from multiple threads.
class SolverInterface {
public:
  virtual ~SolverInterface() = default;

  SatResult check(const PathCondition &cond, const Pdg &pdg) {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return checkImpl(cond, pdg);
  }

  std::uint64_t callCount() const {
    return calls_.load(std::memory_order_relaxed);
  }
  void resetCallCount() { calls_.store(0, std::memory_order_relaxed); }

protected:
  virtual SatResult checkImpl(const PathCondition &cond, const Pdg &pdg) = 0;

private:
  std::atomic<std::uint64_t> calls_{0};
};

/// Built-in decision procedure: union-find over terms driven by the flow
/// equalities, then a nullness state per class. Terms naming null-constant
/// vertices start must-null; == / != constraints join states without merging
/// classes; a class that is both must-null and must-nonnull is a conflict.
/// Opaque atoms are ignored (treated satisfiable).
class BuiltinSolver final : public SolverInterface {
protected:
  SatResult checkImpl(const PathCondition &cond, const Pdg &pdg) override;
};

std::unique_ptr<SolverInterface> makeBuiltinSolver();

} // namespace vflite
