#pragma once

// Error taxonomy and work budgets shared by every module.
//
// All failures are exceptions derived from regspec::error so the CLI can map
// them onto its exit codes: invariant/usage problems -> 2, exhausted budgets
// and non-converged iterations -> 3, everything else -> 1.

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace regspec {

struct error : std::runtime_error {
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// A computed quantity violated a contract (bad parameters included).
struct invariant_violation : error {
  explicit invariant_violation(const std::string& what) : error(what) {}
};

// An enumeration / sampling / iteration cap was exhausted. Deliberately not a
// silent truncation: callers must either enlarge the budget or treat the run
// as failed.
struct budget_exceeded : error {
  explicit budget_exceeded(const std::string& what) : error(what) {}
};

// Adaptive quadrature or an iterative solver failed to reach its tolerance.
struct convergence_error : error {
  explicit convergence_error(const std::string& what) : error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw invariant_violation(what);
}

// Elementary-operation budget (DFS node visits, sampler pair draws, ...).
// The default cap of 1e8 nodes follows the documented enumeration default;
// REGSPEC_BUDGET (a floating point node count) overrides it process-wide.
class work_budget {
 public:
  explicit work_budget(std::uint64_t cap = default_cap()) : cap_(cap) {}

  static std::uint64_t default_cap() {
    if (const char* env = std::getenv("REGSPEC_BUDGET")) {
      double v = std::atof(env);
      if (v > 0) return static_cast<std::uint64_t>(v);
    }
    return 100000000ull;  // 1e8 visited nodes
  }

  // Charge `units` units of work; throws once the cap is exhausted.
  void charge(std::uint64_t units, const char* where) {
    used_ += units;
    if (used_ > cap_)
      throw budget_exceeded(std::string(where) + ": work budget exhausted (" +
                            std::to_string(used_) + " > " +
                            std::to_string(cap_) + " units)");
  }

  std::uint64_t used() const { return used_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t cap_;
  std::uint64_t used_ = 0;
};

inline double sq(double x) { return x * x; }

}  // namespace regspec
