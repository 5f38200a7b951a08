#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrc/qcore.h"

namespace qrc {

/// minimize c.x  subject to  A x = b, x_j >= 0 where nonnegative[j].
struct LinearProgram {
    rvector objective;
    rmatrix equality;
    rvector rhs;
    /// Empty means every variable is nonnegative.
    std::vector<bool> nonnegative;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

std::string lp_status_name(LpStatus s);

struct LpOptions {
    /// Feasibility and optimality tolerance.
    double tol = 1e-9;
    /// Entries smaller than this are never used as pivots.
    double pivot_tol = 1e-11;
    uint64_t max_iterations = 200000;
};

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    rvector x;
    double objective = 0;
    uint64_t iterations = 0;
};

/// Two-phase dense tableau simplex with Bland's rule, so the pivot sequence
/// and the returned basic solution are deterministic. Redundant equality rows
/// are dropped after phase one.
LpSolution lp_solve(const LinearProgram &lp, const LpOptions &options = {});

}  // namespace qrc
