#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mfmp/minreflux.hpp"
#include "mfmp/types.hpp"

namespace mfmp {

// One free distribution degree of freedom: the donor product's flow of
// `component` is the decision variable; the receiver product absorbs the
// remainder of the overall component balance. "bottoms" may appear on either
// side (it is derived from closure, so only the explicit side is stored).
struct FreeSplit {
    std::string component;
    std::string donor;      // "distillate", "sidedraw:<j>" or "bottoms"
    std::string receiver;
    double lo = 0.0;        // bounds on the donor flow [mol/s]
    double hi = 0.0;
};

struct FreeSplitSpec {
    ColumnSpec base;
    std::vector<FreeSplit> dofs;
};

struct OptimizerConfig {
    int grid = 64;                  // grid intervals per degree of freedom
    double refine_step_tol = 1e-6;  // coordinate-descent termination [mol/s]
    double equality_tol = 1e-6;     // certificate equality residual bound
    double inequality_tol = 1e-7;   // certificate slack bound
    double bound_offset = 1e-4;     // interval-bound offset in the certificate
    int infeasibility_grid = 128;   // re-scan resolution before declaring infeasible
    CheckOptions check;
    int threads = 0;                // 0: hardware count capped by MFMP_THREADS
};

struct CertificateBlock {
    std::string name;
    int evaluated = 0;
    double max_equality_residual = 0.0;
    double min_inequality_slack = 0.0;
    bool passed = true;
};

struct Certificate {
    std::vector<CertificateBlock> blocks;
    bool passed = true;
};

// An ambiguous section whose pinch interval depends on the free distribution.
struct AmbiguousSection {
    int section = 0;          // 1-based
    int component = 0;        // 1-based component whose net flow can flip sign
    int interval_if_up = 0;   // pinch interval when the component flows up
    int interval_if_down = 0; // pinch interval when it flows down
};

// A direction in which the objective is flat across an interval of the dof
// box; the reported optimum sits at the vertex where a further feasibility
// constraint becomes binding.
struct FlatDirection {
    int dof = 0;
    double extent = 0.0;  // length of the flat segment through the optimum [mol/s]
};

struct OptimizationResult {
    std::string status;                     // "optimal" or "infeasible"
    double v_reb_min = 0.0;
    std::vector<double> dof_values;
    ColumnSpec resolved;                    // full spec at the optimum
    std::optional<MinRefluxResult> inner;
    std::vector<AmbiguousSection> ambiguous;
    std::map<std::string, int> binary_assignment;  // "SEC_k" -> 1 if pinch in lower interval
    Certificate certificate;
    int evaluations = 0;
    std::vector<std::string> assignments_covered;  // pinch-assignment signatures scanned
    std::vector<FlatDirection> flat_directions;
};

// Resolves the free splits at the given dof values into a full column spec.
ColumnSpec resolve_splits(const FreeSplitSpec& fs, const std::vector<double>& values);

// Ambiguity analysis over the dof box plus the cross product of pinch-interval
// assignments for the ambiguous sections.
std::vector<AmbiguousSection> ambiguous_sections(const FreeSplitSpec& fs);
std::vector<std::map<int, int>> enumerate_pinch_assignments(const FreeSplitSpec& fs);

// Deterministic global search (grid + coordinate descent) over the dof box,
// minimizing the inner minimum reboiler duty; the result is certified against
// the full constraint system.
OptimizationResult optimize_distribution(const FreeSplitSpec& fs, const OptimizerConfig& cfg = {});

// Evaluates the complete optimality system at a resolved operating point:
// mass balances, the pole-free vapor-duty root equations, stream-root
// definitions, offset variable bounds, binary interval bounds and all
// feasibility constraints (including the chained forms that eliminate stream
// roots the sidedraw does not carry).
Certificate verify_certificate(const FreeSplitSpec& fs, const ColumnSpec& resolved,
                               const MinRefluxResult& inner, const OptimizerConfig& cfg = {});

}  // namespace mfmp
