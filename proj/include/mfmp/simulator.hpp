#pragma once

#include <string>
#include <vector>

#include "mfmp/minreflux.hpp"
#include "mfmp/types.hpp"

namespace mfmp {

// Converged stage-by-stage column state. Stage 0 is the condensate (total
// condenser), stages 1..M are equilibrium trays, stage M+1 is the partial
// reboiler. Compositions are mole fractions.
struct StageProfile {
    std::vector<std::vector<double>> x;   // liquid leaving each stage, top-down
    std::vector<std::vector<double>> y;   // vapor leaving each stage
    std::vector<int> section_of_stage;    // 1-based section per tray (0 for ends)
    std::vector<double> section_liquid;   // L per section [mol/s]
    std::vector<double> section_vapor;    // V per section [mol/s]
    std::vector<std::vector<double>> achieved_products;  // compositions: distillate,
                                                         // sidedraws top-down, bottoms
    int iterations = 0;
    double residual = 0.0;
    int stages_per_section = 0;
};

// Candidate pinch compositions of one section: one vertex per root.
struct PinchGeometry {
    int section = 0;
    std::vector<std::vector<double>> vertices;   // Z_r, one per root, each sums to 1
    int pinch_vertex = 0;                        // 1-based index of the actual pinch
    std::vector<double> fixed_point_residual;    // stage-map residual per vertex
};

// One downward step of the section map: y_below = (L x + d)/V followed by the
// inverse equilibrium x_below = (y/alpha) / sum(y/alpha). The operating line
// must produce a nonnegative vapor composition; closure is asserted rather
// than patched by rescaling.
std::vector<double> stage_map_down(const std::vector<double>& x, double L, double V,
                                   const std::vector<double>& d,
                                   const std::vector<double>& alphas);

// Equilibrium vapor composition for a liquid composition.
std::vector<double> equilibrium_vapor(const std::vector<double>& x,
                                      const std::vector<double>& alphas);

enum class InitialProfile : std::uint8_t {
    FeedMix,            // aggregate feed composition on every stage (default;
                        // spec-agnostic, the way a generic column solver starts)
    EndInterpolation,   // linear blend between the specified end products
};

struct SimulateOptions {
    int max_iterations = 500;
    double residual_tol = 1e-10;   // componentwise balance residual, relative to feed
    InitialProfile init = InitialProfile::FeedMix;
};

// Full-column constant-molar-overflow, constant-relative-volatility
// equilibrium-stage solve at the given reflux ratio. Product total flows are
// fixed at the specification; component compositions are solved for.
// Newton with damping refines the profile after a frozen-K sweep start.
StageProfile simulate_column(const ColumnSpec& spec, double reflux_ratio, int stages_per_section,
                             const SimulateOptions& opts = {});

struct BisectionOptions {
    double purity_tol = 5e-4;    // mole-fraction band on achieved product compositions
    double r_width = 1e-3;       // bisection termination width on R
    double r_lo = 0.05;
    double r_hi = 0.0;           // <= 0: grown automatically from a feasible start
    SimulateOptions sim;
};

struct BisectionResult {
    double r_min = 0.0;
    double r_lo = 0.0, r_hi = 0.0;
    int evaluations = 0;
};

// Independent minimum-reflux estimate: bisection on R with feasibility defined
// by the achieved product compositions meeting the specification within
// purity_tol (impurities may fall below their specified level, target
// components may exceed theirs; the separation must be at least as sharp).
BisectionResult min_reflux_by_bisection(const ColumnSpec& spec, int stages_per_section,
                                        const BisectionOptions& opts = {});

// Candidate pinch compositions Z_{r,m} = gamma_r d_m / (L (alpha_m - gamma_r)),
// with pinned roots mapping to the matching pure-component vertex. Every
// vertex is verified as a stage-map fixed point.
PinchGeometry pinch_compositions(const SectionState& section, const ComponentSystem& components);

}  // namespace mfmp
