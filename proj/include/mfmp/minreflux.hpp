#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mfmp/feasibility.hpp"
#include "mfmp/roots.hpp"
#include "mfmp/types.hpp"

namespace mfmp {

// Precomputed, vapor-independent column analysis: net flows, sign patterns,
// pinch indicators, stream roots and index sets.
struct ColumnModel {
    ColumnSpec spec;
    std::vector<SectionState> sections;
    std::vector<StreamRoots> stream_roots;   // liquid form, one per stream
    std::vector<std::set<int>> index_sets;   // I_F / I_S per stream
};

ColumnModel build_model(const ColumnSpec& spec);

// Full column state at a given anchor vapor flow.
struct ColumnEvaluation {
    bool structurally_feasible = false;  // vapor balances and all root sets solvable
    std::string failure;                 // reason when not structurally feasible
    std::vector<double> vapor;           // per section [mol/s]
    std::vector<RootSet> roots;          // per section
    FeasibilityReport report;
};

ColumnEvaluation evaluate_at(const ColumnModel& model, int anchor_section, double v_anchor,
                             const CheckOptions& opts = {});

// One entry per attempted pinned-root substitution.
struct Candidate {
    std::string source;       // human-readable provenance
    std::string stream;       // stream whose root was pinned
    int section = 0;          // section whose characteristic equation was pinned
    int rho_key = 0;          // paper-style subscript of the pinned stream root
    double v_pinned = 0.0;    // vapor flow of the pinned section
    std::optional<double> v_reb;  // reboiler duty when feasible
    bool feasible = false;
    std::string note;         // failure reason for infeasible candidates
};

struct BindingEquality {
    std::string stream;
    int interval = 0;        // paper-style interval index i of the pinned pair
    int rho_key = 0;         // rho subscript pinned
    double rho_value = 0.0;
};

struct MinRefluxResult {
    double v_reb_min = 0.0;
    double r_min = 0.0;
    std::string controlling_stream;
    BindingEquality binding;
    std::vector<double> section_vapor;
    std::vector<SectionState> sections;   // with roots and vapor filled in
    FeasibilityReport report;
    std::vector<Candidate> candidates;
};

// Candidate reboiler duty obtained by fixing section `s` at vapor flow v_s and
// checking every stream's feasibility constraints; empty when infeasible.
std::optional<double> get_vreb(const ColumnModel& model, int section, double v_s,
                               const CheckOptions& opts = {});

// Candidate duties assuming sidedraw j (0-based stream index) controls the
// separation: each component root of the section above the draw is pinned to
// the matching stream root.
std::vector<Candidate> sidedraw_feasible(const ColumnModel& model, int stream_index,
                                         const CheckOptions& opts = {});

// Minimum reboiler vapor duty over all candidate controlling streams.
MinRefluxResult vreb_min(const ColumnSpec& spec, const CheckOptions& opts = {});
MinRefluxResult vreb_min(const ColumnModel& model, const CheckOptions& opts = {});

}  // namespace mfmp
