#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mfmp/errors.hpp"

namespace mfmp {

// Index conventions used throughout:
//  - Components are 0-based and sorted by ascending relative volatility, so
//    alphas[0] == 1 (heaviest) and alphas[c-1] is the most volatile.
//  - Relative-volatility intervals are numbered 1..c+1 paper-style: interval q
//    spans (alpha_{q-1}, alpha_q) with alpha_0 = 0 and alpha_{c+1} = alpha_c + delta.
//    In 0-based array terms interval q spans (alphas[q-2], alphas[q-1]).
//  - Stream roots rho are keyed by m in 0..c-1 where rho_m lies in
//    (alpha_m, alpha_{m+1}) 1-based, i.e. (alphas[m-1], alphas[m]) 0-based,
//    with key 0 meaning the interval (0, alphas[0]).

// Component system: relative volatilities w.r.t. the heaviest component.
struct ComponentSystem {
    std::vector<std::string> names;   // optional, ascending volatility order
    std::vector<double> alphas;       // ascending, alphas[0] == 1 exactly
    double delta = 1.0;               // initial extension of the topmost root interval

    int count() const { return static_cast<int>(alphas.size()); }
    void validate() const;
};

enum class ThermalState : std::uint8_t {
    SaturatedLiquid,
    SaturatedVapor,
    PartiallyVaporized,
};

enum class StreamKind : std::uint8_t { Feed, Sidedraw };

// A feed or sidedraw stream. Internal sign convention: feeds carry
// nonnegative component flows, sidedraws nonpositive ones.
struct StreamSpec {
    StreamKind kind = StreamKind::Feed;
    int position = 0;                  // separates section `position` and `position`+1 (1-based)
    std::string name;                  // e.g. "F1", "S2"
    ThermalState thermal = ThermalState::SaturatedLiquid;
    std::vector<double> flows;         // f_i [mol/s], componentwise
    std::vector<double> liquid_flows;  // l_i [mol/s]
    std::vector<double> vapor_flows;   // v_i [mol/s]

    double total_flow() const;         // sum f_i (signed)
    double total_vapor() const;        // sum v_i (signed)
    double total_liquid() const;       // sum l_i (signed)
};

// Splits stream flows into equilibrium liquid/vapor portions so that the
// vapor fraction (by moles) equals `vapor_fraction` and v_m is proportional
// to alpha_m * l_m. Works on magnitudes; signs of `flows` are preserved.
void flash_split(const std::vector<double>& alphas, const std::vector<double>& flows,
                 double vapor_fraction, std::vector<double>& liquid_out,
                 std::vector<double>& vapor_out);

// Column specification: ordered streams, distillate product, total condenser.
struct ColumnSpec {
    ComponentSystem components;
    std::vector<StreamSpec> streams;      // top-to-bottom order (position 1..N)
    std::vector<double> distillate;       // d_i of section 1 [mol/s], >= 0

    int section_count() const { return static_cast<int>(streams.size()) + 1; }
    std::vector<double> bottoms() const;  // derived from overall closure, >= 0
    double total_feed() const;            // sum over feeds of total flow
    double distillate_total() const;
};

// Per-section state assembled by the analysis.
struct SectionState {
    int index = 0;                     // 1-based section number, top down
    std::vector<double> net_flows;     // d_i [mol/s], zero-snapped
    double vapor_flow = 0.0;           // V [mol/s], set when known
    std::vector<double> roots;         // gamma, ascending (filled by roots module)
    std::vector<int> root_interval;    // interval 1..c+1 per root; 0 = pinned at alpha
    int pinch_index = 0;               // 1-based root index p
    int pinch_interval = 0;            // 1-based interval q with mu_q = 1
    std::vector<std::uint8_t> mu;      // length c+1, one-hot
    std::vector<std::uint8_t> k_ind;   // prefix sums of mu, length c+1

    // Sign-pattern summary: h = last strictly-negative component (1-based, 0 if
    // none), l = first strictly-positive component (1-based, c+1 if none).
    int h = 0;
    int l = 0;
};

// Relative zero tolerance: flows below 1e-10 * (total feed) snap to exact zero
// so the root structure sees genuine zeros.
inline constexpr double kZeroFlowRel = 1e-10;

// Validates all ColumnSpec invariants and returns the normalized spec
// (zero-snapped distillate, streams sorted by position).
ColumnSpec validate_spec(const ColumnSpec& spec);

// Net upward component flows for every section:
//   d^{1} = distillate,  d^{k+1} = d^{k} - f(stream k).
// Returns SectionState with net_flows, h/l and pinch interval metadata filled.
std::vector<SectionState> net_flows_all_sections(const ColumnSpec& spec);

// Vapor balance propagation: crossing a stream upward adds its total vapor
// flow. anchor_section is 1-based; V_anchor > 0. Throws NonpositiveSectionVapor
// if any section vapor becomes <= 0.
std::vector<double> vapor_balance_propagate(const ColumnSpec& spec, int anchor_section,
                                            double v_anchor);

// Reflux ratio from the reboiler vapor duty for a total condenser:
//   R = (V^{1} - D) / D.
double reflux_from_reboiler_duty(const ColumnSpec& spec, double v_reb);

// Hypothetical liquid in equilibrium with a vapor stream:
//   l_m = (v_m/alpha_m) / sum_k (v_k/alpha_k), normalized to sum 1.
// For sidedraw-signed input (v <= 0) the result is normalized to sum -1.
std::vector<double> hypothetical_liquid(const std::vector<double>& vapor_flows,
                                        const std::vector<double>& alphas);

// Classifies the sign pattern of a net-flow vector. Throws SignPatternViolation
// if a strictly negative component sits above (more volatile than) a strictly
// positive one. Returns {h, l} 1-based as defined on SectionState.
std::pair<int, int> classify_sign_pattern(const std::vector<double>& d);

// Pinch interval from the sign pattern: interval l if a positive block exists,
// interval h+1 otherwise.
int pinch_interval_from_pattern(int h, int l, int c);

}  // namespace mfmp
