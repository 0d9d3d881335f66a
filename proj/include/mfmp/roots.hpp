#pragma once

#include <map>
#include <vector>

#include "mfmp/types.hpp"

namespace mfmp {

// Root set of the section characteristic equation
//   sum_i alpha_i d_i / (alpha_i - gamma) = V.
struct RootSet {
    std::vector<double> gamma;      // ascending, c entries
    std::vector<int> interval;      // 1..c+1 per root; 0 marks a root pinned at an alpha
    std::vector<bool> pinned;       // true for roots stored exactly at alpha_i (d_i = 0)
    int pinch_index = 0;            // 1-based index of the pinch root
    int pinch_interval = 0;         // interval q containing the pinch root
    bool boundary_tie = false;      // a solved root coincides with an alpha within tolerance
    double upper_bound = 0.0;       // effective alpha_c + delta used for the top bracket

    double pinch_root() const { return gamma[pinch_index - 1]; }
};

// Roots of the stream equation, keyed paper-style: rho[m] lies in
// (alpha_m, alpha_{m+1}) 1-based; key 0 denotes the interval (0, alpha_1).
enum class StreamRootForm : std::uint8_t { LiquidForm, FullStreamForm };

struct StreamRoots {
    std::map<int, double> rho;
    StreamRootForm source_form = StreamRootForm::LiquidForm;

    bool has(int m) const { return rho.count(m) != 0; }
    double at(int m) const;
};

// Evaluates sum_i alpha_i d_i / (alpha_i - gamma) (the left side of the
// characteristic equation). gamma must not equal an alpha with d_i != 0.
double eval_characteristic(const std::vector<double>& d, const std::vector<double>& alphas,
                           double gamma);

// Solves the characteristic equation for all c roots. Zero-flow components
// contribute roots pinned exactly at their alphas; the remaining roots are
// bracketed inside the intervals dictated by the sign pattern and refined to
// ~1e-13 relative width. Throws BracketFailure when a required root does not
// exist (the operating point is infeasible), NonpositiveV for V <= 0.
RootSet solve_characteristic(const std::vector<double>& d, double V,
                             const ComponentSystem& components);

// Solves the stream root equation for every interval between consecutive
// components present in the stream. Saturated-vapor streams are transformed
// through hypothetical_liquid first. When full_form is requested the equation
// sum alpha_m f_m/(alpha_m - rho) = V_stream is solved instead (equilibrium
// streams yield the same interior roots plus one extra root below the lowest
// present alpha when V_stream > 0).
StreamRoots solve_stream_roots(const StreamSpec& stream, const ComponentSystem& components,
                               StreamRootForm form = StreamRootForm::LiquidForm);

// Pinch indicator vectors from a root set: mu_q = 1 iff the pinch root lies in
// interval q; k_ind is the running prefix sum.
void classify_and_indicators(const RootSet& roots, int c, std::vector<std::uint8_t>& mu,
                             std::vector<std::uint8_t>& k_ind);

}  // namespace mfmp
