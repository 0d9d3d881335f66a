#pragma once

#include <string>
#include <vector>

#include "mfmp/minreflux.hpp"
#include "mfmp/simulator.hpp"

namespace mfmp {

// Equilateral-triangle projection of a ternary composition: pure component 1
// maps to (0,0), pure component 2 to (1,0), pure component 3 to (1/2, sqrt(3)/2).
std::pair<double, double> ternary_point(const std::vector<double>& x);

struct TernaryDocument {
    std::string csv;   // tabular geometry (see docs/formats.md)
    std::string svg;   // standalone rendering, empty when c != 3
};

// Exports pure-component vertices, stream compositions, per-section pinch
// simplex vertices and the simulated liquid profile. For c == 3 both the
// projected coordinates and an SVG drawing are produced; for larger systems
// the CSV carries raw compositions only.
TernaryDocument ternary_export(const ColumnSpec& spec, const MinRefluxResult& result,
                               const StageProfile& profile);

}  // namespace mfmp
