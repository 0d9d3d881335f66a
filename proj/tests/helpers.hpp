#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "mfmp/json_io.hpp"
#include "mfmp/bundled_examples.hpp"

namespace testutil {

// Independent brute-force root oracle: scan [lo, hi] on a uniform grid for
// sign changes and bisect each one down to ~1e-13 relative width. Deliberately
// naive so it shares nothing with the library's solver.
inline std::vector<double> scan_roots(const std::function<double(double)>& f, double lo, double hi,
                                      int grid = 200000) {
    std::vector<double> roots;
    double prev_x = lo, prev_f = f(lo);
    for (int k = 1; k <= grid; ++k) {
        const double x = lo + (hi - lo) * k / grid;
        const double fx = f(x);
        if (std::isfinite(prev_f) && std::isfinite(fx) && prev_f * fx <= 0.0 && prev_f != fx) {
            double a = prev_x, b = x, fa = prev_f;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = f(m);
                if (fa * fm <= 0.0)
                    b = m;
                else {
                    a = m;
                    fa = fm;
                }
                if (b - a < 1e-14 * (std::abs(a) + std::abs(b) + 1.0)) break;
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_f = fx;
    }
    return roots;
}

inline mfmp::ColumnSpec bundled(const std::string& name) {
    for (const auto& ex : mfmp::bundled_examples())
        if (ex.name == name) return mfmp::spec_from_json(nlohmann::json::parse(ex.content));
    throw std::runtime_error("no bundled example named " + name);
}

inline mfmp::FreeSplitSpec bundled_free(const std::string& name) {
    for (const auto& ex : mfmp::bundled_examples())
        if (ex.name == name)
            return mfmp::free_split_spec_from_json(nlohmann::json::parse(ex.content));
    throw std::runtime_error("no bundled example named " + name);
}

inline bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::abs(b);
}

}  // namespace testutil
