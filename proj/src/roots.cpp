#include "mfmp/roots.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace mfmp {

namespace {

constexpr int kMaxIter = 300;

// Safeguarded bisection with secant acceleration inside a sign-change bracket.
double solve_bracketed(const std::function<double(double)>& f, double lo, double hi, double flo,
                       double fhi) {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    for (int it = 0; it < kMaxIter; ++it) {
        const double width = hi - lo;
        if (width <= 4e-16 * (std::abs(lo) + std::abs(hi)) || width <= 0.0) break;
        double x;
        if (it % 3 == 2) {
            x = 0.5 * (lo + hi);
        } else {
            x = hi - fhi * (hi - lo) / (fhi - flo);  // secant
            const double guard = 0.02 * width;
            if (!(x > lo + guard && x < hi - guard)) x = 0.5 * (lo + hi);
        }
        const double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx < 0.0) == (flo < 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    return 0.5 * (lo + hi);
}

// Solves inside (lo, hi) where the function diverges to sign_lo*inf at lo+ and
// sign_hi*inf at hi-. Offsets shrink automatically when a root hugs a pole.
double solve_pole_interval(const std::function<double(double)>& f, double lo, double hi,
                           int sign_lo, int sign_hi, const char* what) {
    const double span = hi - lo;
    double eps = 1e-13 * span;
    double a = lo + eps, b = hi - eps;
    double fa = f(a), fb = f(b);
    for (int tries = 0; tries < 6 && (fa > 0) != (sign_lo > 0); ++tries) {
        eps *= 1e-3;
        if (lo + eps <= lo) break;
        a = lo + eps;
        fa = f(a);
    }
    if ((fa > 0) != (sign_lo > 0)) {
        // Root lies within one ulp of the pole; return the offset point.
        return a;
    }
    eps = 1e-13 * span;
    for (int tries = 0; tries < 6 && (fb > 0) != (sign_hi > 0); ++tries) {
        eps *= 1e-3;
        if (hi - eps >= hi) break;
        b = hi - eps;
        fb = f(b);
    }
    if ((fb > 0) != (sign_hi > 0)) return b;
    if ((fa < 0.0) == (fb < 0.0)) {
        std::ostringstream os;
        os << "no sign change in (" << lo << ", " << hi << ") for " << what;
        throw BracketFailure(os.str());
    }
    return solve_bracketed(f, a, b, fa, fb);
}

// Golden-section minimizer for a strictly convex function on (lo, hi).
double golden_min(const std::function<double(double)>& f, double lo, double hi) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-13 * (hi - lo); ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double StreamRoots::at(int m) const {
    auto it = rho.find(m);
    if (it == rho.end()) {
        std::ostringstream os;
        os << "stream root rho_" << m << " does not exist for this stream";
        throw MissingRho(os.str());
    }
    return it->second;
}

double eval_characteristic(const std::vector<double>& d, const std::vector<double>& alphas,
                           double gamma) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] == 0.0) continue;
        s += alphas[i] * d[i] / (alphas[i] - gamma);
    }
    return s;
}

RootSet solve_characteristic(const std::vector<double>& d, double V,
                             const ComponentSystem& components) {
    if (!(V > 0.0)) throw NonpositiveV("section vapor flow must be positive");
    const auto& alphas = components.alphas;
    const int c = components.count();
    if (static_cast<int>(d.size()) != c) throw Error("net flow vector length mismatch");

    // Active (nonzero) components define the reduced equation; each component,
    // active or not, owns exactly one root label:
    //   d_i = 0  ->  gamma_i pinned at alpha_i
    //   d_i < 0  ->  gamma_i just above alpha_i (up to the next active pole)
    //   d_i > 0  ->  gamma_i just below alpha_i (down to the previous pole)
    std::vector<int> active;
    for (int i = 0; i < c; ++i)
        if (d[i] != 0.0) active.push_back(i);
    if (active.empty()) throw BracketFailure("all net flows are zero; no characteristic roots");

    std::vector<double> ra, rd;
    for (int i : active) {
        ra.push_back(alphas[i]);
        rd.push_back(d[i]);
    }
    const int cr = static_cast<int>(ra.size());
    auto [h_full, l_full] = classify_sign_pattern(d);
    int hr = 0, lr = cr + 1;  // reduced-pattern h and l, 1-based
    for (int i = 0; i < cr; ++i) {
        if (rd[i] < 0.0) hr = i + 1;
        if (rd[i] > 0.0 && lr == cr + 1) lr = i + 1;
    }

    auto f = [&](double g) { return eval_characteristic(d, alphas, g) - V; };

    RootSet out;
    out.upper_bound = alphas[c - 1] + components.delta;
    out.gamma.assign(c, 0.0);
    out.pinned.assign(c, false);
    out.interval.assign(c, 0);
    for (int i = 0; i < c; ++i) {
        if (d[i] == 0.0) {
            out.gamma[i] = alphas[i];
            out.pinned[i] = true;
        }
    }

    const bool has_pos = lr <= cr;
    const bool has_neg = hr >= 1;
    const bool doubled = has_pos && has_neg;  // reduced pattern always has l = h+1

    // Family 1: one root above each strictly-negative component except the one
    // that shares the doubled interval with family 2.
    for (int ii = 1; ii <= hr; ++ii) {
        const double lo = ra[ii - 1];
        if (ii == hr && doubled) break;  // handled with family 2 below
        double g;
        if (ii < cr) {
            const double hi = ra[ii];
            g = solve_pole_interval(f, lo, hi, +1, (rd[ii] > 0.0 ? +1 : -1),
                                    "characteristic root");
        } else {
            // topmost interval (alpha_c', alpha_c' + delta): expand until f < 0
            double abs_load = 0.0;
            for (int m = 0; m < cr; ++m) abs_load += ra[m] * std::abs(rd[m]);
            double hi = lo + std::max(components.delta, 10.0 * (ra[cr - 1] + abs_load / V));
            double fhi = f(hi);
            int guard = 0;
            while (fhi >= 0.0 && guard++ < 200) {
                hi = lo + 2.0 * (hi - lo);
                fhi = f(hi);
            }
            if (fhi >= 0.0) throw BracketFailure("top root bracket failed to expand");
            out.upper_bound = hi;
            double eps = 1e-13 * (hi - lo);
            double a = lo + eps, fa = f(a);
            while (fa <= 0.0 && eps > 1e-18 * (hi - lo)) {
                eps *= 1e-3;
                a = lo + eps;
                fa = f(a);
            }
            g = fa > 0.0 ? solve_bracketed(f, a, hi, fa, fhi) : a;
        }
        out.gamma[active[ii - 1]] = g;
    }

    // Family 2: one root below each strictly-positive component except the
    // doubled one.
    for (int ii = lr; ii <= cr; ++ii) {
        if (ii == lr && doubled) continue;
        const double hi = ra[ii - 1];
        double g;
        if (ii >= 2) {
            const double lo = ra[ii - 2];
            g = solve_pole_interval(f, lo, hi, (rd[ii - 2] > 0.0 ? -1 : +1), +1,
                                    "characteristic root");
        } else {
            // bottom interval (0, alpha_1'): finite at 0, f(0) = sum d - V
            const double f0 = f(0.0);
            if (f0 > 0.0)
                throw BracketFailure("no characteristic root below the lightest component");
            if (f0 == 0.0) {
                g = 0.0;
            } else {
                const double eps = 1e-13 * hi;
                const double b = hi - eps, fb = f(b);
                g = fb > 0.0 ? solve_bracketed(f, 0.0, b, f0, fb) : b;
            }
        }
        out.gamma[active[ii - 1]] = g;
    }

    if (doubled) {
        // Two roots between the last down-flowing and the first up-flowing
        // active component; the function is strictly convex there, so locate
        // the minimum first and bisect each side.
        const double lo = ra[hr - 1], hi = ra[lr - 1];
        const double span = hi - lo;
        const double eps = 1e-13 * span;
        const double a = lo + eps, b = hi - eps;
        const double xm = golden_min(f, a, b);
        const double fm = f(xm);
        if (fm > 0.0)
            throw BracketFailure("pinch interval carries no real roots at this vapor flow");
        double g_lo, g_hi;
        if (fm == 0.0) {
            g_lo = g_hi = xm;
        } else {
            const double fa = f(a), fb = f(b);
            g_lo = fa > 0.0 ? solve_bracketed(f, a, xm, fa, fm) : a;
            g_hi = fb > 0.0 ? solve_bracketed(f, xm, b, fm, fb) : b;
        }
        out.gamma[active[hr - 1]] = g_lo;
        out.gamma[active[lr - 1]] = g_hi;
    }

    // The label order must already be ascending; an inversion means the root
    // layout no longer matches the sign-pattern interval assignment and the
    // operating point is not admissible.
    const double span_all = alphas[c - 1] - alphas[0];
    for (int i = 1; i < c; ++i) {
        if (out.gamma[i] < out.gamma[i - 1] - 1e-9 * span_all) {
            std::ostringstream os;
            os << "root ordering broken: gamma_" << i + 1 << " = " << out.gamma[i]
               << " below gamma_" << i << " = " << out.gamma[i - 1];
            throw BracketFailure(os.str());
        }
        if (out.gamma[i] <= out.gamma[i - 1]) out.boundary_tie = true;
    }
    for (int i = 0; i < c; ++i) {
        if (out.pinned[i]) continue;
        int q = 1;
        for (int m = 0; m < c; ++m)
            if (alphas[m] < out.gamma[i]) q = m + 2;
        out.interval[i] = q;
        double dist = std::numeric_limits<double>::infinity();
        for (int m = 0; m < c; ++m) dist = std::min(dist, std::abs(out.gamma[i] - alphas[m]));
        if (dist <= 1e-9 * span_all) out.boundary_tie = true;
    }
    out.pinch_index = l_full <= c ? l_full : h_full;
    out.pinch_interval = pinch_interval_from_pattern(h_full, l_full, c);
    return out;
}

StreamRoots solve_stream_roots(const StreamSpec& stream, const ComponentSystem& components,
                               StreamRootForm form) {
    const auto& alphas = components.alphas;
    const int c = components.count();

    std::vector<double> w;  // magnitudes of the flows entering the root equation
    double rhs = 0.0;       // right-hand side, in the same magnitude convention
    if (form == StreamRootForm::LiquidForm) {
        std::vector<double> l;
        if (stream.thermal == ThermalState::SaturatedVapor)
            l = hypothetical_liquid(stream.vapor_flows, alphas);
        else
            l = stream.liquid_flows;
        w.resize(c);
        for (int i = 0; i < c; ++i) w[i] = std::abs(l[i]);
    } else {
        w.resize(c);
        for (int i = 0; i < c; ++i) w[i] = std::abs(stream.flows[i]);
        rhs = std::abs(stream.total_vapor());
    }

    std::vector<int> present;
    double total = 0.0;
    for (int i = 0; i < c; ++i) {
        if (w[i] > 0.0) present.push_back(i);
        total += w[i];
    }
    if (present.empty()) throw EmptyStream("stream carries no flow");

    auto psi = [&](double rho) {
        double s = 0.0;
        for (int i : present) s += alphas[i] * w[i] / (alphas[i] - rho);
        return s - rhs;
    };

    StreamRoots out;
    out.source_form = form;
    for (std::size_t k = 0; k + 1 < present.size(); ++k) {
        const double lo = alphas[present[k]];
        const double hi = alphas[present[k + 1]];
        const double rho = solve_pole_interval(psi, lo, hi, -1, +1, "stream root");
        int m = 0;
        for (int i = 0; i < c; ++i)
            if (alphas[i] < rho) m = i + 1;
        out.rho[m] = rho;
    }

    if (form == StreamRootForm::FullStreamForm && rhs > 0.0) {
        // One extra root below the lightest present component; only kept when
        // it is nonnegative (saturated vapor puts it exactly at zero).
        const double hi = alphas[present.front()];
        const double f0 = psi(0.0);
        if (std::abs(f0) <= 1e-12 * std::max(total, rhs)) {
            out.rho[0] = 0.0;
        } else if (f0 < 0.0) {
            const double eps = 1e-13 * hi;
            const double b = hi - eps, fb = psi(b);
            if (fb > 0.0) {
                const double rho = solve_bracketed(psi, 0.0, b, f0, fb);
                int m = 0;
                for (int i = 0; i < c; ++i)
                    if (alphas[i] < rho) m = i + 1;
                out.rho[m] = rho;
            }
        }
    }
    return out;
}

void classify_and_indicators(const RootSet& roots, int c, std::vector<std::uint8_t>& mu,
                             std::vector<std::uint8_t>& k_ind) {
    mu.assign(c + 1, 0);
    k_ind.assign(c + 1, 0);
    mu[roots.pinch_interval - 1] = 1;
    std::uint8_t acc = 0;
    for (int i = 0; i <= c; ++i) {
        acc = static_cast<std::uint8_t>(acc + mu[i]);
        k_ind[i] = acc;
    }
}

}  // namespace mfmp
