#include "mfmp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace mfmp {

namespace {

double vec_sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

void normalize(std::vector<double>& x) {
    const double s = vec_sum(x);
    if (s > 0.0)
        for (double& v : x) v /= s;
}

std::vector<double> stage_map_down_unchecked(const std::vector<double>& x, double L, double V,
                                             const std::vector<double>& d,
                                             const std::vector<double>& alphas) {
    const std::size_t c = x.size();
    std::vector<double> y(c), xb(c);
    for (std::size_t i = 0; i < c; ++i) y[i] = (L * x[i] + d[i]) / V;
    double denom = 0.0;
    for (std::size_t i = 0; i < c; ++i) denom += y[i] / alphas[i];
    for (std::size_t i = 0; i < c; ++i) xb[i] = (y[i] / alphas[i]) / denom;
    return xb;
}

// Dense c x c linear solve with partial pivoting (in-place on copies).
void small_solve(std::vector<double> A, std::vector<double>& b, int n) {
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int r = k + 1; r < n; ++r)
            if (std::abs(A[r * n + k]) > std::abs(A[p * n + k])) p = r;
        if (p != k) {
            for (int col = 0; col < n; ++col) std::swap(A[k * n + col], A[p * n + col]);
            std::swap(b[k], b[p]);
        }
        const double piv = A[k * n + k];
        if (piv == 0.0) throw NotConverged("singular block in stage Jacobian");
        for (int r = k + 1; r < n; ++r) {
            const double f = A[r * n + k] / piv;
            if (f == 0.0) continue;
            for (int col = k; col < n; ++col) A[r * n + col] -= f * A[k * n + col];
            b[r] -= f * b[k];
        }
    }
    for (int k = n - 1; k >= 0; --k) {
        double s = b[k];
        for (int col = k + 1; col < n; ++col) s -= A[k * n + col] * b[col];
        b[k] = s / A[k * n + k];
    }
}

// Same pivoted elimination applied to a block right-hand side.
void small_solve_matrix(std::vector<double> A, std::vector<double>& B, int n) {
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int r = k + 1; r < n; ++r)
            if (std::abs(A[r * n + k]) > std::abs(A[p * n + k])) p = r;
        if (p != k) {
            for (int col = 0; col < n; ++col) {
                std::swap(A[k * n + col], A[p * n + col]);
                std::swap(B[k * n + col], B[p * n + col]);
            }
        }
        const double piv = A[k * n + k];
        if (piv == 0.0) throw NotConverged("singular block in stage Jacobian");
        for (int r = k + 1; r < n; ++r) {
            const double f = A[r * n + k] / piv;
            if (f == 0.0) continue;
            for (int col = k; col < n; ++col) A[r * n + col] -= f * A[k * n + col];
            for (int col = 0; col < n; ++col) B[r * n + col] -= f * B[k * n + col];
        }
    }
    for (int k = n - 1; k >= 0; --k) {
        for (int col = 0; col < n; ++col) {
            double s = B[k * n + col];
            for (int r = k + 1; r < n; ++r) s -= A[k * n + r] * B[r * n + col];
            B[k * n + col] = s / A[k * n + k];
        }
    }
}

// Column plumbing shared by the sweep and Newton passes.
struct ColumnGrid {
    int c = 0, M = 0, nsec = 0, S = 0;
    std::vector<double> alphas;
    std::vector<double> Lin, Vin, Lout, Vout;       // per stage 1..M+1 (index 0 unused)
    std::vector<std::vector<double>> feed_terms;    // FL + FV per stage [mol/s]
    double bottoms_total = 0.0;
    std::vector<double> Lsec, Vsec;
};

ColumnGrid build_grid(const ColumnSpec& spec, double reflux_ratio, int stages_per_section) {
    ColumnGrid g;
    g.c = spec.components.count();
    g.nsec = spec.section_count();
    g.S = stages_per_section;
    g.M = g.nsec * stages_per_section;
    g.alphas = spec.components.alphas;

    const double D = spec.distillate_total();
    g.Vsec.assign(g.nsec, 0.0);
    g.Lsec.assign(g.nsec, 0.0);
    g.Vsec[0] = D * (reflux_ratio + 1.0);
    g.Lsec[0] = reflux_ratio * D;
    for (int k = 1; k < g.nsec; ++k) {
        g.Vsec[k] = g.Vsec[k - 1] - spec.streams[k - 1].total_vapor();
        g.Lsec[k] = g.Lsec[k - 1] + spec.streams[k - 1].total_liquid();
        if (!(g.Vsec[k] > 0.0) || !(g.Lsec[k] > 0.0))
            throw NonpositiveSectionVapor("internal flow became nonpositive at this reflux");
    }
    g.bottoms_total = vec_sum(spec.bottoms());
    if (!(g.bottoms_total > 0.0)) throw Error("column has no bottoms product");

    g.Lin.assign(g.M + 2, 0.0);
    g.Vin.assign(g.M + 2, 0.0);
    g.Lout.assign(g.M + 2, 0.0);
    g.Vout.assign(g.M + 2, 0.0);
    g.feed_terms.assign(g.M + 2, std::vector<double>(g.c, 0.0));

    auto sec_of = [&](int n) { return (n - 1) / g.S; };  // 0-based section of tray n
    for (int n = 1; n <= g.M; ++n) {
        const int k = sec_of(n);
        g.Lout[n] = g.Lsec[k];
        g.Vout[n] = g.Vsec[k];
        // liquid arriving from above
        if (n == 1) {
            g.Lin[n] = g.Lsec[0];
        } else if ((n - 1) % g.S == 0) {
            const auto& s = spec.streams[k - 1];  // stream at the boundary above tray n
            double ldraw = 0.0;
            for (int i = 0; i < g.c; ++i) {
                if (s.kind == StreamKind::Feed)
                    g.feed_terms[n][i] += s.liquid_flows[i];
                else
                    ldraw += -s.liquid_flows[i];
            }
            g.Lin[n] = g.Lsec[k - 1] - ldraw;
            if (g.Lin[n] < 0.0) throw NonpositiveSectionVapor("sidedraw exceeds passing liquid");
        } else {
            g.Lin[n] = g.Lsec[k];
        }
        // vapor arriving from below
        if (n == g.M) {
            g.Vin[n] = g.Vsec[g.nsec - 1];  // boilup from the reboiler
        } else if (n % g.S == 0) {
            const auto& s = spec.streams[k];  // stream at the boundary below tray n
            double vdraw = 0.0;
            for (int i = 0; i < g.c; ++i) {
                if (s.kind == StreamKind::Feed)
                    g.feed_terms[n][i] += s.vapor_flows[i];
                else
                    vdraw += -s.vapor_flows[i];
            }
            g.Vin[n] = g.Vsec[k + 1] - vdraw;
            if (g.Vin[n] < 0.0) throw NonpositiveSectionVapor("sidedraw exceeds passing vapor");
        } else {
            g.Vin[n] = g.Vsec[k];
        }
    }
    // partial reboiler
    g.Lin[g.M + 1] = g.Lsec[g.nsec - 1];
    g.Vin[g.M + 1] = 0.0;
    g.Lout[g.M + 1] = g.bottoms_total;
    g.Vout[g.M + 1] = g.Vsec[g.nsec - 1];
    return g;
}

// One frozen-K pass: per-component tridiagonal solves with the equilibrium
// ratios evaluated at the current profile.
void sweep(const ColumnGrid& g, std::vector<std::vector<double>>& x) {
    const int M1 = g.M + 1;
    std::vector<double> S(M1 + 1, 0.0);
    for (int n = 1; n <= M1; ++n) {
        double s = 0.0, t = vec_sum(x[n]);
        for (int i = 0; i < g.c; ++i) s += g.alphas[i] * x[n][i];
        S[n] = t > 0.0 ? s / t : 1.0;
    }
    std::vector<double> a(M1 + 1), b(M1 + 1), cc(M1 + 1), r(M1 + 1);
    std::vector<std::vector<double>> xn(M1 + 1, std::vector<double>(g.c, 0.0));
    for (int i = 0; i < g.c; ++i) {
        for (int n = 1; n <= M1; ++n) {
            const double Kn = g.alphas[i] / S[n];
            a[n] = g.Lin[n];
            b[n] = -(g.Lout[n] + g.Vout[n] * Kn);
            cc[n] = n < M1 ? g.Vin[n] * (g.alphas[i] / S[n + 1]) : 0.0;
            r[n] = -g.feed_terms[n][i];
            if (n == 1) {  // condenser: x_0 = y_1 = K_1 x_1
                b[n] += g.Lin[1] * Kn;
                a[n] = 0.0;
            }
        }
        // Thomas elimination
        for (int n = 2; n <= M1; ++n) {
            const double w = a[n] / b[n - 1];
            b[n] -= w * cc[n - 1];
            r[n] -= w * r[n - 1];
        }
        xn[M1][i] = r[M1] / b[M1];
        for (int n = M1 - 1; n >= 1; --n) xn[n][i] = (r[n] - cc[n] * xn[n + 1][i]) / b[n];
    }
    for (int n = 1; n <= M1; ++n) {
        for (int i = 0; i < g.c; ++i) x[n][i] = std::max(0.0, xn[n][i]);
        normalize(x[n]);
    }
}

void residuals(const ColumnGrid& g, const std::vector<std::vector<double>>& x,
               std::vector<std::vector<double>>& y, std::vector<std::vector<double>>& res) {
    const int M1 = g.M + 1;
    for (int n = 1; n <= M1; ++n) y[n] = equilibrium_vapor(x[n], g.alphas);
    for (int n = 1; n <= M1; ++n) {
        for (int i = 0; i < g.c; ++i) {
            const double from_above = n == 1 ? g.Lin[1] * y[1][i] : g.Lin[n] * x[n - 1][i];
            const double from_below = n < M1 ? g.Vin[n] * y[n + 1][i] : 0.0;
            res[n][i] = from_above + from_below + g.feed_terms[n][i] - g.Lout[n] * x[n][i] -
                        g.Vout[n] * y[n][i];
        }
    }
}

double res_norm(const std::vector<std::vector<double>>& res, double scale) {
    double m = 0.0;
    for (const auto& row : res)
        for (double v : row) m = std::max(m, std::abs(v));
    return m / scale;
}

// Jacobian of the normalized equilibrium map at x.
std::vector<double> dy_dx(const std::vector<double>& x, const std::vector<double>& alphas) {
    const int c = static_cast<int>(x.size());
    double s = 0.0;
    for (int j = 0; j < c; ++j) s += alphas[j] * x[j];
    std::vector<double> J(c * c, 0.0);
    for (int i = 0; i < c; ++i)
        for (int j = 0; j < c; ++j)
            J[i * c + j] = alphas[i] * ((i == j ? 1.0 : 0.0) * s - x[i] * alphas[j]) / (s * s);
    return J;
}

}  // namespace

std::vector<double> equilibrium_vapor(const std::vector<double>& x,
                                      const std::vector<double>& alphas) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += alphas[i] * x[i];
    if (!(s > 0.0)) throw NegativeComposition("equilibrium map needs a positive composition");
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = alphas[i] * x[i] / s;
    return y;
}

std::vector<double> stage_map_down(const std::vector<double>& x, double L, double V,
                                   const std::vector<double>& d,
                                   const std::vector<double>& alphas) {
    if (!(V > 0.0)) throw NonpositiveV("stage map needs positive vapor flow");
    const std::size_t c = x.size();
    std::vector<double> y(c);
    double closure = 0.0;
    for (std::size_t i = 0; i < c; ++i) {
        y[i] = (L * x[i] + d[i]) / V;
        if (y[i] < -1e-12)
            throw NegativeComposition("operating line produced a negative vapor composition");
        y[i] = std::max(0.0, y[i]);
        closure += y[i];
    }
    if (std::abs(closure - 1.0) > 1e-9)
        throw NegativeComposition("operating-line vapor composition does not close to 1");
    double denom = 0.0;
    for (std::size_t i = 0; i < c; ++i) denom += y[i] / alphas[i];
    std::vector<double> xb(c);
    for (std::size_t i = 0; i < c; ++i) xb[i] = (y[i] / alphas[i]) / denom;
    return xb;
}

namespace {

// Solves the stage equations on a fixed grid, refining `x` in place.
// Returns the iteration count; throws NotConverged only when `strict`.
int solve_profile(const ColumnGrid& g, std::vector<std::vector<double>>& x, double tol,
                  int max_iterations, double scale, double* residual_out, bool strict) {
    const int c = g.c, M1 = g.M + 1;
    std::vector<std::vector<double>> y(M1 + 1, std::vector<double>(c, 0.0));
    std::vector<std::vector<double>> res(M1 + 1, std::vector<double>(c, 0.0));

    int iters = 0;
    double rn = 0.0;
    // Successive substitution to get into Newton's basin.
    const int sweep_budget = std::min(80, max_iterations / 2);
    for (; iters < sweep_budget; ++iters) {
        sweep(g, x);
        residuals(g, x, y, res);
        rn = res_norm(res, scale);
        if (rn < 1e-3 && iters >= 4) break;
    }

    // Damped Newton on the stacked balances (block tridiagonal).
    for (; iters < max_iterations && rn > tol; ++iters) {
        residuals(g, x, y, res);
        rn = res_norm(res, scale);
        if (rn <= tol) break;

        std::vector<std::vector<double>> A(M1 + 1), B(M1 + 1), C(M1 + 1);
        std::vector<std::vector<double>> rhs(M1 + 1, std::vector<double>(c, 0.0));
        for (int n = 1; n <= M1; ++n) {
            auto Dy = dy_dx(x[n], g.alphas);
            B[n].assign(c * c, 0.0);
            for (int i = 0; i < c; ++i) {
                B[n][i * c + i] -= g.Lout[n];
                for (int j = 0; j < c; ++j) B[n][i * c + j] -= g.Vout[n] * Dy[i * c + j];
            }
            if (n == 1) {
                for (int i = 0; i < c; ++i)
                    for (int j = 0; j < c; ++j) B[n][i * c + j] += g.Lin[1] * Dy[i * c + j];
                A[n].assign(c * c, 0.0);
            } else {
                A[n].assign(c * c, 0.0);
                for (int i = 0; i < c; ++i) A[n][i * c + i] = g.Lin[n];
            }
            if (n < M1) {
                auto Dy_below = dy_dx(x[n + 1], g.alphas);
                C[n].assign(c * c, 0.0);
                for (int i = 0; i < c; ++i)
                    for (int j = 0; j < c; ++j) C[n][i * c + j] = g.Vin[n] * Dy_below[i * c + j];
            }
            for (int i = 0; i < c; ++i) rhs[n][i] = -res[n][i];
        }

        // Block Thomas forward elimination.
        for (int n = 2; n <= M1; ++n) {
            auto Binv_C = C[n - 1];
            small_solve_matrix(B[n - 1], Binv_C, c);
            auto r_prev = rhs[n - 1];
            small_solve(B[n - 1], r_prev, c);
            // B_n -= A_n * Binv_C ; rhs_n -= A_n * r_prev
            for (int i = 0; i < c; ++i) {
                for (int j = 0; j < c; ++j) {
                    double acc = 0.0;
                    for (int k = 0; k < c; ++k) acc += A[n][i * c + k] * Binv_C[k * c + j];
                    B[n][i * c + j] -= acc;
                }
                double accr = 0.0;
                for (int k = 0; k < c; ++k) accr += A[n][i * c + k] * r_prev[k];
                rhs[n][i] -= accr;
            }
        }
        std::vector<std::vector<double>> dx(M1 + 1, std::vector<double>(c, 0.0));
        {
            auto r_last = rhs[M1];
            small_solve(B[M1], r_last, c);
            dx[M1] = r_last;
        }
        for (int n = M1 - 1; n >= 1; --n) {
            auto r_n = rhs[n];
            for (int i = 0; i < c; ++i) {
                double acc = 0.0;
                for (int k = 0; k < c; ++k) acc += C[n][i * c + k] * dx[n + 1][k];
                r_n[i] -= acc;
            }
            small_solve(B[n], r_n, c);
            dx[n] = r_n;
        }

        // Damped line search; negative entries are projected back onto the
        // boundary of the composition simplex.
        double lambda = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 24; ++bt) {
            auto x_try = x;
            for (int n = 1; n <= M1; ++n) {
                double s = 0.0;
                for (int i = 0; i < c; ++i) {
                    x_try[n][i] = std::max(0.0, x[n][i] + lambda * dx[n][i]);
                    s += x_try[n][i];
                }
                if (s <= 0.0) x_try[n] = x[n];
            }
            residuals(g, x_try, y, res);
            const double rn_try = res_norm(res, scale);
            if (rn_try < rn) {
                x = std::move(x_try);
                rn = rn_try;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            // substitution fallback, damped to break flip-flops
            auto x_prev = x;
            sweep(g, x);
            for (int n = 1; n <= M1; ++n) {
                for (int i = 0; i < c; ++i) x[n][i] = 0.5 * (x[n][i] + x_prev[n][i]);
                normalize(x[n]);
            }
        }
    }

    residuals(g, x, y, res);
    rn = res_norm(res, scale);
    if (residual_out) *residual_out = rn;
    if (strict && rn > tol) {
        std::ostringstream os;
        os << "stage equations not converged: residual " << rn << " after " << iters
           << " iterations";
        throw NotConverged(os.str());
    }
    return iters;
}

}  // namespace

StageProfile simulate_column(const ColumnSpec& raw, double reflux_ratio, int stages_per_section,
                             const SimulateOptions& opts) {
    if (stages_per_section < 1) throw Error("stages per section must be at least 1");
    if (!(reflux_ratio > 0.0)) throw Error("reflux ratio must be positive");
    const ColumnSpec spec = validate_spec(raw);
    const double scale = std::max(spec.total_feed(), 1.0);
    const ColumnGrid g = build_grid(spec, reflux_ratio, stages_per_section);
    const int c = g.c, M1 = g.M + 1;

    std::vector<std::vector<double>> x(M1 + 1, std::vector<double>(c, 0.0));
    if (opts.init == InitialProfile::EndInterpolation) {
        std::vector<double> x_top = spec.distillate, x_bot = spec.bottoms();
        normalize(x_top);
        normalize(x_bot);
        for (int n = 1; n <= M1; ++n) {
            const double t = static_cast<double>(n - 1) / std::max(1, M1 - 1);
            for (int i = 0; i < c; ++i) x[n][i] = (1.0 - t) * x_top[i] + t * x_bot[i];
            normalize(x[n]);
        }
    } else {
        // Unseparated start: every stage at the aggregate feed composition.
        std::vector<double> mix(c, 0.0);
        for (const auto& s : spec.streams)
            if (s.kind == StreamKind::Feed)
                for (int i = 0; i < c; ++i) mix[i] += s.flows[i];
        normalize(mix);
        for (int n = 1; n <= M1; ++n) x[n] = mix;
    }

    // The stage equations can carry spurious extra solutions near and below
    // the pinched regime. Continuation from a generously refluxed operating
    // point tracks the branch that is continuously connected to the
    // easy-separation solution, which is the one a column can actually run.
    int iters = 0;
    double rn = 0.0;
    const std::vector<double> ladder{2.0 * reflux_ratio + 0.5, 1.4 * reflux_ratio + 0.15,
                                     1.1 * reflux_ratio + 0.02};
    for (double rl : ladder) {
        try {
            const ColumnGrid gl = build_grid(spec, rl, stages_per_section);
            iters += solve_profile(gl, x, 1e-8, opts.max_iterations, scale, nullptr, false);
        } catch (const Error&) {
            // an unconverged or invalid rung only weakens the warm start
        }
    }
    iters += solve_profile(g, x, opts.residual_tol, opts.max_iterations, scale, &rn, true);

    std::vector<std::vector<double>> y(M1 + 1, std::vector<double>(c, 0.0));
    for (int n = 1; n <= M1; ++n) y[n] = equilibrium_vapor(x[n], g.alphas);

    StageProfile prof;
    prof.stages_per_section = stages_per_section;
    prof.iterations = iters;
    prof.residual = rn;
    prof.section_liquid = g.Lsec;
    prof.section_vapor = g.Vsec;
    prof.x.resize(M1 + 1);
    prof.y.resize(M1 + 1);
    prof.section_of_stage.assign(M1 + 1, 0);
    prof.x[0] = y[1];  // condensate
    prof.y[0] = y[1];
    for (int n = 1; n <= M1; ++n) {
        prof.x[n] = x[n];
        prof.y[n] = y[n];
        prof.section_of_stage[n] = n <= g.M ? (n - 1) / g.S + 1 : 0;
    }

    // Achieved products: distillate, sidedraws top-down, bottoms.
    prof.achieved_products.push_back(y[1]);
    for (int k = 1; k < g.nsec; ++k) {
        const auto& s = spec.streams[k - 1];
        if (s.kind != StreamKind::Sidedraw) continue;
        const int t = k * g.S;  // draw sits below tray t
        std::vector<double> flows(c, 0.0);
        for (int i = 0; i < c; ++i)
            flows[i] = -s.total_liquid() * x[t][i] - s.total_vapor() * y[t + 1][i];
        normalize(flows);
        prof.achieved_products.push_back(flows);
    }
    prof.achieved_products.push_back(x[M1]);
    return prof;
}

BisectionResult min_reflux_by_bisection(const ColumnSpec& raw, int stages_per_section,
                                        const BisectionOptions& opts) {
    const ColumnSpec spec = validate_spec(raw);
    const int c = spec.components.count();

    // Specified product compositions, top-down: distillate, sidedraws, bottoms.
    std::vector<std::vector<double>> targets;
    {
        auto d = spec.distillate;
        normalize(d);
        targets.push_back(d);
        for (const auto& s : spec.streams) {
            if (s.kind != StreamKind::Sidedraw) continue;
            std::vector<double> f(c);
            for (int i = 0; i < c; ++i) f[i] = -s.flows[i];
            normalize(f);
            targets.push_back(f);
        }
        auto b = spec.bottoms();
        normalize(b);
        targets.push_back(b);
    }
    // Aggregate feed composition separates target components from impurities.
    std::vector<double> feed_mix(c, 0.0);
    for (const auto& s : spec.streams)
        if (s.kind == StreamKind::Feed)
            for (int i = 0; i < c; ++i) feed_mix[i] += s.flows[i];
    normalize(feed_mix);

    BisectionResult out;
    auto feasible = [&](double R) {
        ++out.evaluations;
        StageProfile prof;
        try {
            prof = simulate_column(spec, R, stages_per_section, opts.sim);
        } catch (const Error&) {
            return false;
        }
        for (std::size_t p = 0; p < targets.size(); ++p) {
            for (int i = 0; i < c; ++i) {
                const double want = targets[p][i];
                const double got = prof.achieved_products[p][i];
                if (want >= feed_mix[i]) {
                    if (got < want - opts.purity_tol) return false;  // target component short
                } else {
                    if (got > want + opts.purity_tol) return false;  // impurity above spec
                }
            }
        }
        return true;
    };

    double lo = opts.r_lo;
    if (feasible(lo)) {
        out.r_min = lo;
        out.r_lo = out.r_hi = lo;
        return out;
    }
    double hi = opts.r_hi > lo ? opts.r_hi : std::max(1.0, 2.0 * lo);
    int guard = 0;
    while (!feasible(hi)) {
        hi *= 2.0;
        if (++guard > 24) throw BracketFailure("no feasible reflux found while expanding upward");
    }
    while (hi - lo > opts.r_width) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    out.r_lo = lo;
    out.r_hi = hi;
    out.r_min = 0.5 * (lo + hi);
    return out;
}

PinchGeometry pinch_compositions(const SectionState& section, const ComponentSystem& components) {
    const auto& alphas = components.alphas;
    const int c = components.count();
    const double V = section.vapor_flow;
    if (!(V > 0.0)) throw DegenerateSection("section vapor flow not set");
    const double D = std::accumulate(section.net_flows.begin(), section.net_flows.end(), 0.0);
    const double L = V - D;
    if (std::abs(L) < 1e-12 * V) throw DegenerateSection("section liquid flow is zero");

    PinchGeometry geo;
    geo.section = section.index;
    geo.pinch_vertex = section.pinch_index;
    for (int r = 0; r < c; ++r) {
        const double g = section.roots[r];
        std::vector<double> z(c, 0.0);
        // A root pinned at alpha_i (zero net flow of component i) takes the
        // limit value in its own coordinate; all other entries follow the
        // generic formula.
        int pinned_at = -1;
        for (int i = 0; i < c; ++i)
            if (section.net_flows[i] == 0.0 && alphas[i] == g) pinned_at = i;
        for (int m = 0; m < c; ++m) {
            if (m == pinned_at) continue;
            if (section.net_flows[m] == 0.0 && alphas[m] == g) continue;
            z[m] = g * section.net_flows[m] / (L * (alphas[m] - g));
        }
        if (pinned_at >= 0)
            z[pinned_at] = (V - eval_characteristic(section.net_flows, alphas, g)) / L;
        geo.vertices.push_back(z);
        const auto mapped = stage_map_down_unchecked(z, L, V, section.net_flows, alphas);
        double r2 = 0.0;
        for (int m = 0; m < c; ++m) r2 = std::max(r2, std::abs(mapped[m] - z[m]));
        geo.fixed_point_residual.push_back(r2);
    }
    return geo;
}

}  // namespace mfmp
