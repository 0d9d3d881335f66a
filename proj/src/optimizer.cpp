#include "mfmp/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "mfmp/roots.hpp"

namespace mfmp {

namespace {

int thread_budget(int requested) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("MFMP_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return n;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

int component_index(const ColumnSpec& spec, const std::string& name) {
    const auto& names = spec.components.names;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    if (!name.empty() && name[0] == '#') {
        const int k = std::atoi(name.c_str() + 1);
        if (k >= 1 && k <= spec.components.count()) return k - 1;
    }
    throw Error("unknown component '" + name + "' in free split");
}

// Index of the j-th sidedraw (1-based) in the stream list, or -1.
int sidedraw_stream_index(const ColumnSpec& spec, int j) {
    int seen = 0;
    for (int k = 0; k < static_cast<int>(spec.streams.size()); ++k) {
        if (spec.streams[k].kind == StreamKind::Sidedraw && ++seen == j) return k;
    }
    return -1;
}

struct ProductRef {
    enum class Kind { Distillate, Sidedraw, Bottoms } kind;
    int stream_index = -1;
};

ProductRef parse_product(const ColumnSpec& spec, const std::string& id) {
    if (id == "distillate") return {ProductRef::Kind::Distillate, -1};
    if (id == "bottoms") return {ProductRef::Kind::Bottoms, -1};
    if (id.rfind("sidedraw:", 0) == 0) {
        const int j = std::atoi(id.c_str() + 9);
        const int k = sidedraw_stream_index(spec, j);
        if (k < 0) throw Error("free split references missing sidedraw '" + id + "'");
        return {ProductRef::Kind::Sidedraw, k};
    }
    throw Error("unknown product '" + id + "' in free split");
}

double get_product_flow(const ColumnSpec& spec, const ProductRef& p, int comp) {
    switch (p.kind) {
        case ProductRef::Kind::Distillate: return spec.distillate[comp];
        case ProductRef::Kind::Sidedraw: return -spec.streams[p.stream_index].flows[comp];
        case ProductRef::Kind::Bottoms: return spec.bottoms()[comp];
    }
    return 0.0;
}

void set_product_flow(ColumnSpec& spec, const ProductRef& p, int comp, double value) {
    switch (p.kind) {
        case ProductRef::Kind::Distillate: spec.distillate[comp] = value; break;
        case ProductRef::Kind::Sidedraw: spec.streams[p.stream_index].flows[comp] = -value; break;
        case ProductRef::Kind::Bottoms: break;  // derived from closure
    }
}

double component_total(const ColumnSpec& spec, int comp) {
    double t = 0.0;
    for (const auto& s : spec.streams)
        if (s.kind == StreamKind::Feed) t += s.flows[comp];
    return t;
}

std::string assignment_signature(const std::vector<AmbiguousSection>& amb,
                                 const std::vector<SectionState>& sections) {
    std::ostringstream os;
    for (const auto& a : amb) os << "SEC_" << a.section << ":q=" << sections[a.section - 1].pinch_interval << ";";
    return os.str();
}

}  // namespace

ColumnSpec resolve_splits(const FreeSplitSpec& fs, const std::vector<double>& values) {
    if (values.size() != fs.dofs.size()) throw Error("dof value count mismatch");
    ColumnSpec spec = fs.base;
    for (std::size_t k = 0; k < fs.dofs.size(); ++k) {
        const auto& dof = fs.dofs[k];
        const int comp = component_index(spec, dof.component);
        const auto donor = parse_product(spec, dof.donor);
        const auto receiver = parse_product(spec, dof.receiver);
        const double total = component_total(spec, comp);

        double others = 0.0;  // flow fixed in products other than donor/receiver
        std::vector<ProductRef> all{{ProductRef::Kind::Distillate, -1}};
        for (int j = 0; j < static_cast<int>(spec.streams.size()); ++j)
            if (spec.streams[j].kind == StreamKind::Sidedraw)
                all.push_back({ProductRef::Kind::Sidedraw, j});
        for (const auto& p : all) {
            const bool is_donor = p.kind == donor.kind && p.stream_index == donor.stream_index;
            const bool is_recv = p.kind == receiver.kind && p.stream_index == receiver.stream_index;
            if (!is_donor && !is_recv) others += get_product_flow(spec, p, comp);
        }
        const double x = values[k];
        set_product_flow(spec, donor, comp, x);
        if (receiver.kind != ProductRef::Kind::Bottoms)
            set_product_flow(spec, receiver, comp, total - others - x);
        // donor == bottoms: the receiver takes the remainder
        if (donor.kind == ProductRef::Kind::Bottoms)
            set_product_flow(spec, receiver, comp, total - others - x);
    }
    return spec;
}

std::vector<AmbiguousSection> ambiguous_sections(const FreeSplitSpec& fs) {
    const int n = static_cast<int>(fs.dofs.size());
    const int nsec = fs.base.section_count();
    const int c = fs.base.components.count();

    std::vector<AmbiguousSection> out;
    if (n == 0) return out;
    std::vector<std::vector<std::vector<double>>> corner_flows;  // corner -> section -> d
    for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<double> vals(n);
        for (int k = 0; k < n; ++k) vals[k] = (mask >> k & 1) ? fs.dofs[k].hi : fs.dofs[k].lo;
        try {
            auto spec = validate_spec(resolve_splits(fs, vals));
            auto secs = net_flows_all_sections(spec);
            std::vector<std::vector<double>> d(nsec);
            for (int s = 0; s < nsec; ++s) d[s] = secs[s].net_flows;
            corner_flows.push_back(std::move(d));
        } catch (const Error&) {
            // corner outside the physically valid region; skip
        }
    }
    if (corner_flows.empty()) return out;

    for (int s = 0; s < nsec; ++s) {
        for (int i = 0; i < c; ++i) {
            bool pos = false, neg = false;
            for (const auto& d : corner_flows) {
                if (d[s][i] > 0.0) pos = true;
                if (d[s][i] < 0.0) neg = true;
            }
            if (pos && neg) {
                AmbiguousSection a;
                a.section = s + 1;
                a.component = i + 1;
                // pinch intervals for each sign of the flipping component
                for (const auto& d : corner_flows) {
                    auto dd = d[s];
                    if (dd[i] == 0.0) continue;
                    try {
                        auto [h, l] = classify_sign_pattern(dd);
                        const int q = pinch_interval_from_pattern(h, l, c);
                        (dd[i] > 0.0 ? a.interval_if_up : a.interval_if_down) = q;
                    } catch (const SignPatternViolation&) {
                    }
                }
                out.push_back(a);
                break;  // one binary per section
            }
        }
    }
    return out;
}

std::vector<std::map<int, int>> enumerate_pinch_assignments(const FreeSplitSpec& fs) {
    const auto amb = ambiguous_sections(fs);
    std::vector<std::map<int, int>> out;
    const int n = static_cast<int>(amb.size());
    if (n == 0) return out;
    for (int mask = 0; mask < (1 << n); ++mask) {
        std::map<int, int> assign;
        for (int k = 0; k < n; ++k)
            assign[amb[k].section] = (mask >> k & 1) ? amb[k].interval_if_up
                                                     : amb[k].interval_if_down;
        out.push_back(std::move(assign));
    }
    return out;
}

namespace {

struct PointEval {
    bool feasible = false;
    double v_reb = 0.0;
    std::string signature;
};

PointEval evaluate_point(const FreeSplitSpec& fs, const std::vector<double>& vals,
                         const std::vector<AmbiguousSection>& amb, const CheckOptions& check) {
    PointEval ev;
    try {
        auto spec = validate_spec(resolve_splits(fs, vals));
        ev.signature = assignment_signature(amb, net_flows_all_sections(spec));
        auto res = vreb_min(spec, check);
        ev.feasible = true;
        ev.v_reb = res.v_reb_min;
    } catch (const Error&) {
        ev.feasible = false;
    }
    return ev;
}

}  // namespace

OptimizationResult optimize_distribution(const FreeSplitSpec& fs, const OptimizerConfig& raw_cfg) {
    OptimizerConfig cfg = raw_cfg;
    // Strict inner feasibility: accepted points must not lean on the binding
    // band, so the certified slacks stay within the certificate tolerance.
    if (cfg.check.bind_tol <= 0.0) {
        const auto& a = fs.base.components.alphas;
        cfg.check.bind_tol = 1e-9 * (a.back() - a.front());
    }
    OptimizationResult out;
    const int n = static_cast<int>(fs.dofs.size());
    out.ambiguous = ambiguous_sections(fs);

    if (n == 0) {
        out.dof_values = {};
        out.resolved = validate_spec(fs.base);
        try {
            out.inner = vreb_min(out.resolved, cfg.check);
            out.status = "optimal";
            out.v_reb_min = out.inner->v_reb_min;
        } catch (const Error&) {
            out.status = "infeasible";
        }
        return out;
    }

    // Grid axes; zero-width dofs collapse to a single value.
    auto run_grid = [&](int grid, std::vector<double>& best_vals, double& best_v,
                        std::set<std::string>& coverage) {
        std::vector<std::vector<double>> axes(n);
        for (int k = 0; k < n; ++k) {
            const auto& dof = fs.dofs[k];
            if (dof.hi - dof.lo <= 0.0) {
                axes[k] = {dof.lo};
            } else {
                for (int t = 0; t <= grid; ++t)
                    axes[k].push_back(dof.lo + (dof.hi - dof.lo) * t / grid);
            }
        }
        long total = 1;
        for (const auto& ax : axes) total *= static_cast<long>(ax.size());
        std::vector<PointEval> evals(total);
        std::vector<std::vector<double>> points(total);
        for (long idx = 0; idx < total; ++idx) {
            long rem = idx;
            std::vector<double> vals(n);
            for (int k = 0; k < n; ++k) {
                vals[k] = axes[k][rem % axes[k].size()];
                rem /= static_cast<long>(axes[k].size());
            }
            points[idx] = std::move(vals);
        }
        parallel_for(static_cast<int>(total), thread_budget(cfg.threads), [&](int idx) {
            evals[idx] = evaluate_point(fs, points[idx], out.ambiguous, cfg.check);
        });
        out.evaluations += static_cast<int>(total);
        for (long idx = 0; idx < total; ++idx) {
            if (!evals[idx].signature.empty()) coverage.insert(evals[idx].signature);
            if (evals[idx].feasible && evals[idx].v_reb < best_v) {
                best_v = evals[idx].v_reb;
                best_vals = points[idx];
            }
        }
    };

    std::set<std::string> coverage;
    std::vector<double> best_vals;
    double best_v = std::numeric_limits<double>::infinity();
    run_grid(cfg.grid, best_vals, best_v, coverage);

    if (!std::isfinite(best_v)) {
        // Certify infeasibility on a finer grid before giving up.
        run_grid(std::max(cfg.infeasibility_grid, 2 * cfg.grid), best_vals, best_v, coverage);
        if (!std::isfinite(best_v)) {
            out.status = "infeasible";
            out.assignments_covered.assign(coverage.begin(), coverage.end());
            return out;
        }
    }

    // Local refinement: coordinate descent with shrinking steps.
    std::vector<double> step(n);
    for (int k = 0; k < n; ++k)
        step[k] = fs.dofs[k].hi > fs.dofs[k].lo ? (fs.dofs[k].hi - fs.dofs[k].lo) / cfg.grid : 0.0;
    bool any_width = false;
    for (double s : step) any_width |= s > 0.0;
    while (any_width) {
        bool moved = false;
        for (int k = 0; k < n; ++k) {
            if (step[k] <= 0.0) continue;
            for (double dir : {+1.0, -1.0}) {
                auto vals = best_vals;
                vals[k] = std::clamp(vals[k] + dir * step[k], fs.dofs[k].lo, fs.dofs[k].hi);
                if (vals[k] == best_vals[k]) continue;
                const auto ev = evaluate_point(fs, vals, out.ambiguous, cfg.check);
                ++out.evaluations;
                if (!ev.signature.empty()) coverage.insert(ev.signature);
                if (ev.feasible && ev.v_reb < best_v - 1e-12 * std::abs(best_v)) {
                    best_v = ev.v_reb;
                    best_vals = vals;
                    moved = true;
                }
            }
        }
        if (!moved) {
            double max_step = 0.0;
            for (int k = 0; k < n; ++k) {
                step[k] *= 0.5;
                max_step = std::max(max_step, step[k]);
            }
            if (max_step < cfg.refine_step_tol) break;
        }
    }

    // The optimal set can be a segment (the objective is piecewise flat in a
    // distribution direction). Report the vertex where an additional
    // feasibility constraint becomes binding, the way an active-set solver
    // terminates, instead of an arbitrary interior point of the flat set.
    {
        const double vtol = std::max(1e-9 * std::abs(best_v), 1e-12);
        auto flat_ok = [&](const std::vector<double>& vals) {
            const auto ev = evaluate_point(fs, vals, out.ambiguous, cfg.check);
            ++out.evaluations;
            if (!ev.signature.empty()) coverage.insert(ev.signature);
            return ev.feasible && ev.v_reb <= best_v + vtol;
        };
        for (int k = 0; k < n; ++k) {
            if (fs.dofs[k].hi - fs.dofs[k].lo <= 0.0) continue;
            double ext[2] = {0.0, 0.0};
            bool kink[2] = {false, false};
            const double dirs[2] = {+1.0, -1.0};
            for (int d = 0; d < 2; ++d) {
                const double tmax = dirs[d] > 0 ? fs.dofs[k].hi - best_vals[k]
                                                : best_vals[k] - fs.dofs[k].lo;
                if (tmax <= cfg.refine_step_tol) continue;
                auto at = [&](double t) {
                    auto vals = best_vals;
                    vals[k] += dirs[d] * t;
                    return flat_ok(vals);
                };
                if (at(tmax)) {
                    ext[d] = tmax;  // flat all the way to the box bound
                } else {
                    double lo_t = 0.0, hi_t = tmax;
                    while (hi_t - lo_t > cfg.refine_step_tol)
                        (at(0.5 * (lo_t + hi_t)) ? lo_t : hi_t) = 0.5 * (lo_t + hi_t);
                    ext[d] = lo_t;
                    kink[d] = true;  // stopped strictly inside the box
                }
            }
            int pick = -1;
            if (kink[0] && ext[0] > cfg.refine_step_tol)
                pick = 0;
            else if (kink[1] && ext[1] > cfg.refine_step_tol)
                pick = 1;
            if (pick >= 0) {
                best_vals[k] += dirs[pick] * ext[pick];
                const auto ev = evaluate_point(fs, best_vals, out.ambiguous, cfg.check);
                ++out.evaluations;
                if (ev.feasible) best_v = std::min(best_v, ev.v_reb);
                FlatDirection fd;
                fd.dof = k;
                fd.extent = ext[0] + ext[1];
                out.flat_directions.push_back(fd);
            }
        }
    }

    out.status = "optimal";
    out.v_reb_min = best_v;
    out.dof_values = best_vals;
    out.resolved = validate_spec(resolve_splits(fs, best_vals));
    out.inner = vreb_min(out.resolved, cfg.check);
    out.assignments_covered.assign(coverage.begin(), coverage.end());

    // Binary readout: 1 when the pinch sits in the lower candidate interval.
    {
        auto secs = net_flows_all_sections(out.resolved);
        for (const auto& a : out.ambiguous) {
            const int q = secs[a.section - 1].pinch_interval;
            const int lower = std::min(a.interval_if_up, a.interval_if_down);
            out.binary_assignment["SEC_" + std::to_string(a.section)] = q == lower ? 1 : 0;
        }
    }
    out.certificate = verify_certificate(fs, out.resolved, *out.inner, cfg);
    return out;
}

Certificate verify_certificate(const FreeSplitSpec& fs, const ColumnSpec& resolved,
                               const MinRefluxResult& inner, const OptimizerConfig& cfg) {
    Certificate cert;
    const ColumnSpec spec = validate_spec(resolved);
    const auto& alphas = spec.components.alphas;
    const int c = spec.components.count();
    const int nsec = spec.section_count();
    const auto amb = ambiguous_sections(fs);
    auto model = build_model(spec);

    auto add_block = [&](const std::string& name, int n, double eq, double slack) {
        CertificateBlock b;
        b.name = name;
        b.evaluated = n;
        b.max_equality_residual = eq;
        b.min_inequality_slack = slack;
        b.passed = eq <= cfg.equality_tol && slack >= -cfg.inequality_tol;
        cert.passed = cert.passed && b.passed;
        cert.blocks.push_back(b);
    };

    // Block 1: mass balances and product sign requirements.
    {
        double eq = 0.0, slack = std::numeric_limits<double>::infinity();
        int nrec = 0;
        std::vector<double> d = spec.distillate;
        for (int k = 0; k < nsec; ++k) {
            for (int i = 0; i < c; ++i) {
                eq = std::max(eq, std::abs(model.sections[k].net_flows[i] - d[i]));
                ++nrec;
            }
            if (k + 1 < nsec)
                for (int i = 0; i < c; ++i) d[i] -= spec.streams[k].flows[i];
        }
        for (int i = 0; i < c; ++i) {
            slack = std::min(slack, spec.distillate[i]);
            slack = std::min(slack, spec.bottoms()[i]);
            nrec += 2;
        }
        for (const auto& s : spec.streams)
            if (s.kind == StreamKind::Sidedraw)
                for (int i = 0; i < c; ++i) {
                    slack = std::min(slack, -s.flows[i]);
                    ++nrec;
                }
        add_block("mass_balance", nrec, eq, slack);
    }

    const auto ev = evaluate_at(model, nsec, inner.v_reb_min, [&] {
        CheckOptions o = cfg.check;
        o.sidedraw_on_profile = true;
        return o;
    }());
    if (!ev.structurally_feasible) {
        add_block("vapor_duty", 0, std::numeric_limits<double>::infinity(), 0.0);
        return cert;
    }

    // Block 2: characteristic equations for every solved root; the pinch root
    // of an ambiguous section is evaluated in the pole-free multiplied form.
    {
        double eq = 0.0;
        int nrec = 0;
        for (int k = 0; k < nsec; ++k) {
            const auto& rs = ev.roots[k];
            const double V = ev.vapor[k];
            int amb_comp = 0;
            for (const auto& a : amb)
                if (a.section == k + 1) amb_comp = a.component;
            for (int r = 0; r < c; ++r) {
                if (rs.pinned[r]) continue;
                const double g = rs.gamma[r];
                ++nrec;
                if (amb_comp > 0 && r + 1 == rs.pinch_index) {
                    const double am = alphas[amb_comp - 1];
                    const double dm = model.sections[k].net_flows[amb_comp - 1];
                    double rhs = am * dm;
                    for (int m = 0; m < c; ++m) {
                        if (m == amb_comp - 1) continue;
                        const double dmm = model.sections[k].net_flows[m];
                        if (dmm == 0.0) continue;
                        rhs += alphas[m] * dmm * (1.0 + (am - alphas[m]) / (alphas[m] - g));
                    }
                    eq = std::max(eq, std::abs(V * (am - g) - rhs) / std::max(1.0, V));
                } else {
                    eq = std::max(eq, std::abs(eval_characteristic(model.sections[k].net_flows,
                                                                   alphas, g) -
                                               V) /
                                          std::max(1.0, V));
                }
            }
        }
        add_block("vapor_duty", nrec, eq, 0.0);
    }

    // Block 3: stream-root definitions in full-stream form.
    {
        double eq = 0.0;
        int nrec = 0;
        for (int j = 0; j < static_cast<int>(spec.streams.size()); ++j) {
            const auto& s = spec.streams[j];
            const double vs = s.total_vapor();
            for (const auto& [m, rho] : model.stream_roots[j].rho) {
                double lhs = 0.0;
                for (int i = 0; i < c; ++i)
                    if (s.flows[i] != 0.0) lhs += alphas[i] * s.flows[i] / (alphas[i] - rho);
                eq = std::max(eq, std::abs(lhs - vs) / std::max(1.0, std::abs(vs)));
                ++nrec;
            }
        }
        add_block("stream_roots", nrec, eq, 0.0);
    }

    // Block 4: offset variable bounds on pinch roots and stream roots.
    {
        double slack = std::numeric_limits<double>::infinity();
        int nrec = 0;
        for (int k = 0; k < nsec; ++k) {
            int q = model.sections[k].pinch_interval;
            const double g = ev.roots[k].pinch_root();
            double lo = q == 1 ? 0.0 : alphas[q - 2];
            double hi = q == c + 1 ? ev.roots[k].upper_bound : alphas[q - 1];
            if (q <= c) slack = std::min(slack, hi - cfg.bound_offset - g);
            slack = std::min(slack, g - lo - cfg.bound_offset);
            ++nrec;
        }
        for (int j = 0; j < static_cast<int>(spec.streams.size()); ++j) {
            for (const auto& [m, rho] : model.stream_roots[j].rho) {
                if (m < 1) continue;
                slack = std::min(slack, rho - alphas[m - 1] - cfg.bound_offset);
                slack = std::min(slack, alphas[m] - cfg.bound_offset - rho);
                ++nrec;
            }
        }
        add_block("variable_bounds", nrec, 0.0, slack);
    }

    // Block 5: binary-linked interval bounds for ambiguous sections.
    {
        double slack = std::numeric_limits<double>::infinity();
        int nrec = 0;
        for (const auto& a : amb) {
            const int q = model.sections[a.section - 1].pinch_interval;
            const double g = ev.roots[a.section - 1].pinch_root();
            const double lo = q == 1 ? 0.0 : alphas[q - 2];
            const double hi = q == c + 1 ? ev.roots[a.section - 1].upper_bound : alphas[q - 1];
            slack = std::min(slack, g - lo);
            slack = std::min(slack, hi - g);
            ++nrec;
        }
        if (nrec == 0) slack = 0.0;
        add_block("binary_bounds", nrec, 0.0, slack);
    }

    // Block 6: the full feasibility system, including the lower halves of the
    // feed sandwiches and the chained constraints that eliminate stream roots
    // the streams do not carry.
    {
        double slack = std::numeric_limits<double>::infinity();
        int nrec = 0;
        for (const auto& sf : ev.report.per_stream)
            for (const auto& r : sf.records) {
                slack = std::min(slack, r.slack);
                ++nrec;
            }
        for (int j = 0; j < static_cast<int>(spec.streams.size()); ++j) {
            const auto& s = spec.streams[j];
            const auto& top = ev.roots[j];
            const auto& bot = ev.roots[j + 1];
            for (int i : model.index_sets[j]) {
                if (model.stream_roots[j].has(i - 1)) continue;
                // chained form with the missing stream root eliminated
                const double chained = s.kind == StreamKind::Feed
                                           ? top.gamma[i - 1] - bot.gamma[i - 2]
                                           : bot.gamma[i - 1] - top.gamma[i - 2];
                slack = std::min(slack, chained);
                ++nrec;
            }
        }
        if (nrec == 0) slack = 0.0;
        add_block("feasibility", nrec, 0.0, slack);
    }
    return cert;
}

}  // namespace mfmp
