#include "mfmp/minreflux.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mfmp {

namespace {

std::string default_stream_name(const StreamSpec& s, int feed_no, int side_no) {
    if (!s.name.empty()) return s.name;
    std::ostringstream os;
    os << (s.kind == StreamKind::Feed ? "F" : "S")
       << (s.kind == StreamKind::Feed ? feed_no : side_no);
    return os.str();
}

}  // namespace

ColumnModel build_model(const ColumnSpec& raw) {
    ColumnModel m;
    m.spec = validate_spec(raw);
    m.sections = net_flows_all_sections(m.spec);

    int feed_no = 0, side_no = 0;
    for (auto& s : m.spec.streams) {
        if (s.kind == StreamKind::Feed)
            ++feed_no;
        else
            ++side_no;
        s.name = default_stream_name(s, feed_no, side_no);
    }

    const int nstream = static_cast<int>(m.spec.streams.size());
    m.stream_roots.resize(nstream);
    m.index_sets.resize(nstream);
    for (int j = 0; j < nstream; ++j) {
        const auto& s = m.spec.streams[j];
        m.stream_roots[j] = solve_stream_roots(s, m.spec.components, StreamRootForm::LiquidForm);
        const auto& top = m.sections[j];      // section above stream j
        const auto& bot = m.sections[j + 1];  // section below
        if (s.kind == StreamKind::Feed)
            m.index_sets[j] = feed_index_set(top.k_ind, bot.k_ind);
        else
            m.index_sets[j] = sidedraw_index_set(top.k_ind, bot.k_ind);
    }
    return m;
}

ColumnEvaluation evaluate_at(const ColumnModel& model, int anchor_section, double v_anchor,
                             const CheckOptions& opts) {
    ColumnEvaluation ev;
    const auto& spec = model.spec;
    const int nsec = spec.section_count();
    const int c = spec.components.count();
    const double bind_tol = opts.resolved_bind_tol(spec.components);

    try {
        ev.vapor = vapor_balance_propagate(spec, anchor_section, v_anchor);
    } catch (const NonpositiveSectionVapor& e) {
        ev.failure = e.what();
        return ev;
    }

    ev.roots.resize(nsec);
    for (int k = 0; k < nsec; ++k) {
        try {
            ev.roots[k] = solve_characteristic(model.sections[k].net_flows, ev.vapor[k],
                                               spec.components);
        } catch (const Error& e) {
            std::ostringstream os;
            os << "section " << k + 1 << ": " << e.what();
            ev.failure = os.str();
            return ev;
        }
        // The solved pinch root must sit inside the interval the sign pattern
        // dictates; otherwise the indicator machinery does not apply here.
        const int q = model.sections[k].pinch_interval;
        const double g = ev.roots[k].pinch_root();
        const double lo = q == 1 ? 0.0 : spec.components.alphas[q - 2];
        const double hi = q == c + 1 ? ev.roots[k].upper_bound : spec.components.alphas[q - 1];
        if (g < lo - bind_tol || g > hi + bind_tol) {
            std::ostringstream os;
            os << "section " << k + 1 << ": pinch root " << g << " escaped interval " << q;
            ev.failure = os.str();
            return ev;
        }
    }
    ev.structurally_feasible = true;

    FeasibilityReport rep;
    for (int j = 0; j < static_cast<int>(spec.streams.size()); ++j) {
        const auto& s = spec.streams[j];
        StreamFeasibility sf;
        sf.stream = s.name;
        sf.index_set.assign(model.index_sets[j].begin(), model.index_sets[j].end());
        const auto& top = ev.roots[j];
        const auto& bot = ev.roots[j + 1];
        if (s.kind == StreamKind::Feed) {
            sf.records = check_feed(top, bot, model.stream_roots[j], model.index_sets[j], s.name,
                                    bind_tol, opts);
        } else {
            sf.records = check_sidedraw(top, bot, model.stream_roots[j], model.index_sets[j],
                                        s.name, bind_tol);
            if (opts.sidedraw_on_profile) {
                auto prof = check_sidedraw_on_profile(model.sections[j].k_ind,
                                                      model.sections[j + 1].k_ind, top, bot,
                                                      model.stream_roots[j], s.name, bind_tol);
                sf.records.insert(sf.records.end(), prof.begin(), prof.end());
            }
        }
        for (const auto& r : sf.records) {
            if (r.status == ConstraintStatus::Violated) {
                if (r.enforced) {
                    rep.feasible = false;
                } else {
                    rep.advisory_violations.push_back(r.id);
                }
            }
            if (r.status == ConstraintStatus::Binding && r.enforced && !rep.binding_stream)
                rep.binding_stream = s.name;
        }
        rep.per_stream.push_back(std::move(sf));
    }
    ev.report = std::move(rep);
    return ev;
}

std::optional<double> get_vreb(const ColumnModel& model, int section, double v_s,
                               const CheckOptions& opts) {
    if (!(v_s > 0.0)) return std::nullopt;
    const auto ev = evaluate_at(model, section, v_s, opts);
    if (!ev.structurally_feasible || !ev.report.feasible) return std::nullopt;
    return ev.vapor.back();
}

namespace {

// Candidate from pinning one root of the section above stream j to rho_key.
Candidate make_pin_candidate(const ColumnModel& model, int stream_index, int rho_key,
                             int pinned_root_index, const CheckOptions& opts) {
    const auto& spec = model.spec;
    const auto& stream = spec.streams[stream_index];
    const int top_section = stream_index + 1;  // 1-based section above the stream
    const double rho = model.stream_roots[stream_index].at(rho_key);

    Candidate cand;
    cand.stream = stream.name;
    cand.section = top_section;
    cand.rho_key = rho_key;
    {
        std::ostringstream os;
        os << stream.name << ": pin gamma_" << pinned_root_index << "^{SEC_" << top_section
           << "} <- rho_" << rho_key;
        cand.source = os.str();
    }

    const double v = eval_characteristic(model.sections[top_section - 1].net_flows,
                                         spec.components.alphas, rho);
    cand.v_pinned = v;
    if (!(v > 0.0)) {
        cand.note = "pinned substitution yields nonpositive section vapor";
        return cand;
    }
    const auto ev = evaluate_at(model, top_section, v, opts);
    if (!ev.structurally_feasible) {
        cand.note = ev.failure;
        return cand;
    }
    if (!ev.report.feasible) {
        cand.note = "feasibility constraints violated";
        return cand;
    }
    cand.feasible = true;
    cand.v_reb = ev.vapor.back();
    return cand;
}

}  // namespace

std::vector<Candidate> sidedraw_feasible(const ColumnModel& model, int stream_index,
                                         const CheckOptions& opts) {
    const auto& spec = model.spec;
    const int c = spec.components.count();
    const auto& k_top = model.sections[stream_index].k_ind;  // section above the draw
    const auto& roots = model.stream_roots[stream_index];

    std::vector<Candidate> out;
    for (int m = 1; m <= c; ++m) {
        const int key = k_top[m - 1] == 0 ? m : m - 1;
        if (!roots.has(key)) continue;  // no such stream root: pin skipped
        out.push_back(make_pin_candidate(model, stream_index, key, m, opts));
    }
    return out;
}

MinRefluxResult vreb_min(const ColumnSpec& spec, const CheckOptions& opts) {
    return vreb_min(build_model(spec), opts);
}

MinRefluxResult vreb_min(const ColumnModel& model, const CheckOptions& opts) {
    const auto& spec = model.spec;
    // A sidedraw composition must lie on the liquid composition profile, which
    // is impossible for a draw carrying a single component: the stream root
    // equation its profile constraints reference has no solution.
    for (std::size_t j = 0; j < spec.streams.size(); ++j) {
        const auto& s = spec.streams[j];
        if (s.kind != StreamKind::Sidedraw) continue;
        int present = 0;
        for (double f : s.flows)
            if (f != 0.0) ++present;
        if (present < 2)
            throw NoFeasibleCandidate("sidedraw " + s.name +
                                      " carries a single component; its composition cannot lie "
                                      "on the composition profile");
    }
    std::vector<Candidate> candidates;
    std::set<std::pair<int, int>> seen;  // (pinned section, rho key)

    auto push = [&](Candidate&& cand) {
        if (seen.insert({cand.section, cand.rho_key}).second)
            candidates.push_back(std::move(cand));
    };

    for (int j = 0; j < static_cast<int>(spec.streams.size()); ++j) {
        const auto& s = spec.streams[j];
        if (s.kind != StreamKind::Sidedraw) continue;
        for (auto&& cand : sidedraw_feasible(model, j, opts)) push(std::move(cand));
        for (int i : model.index_sets[j]) {
            if (!model.stream_roots[j].has(i - 1)) continue;
            push(make_pin_candidate(model, j, i - 1, i - 1, opts));
        }
    }
    for (int j = 0; j < static_cast<int>(spec.streams.size()); ++j) {
        const auto& s = spec.streams[j];
        if (s.kind != StreamKind::Feed) continue;
        for (int i : model.index_sets[j]) {
            if (!model.stream_roots[j].has(i - 1)) continue;
            push(make_pin_candidate(model, j, i - 1, i, opts));
        }
    }

    const Candidate* best = nullptr;
    for (const auto& cand : candidates) {
        if (!cand.feasible) continue;
        if (!best || *cand.v_reb < *best->v_reb - 1e-12 * std::abs(*best->v_reb)) {
            best = &cand;
        } else if (std::abs(*cand.v_reb - *best->v_reb) <= 1e-12 * std::abs(*best->v_reb) &&
                   cand.section < best->section) {
            best = &cand;  // tie: report the topmost binding stream
        }
    }
    if (!best) throw NoFeasibleCandidate("no pinned-root candidate passes all feasibility checks");

    MinRefluxResult res;
    res.v_reb_min = *best->v_reb;
    res.controlling_stream = best->stream;
    res.binding.stream = best->stream;
    res.binding.rho_key = best->rho_key;
    res.binding.interval = best->rho_key + 1;
    res.binding.rho_value = model.stream_roots[best->section - 1].at(best->rho_key);
    res.candidates = candidates;

    auto ev = evaluate_at(model, spec.section_count(), res.v_reb_min, opts);
    res.section_vapor = ev.vapor;
    res.report = std::move(ev.report);
    res.sections = model.sections;
    for (std::size_t k = 0; k < res.sections.size(); ++k) {
        res.sections[k].vapor_flow = ev.vapor[k];
        res.sections[k].roots = ev.roots[k].gamma;
        res.sections[k].root_interval = ev.roots[k].interval;
        res.sections[k].pinch_index = ev.roots[k].pinch_index;
    }
    res.r_min = reflux_from_reboiler_duty(spec, res.v_reb_min);
    return res;
}

}  // namespace mfmp
