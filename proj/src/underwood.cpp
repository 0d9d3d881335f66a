#include "mfmp/underwood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mfmp/roots.hpp"

namespace mfmp {

namespace {

double vec_sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

}  // namespace

UnderwoodResult underwood_min_vapor(const SimpleColumn& col, const ComponentSystem& components) {
    const auto& alphas = components.alphas;
    const int c = components.count();
    const auto& d = col.net_upper_flows.empty() ? col.top_product : col.net_upper_flows;
    if (static_cast<int>(d.size()) != c || static_cast<int>(col.feed.flows.size()) != c)
        throw Error("simple column vector length mismatch");

    const auto roots = solve_stream_roots(col.feed, components, StreamRootForm::FullStreamForm);
    UnderwoodResult res;
    for (const auto& [m, theta] : roots.rho) {
        if (m < 1) continue;  // the sub-interval root below the lightest component is never active
        res.feed_roots.push_back(theta);
    }
    if (res.feed_roots.empty()) throw NoActiveRoot("feed equation has no interior roots");

    // Distributing components appear in both products beyond the zero snap.
    const double tol = kZeroFlowRel * std::max(1.0, std::abs(col.feed.total_flow()));
    double lo_alpha = 0.0, hi_alpha = 0.0;
    bool any_dist = false;
    if (!col.top_product.empty() && !col.bottom_product.empty()) {
        for (int i = 0; i < c; ++i) {
            if (col.top_product[i] > tol && col.bottom_product[i] > tol) {
                if (!any_dist) lo_alpha = hi_alpha = alphas[i];
                lo_alpha = std::min(lo_alpha, alphas[i]);
                hi_alpha = std::max(hi_alpha, alphas[i]);
                any_dist = true;
            }
        }
    }
    for (double theta : res.feed_roots)
        if (any_dist && theta > lo_alpha && theta < hi_alpha) res.active_roots.push_back(theta);
    // Degenerate active set: fall back to the superset of all interior roots.
    const auto& scan = res.active_roots.empty() ? res.feed_roots : res.active_roots;

    bool found = false;
    for (double theta : scan) {
        const double v = eval_characteristic(d, alphas, theta);
        if (!(v > 0.0)) continue;
        if (!found || v > res.v_min) {
            res.v_min = v;
            res.controlling_root = theta;
            found = true;
        }
    }
    if (!found) throw NoActiveRoot("no feed root yields a positive vapor flow");
    const double d_total = vec_sum(d);
    res.r_min = d_total > 0.0 ? (res.v_min - d_total) / d_total
                              : std::numeric_limits<double>::quiet_NaN();
    return res;
}

std::vector<SimpleColumn> decompose(const ColumnSpec& raw) {
    const ColumnSpec spec = validate_spec(raw);
    const auto sections = net_flows_all_sections(spec);
    const int c = spec.components.count();

    std::vector<SimpleColumn> cols;
    int feed_no = 0;
    for (int j = 0; j < static_cast<int>(spec.streams.size()); ++j) {
        const auto& s = spec.streams[j];
        if (s.kind != StreamKind::Feed) continue;
        ++feed_no;
        SimpleColumn col;
        col.feed = s;
        {
            std::ostringstream os;
            os << "column around " << (s.name.empty() ? "feed " + std::to_string(feed_no) : s.name);
            col.name = os.str();
        }
        const auto& d_top = sections[j].net_flows;      // section above the feed
        const auto& d_bot = sections[j + 1].net_flows;  // section below
        col.net_upper_flows = d_top;
        col.top_product.resize(c);
        col.bottom_product.resize(c);
        for (int i = 0; i < c; ++i) {
            col.top_product[i] = std::max(0.0, d_top[i]);
            col.bottom_product[i] = std::max(0.0, -d_bot[i]);
            const double out = col.top_product[i] + col.bottom_product[i];
            if (out > s.flows[i] + 1e-9 * std::max(1.0, spec.total_feed())) {
                std::ostringstream os;
                os << col.name << ": component " << i + 1 << " products total " << out
                   << " mol/s but the feed supplies only " << s.flows[i]
                   << " mol/s; flows kept as assigned";
                col.warnings.push_back(os.str());
            }
        }
        cols.push_back(std::move(col));
    }
    return cols;
}

DecompositionResult decomposition_min_reflux(const ColumnSpec& raw) {
    const ColumnSpec spec = validate_spec(raw);
    DecompositionResult res;
    res.columns = decompose(spec);
    const double d_total = spec.distillate_total();

    int j = -1;  // stream index of the current feed
    std::size_t col_idx = 0;
    for (int k = 0; k < static_cast<int>(spec.streams.size()); ++k) {
        if (spec.streams[k].kind != StreamKind::Feed) continue;
        j = k;
        auto& col = res.columns[col_idx++];
        const auto uw = underwood_min_vapor(col, spec.components);
        // uw.v_min is the vapor in the section above this feed; express it at
        // the condenser of the original column.
        const auto v = vapor_balance_propagate(spec, j + 1, uw.v_min);
        res.v_top_by_column.push_back(v.front());
        res.r_by_column.push_back((v.front() - d_total) / d_total);
        for (const auto& w : col.warnings) res.warnings.push_back(w);
    }
    if (res.r_by_column.empty()) throw Error("no feed streams to decompose around");
    res.r_estimate = *std::max_element(res.r_by_column.begin(), res.r_by_column.end());
    return res;
}

}  // namespace mfmp
