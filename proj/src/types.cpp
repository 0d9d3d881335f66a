#include "mfmp/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mfmp {

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::string stream_label(const StreamSpec& s) {
    if (!s.name.empty()) return s.name;
    std::ostringstream os;
    os << (s.kind == StreamKind::Feed ? "feed" : "sidedraw") << "@" << s.position;
    return os.str();
}

}  // namespace

void ComponentSystem::validate() const {
    if (count() < 2) throw BadAlphas("component system needs at least 2 components");
    if (alphas[0] != 1.0) throw BadAlphas("alpha of the heaviest component must be exactly 1");
    for (int i = 1; i < count(); ++i) {
        if (!(alphas[i] > alphas[i - 1]))
            throw BadAlphas("relative volatilities must be strictly increasing");
    }
    if (!(delta > 0.0)) throw BadAlphas("delta must be positive");
    if (!names.empty() && static_cast<int>(names.size()) != count())
        throw BadAlphas("component name list length mismatch");
}

double StreamSpec::total_flow() const { return sum(flows); }
double StreamSpec::total_vapor() const { return sum(vapor_flows); }
double StreamSpec::total_liquid() const { return sum(liquid_flows); }

void flash_split(const std::vector<double>& alphas, const std::vector<double>& flows,
                 double vapor_fraction, std::vector<double>& liquid_out,
                 std::vector<double>& vapor_out) {
    const std::size_t c = alphas.size();
    liquid_out.assign(c, 0.0);
    vapor_out.assign(c, 0.0);
    if (vapor_fraction <= 0.0) {
        liquid_out = flows;
        return;
    }
    if (vapor_fraction >= 1.0) {
        vapor_out = flows;
        return;
    }
    double total = 0.0;
    for (double f : flows) total += std::abs(f);
    if (total <= 0.0) return;

    // Find t so that sum_m |f_m| * t*alpha_m/(1 + t*alpha_m) = vapor_fraction * total.
    // Monotone increasing in t; bisect on a bracket grown from t = 1.
    auto vap_of = [&](double t) {
        double v = 0.0;
        for (std::size_t m = 0; m < c; ++m) v += std::abs(flows[m]) * t * alphas[m] / (1.0 + t * alphas[m]);
        return v;
    };
    const double target = vapor_fraction * total;
    double lo = 0.0, hi = 1.0;
    while (vap_of(hi) < target) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (vap_of(mid) < target ? lo : hi) = mid;
    }
    const double t = 0.5 * (lo + hi);
    for (std::size_t m = 0; m < c; ++m) {
        liquid_out[m] = flows[m] / (1.0 + t * alphas[m]);
        vapor_out[m] = flows[m] - liquid_out[m];
    }
}

std::vector<double> ColumnSpec::bottoms() const {
    std::vector<double> b(components.count(), 0.0);
    for (const auto& s : streams)
        for (int i = 0; i < components.count(); ++i) b[i] += s.flows[i];
    for (int i = 0; i < components.count(); ++i) b[i] -= distillate[i];
    return b;
}

double ColumnSpec::total_feed() const {
    double t = 0.0;
    for (const auto& s : streams)
        if (s.kind == StreamKind::Feed) t += s.total_flow();
    return t;
}

double ColumnSpec::distillate_total() const { return sum(distillate); }

std::pair<int, int> classify_sign_pattern(const std::vector<double>& d) {
    const int c = static_cast<int>(d.size());
    int h = 0;      // last strictly negative, 1-based
    int l = c + 1;  // first strictly positive, 1-based
    for (int i = 0; i < c; ++i) {
        if (d[i] < 0.0) h = i + 1;
        if (d[i] > 0.0 && l == c + 1) l = i + 1;
    }
    if (h >= l) {
        std::ostringstream os;
        os << "inadmissible net-flow sign pattern: component " << h
           << " flows down above upward-flowing component " << l;
        throw SignPatternViolation(os.str());
    }
    return {h, l};
}

int pinch_interval_from_pattern(int h, int l, int c) {
    return l <= c ? l : h + 1;
}

namespace {

void snap_zeros(std::vector<double>& v, double tol) {
    for (double& x : v)
        if (std::abs(x) < tol) x = 0.0;
}

void fill_pattern(SectionState& st, int c) {
    auto [h, l] = classify_sign_pattern(st.net_flows);
    st.h = h;
    st.l = l;
    st.pinch_interval = pinch_interval_from_pattern(h, l, c);
    st.pinch_index = l <= c ? l : h;
    st.mu.assign(c + 1, 0);
    st.mu[st.pinch_interval - 1] = 1;
    st.k_ind.assign(c + 1, 0);
    std::uint8_t acc = 0;
    for (int i = 0; i <= c; ++i) {
        acc = static_cast<std::uint8_t>(acc + st.mu[i]);
        st.k_ind[i] = acc;
    }
}

}  // namespace

ColumnSpec validate_spec(const ColumnSpec& spec) {
    ColumnSpec out = spec;
    out.components.validate();
    const int c = out.components.count();
    const auto& alphas = out.components.alphas;

    if (static_cast<int>(out.distillate.size()) != c)
        throw BadStream("distillate flow vector length mismatch");
    if (out.streams.empty()) throw BadStream("column needs at least one feed stream");

    std::sort(out.streams.begin(), out.streams.end(),
              [](const StreamSpec& a, const StreamSpec& b) { return a.position < b.position; });
    for (int j = 0; j < static_cast<int>(out.streams.size()); ++j) {
        if (out.streams[j].position != j + 1)
            throw BadStream("stream positions must be the consecutive sequence 1..N");
    }

    double feed_total = 0.0;
    bool any_feed = false;
    for (auto& s : out.streams) {
        if (static_cast<int>(s.flows.size()) != c)
            throw BadStream("stream " + stream_label(s) + ": flow vector length mismatch");
        if (s.kind == StreamKind::Feed) {
            any_feed = true;
            feed_total += s.total_flow();
        }
    }
    if (!any_feed) throw BadStream("column needs at least one feed stream");
    if (!(feed_total > 0.0)) throw BadStream("total feed flow must be positive");
    const double ztol = kZeroFlowRel * feed_total;

    for (auto& s : out.streams) {
        snap_zeros(s.flows, ztol);
        const double sgn = s.kind == StreamKind::Feed ? 1.0 : -1.0;
        for (double f : s.flows) {
            if (sgn * f < 0.0)
                throw BadStream("stream " + stream_label(s) +
                                ": component flow signs must match the stream kind");
        }
        // Liquid/vapor split per thermal state.
        switch (s.thermal) {
            case ThermalState::SaturatedLiquid:
                s.liquid_flows = s.flows;
                s.vapor_flows.assign(c, 0.0);
                break;
            case ThermalState::SaturatedVapor:
                s.vapor_flows = s.flows;
                s.liquid_flows.assign(c, 0.0);
                break;
            case ThermalState::PartiallyVaporized: {
                if (s.liquid_flows.size() != s.flows.size() ||
                    s.vapor_flows.size() != s.flows.size())
                    throw BadStream("stream " + stream_label(s) +
                                    ": partially vaporized streams need liquid and vapor flows");
                double scale = 0.0;
                for (int i = 0; i < c; ++i) {
                    if (std::abs(s.liquid_flows[i] + s.vapor_flows[i] - s.flows[i]) >
                        1e-9 * (std::abs(s.flows[i]) + 1.0))
                        throw BadStream("stream " + stream_label(s) + ": l + v != f");
                    if (s.liquid_flows[i] != 0.0)
                        scale = std::max(scale, std::abs(s.vapor_flows[i] / (alphas[i] * s.liquid_flows[i])));
                }
                // v_m proportional to alpha_m * l_m, one scalar across components
                for (int i = 0; i < c; ++i) {
                    const double expect = scale * alphas[i] * s.liquid_flows[i];
                    if (std::abs(s.vapor_flows[i] - expect) > 1e-9 * (std::abs(s.flows[i]) + 1.0))
                        throw BadStream("stream " + stream_label(s) +
                                        ": liquid and vapor portions are not in equilibrium");
                }
                break;
            }
        }
    }

    snap_zeros(out.distillate, ztol);
    for (double d : out.distillate)
        if (d < 0.0) throw BadStream("distillate flows must be nonnegative");
    if (!(sum(out.distillate) > 0.0)) throw BadStream("distillate must carry positive flow");

    // Componentwise closure: bottoms = sum(streams) - distillate must be >= 0.
    auto b = out.bottoms();
    snap_zeros(b, ztol);
    for (int i = 0; i < c; ++i) {
        if (b[i] < -1e-9 * std::max(1.0, feed_total)) {
            std::ostringstream os;
            os << "mass closure fails for component " << i + 1 << ": bottoms flow " << b[i];
            throw MassBalanceViolation(os.str());
        }
    }

    // Every section's sign pattern must be admissible.
    net_flows_all_sections(out);
    return out;
}

std::vector<SectionState> net_flows_all_sections(const ColumnSpec& spec) {
    const int c = spec.components.count();
    const int nsec = spec.section_count();
    const double ztol = kZeroFlowRel * std::max(spec.total_feed(), 1e-300);

    std::vector<SectionState> sections(nsec);
    std::vector<double> d = spec.distillate;
    snap_zeros(d, ztol);
    for (int k = 0; k < nsec; ++k) {
        sections[k].index = k + 1;
        sections[k].net_flows = d;
        fill_pattern(sections[k], c);
        if (k + 1 < nsec) {
            for (int i = 0; i < c; ++i) d[i] -= spec.streams[k].flows[i];
            snap_zeros(d, ztol);
        }
    }
    return sections;
}

std::vector<double> vapor_balance_propagate(const ColumnSpec& spec, int anchor_section,
                                            double v_anchor) {
    const int nsec = spec.section_count();
    if (anchor_section < 1 || anchor_section > nsec)
        throw Error("anchor section out of range");
    if (!(v_anchor > 0.0)) throw NonpositiveSectionVapor("anchor vapor flow must be positive");

    std::vector<double> v(nsec, 0.0);
    v[anchor_section - 1] = v_anchor;
    // upward: V^{k} = V^{k+1} + V_stream(k)
    for (int k = anchor_section - 1; k >= 1; --k)
        v[k - 1] = v[k] + spec.streams[k - 1].total_vapor();
    // downward: V^{k+1} = V^{k} - V_stream(k)
    for (int k = anchor_section; k < nsec; ++k)
        v[k] = v[k - 1] - spec.streams[k - 1].total_vapor();
    for (int k = 0; k < nsec; ++k) {
        if (!(v[k] > 0.0)) {
            std::ostringstream os;
            os << "section " << k + 1 << " vapor flow " << v[k] << " mol/s is not positive";
            throw NonpositiveSectionVapor(os.str());
        }
    }
    return v;
}

double reflux_from_reboiler_duty(const ColumnSpec& spec, double v_reb) {
    if (!(v_reb > 0.0)) throw NonpositiveSectionVapor("reboiler vapor duty must be positive");
    const auto v = vapor_balance_propagate(spec, spec.section_count(), v_reb);
    const double d_total = spec.distillate_total();
    if (!(v.front() > d_total))
        throw NonpositiveReflux("condenser vapor does not exceed the distillate flow");
    return (v.front() - d_total) / d_total;
}

std::vector<double> hypothetical_liquid(const std::vector<double>& vapor_flows,
                                        const std::vector<double>& alphas) {
    if (vapor_flows.size() != alphas.size()) throw Error("vector length mismatch");
    double denom = 0.0, total = 0.0;
    for (std::size_t m = 0; m < vapor_flows.size(); ++m) {
        denom += std::abs(vapor_flows[m]) / alphas[m];
        total += std::abs(vapor_flows[m]);
    }
    if (!(total > 0.0)) throw ZeroVapor("vapor stream carries no flow");
    const double sign = sum(vapor_flows) < 0.0 ? -1.0 : 1.0;
    std::vector<double> l(vapor_flows.size(), 0.0);
    for (std::size_t m = 0; m < vapor_flows.size(); ++m)
        l[m] = sign * (std::abs(vapor_flows[m]) / alphas[m]) / denom;
    return l;
}

}  // namespace mfmp
