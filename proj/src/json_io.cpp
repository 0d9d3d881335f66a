#include "mfmp/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mfmp {

using nlohmann::json;

namespace {

std::vector<double> flows_from_json(const json& j, const ComponentSystem& cs) {
    std::vector<double> f(cs.count(), 0.0);
    if (j.is_array()) {
        if (static_cast<int>(j.size()) != cs.count())
            throw Error("flow array length does not match the component count");
        for (int i = 0; i < cs.count(); ++i) f[i] = j[i].get<double>();
        return f;
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool found = false;
        for (int i = 0; i < cs.count(); ++i) {
            if (cs.names[i] == it.key()) {
                f[i] = it.value().get<double>();
                found = true;
                break;
            }
        }
        if (!found) throw Error("unknown component '" + it.key() + "' in flow map");
    }
    return f;
}

json flows_to_json(const std::vector<double>& f, const ComponentSystem& cs) {
    json j = json::object();
    for (int i = 0; i < cs.count(); ++i)
        j[cs.names.empty() ? "#" + std::to_string(i + 1) : cs.names[i]] = f[i];
    return j;
}

ThermalState thermal_from_string(const std::string& s) {
    if (s == "saturated-liquid") return ThermalState::SaturatedLiquid;
    if (s == "saturated-vapor") return ThermalState::SaturatedVapor;
    if (s == "partially-vaporized") return ThermalState::PartiallyVaporized;
    throw Error("unknown thermal state '" + s + "'");
}

std::string thermal_to_string(ThermalState t) {
    switch (t) {
        case ThermalState::SaturatedLiquid: return "saturated-liquid";
        case ThermalState::SaturatedVapor: return "saturated-vapor";
        case ThermalState::PartiallyVaporized: return "partially-vaporized";
    }
    return "";
}

const char* status_name(ConstraintStatus s) {
    switch (s) {
        case ConstraintStatus::Satisfied: return "satisfied";
        case ConstraintStatus::Binding: return "binding";
        case ConstraintStatus::Violated: return "violated";
    }
    return "";
}

}  // namespace

ColumnSpec spec_from_json(const json& j) {
    ColumnSpec spec;
    for (const auto& comp : j.at("components")) {
        spec.components.names.push_back(comp.at("name").get<std::string>());
        spec.components.alphas.push_back(comp.at("alpha").get<double>());
    }
    if (j.contains("delta")) spec.components.delta = j["delta"].get<double>();

    auto parse_stream = [&](const json& js, StreamKind kind) {
        StreamSpec s;
        s.kind = kind;
        s.position = js.at("position").get<int>();
        if (js.contains("name")) s.name = js["name"].get<std::string>();
        s.thermal = js.contains("thermal_state")
                        ? thermal_from_string(js["thermal_state"].get<std::string>())
                        : ThermalState::SaturatedLiquid;
        s.flows = flows_from_json(js.at("flows"), spec.components);
        if (kind == StreamKind::Sidedraw)
            for (double& f : s.flows) f = -f;  // file carries positive withdrawal rates
        if (s.thermal == ThermalState::PartiallyVaporized) {
            const double q = js.at("vapor_fraction").get<double>();
            if (!(q > 0.0 && q < 1.0))
                throw Error("vapor_fraction must lie strictly between 0 and 1");
            flash_split(spec.components.alphas, s.flows, q, s.liquid_flows, s.vapor_flows);
        }
        return s;
    };
    if (j.contains("feeds"))
        for (const auto& js : j["feeds"]) spec.streams.push_back(parse_stream(js, StreamKind::Feed));
    if (j.contains("sidedraws"))
        for (const auto& js : j["sidedraws"])
            spec.streams.push_back(parse_stream(js, StreamKind::Sidedraw));
    spec.distillate = flows_from_json(j.at("distillate").at("flows"), spec.components);
    return spec;
}

FreeSplitSpec free_split_spec_from_json(const json& j) {
    FreeSplitSpec fs;
    fs.base = spec_from_json(j);
    if (j.contains("free_splits")) {
        for (const auto& js : j["free_splits"]) {
            FreeSplit d;
            d.component = js.at("component").get<std::string>();
            d.donor = js.at("donor").get<std::string>();
            d.receiver = js.at("receiver").get<std::string>();
            d.lo = js.at("min").get<double>();
            d.hi = js.at("max").get<double>();
            fs.dofs.push_back(std::move(d));
        }
    }
    return fs;
}

nlohmann::json spec_to_json(const ColumnSpec& spec) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["components"] = json::array();
    for (int i = 0; i < spec.components.count(); ++i)
        j["components"].push_back(
            {{"name", spec.components.names[i]}, {"alpha", spec.components.alphas[i]}});
    j["feeds"] = json::array();
    j["sidedraws"] = json::array();
    for (const auto& s : spec.streams) {
        json js;
        js["position"] = s.position;
        if (!s.name.empty()) js["name"] = s.name;
        js["thermal_state"] = thermal_to_string(s.thermal);
        auto f = s.flows;
        if (s.kind == StreamKind::Sidedraw)
            for (double& v : f) v = -v;
        js["flows"] = flows_to_json(f, spec.components);
        (s.kind == StreamKind::Feed ? j["feeds"] : j["sidedraws"]).push_back(js);
    }
    j["distillate"]["flows"] = flows_to_json(spec.distillate, spec.components);
    return j;
}

ColumnSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open spec file '" + path + "'");
    json j;
    in >> j;
    return spec_from_json(j);
}

FreeSplitSpec load_free_split_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open spec file '" + path + "'");
    json j;
    in >> j;
    return free_split_spec_from_json(j);
}

json to_json(const FeasibilityReport& r) {
    json j;
    j["feasible"] = r.feasible;
    if (r.binding_stream) j["binding_stream"] = *r.binding_stream;
    j["advisory_violations"] = r.advisory_violations;
    j["streams"] = json::array();
    for (const auto& sf : r.per_stream) {
        json js;
        js["stream"] = sf.stream;
        js["index_set"] = sf.index_set;
        js["constraints"] = json::array();
        for (const auto& rec : sf.records) {
            js["constraints"].push_back({{"id", rec.id},
                                         {"i", rec.i},
                                         {"left", rec.left},
                                         {"right", rec.right},
                                         {"slack", rec.slack},
                                         {"status", status_name(rec.status)},
                                         {"enforced", rec.enforced}});
        }
        j["streams"].push_back(js);
    }
    return j;
}

json to_json(const MinRefluxResult& r, const ColumnSpec& spec) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["v_reb_min"] = r.v_reb_min;
    j["r_min"] = r.r_min;
    j["controlling_stream"] = r.controlling_stream;
    j["binding"] = {{"stream", r.binding.stream},
                    {"interval", r.binding.interval},
                    {"rho_index", r.binding.rho_key},
                    {"rho_value", r.binding.rho_value}};
    j["section_vapor"] = r.section_vapor;
    j["sections"] = json::array();
    for (const auto& s : r.sections) {
        json js;
        js["index"] = s.index;
        js["net_flows"] = flows_to_json(s.net_flows, spec.components);
        js["vapor_flow"] = s.vapor_flow;
        js["roots"] = s.roots;
        js["pinch_index"] = s.pinch_index;
        js["pinch_interval"] = s.pinch_interval;
        js["mu"] = s.mu;
        js["k_ind"] = s.k_ind;
        j["sections"].push_back(js);
    }
    j["feasibility"] = to_json(r.report);
    j["candidates"] = json::array();
    for (const auto& cand : r.candidates) {
        json jc;
        jc["source"] = cand.source;
        jc["stream"] = cand.stream;
        jc["feasible"] = cand.feasible;
        if (cand.v_reb) jc["v_reb"] = *cand.v_reb;
        if (!cand.note.empty()) jc["note"] = cand.note;
        j["candidates"].push_back(jc);
    }
    return j;
}

json to_json(const DecompositionResult& r, const ColumnSpec& spec) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["r_estimate"] = r.r_estimate;
    j["r_by_column"] = r.r_by_column;
    j["condenser_vapor_by_column"] = r.v_top_by_column;
    j["warnings"] = r.warnings;
    j["columns"] = json::array();
    for (const auto& col : r.columns) {
        json jc;
        jc["name"] = col.name;
        jc["feed"] = flows_to_json(col.feed.flows, spec.components);
        jc["top_product"] = flows_to_json(col.top_product, spec.components);
        jc["bottom_product"] = flows_to_json(col.bottom_product, spec.components);
        jc["net_upper_flows"] = flows_to_json(col.net_upper_flows, spec.components);
        jc["warnings"] = col.warnings;
        j["columns"].push_back(jc);
    }
    return j;
}

json to_json(const OptimizationResult& r) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["status"] = r.status;
    j["evaluations"] = r.evaluations;
    if (r.status == "optimal") {
        j["v_reb_min"] = r.v_reb_min;
        j["dof_values"] = r.dof_values;
        j["distribution"] = {{"distillate", flows_to_json(r.resolved.distillate,
                                                          r.resolved.components)},
                             {"bottoms", flows_to_json(r.resolved.bottoms(),
                                                       r.resolved.components)}};
        json draws = json::array();
        for (const auto& s : r.resolved.streams) {
            if (s.kind != StreamKind::Sidedraw) continue;
            auto f = s.flows;
            for (double& v : f) v = -v;
            draws.push_back(flows_to_json(f, r.resolved.components));
        }
        j["distribution"]["sidedraws"] = draws;
        if (r.inner) {
            j["r_min"] = r.inner->r_min;
            j["controlling_stream"] = r.inner->controlling_stream;
        }
        j["binary_assignment"] = r.binary_assignment;
        json cert;
        cert["passed"] = r.certificate.passed;
        cert["blocks"] = json::array();
        for (const auto& b : r.certificate.blocks)
            cert["blocks"].push_back({{"name", b.name},
                                      {"evaluated", b.evaluated},
                                      {"max_equality_residual", b.max_equality_residual},
                                      {"min_inequality_slack", b.min_inequality_slack},
                                      {"passed", b.passed}});
        j["certificate"] = cert;
    }
    j["ambiguous_sections"] = json::array();
    for (const auto& a : r.ambiguous)
        j["ambiguous_sections"].push_back({{"section", a.section},
                                           {"component", a.component},
                                           {"interval_if_up", a.interval_if_up},
                                           {"interval_if_down", a.interval_if_down}});
    j["assignments_covered"] = r.assignments_covered;
    return j;
}

json to_json(const StageProfile& p, const ColumnSpec& spec) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["iterations"] = p.iterations;
    j["residual"] = p.residual;
    j["stages_per_section"] = p.stages_per_section;
    j["section_liquid"] = p.section_liquid;
    j["section_vapor"] = p.section_vapor;
    json prods = json::array();
    for (const auto& x : p.achieved_products) prods.push_back(flows_to_json(x, spec.components));
    j["achieved_product_compositions"] = prods;
    return j;
}

json to_json(const BisectionResult& r) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["r_min"] = r.r_min;
    j["bracket"] = {r.r_lo, r.r_hi};
    j["evaluations"] = r.evaluations;
    return j;
}

namespace {

void dump_value(const json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in + json(it.key()).dump() + ": ";
                dump_value(it.value(), out, indent, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                dump_value(v, out, indent, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case json::value_t::number_float: {
            const double v = j.get<double>();
            if (std::isfinite(v)) {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.9g", v);
                out += buf;
            } else {
                out += "null";
            }
            return;
        }
        default: out += j.dump(); return;
    }
}

}  // namespace

std::string canonical_dump(const json& j, int indent) {
    std::string out;
    dump_value(j, out, indent, 0);
    out += "\n";
    return out;
}

}  // namespace mfmp
