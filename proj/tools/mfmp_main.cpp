#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mfmp/bundled_examples.hpp"
#include "mfmp/json_io.hpp"
#include "mfmp/optimizer.hpp"
#include "mfmp/ternary.hpp"
#include "mfmp/underwood.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;       // bad input, IO failure, invalid spec
constexpr int kExitInfeasible = 2;  // model infeasibility

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw mfmp::Error("cannot write '" + out_path + "'");
    out << text;
}

struct CommonOpts {
    std::string input;
    std::string out;
    std::string format = "json";
    double tol_bind = -1.0;
    int grid = 64;
    int stages = 50;
    double reflux = 0.0;
    bool skip_profile_check = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_input = true) {
    if (needs_input) cmd->add_option("input", o.input, "column spec JSON file")->required();
    cmd->add_option("--out", o.out, "write the result to this file instead of stdout");
    cmd->add_option("--format", o.format, "output format: json, text or csv")
        ->check(CLI::IsMember({"json", "text", "csv"}));
    cmd->add_option("--tol-bind", o.tol_bind, "binding tolerance on root values");
    cmd->add_option("--grid", o.grid, "optimizer grid intervals per degree of freedom");
    cmd->add_option("--stages", o.stages, "equilibrium stages per column section");
    cmd->add_option("--reflux", o.reflux, "reflux ratio for simulate / ternary-export");
    cmd->add_flag("--skip-sidedraw-profile-check", o.skip_profile_check,
                  "drop the sidedraw-composition-on-profile constraint family");
}

mfmp::CheckOptions check_options(const CommonOpts& o) {
    mfmp::CheckOptions c;
    c.bind_tol = o.tol_bind;
    c.sidedraw_on_profile = !o.skip_profile_check;
    return c;
}

int run_validate(const CommonOpts& o) {
    const auto spec = mfmp::validate_spec(mfmp::load_spec(o.input));
    nlohmann::json j = mfmp::spec_to_json(spec);
    j["valid"] = true;
    j["sections"] = spec.section_count();
    emit(o.format == "text"
             ? "valid: " + std::to_string(spec.section_count()) + " sections, " +
                   std::to_string(spec.components.count()) + " components\n"
             : mfmp::canonical_dump(j),
         o.out);
    return kExitOk;
}

int run_minreflux(const CommonOpts& o) {
    const auto spec = mfmp::validate_spec(mfmp::load_spec(o.input));
    const auto res = mfmp::vreb_min(spec, check_options(o));
    if (o.format == "text") {
        std::ostringstream os;
        os << "V_reb,min = " << res.v_reb_min << " mol/s\n"
           << "R_min     = " << res.r_min << "\n"
           << "controlling stream: " << res.controlling_stream << "\n";
        emit(os.str(), o.out);
    } else {
        emit(mfmp::canonical_dump(mfmp::to_json(res, spec)), o.out);
    }
    return kExitOk;
}

int run_decompose(const CommonOpts& o) {
    const auto spec = mfmp::validate_spec(mfmp::load_spec(o.input));
    const auto res = mfmp::decomposition_min_reflux(spec);
    nlohmann::json j = mfmp::to_json(res, spec);
    // Compare against the whole-column answer so the bias is visible.
    try {
        const auto full = mfmp::vreb_min(spec, check_options(o));
        j["whole_column_r_min"] = full.r_min;
        if (res.r_estimate > full.r_min * 1.001)
            j["note"] = "decomposition overestimates the whole-column minimum reflux";
        else if (res.r_estimate < full.r_min * 0.999)
            j["note"] = "decomposition underestimates the whole-column minimum reflux";
    } catch (const mfmp::Error&) {
    }
    if (o.format == "text") {
        std::ostringstream os;
        os << "decomposition R estimate = " << res.r_estimate << "\n";
        if (j.contains("whole_column_r_min"))
            os << "whole-column R_min       = " << j["whole_column_r_min"].get<double>() << "\n";
        if (j.contains("note")) os << j["note"].get<std::string>() << "\n";
        for (const auto& w : res.warnings) os << "warning: " << w << "\n";
        emit(os.str(), o.out);
    } else {
        emit(mfmp::canonical_dump(j), o.out);
    }
    return kExitOk;
}

int run_optimize(const CommonOpts& o) {
    const auto fs = mfmp::load_free_split_spec(o.input);
    mfmp::OptimizerConfig cfg;
    cfg.grid = o.grid;
    cfg.check = check_options(o);
    const auto res = mfmp::optimize_distribution(fs, cfg);
    if (o.format == "text") {
        std::ostringstream os;
        os << "status: " << res.status << "\n";
        if (res.status == "optimal")
            os << "V_reb,min = " << res.v_reb_min << " mol/s\n"
               << "R_min     = " << res.inner->r_min << "\n";
        emit(os.str(), o.out);
    } else {
        emit(mfmp::canonical_dump(mfmp::to_json(res)), o.out);
    }
    return res.status == "optimal" ? kExitOk : kExitInfeasible;
}

int run_simulate(const CommonOpts& o) {
    const auto spec = mfmp::validate_spec(mfmp::load_spec(o.input));
    double reflux = o.reflux;
    if (!(reflux > 0.0)) reflux = mfmp::vreb_min(spec, check_options(o)).r_min;
    const auto prof = mfmp::simulate_column(spec, reflux, o.stages);
    if (o.format == "csv") {
        std::ostringstream os;
        os << "stage,section";
        for (const auto& n : spec.components.names) os << ",x_" << n;
        os << '\n';
        for (std::size_t n = 0; n < prof.x.size(); ++n) {
            os << n << ',' << prof.section_of_stage[n];
            for (double v : prof.x[n]) os << ',' << v;
            os << '\n';
        }
        emit(os.str(), o.out);
    } else {
        nlohmann::json j = mfmp::to_json(prof, spec);
        j["reflux_ratio"] = reflux;
        emit(mfmp::canonical_dump(j), o.out);
    }
    return kExitOk;
}

int run_ternary(const CommonOpts& o) {
    const auto spec = mfmp::validate_spec(mfmp::load_spec(o.input));
    const auto res = mfmp::vreb_min(spec, check_options(o));
    const double reflux = o.reflux > 0.0 ? o.reflux : res.r_min;
    const auto prof = mfmp::simulate_column(spec, reflux, o.stages);
    const auto doc = mfmp::ternary_export(spec, res, prof);

    const std::string base = o.out.empty() ? "ternary" : o.out;
    {
        std::ofstream csv(base + ".csv");
        if (!csv) throw mfmp::Error("cannot write '" + base + ".csv'");
        csv << doc.csv;
    }
    nlohmann::json j;
    j["schema_version"] = mfmp::kSchemaVersion;
    j["csv"] = base + ".csv";
    j["reflux_ratio"] = reflux;
    if (!doc.svg.empty()) {
        std::ofstream svg(base + ".svg");
        if (!svg) throw mfmp::Error("cannot write '" + base + ".svg'");
        svg << doc.svg;
        j["svg"] = base + ".svg";
    }
    std::cout << mfmp::canonical_dump(j);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shortcut minimum-reflux analysis for multi-feed, multi-product columns"};
    app.require_subcommand(0, 1);

    std::string seed_dir;
    app.add_option("--seed-docs", seed_dir,
                   "write the bundled example spec files to DIR and exit");

    CommonOpts vo, mo, dopt, oo, so, to;
    auto* v = app.add_subcommand("validate", "check a column spec file");
    add_common(v, vo);
    auto* m = app.add_subcommand("minreflux", "minimum reboiler duty and reflux ratio");
    add_common(m, mo);
    auto* d = app.add_subcommand("decompose", "simple-column decomposition baseline");
    add_common(d, dopt);
    auto* op = app.add_subcommand("optimize", "optimize free product distributions");
    add_common(op, oo);
    auto* s = app.add_subcommand("simulate", "tray-by-tray equilibrium-stage simulation");
    add_common(s, so);
    auto* t = app.add_subcommand("ternary-export", "composition-space geometry export");
    add_common(t, to);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!seed_dir.empty()) {
            mfmp::write_bundled_examples(seed_dir);
            std::cout << "wrote " << mfmp::bundled_examples().size() << " example specs to "
                      << seed_dir << "\n";
            return kExitOk;
        }
        if (v->parsed()) return run_validate(vo);
        if (m->parsed()) return run_minreflux(mo);
        if (d->parsed()) return run_decompose(dopt);
        if (op->parsed()) return run_optimize(oo);
        if (s->parsed()) return run_simulate(so);
        if (t->parsed()) return run_ternary(to);
        std::cerr << app.help();
        return kExitUsage;
    } catch (const mfmp::NoFeasibleCandidate& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const mfmp::NotConverged& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const mfmp::BracketFailure& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const mfmp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
