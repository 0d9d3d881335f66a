#include "mfmp/bundled_examples.hpp"

#include <filesystem>
#include <fstream>

#include "mfmp/errors.hpp"

namespace mfmp {

namespace {

const char* kEx1Scenario1 = R"json({
  "schema_version": 1,
  "description": "Two-feed ternary column, lighter feed above the heavier feed.",
  "components": [
    {"name": "n-octane", "alpha": 1.0},
    {"name": "n-heptane", "alpha": 2.25},
    {"name": "n-hexane", "alpha": 5.1168}
  ],
  "feeds": [
    {"name": "F1", "position": 1, "thermal_state": "saturated-liquid",
     "flows": {"n-hexane": 30.0, "n-heptane": 60.0, "n-octane": 10.0}},
    {"name": "F2", "position": 2, "thermal_state": "saturated-liquid",
     "flows": {"n-hexane": 20.0, "n-heptane": 10.0, "n-octane": 70.0}}
  ],
  "sidedraws": [],
  "distillate": {"flows": {"n-hexane": 49.8522, "n-heptane": 2.6238, "n-octane": 0.0}}
})json";

const char* kEx1Scenario2 = R"json({
  "schema_version": 1,
  "description": "Two-feed ternary column with the feed locations swapped.",
  "components": [
    {"name": "n-octane", "alpha": 1.0},
    {"name": "n-heptane", "alpha": 2.25},
    {"name": "n-hexane", "alpha": 5.1168}
  ],
  "feeds": [
    {"name": "F1", "position": 1, "thermal_state": "saturated-liquid",
     "flows": {"n-hexane": 20.0, "n-heptane": 10.0, "n-octane": 70.0}},
    {"name": "F2", "position": 2, "thermal_state": "saturated-liquid",
     "flows": {"n-hexane": 30.0, "n-heptane": 60.0, "n-octane": 10.0}}
  ],
  "sidedraws": [],
  "distillate": {"flows": {"n-hexane": 49.8522, "n-heptane": 2.6238, "n-octane": 0.0}}
})json";

const char* kEx2 = R"json({
  "schema_version": 1,
  "description": "One feed, two saturated-liquid sidedraw products.",
  "components": [
    {"name": "n-octane", "alpha": 1.0},
    {"name": "n-heptane", "alpha": 2.25},
    {"name": "n-hexane", "alpha": 5.1168}
  ],
  "feeds": [
    {"name": "F1", "position": 2, "thermal_state": "saturated-liquid",
     "flows": {"n-hexane": 30.0, "n-heptane": 40.0, "n-octane": 30.0}}
  ],
  "sidedraws": [
    {"name": "S1", "position": 1, "thermal_state": "saturated-liquid",
     "flows": {"n-hexane": 6.0, "n-heptane": 24.0}},
    {"name": "S2", "position": 3, "thermal_state": "saturated-liquid",
     "flows": {"n-heptane": 10.0, "n-octane": 10.0}}
  ],
  "distillate": {"flows": {"n-hexane": 24.0, "n-heptane": 6.0}}
})json";

const char* kEx3Fixed = R"json({
  "schema_version": 1,
  "description": "Two feeds and one sidedraw, quaternary system, fixed product distribution.",
  "components": [
    {"name": "n-nonane", "alpha": 1.0},
    {"name": "n-octane", "alpha": 2.300},
    {"name": "n-heptane", "alpha": 5.361},
    {"name": "n-hexane", "alpha": 12.332}
  ],
  "feeds": [
    {"name": "F1", "position": 1, "thermal_state": "saturated-vapor",
     "flows": {"n-hexane": 30.0, "n-heptane": 30.0, "n-octane": 40.0}},
    {"name": "F2", "position": 3, "thermal_state": "saturated-liquid",
     "flows": {"n-heptane": 40.0, "n-octane": 30.0, "n-nonane": 30.0}}
  ],
  "sidedraws": [
    {"name": "S1", "position": 2, "thermal_state": "saturated-liquid",
     "flows": {"n-heptane": 30.0, "n-octane": 40.0}}
  ],
  "distillate": {"flows": {"n-hexane": 30.0, "n-heptane": 40.0}}
})json";

const char* kEx3Free = R"json({
  "schema_version": 1,
  "description": "Same column with the intermediate-component distributions left free.",
  "components": [
    {"name": "n-nonane", "alpha": 1.0},
    {"name": "n-octane", "alpha": 2.300},
    {"name": "n-heptane", "alpha": 5.361},
    {"name": "n-hexane", "alpha": 12.332}
  ],
  "feeds": [
    {"name": "F1", "position": 1, "thermal_state": "saturated-vapor",
     "flows": {"n-hexane": 30.0, "n-heptane": 30.0, "n-octane": 40.0}},
    {"name": "F2", "position": 3, "thermal_state": "saturated-liquid",
     "flows": {"n-heptane": 40.0, "n-octane": 30.0, "n-nonane": 30.0}}
  ],
  "sidedraws": [
    {"name": "S1", "position": 2, "thermal_state": "saturated-liquid",
     "flows": {"n-heptane": 30.0, "n-octane": 40.0}}
  ],
  "distillate": {"flows": {"n-hexane": 30.0, "n-heptane": 40.0}},
  "free_splits": [
    {"component": "n-heptane", "donor": "distillate", "receiver": "sidedraw:1",
     "min": 0.0, "max": 70.0},
    {"component": "n-octane", "donor": "sidedraw:1", "receiver": "bottoms",
     "min": 0.0, "max": 70.0}
  ]
})json";

const char* kEx3FullBProbe = R"json({
  "schema_version": 1,
  "description": "Probe: force complete recovery of the first intermediate in the distillate.",
  "components": [
    {"name": "n-nonane", "alpha": 1.0},
    {"name": "n-octane", "alpha": 2.300},
    {"name": "n-heptane", "alpha": 5.361},
    {"name": "n-hexane", "alpha": 12.332}
  ],
  "feeds": [
    {"name": "F1", "position": 1, "thermal_state": "saturated-vapor",
     "flows": {"n-hexane": 30.0, "n-heptane": 30.0, "n-octane": 40.0}},
    {"name": "F2", "position": 3, "thermal_state": "saturated-liquid",
     "flows": {"n-heptane": 40.0, "n-octane": 30.0, "n-nonane": 30.0}}
  ],
  "sidedraws": [
    {"name": "S1", "position": 2, "thermal_state": "saturated-liquid",
     "flows": {"n-heptane": 30.0, "n-octane": 40.0}}
  ],
  "distillate": {"flows": {"n-hexane": 30.0, "n-heptane": 40.0}},
  "free_splits": [
    {"component": "n-heptane", "donor": "distillate", "receiver": "sidedraw:1",
     "min": 70.0, "max": 70.0},
    {"component": "n-octane", "donor": "sidedraw:1", "receiver": "bottoms",
     "min": 0.0, "max": 70.0}
  ]
})json";

}  // namespace

const std::vector<BundledExample>& bundled_examples() {
    static const std::vector<BundledExample> examples = {
        {"ex1_scenario1", kEx1Scenario1}, {"ex1_scenario2", kEx1Scenario2},
        {"ex2", kEx2},                    {"ex3_fixed", kEx3Fixed},
        {"ex3_free", kEx3Free},           {"ex3_fullB_probe", kEx3FullBProbe},
    };
    return examples;
}

void write_bundled_examples(const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    for (const auto& ex : bundled_examples()) {
        const auto path = fs::path(dir) / (ex.name + ".json");
        std::ofstream out(path);
        if (!out) throw Error("cannot write '" + path.string() + "'");
        out << ex.content << '\n';
    }
}

}  // namespace mfmp
