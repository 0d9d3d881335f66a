#pragma once

#include <string>

#include <json.hpp>

#include "mfmp/minreflux.hpp"
#include "mfmp/optimizer.hpp"
#include "mfmp/simulator.hpp"
#include "mfmp/underwood.hpp"

namespace mfmp {

inline constexpr int kSchemaVersion = 1;

// Column spec file parsing. Sidedraw withdrawal rates are positive in the
// file and negated into the internal convention here.
ColumnSpec spec_from_json(const nlohmann::json& j);
FreeSplitSpec free_split_spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const ColumnSpec& spec);

ColumnSpec load_spec(const std::string& path);
FreeSplitSpec load_free_split_spec(const std::string& path);

// Result serialization.
nlohmann::json to_json(const MinRefluxResult& r, const ColumnSpec& spec);
nlohmann::json to_json(const FeasibilityReport& r);
nlohmann::json to_json(const DecompositionResult& r, const ColumnSpec& spec);
nlohmann::json to_json(const OptimizationResult& r);
nlohmann::json to_json(const StageProfile& p, const ColumnSpec& spec);
nlohmann::json to_json(const BisectionResult& r);

// Canonical rendering: keys sorted (nlohmann objects already are), floats
// printed with 9 significant digits, so repeated runs are byte-identical.
std::string canonical_dump(const nlohmann::json& j, int indent = 2);

}  // namespace mfmp
