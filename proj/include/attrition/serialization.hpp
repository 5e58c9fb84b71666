#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "attrition/core.hpp"
#include "attrition/models.hpp"
#include "attrition/policy.hpp"

namespace attrition {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

Json to_json(const UnitTypeStats& t);
UnitTypeStats unit_type_from_json(const Json& j);

/// {"format_version": 1, "catalog_id": ..., "types": [...]}. A bare array of
/// types is accepted on input.
Json to_json(const Catalog& catalog);
Catalog catalog_from_json(const Json& j);

Json to_json(const Unit& u);
Unit unit_from_json(const Json& j);
Json to_json(const Army& army);
Army army_from_json(const Json& j);

/// {"format_version": 1, "army_a": [...], "army_b": [...]}
Json to_json(const CombatState& s);
CombatState combat_state_from_json(const Json& j);

Json to_json(const CombatOutcome& o);
CombatOutcome combat_outcome_from_json(const Json& j);

Json to_json(const TargetSelectionPolicy& p);
TargetSelectionPolicy policy_from_json(const Json& j);

Json to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j);
Json to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const Json& j);

/// Reads a whole file as JSON; parse failures become ValidationError.
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

Catalog load_catalog(const std::filesystem::path& path);
void save_catalog(const Catalog& catalog, const std::filesystem::path& path);

/// Throws ValidationError unless j["format_version"] is a version we read.
void check_format_version(const Json& j, const char* what);

}  // namespace attrition
