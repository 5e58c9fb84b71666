#include "attrition/serialization.hpp"

#include <fstream>
#include <sstream>

namespace attrition {

namespace {

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    return it->get<T>();
}

template <class T>
T require(const Json& j, const char* key, const char* what) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) throw ValidationError(std::string(what) + ": missing field '" + key + "'");
    try {
        return it->get<T>();
    } catch (const Json::exception& e) {
        throw ValidationError(std::string(what) + ": bad field '" + key + "': " + e.what());
    }
}

}  // namespace

void check_format_version(const Json& j, const char* what) {
    if (!j.is_object()) throw ValidationError(std::string(what) + ": expected a JSON object");
    const int v = get_or<int>(j, "format_version", -1);
    if (v != kFormatVersion)
        throw ValidationError(std::string(what) + ": unsupported format_version " + std::to_string(v));
}

Json to_json(const UnitTypeStats& t) {
    Json j = {{"type_id", t.type_id},
              {"name", t.name},
              {"max_hp", t.max_hp},
              {"max_shield", t.max_shield},
              {"max_energy", t.max_energy},
              {"mineral_cost", t.mineral_cost},
              {"gas_cost", t.gas_cost},
              {"weapon_damage_ground", t.weapon_damage_ground},
              {"weapon_damage_air", t.weapon_damage_air},
              {"cooldown_ground", t.cooldown_ground},
              {"cooldown_air", t.cooldown_air},
              {"range_ground", t.range_ground},
              {"range_air", t.range_air},
              {"top_speed", t.top_speed},
              {"is_flyer", t.is_flyer},
              {"is_building", t.is_building},
              {"can_attack", t.can_attack},
              {"is_detector", t.is_detector},
              {"is_transport", t.is_transport},
              {"is_worker", t.is_worker},
              {"is_base", t.is_base}};
    if (t.destroy_score_override) j["destroy_score_override"] = *t.destroy_score_override;
    return j;
}

UnitTypeStats unit_type_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("unit type: expected object");
    UnitTypeStats t;
    t.type_id = require<int>(j, "type_id", "unit type");
    t.name = require<std::string>(j, "name", "unit type");
    t.max_hp = require<double>(j, "max_hp", "unit type");
    t.max_shield = get_or(j, "max_shield", 0.0);
    t.max_energy = get_or(j, "max_energy", 0.0);
    t.mineral_cost = get_or(j, "mineral_cost", 0.0);
    t.gas_cost = get_or(j, "gas_cost", 0.0);
    t.weapon_damage_ground = get_or(j, "weapon_damage_ground", 0.0);
    t.weapon_damage_air = get_or(j, "weapon_damage_air", 0.0);
    t.cooldown_ground = get_or(j, "cooldown_ground", 0.0);
    t.cooldown_air = get_or(j, "cooldown_air", 0.0);
    t.range_ground = get_or(j, "range_ground", 0.0);
    t.range_air = get_or(j, "range_air", 0.0);
    t.top_speed = get_or(j, "top_speed", 0.0);
    t.is_flyer = get_or(j, "is_flyer", false);
    t.is_building = get_or(j, "is_building", false);
    t.can_attack = get_or(j, "can_attack", t.attacks_ground() || t.attacks_air());
    t.is_detector = get_or(j, "is_detector", false);
    t.is_transport = get_or(j, "is_transport", false);
    t.is_worker = get_or(j, "is_worker", false);
    t.is_base = get_or(j, "is_base", false);
    if (j.contains("destroy_score_override") && !j["destroy_score_override"].is_null())
        t.destroy_score_override = j["destroy_score_override"].get<double>();
    return t;
}

Json to_json(const Catalog& catalog) {
    Json types = Json::array();
    for (const auto& t : catalog.types()) types.push_back(to_json(t));
    return {{"format_version", kFormatVersion}, {"catalog_id", catalog.id()}, {"types", types}};
}

Catalog catalog_from_json(const Json& j) {
    const Json* types = &j;
    std::string id = "catalog";
    if (j.is_object()) {
        check_format_version(j, "catalog");
        id = get_or<std::string>(j, "catalog_id", id);
        if (!j.contains("types")) throw ValidationError("catalog: missing 'types'");
        types = &j["types"];
    }
    if (!types->is_array()) throw ValidationError("catalog: 'types' must be an array");
    std::vector<UnitTypeStats> out;
    for (const auto& t : *types) out.push_back(unit_type_from_json(t));
    return Catalog(std::move(out), id);
}

Json to_json(const Unit& u) {
    Json j = {{"uid", u.uid}, {"type_id", u.type_id}, {"hp", u.hp}, {"shield", u.shield}, {"energy", u.energy}};
    if (u.pos) {
        j["x"] = u.pos->x;
        j["y"] = u.pos->y;
    }
    return j;
}

Unit unit_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("unit: expected object");
    Unit u;
    u.uid = require<Uid>(j, "uid", "unit");
    u.type_id = require<int>(j, "type_id", "unit");
    u.hp = require<double>(j, "hp", "unit");
    u.shield = get_or(j, "shield", 0.0);
    u.energy = get_or(j, "energy", 0.0);
    if (j.contains("x") && j.contains("y")) u.pos = Position{j["x"].get<double>(), j["y"].get<double>()};
    return u;
}

Json to_json(const Army& army) {
    Json a = Json::array();
    for (const auto& u : army) a.push_back(to_json(u));
    return a;
}

Army army_from_json(const Json& j) {
    if (!j.is_array()) throw ValidationError("army: expected array");
    Army out;
    out.reserve(j.size());
    for (const auto& u : j) out.push_back(unit_from_json(u));
    return out;
}

Json to_json(const CombatState& s) {
    return {{"format_version", kFormatVersion}, {"army_a", to_json(s.army_a)}, {"army_b", to_json(s.army_b)}};
}

CombatState combat_state_from_json(const Json& j) {
    check_format_version(j, "combat state");
    if (!j.contains("army_a") || !j.contains("army_b")) throw ValidationError("combat state: missing army_a/army_b");
    return {army_from_json(j["army_a"]), army_from_json(j["army_b"])};
}

Json to_json(const CombatOutcome& o) {
    Json kills = Json::array();
    for (const auto& k : o.kills) kills.push_back({{"frame", k.frame}, {"uid", k.uid}});
    return {{"model", to_string(o.model)},
            {"winner", to_string(o.winner)},
            {"duration_frames", o.duration_frames},
            {"survivors_a", to_json(o.survivors_a)},
            {"survivors_b", to_json(o.survivors_b)},
            {"kills", kills},
            {"clamped", o.clamped}};
}

CombatOutcome combat_outcome_from_json(const Json& j) {
    CombatOutcome o;
    o.model = model_kind_from_string(require<std::string>(j, "model", "outcome"));
    const auto w = require<std::string>(j, "winner", "outcome");
    if (w == "A") o.winner = Winner::A;
    else if (w == "B") o.winner = Winner::B;
    else if (w == "draw") o.winner = Winner::Draw;
    else if (w == "stalemate") o.winner = Winner::Stalemate;
    else throw ValidationError("outcome: unknown winner '" + w + "'");
    o.duration_frames = require<double>(j, "duration_frames", "outcome");
    o.survivors_a = army_from_json(j.at("survivors_a"));
    o.survivors_b = army_from_json(j.at("survivors_b"));
    for (const auto& k : j.value("kills", Json::array())) o.kills.push_back({k.at("frame").get<double>(), k.at("uid").get<Uid>()});
    o.clamped = get_or(j, "clamped", false);
    return o;
}

Json to_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
    if (!j.is_array()) throw ValidationError("matrix: expected array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (static_cast<Eigen::Index>(j[i].size()) != cols) throw ValidationError("matrix: ragged rows");
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
    }
    return m;
}

Json to_json(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Eigen::VectorXd vector_from_json(const Json& j) {
    if (!j.is_array()) throw ValidationError("vector: expected array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j[i].get<double>();
    return v;
}

Json to_json(const TargetSelectionPolicy& p) {
    Json j = {{"kind", to_string(p.kind)}};
    if (p.kind == PolicyKind::Random) j["seed"] = p.seed;
    if (p.kind == PolicyKind::BordaCount)
        j["borda_scores"] = {{"ground_only", to_json(p.borda_scores[0])},
                             {"air_only", to_json(p.borda_scores[1])},
                             {"mixed", to_json(p.borda_scores[2])}};
    return j;
}

TargetSelectionPolicy policy_from_json(const Json& j) {
    TargetSelectionPolicy p;
    p.kind = policy_kind_from_string(require<std::string>(j, "kind", "policy"));
    if (p.kind == PolicyKind::Random) p.seed = require<std::uint64_t>(j, "seed", "policy");
    if (p.kind == PolicyKind::BordaCount) {
        const auto& s = j.at("borda_scores");
        p.borda_scores = {vector_from_json(s.at("ground_only")), vector_from_json(s.at("air_only")),
                          vector_from_json(s.at("mixed"))};
    }
    return p;
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

Catalog load_catalog(const std::filesystem::path& path) { return catalog_from_json(read_json_file(path)); }

void save_catalog(const Catalog& catalog, const std::filesystem::path& path) {
    write_text_file(path, to_json(catalog).dump(2) + "\n");
}

}  // namespace attrition
