#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "attrition/evaluation.hpp"
#include "attrition/learning.hpp"
#include "attrition/mcts.hpp"
#include "attrition/synthetic.hpp"

namespace testing {

using namespace attrition;

inline std::string data_path(const std::string& rel) { return std::string(ATTRITION_DATA_DIR) + "/" + rel; }

inline UnitTypeStats ground_type(TypeId id, std::string name, double hp, double damage, double cooldown) {
    UnitTypeStats t;
    t.type_id = id;
    t.name = std::move(name);
    t.max_hp = hp;
    t.weapon_damage_ground = damage;
    t.cooldown_ground = cooldown;
    t.range_ground = 32.0;
    t.can_attack = damage > 0.0;
    t.top_speed = 4.0;
    t.mineral_cost = 50.0;
    return t;
}

// Two ground types: "alpha" 40 hp at 10 dpf, "beta" 30 hp at 5 dpf.
inline Catalog duel_catalog() {
    return Catalog({ground_type(0, "alpha", 40, 10, 1), ground_type(1, "beta", 30, 5, 1)}, "duel");
}

inline Unit unit(Uid uid, TypeId type, double hp) { return Unit{uid, type, hp, 0.0, 0.0, std::nullopt}; }

inline Unit full(Uid uid, const UnitTypeStats& t) { return Unit{uid, t.type_id, t.max_hp, t.max_shield, 0.0, std::nullopt}; }

inline std::vector<Uid> uids(const Army& army) {
    std::vector<Uid> out;
    for (const auto& u : army) out.push_back(u.uid);
    std::sort(out.begin(), out.end());
    return out;
}

inline Winner flip(Winner w) { return w == Winner::A ? Winner::B : w == Winner::B ? Winner::A : w; }

inline std::shared_ptr<const RegionGraph> graph_of(const std::string& rel, Abstraction a) {
    return std::make_shared<const RegionGraph>(load_map(data_path(rel)), a);
}

inline Catalog broodwar() { return load_catalog(data_path("broodwar_catalog.json")); }

inline HighLevelState diamond_start(const Catalog& catalog, Abstraction a = Abstraction::RC_MB) {
    const auto scenario = load_scenario(data_path("maps/diamond6_scenario.json"), catalog);
    return abstract_from_units(scenario.units, graph_of("maps/diamond6.json", a), a, catalog);
}

}  // namespace testing
