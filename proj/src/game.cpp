#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "attrition/game.hpp"

namespace attrition {

namespace {

constexpr Uid kUidStride = 1 << 16;

bool is_building(const Group& g, const Catalog& catalog) { return catalog[g.type_id].is_building; }

long travel_frames(const RegionGraph& graph, int from, int to, double speed) {
    return std::max(1L, static_cast<long>(std::ceil(graph.distance(from, to) / speed - 1e-9)));
}

// enemy_present[region] for the opponent of `player`
std::vector<char> occupied_by(const HighLevelState& state, int player) {
    std::vector<char> out(state.graph->size(), 0);
    for (const auto& g : state.groups)
        if (g.player == player) out[static_cast<std::size_t>(g.region)] = 1;
    return out;
}

std::string describe(const HighLevelState& state, std::size_t i, const Catalog& catalog) {
    const auto& g = state.groups[i];
    return "group " + std::to_string(i) + " (player " + std::to_string(g.player) + ", " + catalog[g.type_id].name +
           ", region " + std::to_string(g.region) + ")";
}

void group_options(const HighLevelState& state, std::size_t i, const std::vector<char>& enemy,
                   const Catalog& catalog, std::vector<GroupCommand>& out) {
    const auto& g = state.groups[i];
    out.clear();
    if (is_building(g, catalog)) {
        out.push_back({i, GroupAction::NA, -1});
        return;
    }
    if (g.busy(state.frame)) {
        out.push_back({i, g.action, g.target_region});
        return;
    }
    if (catalog[g.type_id].top_speed > 0.0)
        for (int nb : state.graph->neighbors(g.region)) out.push_back({i, GroupAction::Move, nb});
    if (enemy[static_cast<std::size_t>(g.region)]) out.push_back({i, GroupAction::Attack, g.region});
    out.push_back({i, GroupAction::Idle, -1});
}

}  // namespace

const char* to_string(GroupAction a) {
    switch (a) {
        case GroupAction::NA: return "na";
        case GroupAction::Move: return "move";
        case GroupAction::Attack: return "attack";
        case GroupAction::Idle: return "idle";
    }
    return "?";
}

GroupAction group_action_from_string(std::string_view s) {
    for (auto a : {GroupAction::NA, GroupAction::Move, GroupAction::Attack, GroupAction::Idle})
        if (s == to_string(a)) return a;
    throw ValidationError("unknown group action '" + std::string(s) + "'");
}

bool HighLevelState::eliminated(int player) const {
    return std::none_of(groups.begin(), groups.end(), [&](const Group& g) { return g.player == player; });
}

int HighLevelState::total_size(int player) const {
    int n = 0;
    for (const auto& g : groups)
        if (g.player == player) n += g.size;
    return n;
}

void canonicalize(HighLevelState& state) {
    auto& gs = state.groups;
    std::stable_sort(gs.begin(), gs.end(), [](const Group& a, const Group& b) {
        return std::tie(a.player, a.region, a.type_id) < std::tie(b.player, b.region, b.type_id);
    });
    // merge arrivals into residents (size-weighted health, resident keeps its orders)
    std::size_t out = 0;
    for (std::size_t i = 0; i < gs.size(); ++i) {
        if (gs[i].size <= 0) continue;
        if (out > 0 && gs[out - 1].player == gs[i].player && gs[out - 1].region == gs[i].region &&
            gs[out - 1].type_id == gs[i].type_id) {
            auto& r = gs[out - 1];
            const int n = r.size + gs[i].size;
            r.avg_hp = (r.avg_hp * r.size + gs[i].avg_hp * gs[i].size) / n;
            r.size = n;
            continue;
        }
        gs[out++] = gs[i];
    }
    gs.resize(out);
}

void validate_state(const HighLevelState& state, const Catalog& catalog) {
    if (!state.graph) throw ValidationError("state: no region graph");
    for (std::size_t i = 0; i < state.groups.size(); ++i) {
        const auto& g = state.groups[i];
        const std::string where = "state group " + std::to_string(i);
        if (g.player != 0 && g.player != 1) throw ValidationError(where + ": player must be 0 or 1");
        if (!catalog.contains(g.type_id)) throw ValidationError(where + ": unknown type");
        if (!state.graph->active(g.region)) throw ValidationError(where + ": region not in this abstraction");
        if (g.size < 1) throw ValidationError(where + ": size < 1");
        const double cap = catalog[g.type_id].max_health();
        if (!(g.avg_hp > 0.0) || g.avg_hp > cap * (1.0 + 1e-9)) throw ValidationError(where + ": avg_hp out of range");
        if (catalog[g.type_id].is_building && g.action != GroupAction::NA)
            throw ValidationError(where + ": buildings only take N/A");
        if (!catalog[g.type_id].is_building && g.action == GroupAction::NA)
            throw ValidationError(where + ": N/A is only for buildings");
        if (g.action == GroupAction::Move && !state.graph->active(g.target_region))
            throw ValidationError(where + ": move target not in this abstraction");
        if (i > 0) {
            const auto& p = state.groups[i - 1];
            if (std::tie(p.player, p.region, p.type_id) >= std::tie(g.player, g.region, g.type_id))
                throw ValidationError(where + ": groups must be unique per (player, type, region) and ordered");
        }
    }
}

Json to_json(const Group& g) {
    return {{"player", g.player},
            {"type_id", g.type_id},
            {"size", g.size},
            {"avg_hp", g.avg_hp},
            {"region", g.region},
            {"action", to_string(g.action)},
            {"target", g.target_region >= 0 ? Json(g.target_region) : Json()},
            {"end", g.end_frame}};
}

Group group_from_json(const Json& j) {
    Group g;
    try {
        g.player = j.at("player").get<int>();
        g.type_id = j.at("type_id").get<int>();
        g.size = j.at("size").get<int>();
        g.avg_hp = j.at("avg_hp").get<double>();
        g.region = j.at("region").get<int>();
        g.action = group_action_from_string(j.value("action", std::string("idle")));
        const auto& t = j.value("target", Json());
        g.target_region = t.is_null() ? -1 : t.get<int>();
        g.end_frame = j.value("end", 0L);
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("group: ") + e.what());
    }
    return g;
}

Json to_json(const HighLevelState& s) {
    Json groups = Json::array();
    for (const auto& g : s.groups) groups.push_back(to_json(g));
    return {{"format_version", kFormatVersion},
            {"frame", s.frame},
            {"abstraction", to_string(s.abstraction)},
            {"groups", groups}};
}

HighLevelState state_from_json(const Json& j, std::shared_ptr<const RegionGraph> graph) {
    check_format_version(j, "state");
    HighLevelState s;
    s.frame = j.value("frame", 0L);
    s.abstraction = abstraction_from_string(j.value("abstraction", std::string("RC-MB")));
    s.graph = std::move(graph);
    for (const auto& g : j.at("groups")) s.groups.push_back(group_from_json(g));
    return s;
}

HighLevelState abstract_from_units(const std::vector<PlacedUnit>& units, std::shared_ptr<const RegionGraph> graph,
                                   Abstraction abstraction, const Catalog& catalog,
                                   std::vector<std::string>* warnings) {
    std::map<std::tuple<int, int, TypeId>, std::pair<int, double>> buckets;
    for (const auto& pu : units) {
        const auto& t = catalog[pu.unit.type_id];
        if (t.is_worker) continue;
        if (t.is_building ? !(t.is_base || with_all_buildings(abstraction)) : !t.is_military()) continue;
        if (pu.unit.health() <= 0.0) continue;
        bool exact = true;
        const int region = graph->locate(pu.unit.pos.value_or(Position{}), &exact);
        if (!exact && warnings)
            warnings->push_back("unit " + std::to_string(pu.unit.uid) + " lies outside every region; assigned to " +
                                std::to_string(region));
        auto& [n, hp] = buckets[{pu.player, region, pu.unit.type_id}];
        ++n;
        hp += pu.unit.health();
    }
    HighLevelState s;
    s.graph = std::move(graph);
    s.abstraction = abstraction;
    for (const auto& [key, v] : buckets) {
        const auto& [player, region, type] = key;
        Group g;
        g.player = player;
        g.type_id = type;
        g.region = region;
        g.size = v.first;
        g.avg_hp = v.second / v.first;
        g.action = catalog[type].is_building ? GroupAction::NA : GroupAction::Idle;
        s.groups.push_back(g);
    }
    return s;
}

std::vector<PlacedUnit> expand_groups(const HighLevelState& state, const Catalog& catalog) {
    std::vector<PlacedUnit> out;
    Uid uid = 0;
    for (const auto& g : state.groups) {
        const auto& t = catalog[g.type_id];
        for (int k = 0; k < g.size; ++k) {
            Unit u{uid++, g.type_id, 0.0, 0.0, 0.0, state.graph->region(g.region).center};
            u.shield = std::min(t.max_shield, g.avg_hp);
            u.hp = g.avg_hp - u.shield;
            out.push_back({g.player, u});
        }
    }
    return out;
}

Scenario scenario_from_json(const Json& j, const Catalog& catalog) {
    check_format_version(j, "scenario");
    Scenario s;
    s.map = j.value("map", std::string());
    s.abstraction = abstraction_from_string(j.value("abstraction", std::string("RC-MB")));
    Uid uid = 0;
    try {
        for (const auto& u : j.at("units")) {
            TypeId type = -1;
            if (u.contains("type_id")) {
                type = u["type_id"].get<int>();
            } else {
                const auto name = u.at("type").get<std::string>();
                const auto found = catalog.find(name);
                if (!found) throw ValidationError("scenario: unknown unit type '" + name + "'");
                type = *found;
            }
            if (!catalog.contains(type)) throw ValidationError("scenario: unknown type id " + std::to_string(type));
            const auto& t = catalog[type];
            const int player = u.at("player").get<int>();
            if (player != 0 && player != 1) throw ValidationError("scenario: player must be 0 or 1");
            const int count = u.value("count", 1);
            const double health = u.value("hp", t.max_health());
            for (int k = 0; k < count; ++k) {
                Unit unit{uid++, type, 0.0, 0.0, 0.0, Position{u.at("x").get<double>(), u.at("y").get<double>()}};
                unit.shield = std::min(t.max_shield, health);
                unit.hp = health - unit.shield;
                s.units.push_back({player, unit});
            }
        }
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("scenario: ") + e.what());
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path, const Catalog& catalog) {
    Scenario s = scenario_from_json(read_json_file(path), catalog);
    if (!s.map.empty() && std::filesystem::path(s.map).is_relative()) s.map = (path.parent_path() / s.map).string();
    return s;
}

Json to_json(const PlayerActionSet& actions, const HighLevelState& state) {
    Json out = Json::array();
    for (const auto& c : actions) {
        const auto& g = state.groups.at(c.group);
        out.push_back({{"group", c.group},
                       {"type_id", g.type_id},
                       {"region", g.region},
                       {"action", to_string(c.action)},
                       {"target", c.target_region >= 0 ? Json(c.target_region) : Json()}});
    }
    return out;
}

std::vector<std::vector<GroupCommand>> legal_actions(const HighLevelState& state, int player, const Catalog& catalog) {
    const auto enemy = occupied_by(state, 1 - player);
    std::vector<std::vector<GroupCommand>> out;
    std::vector<GroupCommand> options;
    for (std::size_t i = 0; i < state.groups.size(); ++i) {
        if (state.groups[i].player != player) continue;
        group_options(state, i, enemy, catalog, options);
        out.push_back(options);
    }
    return out;
}

BigCount::BigCount(std::uint64_t v) {
    do {
        limbs_.push_back(static_cast<std::uint32_t>(v % 1'000'000'000));
        v /= 1'000'000'000;
    } while (v);
}

BigCount& BigCount::operator*=(std::uint32_t factor) {
    std::uint64_t carry = 0;
    for (auto& limb : limbs_) {
        const std::uint64_t x = static_cast<std::uint64_t>(limb) * factor + carry;
        limb = static_cast<std::uint32_t>(x % 1'000'000'000);
        carry = x / 1'000'000'000;
    }
    while (carry) {
        limbs_.push_back(static_cast<std::uint32_t>(carry % 1'000'000'000));
        carry /= 1'000'000'000;
    }
    while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
    return *this;
}

std::string BigCount::to_string() const {
    std::string s = std::to_string(limbs_.back());
    for (std::size_t i = limbs_.size() - 1; i-- > 0;) {
        const auto part = std::to_string(limbs_[i]);
        s += std::string(9 - part.size(), '0') + part;
    }
    return s;
}

bool BigCount::fits_u64() const { return limbs_.size() <= 2 || (limbs_.size() == 3 && limbs_[2] < 18); }

std::uint64_t BigCount::to_u64() const {
    std::uint64_t v = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) v = v * 1'000'000'000 + limbs_[i];
    return v;
}

BigCount branching_factor(const HighLevelState& state, int player, const Catalog& catalog) {
    BigCount n(1);
    for (const auto& options : legal_actions(state, player, catalog)) n *= static_cast<std::uint32_t>(options.size());
    return n;
}

void validate_actions(const HighLevelState& state, int player, const PlayerActionSet& actions, const Catalog& catalog) {
    if (actions.empty()) return;
    const auto legal = legal_actions(state, player, catalog);
    if (actions.size() != legal.size())
        throw ValidationError("player " + std::to_string(player) + ": expected " + std::to_string(legal.size()) +
                              " group commands, got " + std::to_string(actions.size()));
    for (std::size_t k = 0; k < actions.size(); ++k) {
        const auto& c = actions[k];
        if (c.group >= state.groups.size() || c.group != legal[k].front().group)
            throw ValidationError("player " + std::to_string(player) + ": command " + std::to_string(k) +
                                  " does not address the expected group");
        if (std::find(legal[k].begin(), legal[k].end(), c) == legal[k].end())
            throw ValidationError(describe(state, c.group, catalog) + ": illegal action " + to_string(c.action));
    }
}

RegionCombat resolve_region_combat(HighLevelState& state, int region, const CombatModel& model,
                                   const Catalog& catalog) {
    RegionCombat result;
    result.region = region;
    std::array<std::vector<TypeId>, 2> types;
    std::array<Army, 2> all;
    for (std::size_t i = 0; i < state.groups.size(); ++i) {
        const auto& g = state.groups[i];
        if (g.region != region) continue;
        auto& ts = types[g.player];
        if (std::find(ts.begin(), ts.end(), g.type_id) == ts.end()) ts.push_back(g.type_id);
        for (int k = 0; k < g.size; ++k)
            all[g.player].push_back({static_cast<Uid>(i) * kUidStride + k, g.type_id, g.avg_hp, 0.0, 0.0, std::nullopt});
    }
    if (all[0].empty() || all[1].empty()) return result;

    // harmless: cannot hurt any enemy present; invincible: nothing present can hurt it
    std::array<Army, 2> fighters, harmless, invincible;
    for (int p = 0; p < 2; ++p) {
        for (const auto& u : all[p]) {
            const bool hurts = std::any_of(types[1 - p].begin(), types[1 - p].end(),
                                           [&](TypeId t) { return catalog.can_target(u.type_id, t); });
            const bool hurt = std::any_of(types[1 - p].begin(), types[1 - p].end(),
                                          [&](TypeId t) { return catalog.can_target(t, u.type_id); });
            (!hurts ? harmless : !hurt ? invincible : fighters)[p].push_back(u);
        }
    }

    std::array<Army, 2> remaining = fighters;
    if (!fighters[0].empty() && !fighters[1].empty()) {
        const auto out = simulate(model, {fighters[0], fighters[1]}, catalog);
        if (out.winner == Winner::Stalemate) {
            result.duration = out.duration_frames;
            return result;
        }
        remaining = {out.survivors_a, out.survivors_b};
        result.duration = out.duration_frames;
    }

    // the side left standing clears whatever harmless units it can reach
    double cleanup = 0.0;
    for (int p = 0; p < 2; ++p) {
        const int q = 1 - p;
        if (!remaining[q].empty() || harmless[q].empty()) continue;
        Army attackers = remaining[p];
        attackers.insert(attackers.end(), invincible[p].begin(), invincible[p].end());
        if (attackers.empty()) continue;
        Army reachable, out_of_reach;
        for (const auto& u : harmless[q]) {
            const bool hit = std::any_of(attackers.begin(), attackers.end(),
                                         [&](const Unit& a) { return catalog.can_target(a.type_id, u.type_id); });
            (hit ? reachable : out_of_reach).push_back(u);
        }
        if (reachable.empty()) continue;
        const CombatState phase2 = p == 0 ? CombatState{attackers, reachable} : CombatState{reachable, attackers};
        const auto out = simulate(model, phase2, catalog);
        const Winner expected = p == 0 ? Winner::A : Winner::B;
        if (out.winner != expected) continue;
        harmless[q] = std::move(out_of_reach);
        cleanup = std::max(cleanup, out.duration_frames);
    }
    result.duration += cleanup;

    // write survivors back to their groups
    std::vector<std::pair<int, double>> tally(state.groups.size(), {0, 0.0});
    for (int p = 0; p < 2; ++p)
        for (const Army* army : {&remaining[p], &harmless[p], &invincible[p]})
            for (const auto& u : *army) {
                auto& [n, hp] = tally[static_cast<std::size_t>(u.uid / kUidStride)];
                ++n;
                hp += u.health();
            }
    std::array<int, 2> left{0, 0};
    for (std::size_t i = 0; i < state.groups.size(); ++i) {
        auto& g = state.groups[i];
        if (g.region != region) continue;
        const auto [n, hp] = tally[i];
        g.size = n;
        if (n > 0) g.avg_hp = std::min(hp / n, catalog[g.type_id].max_health());
        left[g.player] += n;
    }
    std::erase_if(state.groups, [](const Group& g) { return g.size <= 0; });
    result.winner = left[0] && left[1] ? Winner::Stalemate : left[0] ? Winner::A : left[1] ? Winner::B : Winner::Draw;
    return result;
}

namespace {

HighLevelState step_impl(const HighLevelState& state, const PlayerActionSet& actions_a,
                         const PlayerActionSet& actions_b, const CombatModel& model, const Catalog& catalog,
                         long horizon) {
    HighLevelState s = state;
    const long now = s.frame;
    std::vector<char> fight(s.graph->size(), 0);
    for (const auto* actions : {&actions_a, &actions_b}) {
        for (const auto& c : *actions) {
            auto& g = s.groups[c.group];
            if (g.busy(now) || g.action == GroupAction::NA) continue;
            g.action = c.action;
            g.target_region = c.target_region;
            switch (c.action) {
                case GroupAction::Move:
                    g.end_frame = now + travel_frames(*s.graph, g.region, c.target_region, catalog[g.type_id].top_speed);
                    break;
                case GroupAction::Idle: g.end_frame = now + kIdleFrames; break;
                case GroupAction::Attack:
                    g.end_frame = now;
                    fight[static_cast<std::size_t>(g.region)] = 1;
                    break;
                case GroupAction::NA: break;
            }
        }
    }
    for (const auto& g : s.groups)
        if (g.action == GroupAction::Attack && g.end_frame > now) fight[static_cast<std::size_t>(g.region)] = 1;

    for (int r = 0; r < static_cast<int>(fight.size()); ++r) {
        if (!fight[r]) continue;
        std::array<bool, 2> present{false, false};
        for (const auto& g : s.groups)
            if (g.region == r) present[g.player] = true;
        RegionCombat combat;
        if (present[0] && present[1]) combat = resolve_region_combat(s, r, model, catalog);
        const long busy_until = combat.winner == Winner::Stalemate && combat.duration <= 0.0
                                    ? now + kIdleFrames
                                    : now + std::max(1L, static_cast<long>(std::ceil(combat.duration - 1e-9)));
        for (auto& g : s.groups)
            if (g.region == r && g.action == GroupAction::Attack && g.end_frame >= now)
                g.end_frame = std::max(g.end_frame, busy_until);
    }

    long next = std::numeric_limits<long>::max();
    for (const auto& g : s.groups)
        if (g.action != GroupAction::NA && g.end_frame > now) next = std::min(next, g.end_frame);
    if (next == std::numeric_limits<long>::max()) next = now + kIdleFrames;
    if (horizon >= 0) next = std::max(now, std::min(next, horizon));
    s.frame = next;

    bool moved = false;
    for (auto& g : s.groups) {
        if (g.action == GroupAction::Move && g.end_frame <= next && g.region != g.target_region) {
            g.region = g.target_region;
            moved = true;
        }
    }
    if (moved) canonicalize(s);
    return s;
}

}  // namespace

HighLevelState step(const HighLevelState& state, const PlayerActionSet& actions_a, const PlayerActionSet& actions_b,
                    const CombatModel& model, const Catalog& catalog, long horizon) {
    validate_actions(state, 0, actions_a, catalog);
    validate_actions(state, 1, actions_b, catalog);
    return step_impl(state, actions_a, actions_b, model, catalog, horizon);
}

HighLevelState advance_segment(const HighLevelState& state, const PlayerActionSet& actions_a,
                               const PlayerActionSet& actions_b, const CombatModel& model, const Catalog& catalog,
                               long horizon) {
    HighLevelState s = step(state, actions_a, actions_b, model, catalog, horizon);
    while (!s.terminal() && s.frame < horizon) s = step_impl(s, {}, {}, model, catalog, horizon);
    return s;
}

HighLevelState advance_segment_trusted(const HighLevelState& state, const PlayerActionSet& actions_a,
                                       const PlayerActionSet& actions_b, const CombatModel& model,
                                       const Catalog& catalog, long horizon) {
    HighLevelState s = step_impl(state, actions_a, actions_b, model, catalog, horizon);
    while (!s.terminal() && s.frame < horizon) s = step_impl(s, {}, {}, model, catalog, horizon);
    return s;
}

PlayerActionSet random_policy(const HighLevelState& state, int player, const Catalog& catalog, Rng& rng) {
    const auto enemy = occupied_by(state, 1 - player);
    PlayerActionSet out;
    std::vector<GroupCommand> options;
    for (std::size_t i = 0; i < state.groups.size(); ++i) {
        if (state.groups[i].player != player) continue;
        group_options(state, i, enemy, catalog, options);
        out.push_back(options[uniform_index(rng, options.size())]);
    }
    return out;
}

PlayerActionSet random_policy(const HighLevelState& state, int player, const Catalog& catalog, std::uint64_t seed) {
    Rng rng(splitmix64(seed));
    return random_policy(state, player, catalog, rng);
}

PlayerActionSet scripted_policy(const HighLevelState& state, int player, const Catalog& catalog) {
    const auto enemy = occupied_by(state, 1 - player);
    const auto& graph = *state.graph;
    PlayerActionSet out;
    std::vector<GroupCommand> options;
    for (std::size_t i = 0; i < state.groups.size(); ++i) {
        const auto& g = state.groups[i];
        if (g.player != player) continue;
        group_options(state, i, enemy, catalog, options);
        if (options.size() == 1) {
            out.push_back(options.front());
            continue;
        }
        auto pick = [&](GroupAction a, int target) {
            for (const auto& o : options)
                if (o.action == a && (target < 0 || o.target_region == target)) return o;
            return options.back();
        };
        if (enemy[static_cast<std::size_t>(g.region)]) {
            out.push_back(pick(GroupAction::Attack, -1));
            continue;
        }
        int goal = -1;
        for (int r = 0; r < static_cast<int>(graph.size()); ++r) {
            if (!enemy[static_cast<std::size_t>(r)] || graph.hops(g.region, r) < 0) continue;
            if (goal < 0 || graph.hops(g.region, r) < graph.hops(g.region, goal)) goal = r;
        }
        int step_to = -1;
        if (goal >= 0)
            for (int nb : graph.neighbors(g.region))
                if (graph.hops(nb, goal) == graph.hops(g.region, goal) - 1) {
                    step_to = nb;
                    break;
                }
        out.push_back(step_to >= 0 ? pick(GroupAction::Move, step_to) : pick(GroupAction::Idle, -1));
    }
    return out;
}

double evaluate_state(const HighLevelState& state, const Catalog& catalog) {
    std::array<double, 2> score{0.0, 0.0};
    for (const auto& g : state.groups) score[g.player] += g.size * destroy_score(catalog[g.type_id]);
    const double total = score[0] + score[1];
    return total > 0.0 ? 2.0 * score[0] / total - 1.0 : 0.0;
}

}  // namespace attrition
