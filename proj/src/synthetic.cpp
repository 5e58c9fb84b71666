#include "attrition/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace attrition {

namespace {

UnitTypeStats make_type(TypeId id, std::string name, double hp, double shield, double minerals, double gas) {
    UnitTypeStats t;
    t.type_id = id;
    t.name = std::move(name);
    t.max_hp = hp;
    t.max_shield = shield;
    t.mineral_cost = minerals;
    t.gas_cost = gas;
    return t;
}

void ground_weapon(UnitTypeStats& t, double damage, double cooldown, double range) {
    t.weapon_damage_ground = damage;
    t.cooldown_ground = cooldown;
    t.range_ground = range;
    t.can_attack = true;
}

void air_weapon(UnitTypeStats& t, double damage, double cooldown, double range) {
    t.weapon_damage_air = damage;
    t.cooldown_air = cooldown;
    t.range_air = range;
    t.can_attack = true;
}

Unit full_unit(Uid uid, const UnitTypeStats& t) { return {uid, t.type_id, t.max_hp, t.max_shield, 0.0, std::nullopt}; }

std::optional<CombatRecord> to_record(const CombatState& s, const CombatOutcome& out, long t0) {
    if (out.winner == Winner::Stalemate) return std::nullopt;
    CombatRecord r;
    r.t0 = t0;
    r.tf = t0 + static_cast<long>(std::ceil(out.duration_frames));
    r.reason = EndReason::ArmyDestroyed;
    r.a0 = s.army_a;
    r.b0 = s.army_b;
    r.af = out.survivors_a;
    r.bf = out.survivors_b;
    for (const auto& k : out.kills) r.kills.push_back({static_cast<double>(t0) + k.frame, k.uid});
    return r;
}

}  // namespace

Catalog synthetic_catalog() {
    std::vector<UnitTypeStats> types;
    auto add = [&](UnitTypeStats t) { types.push_back(std::move(t)); return &types.back(); };

    auto* trooper = add(make_type(0, "trooper", 60, 0, 50, 0));
    ground_weapon(*trooper, 6, 15, 128);
    air_weapon(*trooper, 6, 15, 128);
    trooper->top_speed = 4.0;

    auto* bruiser = add(make_type(1, "bruiser", 100, 60, 100, 0));
    ground_weapon(*bruiser, 16, 22, 20);
    bruiser->top_speed = 4.0;

    auto* lancer = add(make_type(2, "lancer", 125, 0, 100, 50));
    ground_weapon(*lancer, 12, 22, 160);
    air_weapon(*lancer, 20, 22, 160);
    lancer->top_speed = 4.6;

    auto* crawler = add(make_type(3, "crawler", 80, 0, 75, 0));
    ground_weapon(*crawler, 20, 30, 150);
    crawler->top_speed = 6.4;

    auto* bulwark = add(make_type(4, "bulwark", 150, 0, 150, 100));
    ground_weapon(*bulwark, 30, 37, 224);
    bulwark->top_speed = 4.0;

    auto* hornet = add(make_type(5, "hornet", 120, 0, 150, 100));
    ground_weapon(*hornet, 8, 30, 160);
    air_weapon(*hornet, 20, 22, 160);
    hornet->is_flyer = true;
    hornet->top_speed = 6.7;

    auto* skimmer = add(make_type(6, "skimmer", 140, 0, 100, 100));
    ground_weapon(*skimmer, 14, 30, 96);
    skimmer->is_flyer = true;
    skimmer->top_speed = 5.0;

    auto* mine = add(make_type(7, "spider_mine", 20, 0, 0, 0));
    ground_weapon(*mine, 125, 100, 10);
    mine->top_speed = 16.0;

    auto* worker = add(make_type(8, "worker", 40, 0, 50, 0));
    ground_weapon(*worker, 5, 15, 10);
    worker->is_worker = true;
    worker->top_speed = 4.9;

    auto* depot = add(make_type(9, "depot", 1500, 0, 400, 0));
    depot->is_building = true;
    depot->is_base = true;

    return Catalog(std::move(types), "synthetic-v1");
}

std::vector<TypeId> combat_type_pool(const Catalog& catalog) {
    const auto excluded = default_excluded_types(catalog);
    std::vector<TypeId> pool;
    for (const auto& t : catalog.types())
        if (t.can_attack && !t.is_worker && !t.is_building &&
            std::find(excluded.begin(), excluded.end(), t.type_id) == excluded.end())
            pool.push_back(t.type_id);
    return pool;
}

Eigen::MatrixXd perturbed_dpf(const Catalog& catalog, Rng& rng, double spread) {
    Eigen::MatrixXd m = static_dpf(catalog).per_pair;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (m(i, j) > 0.0) m(i, j) *= uniform_real(rng, 1.0 - spread, 1.0 + spread);
    return m;
}

CombatState random_combat(const Catalog& catalog, Rng& rng, const CombatGenOptions& options, Uid& next_uid) {
    const auto pool = options.pool.empty() ? combat_type_pool(catalog) : options.pool;
    if (pool.empty()) throw ValidationError("no unit types to draw fights from");
    if (options.min_units < 1 || options.max_units < options.min_units || options.max_types_per_side < 1)
        throw ValidationError("bad fight size bounds");

    auto draw_types = [&](int n) {
        std::vector<TypeId> ts = pool;
        shuffle(ts, rng);
        ts.resize(std::min<std::size_t>(ts.size(), static_cast<std::size_t>(n)));
        return ts;
    };
    auto hits_any = [&](const std::vector<TypeId>& from, const std::vector<TypeId>& to) {
        for (TypeId f : from)
            for (TypeId t : to)
                if (catalog.can_target(f, t)) return true;
        return false;
    };

    std::vector<TypeId> ta, tb;
    for (int attempt = 0;; ++attempt) {
        ta = draw_types(1 + static_cast<int>(uniform_index(rng, options.max_types_per_side)));
        tb = draw_types(1 + static_cast<int>(uniform_index(rng, options.max_types_per_side)));
        const bool ok = options.mutual ? hits_any(ta, tb) && hits_any(tb, ta) : hits_any(ta, tb) || hits_any(tb, ta);
        if (ok) break;
        if (attempt > 1000) throw ValidationError("cannot draw a fight where the armies can hurt each other");
    }

    auto build = [&](const std::vector<TypeId>& types) {
        const int span = options.max_units - options.min_units + 1;
        const int n = std::max(options.min_units + static_cast<int>(uniform_index(rng, span)),
                               static_cast<int>(types.size()));
        Army army;
        for (int u = 0; u < n; ++u) {
            const auto& t = catalog[types[static_cast<std::size_t>(u) % types.size()]];
            Unit unit = full_unit(next_uid++, t);
            if (!options.full_health) scale_health(unit, uniform_real(rng, 0.25, 1.0));
            army.push_back(unit);
        }
        return army;
    };
    CombatState s;
    s.army_a = build(ta);
    s.army_b = build(tb);
    return s;
}

CombatDataset oracle_dataset(const Catalog& catalog, const Eigen::MatrixXd& truth, const TargetSelectionPolicy& policy,
                             const OracleDatasetOptions& options) {
    Rng rng(splitmix64(options.seed));
    CombatDataset ds;
    ds.catalog_ref = catalog.id();
    ds.source = "oracle:" + std::to_string(options.seed);
    Uid next_uid = 0;
    long clock = 0;
    std::size_t attempts = 0;
    while (ds.records.size() < options.n_records) {
        if (++attempts > options.n_records * 20 + 100) throw std::runtime_error("oracle keeps stalling; check the DPF matrix");
        const CombatState s = random_combat(catalog, rng, options.combat, next_uid);
        const auto out = tick_oracle_simulate(s, truth, policy, catalog, options.oracle);
        auto record = to_record(s, out, clock);
        if (!record) continue;
        clock = record->tf + options.gap_frames;
        ds.records.push_back(std::move(*record));
    }
    return ds;
}

CombatDataset planted_borda_dataset(const Catalog& catalog, const Eigen::MatrixXd& truth,
                                    const std::vector<TypeId>& planted, std::size_t n_records, std::uint64_t seed) {
    for (TypeId t : planted)
        if (!catalog.contains(t) || catalog[t].is_flyer) throw ValidationError("planted types must be ground types");
    std::vector<TypeId> attackers;
    for (TypeId t : combat_type_pool(catalog)) {
        if (std::find(planted.begin(), planted.end(), t) != planted.end()) continue;
        if (catalog[t].attacks_ground()) attackers.push_back(t);
    }
    if (attackers.empty()) throw ValidationError("no attacker type outside the planted set hits ground");

    const auto policy = policy_from_order(planted, catalog.size());
    Rng rng(splitmix64(seed));
    CombatDataset ds;
    ds.catalog_ref = catalog.id();
    ds.source = "planted-borda:" + std::to_string(seed);
    Uid next_uid = 0;
    long clock = 0;
    std::size_t attempts = 0;
    while (ds.records.size() < n_records) {
        if (++attempts > n_records * 20 + 100) throw std::runtime_error("planted-order fights keep stalling");
        CombatState s;
        for (TypeId t : planted) {
            const int n = 1 + static_cast<int>(uniform_index(rng, 3));
            for (int u = 0; u < n; ++u) s.army_a.push_back(full_unit(next_uid++, catalog[t]));
        }
        const int n_att = 12 + static_cast<int>(uniform_index(rng, 9));
        for (int u = 0; u < n_att; ++u)
            s.army_b.push_back(full_unit(next_uid++, catalog[attackers[uniform_index(rng, attackers.size())]]));
        if (bernoulli(rng, 0.5)) s = swapped(s);
        const auto out = tick_oracle_simulate(s, truth, policy, catalog);
        auto record = to_record(s, out, clock);
        if (!record) continue;
        clock = record->tf + 1000;
        ds.records.push_back(std::move(*record));
    }
    return ds;
}

TargetSelectionPolicy policy_from_order(const std::vector<TypeId>& order, std::size_t k) {
    Eigen::VectorXd scores = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < order.size(); ++i) scores(order[i]) = static_cast<double>(order.size() - i);
    return TargetSelectionPolicy::borda({scores, scores, scores});
}

Trace trace_from_records(const std::vector<CombatRecord>& records, const Catalog& catalog, std::string catalog_ref,
                         long order_interval) {
    if (order_interval <= 0) throw ValidationError("order interval must be positive");
    Trace trace;
    trace.catalog_ref = std::move(catalog_ref);
    std::vector<TraceEvent> events;
    long last = 0;
    for (std::size_t ri = 0; ri < records.size(); ++ri) {
        const auto& r = records[ri];
        const double cx = 4000.0 * static_cast<double>(ri % 50);
        const double cy = 4000.0 * static_cast<double>(ri / 50);
        std::map<Uid, int> player_of;
        std::map<Uid, Unit> initial;
        auto spawn = [&](const Army& army, int player) {
            for (std::size_t i = 0; i < army.size(); ++i) {
                const auto& u = army[i];
                TraceEvent e;
                e.frame = std::max(0L, r.t0 - 1);
                e.kind = EventKind::Spawn;
                e.uid = u.uid;
                e.player = player;
                e.type_id = u.type_id;
                e.pos = Position{cx + (player ? 6.0 : 0.0), cy + 0.5 * static_cast<double>(i % 8)};
                e.hp = u.hp;
                e.shield = u.shield;
                events.push_back(e);
                player_of[u.uid] = player;
                initial[u.uid] = u;
            }
        };
        spawn(r.a0, 0);
        spawn(r.b0, 1);

        std::map<Uid, long> death_frame;
        for (const auto& k : r.kills) death_frame[k.uid] = static_cast<long>(std::ceil(k.frame - 1e-9));
        auto alive_at = [&](Uid uid, long f) {
            auto it = death_frame.find(uid);
            return it == death_frame.end() || it->second > f;
        };
        auto attacker_for = [&](Uid victim, long f) -> std::optional<Uid> {
            for (const auto& [uid, p] : player_of)
                if (p != player_of[victim] && alive_at(uid, f) && catalog.can_target(initial[uid].type_id, initial[victim].type_id))
                    return uid;
            return std::nullopt;
        };
        auto order = [&](Uid uid, long f) {
            for (const auto& [v, p] : player_of)
                if (p != player_of[uid] && alive_at(v, f) && catalog.can_target(initial[uid].type_id, initial[v].type_id)) {
                    TraceEvent e;
                    e.frame = f;
                    e.kind = EventKind::OrderAttack;
                    e.uid = uid;
                    e.target_uid = v;
                    events.push_back(e);
                    return;
                }
        };

        // everyone opens fire, then each side keeps issuing orders
        for (const auto* army : {&r.a0, &r.b0})
            for (const auto& u : *army) order(u.uid, r.t0);
        long end = r.t0;
        for (const auto& [uid, f] : death_frame) end = std::max(end, f);
        for (long f = r.t0 + order_interval; f < end; f += order_interval)
            for (int p = 0; p < 2; ++p)
                for (const auto& [uid, q] : player_of)
                    if (q == p && alive_at(uid, f)) {
                        order(uid, f);
                        break;
                    }

        // survivors' wounds land just before the last kill
        for (const auto* army : {&r.af, &r.bf})
            for (const auto& u : *army) {
                const double lost = initial[u.uid].health() - u.health();
                if (lost <= 0.0) continue;
                const auto by = attacker_for(u.uid, end - 1);
                if (!by) continue;
                TraceEvent e;
                e.frame = end;
                e.kind = EventKind::Damage;
                e.uid = *by;
                e.target_uid = u.uid;
                e.amount = lost;
                events.push_back(e);
            }
        std::vector<Kill> kills = r.kills;
        std::stable_sort(kills.begin(), kills.end(), [](const Kill& a, const Kill& b) { return a.frame < b.frame; });
        for (const auto& k : kills) {
            const long f = death_frame[k.uid];
            if (const auto by = attacker_for(k.uid, f - 1)) {
                TraceEvent d;
                d.frame = f;
                d.kind = EventKind::Damage;
                d.uid = *by;
                d.target_uid = k.uid;
                d.amount = initial[k.uid].health();
                events.push_back(d);
            }
            TraceEvent e;
            e.frame = f;
            e.kind = EventKind::Death;
            e.uid = k.uid;
            events.push_back(e);
        }
        last = std::max(last, end);
    }
    std::stable_sort(events.begin(), events.end(), [](const TraceEvent& a, const TraceEvent& b) { return a.frame < b.frame; });
    TraceEvent end_event;
    end_event.frame = last + 1;
    end_event.kind = EventKind::GameEnd;
    events.push_back(end_event);
    trace.events = std::move(events);
    return trace;
}

}  // namespace attrition
