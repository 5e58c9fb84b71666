#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <limits>
#include <unordered_map>

#include "attrition/dataset.hpp"

namespace attrition {

namespace {

struct Tracked {
    Uid uid = 0;
    int player = 0;
    TypeId type_id = 0;
    Position pos;
    double hp = 0.0;
    double shield = 0.0;
    bool alive = true;
    int combat = -1;

    Unit snapshot() const { return {uid, type_id, hp, shield, 0.0, pos}; }
};

struct OpenCombat {
    long t0 = 0;
    long last_attack = 0;
    std::vector<Uid> members;
    std::set<Uid> active;
    Army a0, b0;
    std::vector<Kill> kills;
};

class Detector {
public:
    Detector(const Catalog& catalog, const DetectOptions& options) : catalog_(catalog), options_(options) {}

    void feed(const TraceEvent& e, std::size_t index) {
        if (e.frame < last_frame_)
            throw ValidationError("event " + std::to_string(index) + ": frame goes backwards");
        last_frame_ = e.frame;
        if (finished_) return;
        close_destroyed(e.frame);
        close_peaceful(e.frame);
        switch (e.kind) {
            case EventKind::Spawn: spawn(e, index); break;
            case EventKind::Move: move(e, index); break;
            case EventKind::OrderAttack: order_attack(e, index); break;
            case EventKind::Damage: damage(e, index); break;
            case EventKind::Death: death(e, index); break;
            case EventKind::GameEnd:
                close_all(EndReason::GameEnd, e.frame);
                finished_ = true;
                break;
        }
    }

    std::vector<CombatRecord> finish() {
        close_all(EndReason::GameEnd, last_frame_);
        std::stable_sort(records_.begin(), records_.end(), [](const CombatRecord& a, const CombatRecord& b) {
            return std::tie(a.t0, a.tf) < std::tie(b.t0, b.tf);
        });
        return std::move(records_);
    }

private:
    Tracked& at(Uid uid, std::size_t index) {
        auto it = units_.find(uid);
        if (it == units_.end())
            throw ValidationError("event " + std::to_string(index) + ": unknown uid " + std::to_string(uid));
        return it->second;
    }

    Tracked* find_alive(std::optional<Uid> uid) {
        if (!uid) return nullptr;
        auto it = units_.find(*uid);
        return it != units_.end() && it->second.alive ? &it->second : nullptr;
    }

    void spawn(const TraceEvent& e, std::size_t index) {
        if (e.player != 0 && e.player != 1)
            throw ValidationError("event " + std::to_string(index) + ": player must be 0 or 1");
        if (!e.pos) throw ValidationError("event " + std::to_string(index) + ": spawn without position");
        if (units_.count(e.uid)) throw ValidationError("event " + std::to_string(index) + ": duplicate spawn");
        const auto& type = catalog_[e.type_id];
        Tracked t;
        t.uid = e.uid;
        t.player = e.player;
        t.type_id = e.type_id;
        t.pos = *e.pos;
        t.hp = e.hp.value_or(type.max_hp);
        t.shield = e.shield.value_or(type.max_shield);
        units_.emplace(e.uid, t);
        grid_insert(t);
    }

    void move(const TraceEvent& e, std::size_t index) {
        Tracked& u = at(e.uid, index);
        if (!e.pos) return;
        if (u.alive) grid_erase(u);
        u.pos = *e.pos;
        if (u.alive) grid_insert(u);
    }

    void order_attack(const TraceEvent& e, std::size_t index) {
        Tracked& u = at(e.uid, index);
        if (!u.alive) throw ValidationError("event " + std::to_string(index) + ": order from dead unit");
        Tracked* target = find_alive(e.target_uid);
        if (u.combat >= 0) {
            attack_within(u.combat, u, e.frame);
            return;
        }
        if (target && target->combat >= 0) {
            // an outsider turns on a participant
            const int c = target->combat;
            close(c, EndReason::Reinforcement, e.frame);
        }
        open(u, target, e.frame);
    }

    void damage(const TraceEvent& e, std::size_t index) {
        Tracked& attacker = at(e.uid, index);
        Tracked* target = find_alive(e.target_uid);
        if (!target) throw ValidationError("event " + std::to_string(index) + ": damage to unknown or dead unit");
        apply(*target, e.amount);
        if (attacker.combat >= 0 && attacker.combat == target->combat) {
            attack_within(attacker.combat, attacker, e.frame);
            return;
        }
        const int ca = attacker.combat, ct = target->combat;
        if (ca >= 0) close(ca, EndReason::Reinforcement, e.frame);
        if (ct >= 0 && ct != ca) close(ct, EndReason::Reinforcement, e.frame);
        open(attacker, target, e.frame);
    }

    void death(const TraceEvent& e, std::size_t index) {
        Tracked& u = at(e.uid, index);
        if (!u.alive) throw ValidationError("event " + std::to_string(index) + ": duplicate death of uid " + std::to_string(e.uid));
        u.alive = false;
        grid_erase(u);
        if (u.combat < 0) return;
        const int c = u.combat;
        auto& combat = open_.at(c);
        combat.kills.push_back({static_cast<double>(e.frame), u.uid});
        const bool side_gone = std::none_of(combat.members.begin(), combat.members.end(), [&](Uid m) {
            const auto& t = units_.at(m);
            return t.alive && t.player == u.player;
        });
        // deaths later in the same frame still belong to this fight
        if (side_gone) destroyed_at_.emplace(c, e.frame);
    }

    void close_destroyed(long frame) {
        std::vector<std::pair<int, long>> due;
        for (const auto& [id, at] : destroyed_at_)
            if (at < frame || frame == kEndOfTrace) due.emplace_back(id, at);
        for (const auto& [id, at] : due) {
            if (open_.count(id)) close(id, EndReason::ArmyDestroyed, at);
            destroyed_at_.erase(id);
        }
    }

    static void apply(Tracked& t, double amount) {
        const double s = std::min(t.shield, std::max(0.0, amount));
        t.shield -= s;
        t.hp = std::max(0.0, t.hp - (amount - s));
    }

    void attack_within(int c, const Tracked& u, long frame) {
        auto& combat = open_.at(c);
        combat.last_attack = frame;
        combat.active.insert(u.uid);
    }

    double range_against(const Tracked& from, const Tracked& to) const {
        const auto& a = catalog_[from.type_id];
        const auto& v = catalog_[to.type_id];
        if (!a.attacks(v.domain())) return -1.0;
        return v.is_flyer ? a.range_air : a.range_ground;
    }

    static std::int64_t cell_key(long cx, long cy) { return (static_cast<std::int64_t>(cx) << 32) ^ (cy & 0xffffffffL); }
    static long cell_of(double v) { return static_cast<long>(std::floor(v / kCell)); }

    void grid_insert(const Tracked& t) { grid_[cell_key(cell_of(t.pos.x), cell_of(t.pos.y))].push_back(t.uid); }
    void grid_erase(const Tracked& t) {
        auto it = grid_.find(cell_key(cell_of(t.pos.x), cell_of(t.pos.y)));
        if (it == grid_.end()) return;
        std::erase(it->second, t.uid);
    }

    // inRange(u): free living units inside u's attack range.
    std::vector<Uid> in_range(const Tracked& u) const {
        const auto& type = catalog_[u.type_id];
        const double reach = std::max(type.range_ground, type.range_air);
        std::vector<Uid> out;
        for (long cx = cell_of(u.pos.x - reach); cx <= cell_of(u.pos.x + reach); ++cx)
            for (long cy = cell_of(u.pos.y - reach); cy <= cell_of(u.pos.y + reach); ++cy) {
                auto it = grid_.find(cell_key(cx, cy));
                if (it == grid_.end()) continue;
                for (Uid uid : it->second) {
                    const auto& v = units_.at(uid);
                    if (uid == u.uid || !v.alive || v.combat >= 0) continue;
                    const double r = range_against(u, v);
                    if (r < 0.0) continue;
                    if (std::hypot(u.pos.x - v.pos.x, u.pos.y - v.pos.y) <= r + 1e-9) out.push_back(uid);
                }
            }
        std::sort(out.begin(), out.end());
        return out;
    }

    void open(const Tracked& trigger, const Tracked* target, long frame) {
        if (!catalog_[trigger.type_id].is_military()) return;
        std::set<Uid> members{trigger.uid};
        if (target && target->combat < 0) members.insert(target->uid);
        for (Uid near : in_range(trigger)) {
            members.insert(near);
            for (Uid two_hop : in_range(units_.at(near))) members.insert(two_hop);
        }
        OpenCombat c;
        c.t0 = frame;
        c.last_attack = frame;
        c.active.insert(trigger.uid);
        for (Uid m : members) {
            const auto& t = units_.at(m);
            (t.player == 0 ? c.a0 : c.b0).push_back(t.snapshot());
            c.members.push_back(m);
        }
        if (c.a0.empty() || c.b0.empty()) return;  // nobody to fight yet
        const int id = next_id_++;
        for (Uid m : members) units_.at(m).combat = id;
        open_.emplace(id, std::move(c));
    }

    void close(int id, EndReason reason, long tf) {
        if (auto pending = destroyed_at_.find(id); pending != destroyed_at_.end() && reason != EndReason::ArmyDestroyed) {
            reason = EndReason::ArmyDestroyed;
            tf = pending->second;
        }
        destroyed_at_.erase(id);
        auto node = open_.extract(id);
        OpenCombat& c = node.mapped();
        CombatRecord r;
        r.t0 = c.t0;
        r.tf = tf;
        r.reason = reason;
        r.a0 = std::move(c.a0);
        r.b0 = std::move(c.b0);
        r.kills = std::move(c.kills);
        for (Uid m : c.members) {
            auto& t = units_.at(m);
            t.combat = -1;
            if (t.alive) (t.player == 0 ? r.af : r.bf).push_back(t.snapshot());
            if (!c.active.count(m)) r.passive.push_back(m);
        }
        records_.push_back(std::move(r));
    }

    void close_peaceful(long frame) {
        std::vector<int> due;
        for (const auto& [id, c] : open_)
            if (frame - c.last_attack >= options_.peace_window) due.push_back(id);
        for (int id : due) close(id, EndReason::Peace, open_.at(id).last_attack + options_.peace_window);
    }

    void close_all(EndReason reason, long frame) {
        close_destroyed(kEndOfTrace);
        close_peaceful(frame);
        std::vector<int> ids;
        for (const auto& [id, c] : open_) ids.push_back(id);
        for (int id : ids) close(id, reason, frame);
    }

    const Catalog& catalog_;
    DetectOptions options_;
    std::map<Uid, Tracked> units_;
    static constexpr long kEndOfTrace = std::numeric_limits<long>::max();

    static constexpr double kCell = 256.0;

    std::map<int, OpenCombat> open_;
    std::unordered_map<std::int64_t, std::vector<Uid>> grid_;
    std::map<int, long> destroyed_at_;
    std::vector<CombatRecord> records_;
    int next_id_ = 0;
    long last_frame_ = std::numeric_limits<long>::min();
    bool finished_ = false;
};

}  // namespace

std::vector<CombatRecord> detect_combats(const Trace& trace, const Catalog& catalog, const DetectOptions& options) {
    if (options.peace_window <= 0) throw ValidationError("peace window must be positive");
    Detector detector(catalog, options);
    for (std::size_t i = 0; i < trace.events.size(); ++i) detector.feed(trace.events[i], i);
    return detector.finish();
}

}  // namespace attrition
