#include <cmath>

#include "attrition/models.hpp"

namespace attrition {

namespace {

constexpr double kDeadHealth = 1e-9;

struct Side {
    Army units;
    std::vector<char> alive;
    std::vector<std::size_t> order;  // policy order of this side as targets
    std::vector<double> incoming;
    std::size_t n_alive = 0;
};

// Accumulates one frame of fire from `from` onto `to`. Returns whether any
// damage was dealt.
bool fire(const Side& from, Side& to, const Eigen::MatrixXd& per_pair, OracleTargeting targeting,
          std::vector<long>& first_target_by_type) {
    bool any = false;
    std::fill(first_target_by_type.begin(), first_target_by_type.end(), -2);
    for (std::size_t s = 0; s < from.units.size(); ++s) {
        if (!from.alive[s]) continue;
        const TypeId t = from.units[s].type_id;
        if (targeting == OracleTargeting::Focused) {
            long& target = first_target_by_type[static_cast<std::size_t>(t)];
            if (target == -2) {
                target = -1;
                for (std::size_t idx : to.order)
                    if (to.alive[idx] && per_pair(t, to.units[idx].type_id) > 0.0) {
                        target = static_cast<long>(idx);
                        break;
                    }
            }
            if (target < 0) continue;
            to.incoming[static_cast<std::size_t>(target)] += per_pair(t, to.units[static_cast<std::size_t>(target)].type_id);
            any = true;
        } else {
            std::size_t reachable = 0;
            for (std::size_t v = 0; v < to.units.size(); ++v)
                if (to.alive[v] && per_pair(t, to.units[v].type_id) > 0.0) ++reachable;
            if (reachable == 0) continue;
            for (std::size_t v = 0; v < to.units.size(); ++v)
                if (to.alive[v] && per_pair(t, to.units[v].type_id) > 0.0)
                    to.incoming[v] += per_pair(t, to.units[v].type_id) / static_cast<double>(reachable);
            any = true;
        }
    }
    return any;
}

void resolve(Side& side, double frame, std::vector<Kill>& kills) {
    for (std::size_t v = 0; v < side.units.size(); ++v) {
        if (!side.alive[v] || side.incoming[v] <= 0.0) continue;
        apply_damage(side.units[v], side.incoming[v]);
        side.incoming[v] = 0.0;
        if (side.units[v].health() <= kDeadHealth) {
            side.alive[v] = 0;
            --side.n_alive;
            kills.push_back({frame, side.units[v].uid});
        }
    }
}

Side make_side(const Army& units, const Army& enemies, const TargetSelectionPolicy& policy, const Catalog& catalog) {
    Side s;
    s.units = units;
    s.alive.assign(units.size(), 1);
    s.order = target_order(policy, units, enemies, catalog);
    s.incoming.assign(units.size(), 0.0);
    s.n_alive = units.size();
    return s;
}

Army living(const Side& s) {
    Army out;
    for (std::size_t v = 0; v < s.units.size(); ++v)
        if (s.alive[v]) out.push_back(s.units[v]);
    return out;
}

}  // namespace

CombatOutcome tick_oracle_simulate(const CombatState& state, const Eigen::MatrixXd& per_pair,
                                   const TargetSelectionPolicy& policy, const Catalog& catalog,
                                   const TickOracleOptions& options) {
    const auto k = static_cast<Eigen::Index>(catalog.size());
    if (per_pair.rows() != k || per_pair.cols() != k) throw ValidationError("dpf matrix does not match catalog size");
    if (options.max_frames <= 0) throw ValidationError("max_frames must be positive");

    CombatOutcome out;
    out.model = ModelKind::TickOracle;
    Side a = make_side(state.army_a, state.army_b, policy, catalog);
    Side b = make_side(state.army_b, state.army_a, policy, catalog);
    std::vector<long> scratch(catalog.size());

    long frame = 0;
    bool stalled = false;
    while (a.n_alive > 0 && b.n_alive > 0) {
        if (frame >= options.max_frames) {
            stalled = true;
            break;
        }
        const bool a_fired = fire(a, b, per_pair, options.targeting, scratch);
        const bool b_fired = fire(b, a, per_pair, options.targeting, scratch);
        if (!a_fired && !b_fired) {
            stalled = true;
            break;
        }
        ++frame;
        // damage lands simultaneously at the end of the frame
        resolve(a, static_cast<double>(frame), out.kills);
        resolve(b, static_cast<double>(frame), out.kills);
    }

    out.duration_frames = static_cast<double>(frame);
    if (stalled)
        out.winner = Winner::Stalemate;
    else if (a.n_alive == 0 && b.n_alive == 0)
        out.winner = Winner::Draw;
    else
        out.winner = a.n_alive > 0 ? Winner::A : Winner::B;
    out.survivors_a = living(a);
    out.survivors_b = living(b);
    return out;
}

}  // namespace attrition
