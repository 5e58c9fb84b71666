#include <cmath>

#include "attrition/models.hpp"

namespace attrition {

double sustained_time_to_destroy(const ArmyAggregates& victim, const ArmyAggregates& attacker) {
    auto time_for = [](double hp, double dpf) { return hp > 0.0 ? (dpf > 0.0 ? hp / dpf : kInfinity) : 0.0; };
    double t_air = time_for(victim.hp_air, attacker.dpf_air);
    double t_ground = time_for(victim.hp_ground, attacker.dpf_ground);

    if (attacker.dpf_both > 0.0) {
        if (std::isinf(t_air) && std::isinf(t_ground)) {
            // only the both-weapon units can hurt anything: they work through both domains
            return (victim.hp_air + victim.hp_ground) / attacker.dpf_both;
        }
        if (t_air > t_ground)
            t_air = time_for(victim.hp_air, attacker.dpf_air + attacker.dpf_both);
        else
            t_ground = time_for(victim.hp_ground, attacker.dpf_ground + attacker.dpf_both);
    }
    return std::max(t_air, t_ground);
}

namespace {

// Spends the attacker's per-domain damage budget on `targets` in policy order.
// Units whose health fits the available budget die; the first one that does not
// absorbs the remainder of the budgets that can reach it.
Army apply_budget(const Army& targets, const Army& attackers, const ArmyAggregates& attacker, double t,
                  const TargetSelectionPolicy& policy, const Catalog& catalog) {
    double air_only = attacker.dpf_air * t;
    double ground_only = attacker.dpf_ground * t;
    double both = attacker.dpf_both * t;

    Army out;
    for (Unit u : sorted_targets(policy, targets, attackers, catalog)) {
        double& own = catalog[u.type_id].is_flyer ? air_only : ground_only;
        const double available = own + both;
        if (available <= 0.0) {
            out.push_back(u);
            continue;
        }
        const double health = u.health();
        if (health <= available * (1.0 + kTieTolerance)) {
            const double from_own = std::min(own, health);
            own -= from_own;
            both = std::max(0.0, both - (health - from_own));
            continue;
        }
        apply_damage(u, available);
        own = 0.0;
        both = 0.0;
        out.push_back(u);
    }
    return out;
}

}  // namespace

CombatOutcome sustained_simulate(const CombatState& state, const DpfVector& dpf, const TargetSelectionPolicy& policy,
                                 const Catalog& catalog) {
    CombatOutcome out;
    out.model = ModelKind::Sustained;
    const auto agg_a = aggregate_army(state.army_a, dpf, catalog);
    const auto agg_b = aggregate_army(state.army_b, dpf, catalog);
    const double kill_a = sustained_time_to_destroy(agg_a, agg_b);  // B destroys A
    const double kill_b = sustained_time_to_destroy(agg_b, agg_a);  // A destroys B

    if (std::isinf(kill_a) && std::isinf(kill_b)) {
        out.winner = Winner::Stalemate;
        out.survivors_a = state.army_a;
        out.survivors_b = state.army_b;
        return out;
    }
    if (nearly_equal(kill_a, kill_b)) {
        out.winner = Winner::Draw;
        out.duration_frames = std::min(kill_a, kill_b);
        return out;
    }
    if (kill_b < kill_a) {
        out.winner = Winner::A;
        out.duration_frames = kill_b;
        out.survivors_a = apply_budget(state.army_a, state.army_b, agg_b, kill_b, policy, catalog);
    } else {
        out.winner = Winner::B;
        out.duration_frames = kill_a;
        out.survivors_b = apply_budget(state.army_b, state.army_a, agg_a, kill_a, policy, catalog);
    }
    return out;
}

}  // namespace attrition
