#include "attrition/models.hpp"

namespace attrition {

const char* to_string(Winner w) {
    switch (w) {
        case Winner::A: return "A";
        case Winner::B: return "B";
        case Winner::Draw: return "draw";
        case Winner::Stalemate: return "stalemate";
    }
    return "?";
}

const char* to_string(ModelKind k) {
    switch (k) {
        case ModelKind::Lanchester: return "lanchester";
        case ModelKind::Sustained: return "sustained";
        case ModelKind::Decreasing: return "decreasing";
        case ModelKind::TickOracle: return "oracle";
        case ModelKind::Ltd: return "ltd";
        case ModelKind::Ltd2: return "ltd2";
    }
    return "?";
}

ModelKind model_kind_from_string(std::string_view s) {
    if (s == "lanchester" || s == "ts-lanchester2") return ModelKind::Lanchester;
    if (s == "sustained") return ModelKind::Sustained;
    if (s == "decreasing") return ModelKind::Decreasing;
    if (s == "oracle" || s == "tick-oracle") return ModelKind::TickOracle;
    if (s == "ltd") return ModelKind::Ltd;
    if (s == "ltd2") return ModelKind::Ltd2;
    throw ValidationError("unknown combat model '" + std::string(s) + "'");
}

CombatOutcome swapped(const CombatOutcome& o) {
    CombatOutcome s = o;
    std::swap(s.survivors_a, s.survivors_b);
    if (o.winner == Winner::A) s.winner = Winner::B;
    if (o.winner == Winner::B) s.winner = Winner::A;
    return s;
}

ArmyAggregates aggregate_army(std::span<const Unit> army, const DpfVector& dpf, const Catalog& catalog) {
    ArmyAggregates g;
    std::size_t n_air = 0, n_ground = 0;
    for (const Unit& u : army) {
        const auto& t = catalog[u.type_id];
        if (u.type_id >= dpf.size()) throw ValidationError("dpf vector has no entry for type " + std::to_string(u.type_id));
        const double d = dpf(u.type_id);
        const double h = u.health();
        if (t.is_flyer) {
            g.hp_air += h;
            ++n_air;
        } else {
            g.hp_ground += h;
            ++n_ground;
        }
        if (t.attacks_air() && t.attacks_ground())
            g.dpf_both += d;
        else if (t.attacks_air())
            g.dpf_air += d;
        else if (t.attacks_ground())
            g.dpf_ground += d;
        if (t.attacks_air()) g.mean_dpf_air += d;
        if (t.attacks_ground()) g.mean_dpf_ground += d;
    }
    g.n_units = army.size();
    if (g.n_units > 0) {
        const double n = static_cast<double>(g.n_units);
        g.avg_hp = (g.hp_air + g.hp_ground) / n;
        g.mean_dpf_air /= n;
        g.mean_dpf_ground /= n;
    }
    if (n_air > 0) g.avg_hp_air = g.hp_air / static_cast<double>(n_air);
    if (n_ground > 0) g.avg_hp_ground = g.hp_ground / static_cast<double>(n_ground);
    return g;
}

CombatModel::CombatModel(ModelKind kind_, DpfTable dpf_, TargetSelectionPolicy policy_, TickOracleOptions oracle_)
    : kind(kind_), dpf(std::move(dpf_)), dpf_vector(project_min_dpf(dpf)), policy(std::move(policy_)), oracle(oracle_) {}

namespace {

CombatOutcome from_score(double score, const CombatState& state, ModelKind kind) {
    CombatOutcome out;
    out.model = kind;
    if (score > 0.0) {
        out.winner = Winner::A;
        out.survivors_a = state.army_a;
    } else if (score < 0.0) {
        out.winner = Winner::B;
        out.survivors_b = state.army_b;
    } else {
        out.winner = Winner::Draw;
    }
    return out;
}

}  // namespace

CombatOutcome simulate(const CombatModel& model, const CombatState& state, const Catalog& catalog) {
    switch (model.kind) {
        case ModelKind::Lanchester: return lanchester_simulate(state, model.dpf_vector, model.policy, catalog);
        case ModelKind::Sustained: return sustained_simulate(state, model.dpf_vector, model.policy, catalog);
        case ModelKind::Decreasing: return decreasing_simulate(state, model.dpf.per_pair, model.policy, catalog);
        case ModelKind::TickOracle:
            return tick_oracle_simulate(state, model.dpf.per_pair, model.policy, catalog, model.oracle);
        case ModelKind::Ltd: return from_score(ltd(state, model.dpf_vector), state, model.kind);
        case ModelKind::Ltd2: return from_score(ltd2(state, model.dpf_vector), state, model.kind);
    }
    throw ValidationError("unknown model kind");
}

Winner predict_winner(const CombatModel& model, const CombatState& state, const Catalog& catalog) {
    switch (model.kind) {
        case ModelKind::Ltd: return from_score(ltd(state, model.dpf_vector), state, model.kind).winner;
        case ModelKind::Ltd2: return from_score(ltd2(state, model.dpf_vector), state, model.kind).winner;
        default: return simulate(model, state, catalog).winner;
    }
}

}  // namespace attrition
