#include "attrition/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace attrition {

Catalog::Catalog(std::vector<UnitTypeStats> types, std::string id) : types_(std::move(types)), id_(std::move(id)) {
    if (types_.empty()) throw ValidationError("catalog is empty");
    std::sort(types_.begin(), types_.end(),
              [](const UnitTypeStats& a, const UnitTypeStats& b) { return a.type_id < b.type_id; });
    for (std::size_t i = 0; i < types_.size(); ++i) {
        const auto& t = types_[i];
        if (i > 0 && types_[i - 1].type_id == t.type_id)
            throw ValidationError("duplicate type_id " + std::to_string(t.type_id));
        if (t.type_id != static_cast<TypeId>(i))
            throw ValidationError("type ids must be dense 0..k-1; missing " + std::to_string(i));
        if (!(t.max_hp > 0.0)) throw ValidationError("type " + t.name + ": max_hp must be > 0");
        if (t.max_shield < 0.0) throw ValidationError("type " + t.name + ": negative max_shield");
        if (t.weapon_damage_ground < 0.0 || t.weapon_damage_air < 0.0)
            throw ValidationError("type " + t.name + ": negative weapon damage");
        if (t.attacks_ground() && !(t.cooldown_ground > 0.0))
            throw ValidationError("type " + t.name + ": ground weapon without positive cooldown");
        if (t.attacks_air() && !(t.cooldown_air > 0.0))
            throw ValidationError("type " + t.name + ": air weapon without positive cooldown");
        if (t.mineral_cost < 0.0 || t.gas_cost < 0.0) throw ValidationError("type " + t.name + ": negative cost");
    }
}

const UnitTypeStats& Catalog::operator[](TypeId t) const {
    if (!contains(t)) throw ValidationError("unknown type_id " + std::to_string(t));
    return types_[static_cast<std::size_t>(t)];
}

std::optional<TypeId> Catalog::find(std::string_view name) const {
    for (const auto& t : types_)
        if (t.name == name) return t.type_id;
    return std::nullopt;
}

void apply_damage(Unit& u, double amount) {
    if (amount <= 0.0) return;
    const double from_shield = std::min(u.shield, amount);
    u.shield -= from_shield;
    u.hp = std::max(0.0, u.hp - (amount - from_shield));
}

void scale_health(Unit& u, double factor) {
    u.hp *= factor;
    u.shield *= factor;
}

void validate_combat_state(const CombatState& state, const Catalog& catalog) {
    if (state.army_a.empty() || state.army_b.empty()) throw ValidationError("combat state: both armies must be non-empty");
    std::unordered_set<Uid> seen;
    for (const Army* army : {&state.army_a, &state.army_b}) {
        for (const Unit& u : *army) {
            if (!seen.insert(u.uid).second) throw ValidationError("combat state: duplicate uid " + std::to_string(u.uid));
            const auto& type = catalog[u.type_id];
            if (!(u.hp > 0.0) || u.hp > type.max_hp + 1e-9)
                throw ValidationError("combat state: unit " + std::to_string(u.uid) + " hp outside (0, max_hp]");
            if (u.shield < 0.0) throw ValidationError("combat state: unit " + std::to_string(u.uid) + " negative shield");
        }
    }
}

CombatState swapped(const CombatState& state) { return {state.army_b, state.army_a}; }

namespace {

double row_min_positive(const Eigen::MatrixXd& m, Eigen::Index row, const std::vector<Eigen::Index>& cols) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j : cols)
        if (m(row, j) > 0.0) best = std::min(best, m(row, j));
    return std::isfinite(best) ? best : 0.0;
}

}  // namespace

void refresh_domain_vectors(DpfTable& table, const Catalog& catalog) {
    const auto k = static_cast<Eigen::Index>(catalog.size());
    std::vector<Eigen::Index> ground, air;
    for (Eigen::Index j = 0; j < k; ++j) (catalog[static_cast<TypeId>(j)].is_flyer ? air : ground).push_back(j);
    table.per_unit_ground = DpfVector::Zero(k);
    table.per_unit_air = DpfVector::Zero(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        table.per_unit_ground(i) = row_min_positive(table.per_pair, i, ground);
        table.per_unit_air(i) = row_min_positive(table.per_pair, i, air);
    }
}

DpfTable static_dpf(const Catalog& catalog) {
    const auto k = static_cast<Eigen::Index>(catalog.size());
    DpfTable table;
    table.per_pair = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto& attacker = catalog[static_cast<TypeId>(i)];
        const double ground = attacker.attacks_ground() ? attacker.weapon_damage_ground / attacker.cooldown_ground : 0.0;
        const double air = attacker.attacks_air() ? attacker.weapon_damage_air / attacker.cooldown_air : 0.0;
        for (Eigen::Index j = 0; j < k; ++j) table.per_pair(i, j) = catalog[static_cast<TypeId>(j)].is_flyer ? air : ground;
    }
    table.provenance = DpfProvenance::Static;
    refresh_domain_vectors(table, catalog);
    return table;
}

DpfVector project_min_dpf(const DpfTable& table) {
    const Eigen::Index k = table.per_pair.rows();
    DpfVector out = DpfVector::Zero(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < k; ++j)
            if (table.per_pair(i, j) > 0.0) best = std::min(best, table.per_pair(i, j));
        out(i) = std::isfinite(best) ? best : 0.0;
    }
    return out;
}

std::vector<TypeId> types_without_targets(const DpfTable& table) {
    std::vector<TypeId> out;
    for (Eigen::Index i = 0; i < table.per_pair.rows(); ++i)
        if ((table.per_pair.row(i).array() <= 0.0).all()) out.push_back(static_cast<TypeId>(i));
    return out;
}

Eigen::MatrixXd expand_dpf_vector(const DpfVector& dpf, const Catalog& catalog) {
    const auto k = static_cast<Eigen::Index>(catalog.size());
    if (dpf.size() != k) throw ValidationError("dpf vector length does not match catalog size");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            if (catalog.can_target(static_cast<TypeId>(i), static_cast<TypeId>(j))) m(i, j) = dpf(i);
    return m;
}

double destroy_score(const UnitTypeStats& type) {
    if (type.destroy_score_override) return *type.destroy_score_override;
    return 2.0 * type.mineral_cost + 4.0 * type.gas_cost;
}

namespace {

template <class HealthFn>
double army_sum(const Army& army, const DpfVector& dpf, HealthFn f) {
    double s = 0.0;
    for (const Unit& u : army) {
        if (u.type_id < 0 || u.type_id >= dpf.size()) throw ValidationError("dpf vector has no entry for type " + std::to_string(u.type_id));
        s += f(u.health()) * dpf(u.type_id);
    }
    return s;
}

}  // namespace

double ltd2(const CombatState& state, const DpfVector& dpf) {
    auto root = [](double h) { return std::sqrt(h); };
    return army_sum(state.army_a, dpf, root) - army_sum(state.army_b, dpf, root);
}

double ltd(const CombatState& state, const DpfVector& dpf) {
    auto id = [](double h) { return h; };
    return army_sum(state.army_a, dpf, id) - army_sum(state.army_b, dpf, id);
}

}  // namespace attrition
