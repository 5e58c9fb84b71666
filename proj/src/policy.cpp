#include "attrition/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "attrition/rng.hpp"

namespace attrition {

TargetSelectionPolicy TargetSelectionPolicy::random(std::uint64_t seed) {
    TargetSelectionPolicy p;
    p.kind = PolicyKind::Random;
    p.seed = seed;
    return p;
}

TargetSelectionPolicy TargetSelectionPolicy::destroy_score() { return {}; }

TargetSelectionPolicy TargetSelectionPolicy::borda(std::array<Eigen::VectorXd, 3> scores) {
    TargetSelectionPolicy p;
    p.kind = PolicyKind::BordaCount;
    p.borda_scores = std::move(scores);
    return p;
}

const char* to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::Random: return "random";
        case PolicyKind::DestroyScore: return "destroy-score";
        case PolicyKind::BordaCount: return "borda";
    }
    return "?";
}

PolicyKind policy_kind_from_string(std::string_view s) {
    if (s == "random") return PolicyKind::Random;
    if (s == "destroy-score" || s == "destroy_score") return PolicyKind::DestroyScore;
    if (s == "borda" || s == "borda-count") return PolicyKind::BordaCount;
    throw ValidationError("unknown target selection policy '" + std::string(s) + "'");
}

ArmyComposition composition_of(std::span<const Unit> army, const Catalog& catalog) {
    bool any_armed = false;
    for (const Unit& u : army) {
        const auto& t = catalog[u.type_id];
        if (t.attacks_ground() || t.attacks_air()) any_armed = true;
    }
    bool air = false, ground = false;
    for (const Unit& u : army) {
        const auto& t = catalog[u.type_id];
        if (any_armed && !(t.attacks_ground() || t.attacks_air())) continue;
        (t.is_flyer ? air : ground) = true;
    }
    if (air && ground) return ArmyComposition::Mixed;
    return air ? ArmyComposition::AirOnly : ArmyComposition::GroundOnly;
}

std::vector<std::size_t> target_order(const TargetSelectionPolicy& policy, std::span<const Unit> targets,
                                      std::span<const Unit> attackers, const Catalog& catalog) {
    std::vector<std::size_t> idx(targets.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});

    // Higher key = attacked earlier.
    std::vector<double> key(targets.size(), 0.0);
    switch (policy.kind) {
        case PolicyKind::Random:
            for (std::size_t i = 0; i < targets.size(); ++i) {
                const auto h = splitmix64(policy.seed ^ splitmix64(static_cast<std::uint64_t>(targets[i].uid)));
                key[i] = static_cast<double>(h >> 11);
            }
            break;
        case PolicyKind::DestroyScore:
            for (std::size_t i = 0; i < targets.size(); ++i) key[i] = destroy_score(catalog[targets[i].type_id]);
            break;
        case PolicyKind::BordaCount: {
            const auto& scores = policy.borda_scores[static_cast<std::size_t>(composition_of(attackers, catalog))];
            for (std::size_t i = 0; i < targets.size(); ++i) {
                const TypeId t = targets[i].type_id;
                key[i] = t < scores.size() ? scores(t) : 0.0;
            }
            break;
        }
    }
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (key[a] != key[b]) return key[a] > key[b];
        return targets[a].uid < targets[b].uid;
    });
    return idx;
}

Army sorted_targets(const TargetSelectionPolicy& policy, std::span<const Unit> targets, std::span<const Unit> attackers,
                    const Catalog& catalog) {
    Army out;
    out.reserve(targets.size());
    for (std::size_t i : target_order(policy, targets, attackers, catalog)) out.push_back(targets[i]);
    return out;
}

void validate_policy(const TargetSelectionPolicy& policy, std::size_t k) {
    if (policy.kind != PolicyKind::BordaCount) return;
    for (const auto& v : policy.borda_scores) {
        if (static_cast<std::size_t>(v.size()) != k) throw ValidationError("borda score vector length does not match catalog");
        if (!v.allFinite()) throw ValidationError("borda scores must be finite");
    }
}

}  // namespace attrition
