#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "attrition/core.hpp"

namespace attrition {

enum class PolicyKind { Random, DestroyScore, BordaCount };

/// Composition of the *attacking* army; selects which Borda score vector applies.
enum class ArmyComposition { GroundOnly = 0, AirOnly = 1, Mixed = 2 };

struct TargetSelectionPolicy {
    PolicyKind kind = PolicyKind::DestroyScore;
    std::uint64_t seed = 0;                       // Random only
    std::array<Eigen::VectorXd, 3> borda_scores;  // BordaCount only, indexed by ArmyComposition

    static TargetSelectionPolicy random(std::uint64_t seed);
    static TargetSelectionPolicy destroy_score();
    static TargetSelectionPolicy borda(std::array<Eigen::VectorXd, 3> scores);
};

const char* to_string(PolicyKind kind);
PolicyKind policy_kind_from_string(std::string_view s);

/// Composition of the units in `army` that carry a weapon. Armies with no armed
/// unit count as their raw flyer/ground makeup.
ArmyComposition composition_of(std::span<const Unit> army, const Catalog& catalog);

/// Order in which `attackers` will try to destroy `targets`; returns indices into
/// `targets`. Ties (and Random) resolve by ascending uid, so the order depends
/// only on the two armies and never on call order.
std::vector<std::size_t> target_order(const TargetSelectionPolicy& policy, std::span<const Unit> targets,
                                      std::span<const Unit> attackers, const Catalog& catalog);

/// Same as target_order but returns the reordered copy.
Army sorted_targets(const TargetSelectionPolicy& policy, std::span<const Unit> targets, std::span<const Unit> attackers,
                    const Catalog& catalog);

void validate_policy(const TargetSelectionPolicy& policy, std::size_t k);

}  // namespace attrition
