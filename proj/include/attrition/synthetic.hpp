#pragma once

#include "attrition/dataset.hpp"
#include "attrition/rng.hpp"

namespace attrition {

/// Small fictional catalog: ground and air fighters, a mine, a worker and a base.
Catalog synthetic_catalog();

/// Types usable in generated fights: armed, not a worker, building or mine.
std::vector<TypeId> combat_type_pool(const Catalog& catalog);

/// "True" effective DPF for experiments: the static matrix with every
/// attackable pair scaled by an independent factor in [1 − spread, 1 + spread].
Eigen::MatrixXd perturbed_dpf(const Catalog& catalog, Rng& rng, double spread);

struct CombatGenOptions {
    int min_units = 1;
    int max_units = 20;         // per side
    int max_types_per_side = 1;
    bool mutual = true;         // every A type can hit some B type and vice versa
    bool full_health = true;    // otherwise health is drawn in [25%, 100%] of max
    std::vector<TypeId> pool;   // empty: combat_type_pool(catalog)
};

/// Draws a random fight; uids continue from `next_uid`.
CombatState random_combat(const Catalog& catalog, Rng& rng, const CombatGenOptions& options, Uid& next_uid);

struct OracleDatasetOptions {
    std::size_t n_records = 1000;
    std::uint64_t seed = 0;
    CombatGenOptions combat;
    TickOracleOptions oracle;
    long gap_frames = 1000;  // idle frames between consecutive fights on the timeline
};

/// Runs generated fights through the tick oracle and keeps the decided ones as
/// ArmyDestroyed records with kill logs.
CombatDataset oracle_dataset(const Catalog& catalog, const Eigen::MatrixXd& truth, const TargetSelectionPolicy& policy,
                             const OracleDatasetOptions& options);

/// Fights where one army holds every type of `planted` (all ground) and the
/// other side (types outside `planted`) kills them with focused fire in the
/// planted priority order.
CombatDataset planted_borda_dataset(const Catalog& catalog, const Eigen::MatrixXd& truth,
                                    const std::vector<TypeId>& planted, std::size_t n_records, std::uint64_t seed);

/// Borda policy whose scores encode `order` (first = highest) for every composition.
TargetSelectionPolicy policy_from_order(const std::vector<TypeId>& order, std::size_t k);

/// Unit-event trace replaying the records: spawns clustered per fight, attack
/// orders every `order_interval` frames while a side has living units, one
/// lethal damage event plus a death per kill, and a final game_end.
Trace trace_from_records(const std::vector<CombatRecord>& records, const Catalog& catalog, std::string catalog_ref,
                         long order_interval = 48);

}  // namespace attrition
