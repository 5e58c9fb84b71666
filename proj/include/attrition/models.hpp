#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string_view>
#include <vector>

#include "attrition/core.hpp"
#include "attrition/policy.hpp"

namespace attrition {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
/// Relative tolerance under which two kill times (or force ratios) are a tie.
inline constexpr double kTieTolerance = 1e-9;

inline bool nearly_equal(double a, double b, double rel = kTieTolerance) {
    if (a == b) return true;
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::isfinite(scale) && std::abs(a - b) <= rel * scale;
}

enum class Winner { A, B, Draw, Stalemate };
const char* to_string(Winner w);

enum class ModelKind { Lanchester, Sustained, Decreasing, TickOracle, Ltd, Ltd2 };
const char* to_string(ModelKind k);
ModelKind model_kind_from_string(std::string_view s);

struct Kill {
    double frame = 0.0;
    Uid uid = 0;
};

struct CombatOutcome {
    Army survivors_a;
    Army survivors_b;
    double duration_frames = 0.0;
    Winner winner = Winner::Stalemate;
    ModelKind model = ModelKind::Decreasing;
    std::vector<Kill> kills;  // only the step-wise simulators fill this
    bool clamped = false;     // a negative radicand was clamped to zero
};

CombatOutcome swapped(const CombatOutcome& outcome);

/// Per-army sums used by the closed-form models. A unit's DPF is dpf[type] in
/// every domain its type has a weapon for.
struct ArmyAggregates {
    double hp_air = 0.0;
    double hp_ground = 0.0;
    double dpf_air = 0.0;     // units that can only hit air
    double dpf_ground = 0.0;  // units that can only hit ground
    double dpf_both = 0.0;    // units with both weapons
    double avg_hp = 0.0;
    double avg_hp_air = 0.0;
    double avg_hp_ground = 0.0;
    double mean_dpf_air = 0.0;     // mean over all units, 0 for units without an air weapon
    double mean_dpf_ground = 0.0;
    std::size_t n_units = 0;
};

ArmyAggregates aggregate_army(std::span<const Unit> army, const DpfVector& dpf, const Catalog& catalog);

// ---------------------------------------------------------------------------
// Lanchester square law with target selection

struct LanchesterParams {
    double alpha = 0.0;  // A units killed per frame per B unit
    double beta = 0.0;   // B units killed per frame per A unit
    double intensity = 0.0;
    double r_alpha = 0.0;
    double r_beta = 0.0;

    static LanchesterParams from_rates(double alpha, double beta);
};

/// α = avgDPF(B,A) / mean health(A), β symmetric.
LanchesterParams lanchester_params(const CombatState& state, const DpfVector& dpf, const Catalog& catalog);

struct ForceCounts {
    double a = 0.0;
    double b = 0.0;
};

/// Frames until the losing side reaches zero; infinite for an exact tie or when
/// neither side can hurt the other.
double lanchester_end_time(double a0, double b0, const LanchesterParams& p);
/// Continuous force sizes at time t (clamped at the predicted end).
ForceCounts lanchester_counts_at(double a0, double b0, const LanchesterParams& p, double t);
ForceCounts lanchester_state_at(const CombatState& state, const LanchesterParams& p, double t);

CombatOutcome lanchester_simulate(const CombatState& state, const DpfVector& dpf, const TargetSelectionPolicy& policy,
                                  const Catalog& catalog);

// ---------------------------------------------------------------------------
// Sustained DPF

/// Time `attacker` needs to destroy every unit of `victim` at constant DPF,
/// with the both-weapon DPF assigned to the slower domain.
double sustained_time_to_destroy(const ArmyAggregates& victim, const ArmyAggregates& attacker);

CombatOutcome sustained_simulate(const CombatState& state, const DpfVector& dpf, const TargetSelectionPolicy& policy,
                                 const Catalog& catalog);

// ---------------------------------------------------------------------------
// Decreasing DPF

CombatOutcome decreasing_simulate(const CombatState& state, const Eigen::MatrixXd& per_pair,
                                  const TargetSelectionPolicy& policy, const Catalog& catalog);
CombatOutcome decreasing_simulate(const CombatState& state, const DpfTable& dpf, const TargetSelectionPolicy& policy,
                                  const Catalog& catalog);
CombatOutcome decreasing_simulate(const CombatState& state, const DpfVector& dpf, const TargetSelectionPolicy& policy,
                                  const Catalog& catalog);

// ---------------------------------------------------------------------------
// Frame-by-frame reference simulator

enum class OracleTargeting {
    Focused,        // every unit fires at the first living target in policy order it can hit
    UniformSpread,  // every unit spreads its DPF evenly over all living targets it can hit
};

struct TickOracleOptions {
    long max_frames = 1'000'000;
    OracleTargeting targeting = OracleTargeting::Focused;
};

CombatOutcome tick_oracle_simulate(const CombatState& state, const Eigen::MatrixXd& per_pair,
                                   const TargetSelectionPolicy& policy, const Catalog& catalog,
                                   const TickOracleOptions& options = {});

// ---------------------------------------------------------------------------
// Uniform front end

struct CombatModel {
    ModelKind kind = ModelKind::Decreasing;
    DpfTable dpf;
    DpfVector dpf_vector;  // min projection of dpf, cached
    TargetSelectionPolicy policy;
    TickOracleOptions oracle;

    CombatModel() = default;
    CombatModel(ModelKind kind, DpfTable dpf, TargetSelectionPolicy policy, TickOracleOptions oracle = {});
};

/// Runs the model. LTD/LTD2 only predict a winner; their outcome keeps the
/// predicted winner's army intact and removes the other.
CombatOutcome simulate(const CombatModel& model, const CombatState& state, const Catalog& catalog);
Winner predict_winner(const CombatModel& model, const CombatState& state, const Catalog& catalog);

}  // namespace attrition
