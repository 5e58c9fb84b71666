#pragma once

#include <array>
#include <filesystem>
#include <utility>

#include "attrition/dataset.hpp"

namespace attrition {

// ---------------------------------------------------------------------------
// Effective DPF

struct DpfAccumulators {
    Eigen::MatrixXd damage_to_type;        // (attacker type, victim type)
    Eigen::MatrixXd time_attacking_type;
    std::size_t skipped_kills = 0;         // victims with no eligible attacker

    explicit DpfAccumulators(std::size_t k = 0)
        : damage_to_type(Eigen::MatrixXd::Zero(k, k)), time_attacking_type(Eigen::MatrixXd::Zero(k, k)) {}

    void add_record(const CombatRecord& record, const Catalog& catalog);
    DpfAccumulators& operator+=(const DpfAccumulators& other);
};

struct DpfLearningResult {
    DpfTable table;
    Eigen::MatrixXd attack_time;                       // frames of evidence per pair
    std::vector<std::pair<TypeId, TypeId>> uncovered;  // attackable pairs never observed
    std::size_t skipped_kills = 0;
};

DpfLearningResult learn_dpf_report(const CombatDataset& ds, const Catalog& catalog);
DpfTable learn_dpf(const CombatDataset& ds, const Catalog& catalog);

// ---------------------------------------------------------------------------
// Borda-count target selection

struct BordaTally {
    std::array<Eigen::VectorXd, 3> points;       // indexed by the attacker's ArmyComposition
    std::array<Eigen::VectorXd, 3> appearances;

    explicit BordaTally(std::size_t k = 0);

    void add_record(const CombatRecord& record, const Catalog& catalog);
    BordaTally& operator+=(const BordaTally& other);
    /// Mean points per appearance; types never seen score 0.
    std::array<Eigen::VectorXd, 3> averages() const;
    double total_points() const;
};

TargetSelectionPolicy learn_borda_policy(const CombatDataset& ds, const Catalog& catalog);

// ---------------------------------------------------------------------------
// Cross-validation folds

struct FoldSplit {
    std::size_t fold_count = 0;
    std::vector<std::size_t> assignments;  // record index -> fold id
    std::uint64_t seed = 0;
};

FoldSplit make_folds(const CombatDataset& ds, std::size_t fold_count, std::uint64_t seed);
std::pair<CombatDataset, CombatDataset> train_eval_split(const CombatDataset& ds, const FoldSplit& split,
                                                         std::size_t fold);

// ---------------------------------------------------------------------------
// Model files

struct LearnedModel {
    std::string catalog_ref;
    DpfTable dpf;
    TargetSelectionPolicy borda;
    std::string source;
    std::size_t n_records = 0;
    std::vector<std::pair<TypeId, TypeId>> uncovered;
};

LearnedModel learn_model(const CombatDataset& ds, const Catalog& catalog);

/// {"format_version", "catalog_ref", "dpf_matrix", "borda_scores": {ground_only, air_only, mixed},
///  "provenance": {...}}
Json to_json(const LearnedModel& m);
LearnedModel learned_model_from_json(const Json& j, const Catalog& catalog);
LearnedModel load_model(const std::filesystem::path& path, const Catalog& catalog);
void save_model(const LearnedModel& m, const std::filesystem::path& path);

}  // namespace attrition
