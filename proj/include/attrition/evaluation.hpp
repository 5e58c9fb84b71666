#pragma once

#include <array>
#include <string>
#include <vector>

#include "attrition/dataset.hpp"
#include "attrition/learning.hpp"

namespace attrition {

enum class Bucket { OneVsOne = 0, OneVsN = 1, NvsN = 2 };
const char* to_string(Bucket b);

/// Single-type armies on both sides, on one side, or on neither.
Bucket bucket_by_heterogeneity(const CombatRecord& record);

/// 1 − ||S∩F| − |S∩F′|| / |S|, counting units by uid.
double final_state_similarity(const CombatState& initial, const CombatState& predicted, const CombatState& actual);

struct RecordEval {
    std::size_t index = 0;
    Bucket bucket = Bucket::OneVsOne;
    Winner actual = Winner::Draw;
    Winner predicted = Winner::Draw;
    bool correct = false;
    double similarity = 0.0;
};

/// Label columns carried into reports.
struct ModelLabel {
    std::string model;
    std::string dpf_source;
    std::string policy;
};

ModelLabel label_of(const CombatModel& model);

struct EvalReport {
    ModelLabel label;
    double winner_accuracy = 0.0;
    double mean_similarity = 0.0;
    std::array<double, 3> bucket_similarity{};  // NaN for empty buckets
    std::array<std::size_t, 3> bucket_counts{};
    double total_sim_time = 0.0;  // seconds
    std::vector<RecordEval> records;
};

double predict_winner_accuracy(const CombatModel& model, const CombatDataset& ds, const Catalog& catalog);
EvalReport evaluate(const CombatModel& model, const CombatDataset& ds, const Catalog& catalog);

// ---------------------------------------------------------------------------
// Cross-validation with parameters learned on each training fold

enum class DpfSource { Static, Learned };

struct CrossValidationConfig {
    ModelKind kind = ModelKind::Decreasing;
    DpfSource dpf_source = DpfSource::Learned;
    PolicyKind policy = PolicyKind::BordaCount;  // Random and DestroyScore need nothing learned
    std::size_t folds = 10;
    std::uint64_t seed = 0;
    TickOracleOptions oracle;
};

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;
};

struct CrossValidationReport {
    ModelLabel label;
    std::vector<EvalReport> folds;
    MeanStd accuracy;
    MeanStd similarity;
    std::array<double, 3> bucket_similarity{};  // record-weighted over all folds
    double total_sim_time = 0.0;
};

CrossValidationReport cross_validate(const CombatDataset& ds, const Catalog& catalog, const CrossValidationConfig& cfg);

// ---------------------------------------------------------------------------
// Timing

struct NamedModel {
    std::string name;
    CombatModel model;
};

struct BenchmarkRow {
    ModelLabel label;
    double median_s = 0.0;
    double ratio_vs_slowest = 0.0;  // slowest median / this median
    std::size_t repetitions = 0;
};

std::vector<BenchmarkRow> benchmark_models(const std::vector<NamedModel>& models, const CombatDataset& ds,
                                           const Catalog& catalog, std::size_t repetitions);

// ---------------------------------------------------------------------------
// Reports

/// model,dpf_source,policy,accuracy,similarity,sim_time_s,sim_1vs1,sim_1vsN,sim_NvsN,n_records
std::string eval_csv_header();
std::string to_csv_row(const EvalReport& r);
std::string to_csv_row(const CrossValidationReport& r);
Json to_json(const EvalReport& r, bool with_records = false);
Json to_json(const CrossValidationReport& r);

/// model,dpf_source,policy,median_s,ratio_vs_slowest,repetitions
std::string bench_csv_header();
std::string to_csv_row(const BenchmarkRow& r);
Json to_json(const BenchmarkRow& r);

}  // namespace attrition
