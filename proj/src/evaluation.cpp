#include "attrition/evaluation.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <unordered_set>

namespace attrition {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t distinct_types(const Army& army) {
    std::unordered_set<TypeId> types;
    for (const auto& u : army) types.insert(u.type_id);
    return types.size();
}

std::size_t count_in(const std::unordered_set<Uid>& s, const CombatState& state) {
    std::size_t n = 0;
    for (const auto* army : {&state.army_a, &state.army_b})
        for (const auto& u : *army) n += s.count(u.uid);
    return n;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "";
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

Json num_or_null(double v) { return std::isnan(v) ? Json() : Json(v); }

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd out;
    if (xs.empty()) return out;
    for (double x : xs) out.mean += x;
    out.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        out.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return out;
}

}  // namespace

const char* to_string(Bucket b) {
    switch (b) {
        case Bucket::OneVsOne: return "1vs1";
        case Bucket::OneVsN: return "1vsN";
        case Bucket::NvsN: return "NvsN";
    }
    return "?";
}

Bucket bucket_by_heterogeneity(const CombatRecord& record) {
    const int single = (distinct_types(record.a0) <= 1) + (distinct_types(record.b0) <= 1);
    return single == 2 ? Bucket::OneVsOne : single == 1 ? Bucket::OneVsN : Bucket::NvsN;
}

double final_state_similarity(const CombatState& initial, const CombatState& predicted, const CombatState& actual) {
    std::unordered_set<Uid> s;
    for (const auto* army : {&initial.army_a, &initial.army_b})
        for (const auto& u : *army) s.insert(u.uid);
    if (s.empty()) throw ValidationError("similarity of an empty initial state is undefined");
    const double f = static_cast<double>(count_in(s, actual));
    const double f_pred = static_cast<double>(count_in(s, predicted));
    return 1.0 - std::abs(f - f_pred) / static_cast<double>(s.size());
}

ModelLabel label_of(const CombatModel& model) {
    ModelLabel l;
    l.model = to_string(model.kind);
    l.dpf_source = model.dpf.provenance == DpfProvenance::Learned ? "learned" : "static";
    l.policy = to_string(model.policy.kind);
    return l;
}

double predict_winner_accuracy(const CombatModel& model, const CombatDataset& ds, const Catalog& catalog) {
    if (ds.records.empty()) throw ValidationError("accuracy over an empty dataset is undefined");
    std::size_t hits = 0;
    for (const auto& r : ds.records) {
        const Winner w = predict_winner(model, r.initial_state(), catalog);
        hits += w != Winner::Stalemate && w == actual_winner(r);
    }
    return static_cast<double>(hits) / static_cast<double>(ds.records.size());
}

EvalReport evaluate(const CombatModel& model, const CombatDataset& ds, const Catalog& catalog) {
    if (ds.records.empty()) throw ValidationError("cannot evaluate on an empty dataset");
    EvalReport report;
    report.label = label_of(model);
    std::array<double, 3> bucket_sum{};
    std::size_t hits = 0;
    double sim_sum = 0.0;
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        const auto& r = ds.records[i];
        const CombatState initial = r.initial_state();
        const auto start = Clock::now();
        const CombatOutcome out = simulate(model, initial, catalog);
        report.total_sim_time += seconds_since(start);

        RecordEval e;
        e.index = i;
        e.bucket = bucket_by_heterogeneity(r);
        e.actual = actual_winner(r);
        e.predicted = out.winner;
        e.correct = out.winner != Winner::Stalemate && out.winner == e.actual;
        const CombatState predicted =
            out.winner == Winner::Stalemate ? initial : CombatState{out.survivors_a, out.survivors_b};
        e.similarity = final_state_similarity(initial, predicted, {r.af, r.bf});

        hits += e.correct;
        sim_sum += e.similarity;
        const auto b = static_cast<std::size_t>(e.bucket);
        bucket_sum[b] += e.similarity;
        ++report.bucket_counts[b];
        report.records.push_back(e);
    }
    const double n = static_cast<double>(ds.records.size());
    report.winner_accuracy = static_cast<double>(hits) / n;
    report.mean_similarity = sim_sum / n;
    for (std::size_t b = 0; b < 3; ++b)
        report.bucket_similarity[b] = report.bucket_counts[b] ? bucket_sum[b] / static_cast<double>(report.bucket_counts[b])
                                                              : std::nan("");
    return report;
}

CrossValidationReport cross_validate(const CombatDataset& ds, const Catalog& catalog, const CrossValidationConfig& cfg) {
    const FoldSplit split = make_folds(ds, cfg.folds, cfg.seed);
    CrossValidationReport out;
    std::vector<double> acc, sim;
    std::array<double, 3> bucket_sum{};
    std::array<std::size_t, 3> bucket_n{};
    for (std::size_t fold = 0; fold < cfg.folds; ++fold) {
        auto [train, test] = train_eval_split(ds, split, fold);
        DpfTable dpf = cfg.dpf_source == DpfSource::Learned ? learn_dpf(train, catalog) : static_dpf(catalog);
        TargetSelectionPolicy policy;
        switch (cfg.policy) {
            case PolicyKind::BordaCount: policy = learn_borda_policy(train, catalog); break;
            case PolicyKind::DestroyScore: policy = TargetSelectionPolicy::destroy_score(); break;
            case PolicyKind::Random: policy = TargetSelectionPolicy::random(cfg.seed + fold); break;
        }
        const CombatModel model(cfg.kind, std::move(dpf), std::move(policy), cfg.oracle);
        EvalReport r = evaluate(model, test, catalog);
        out.label = r.label;
        acc.push_back(r.winner_accuracy);
        sim.push_back(r.mean_similarity);
        out.total_sim_time += r.total_sim_time;
        for (std::size_t b = 0; b < 3; ++b) {
            if (!r.bucket_counts[b]) continue;
            bucket_sum[b] += r.bucket_similarity[b] * static_cast<double>(r.bucket_counts[b]);
            bucket_n[b] += r.bucket_counts[b];
        }
        out.folds.push_back(std::move(r));
    }
    out.accuracy = mean_std(acc);
    out.similarity = mean_std(sim);
    for (std::size_t b = 0; b < 3; ++b)
        out.bucket_similarity[b] = bucket_n[b] ? bucket_sum[b] / static_cast<double>(bucket_n[b]) : std::nan("");
    return out;
}

std::vector<BenchmarkRow> benchmark_models(const std::vector<NamedModel>& models, const CombatDataset& ds,
                                           const Catalog& catalog, std::size_t repetitions) {
    if (repetitions < 3) throw ValidationError("benchmarks need at least 3 repetitions");
    std::vector<BenchmarkRow> rows;
    volatile double sink = 0.0;
    for (const auto& [name, model] : models) {
        std::vector<double> times;
        for (std::size_t rep = 0; rep < repetitions; ++rep) {
            const auto start = Clock::now();
            for (const auto& r : ds.records) sink = sink + simulate(model, r.initial_state(), catalog).duration_frames;
            times.push_back(seconds_since(start));
        }
        std::nth_element(times.begin(), times.begin() + static_cast<long>(times.size() / 2), times.end());
        BenchmarkRow row;
        row.label = label_of(model);
        if (!name.empty()) row.label.model = name;
        row.median_s = times[times.size() / 2];
        row.repetitions = repetitions;
        rows.push_back(row);
    }
    double slowest = 0.0;
    for (const auto& r : rows) slowest = std::max(slowest, r.median_s);
    for (auto& r : rows) r.ratio_vs_slowest = r.median_s > 0.0 ? slowest / r.median_s : 1.0;
    return rows;
}

std::string eval_csv_header() {
    return "model,dpf_source,policy,accuracy,similarity,sim_time_s,sim_1vs1,sim_1vsN,sim_NvsN,n_records";
}

std::string to_csv_row(const EvalReport& r) {
    std::ostringstream os;
    os << r.label.model << ',' << r.label.dpf_source << ',' << r.label.policy << ',' << fmt(r.winner_accuracy) << ','
       << fmt(r.mean_similarity) << ',' << fmt(r.total_sim_time) << ',' << fmt(r.bucket_similarity[0]) << ','
       << fmt(r.bucket_similarity[1]) << ',' << fmt(r.bucket_similarity[2]) << ',' << r.records.size();
    return os.str();
}

std::string to_csv_row(const CrossValidationReport& r) {
    std::size_t n = 0;
    for (const auto& f : r.folds) n += f.records.size();
    std::ostringstream os;
    os << r.label.model << ',' << r.label.dpf_source << ',' << r.label.policy << ',' << fmt(r.accuracy.mean) << ','
       << fmt(r.similarity.mean) << ',' << fmt(r.total_sim_time) << ',' << fmt(r.bucket_similarity[0]) << ','
       << fmt(r.bucket_similarity[1]) << ',' << fmt(r.bucket_similarity[2]) << ',' << n;
    return os.str();
}

Json to_json(const EvalReport& r, bool with_records) {
    Json j = {{"model", r.label.model},
              {"dpf_source", r.label.dpf_source},
              {"policy", r.label.policy},
              {"accuracy", r.winner_accuracy},
              {"similarity", r.mean_similarity},
              {"sim_time_s", r.total_sim_time},
              {"sim_1vs1", num_or_null(r.bucket_similarity[0])},
              {"sim_1vsN", num_or_null(r.bucket_similarity[1])},
              {"sim_NvsN", num_or_null(r.bucket_similarity[2])},
              {"n_records", r.records.size()}};
    if (with_records) {
        Json rows = Json::array();
        for (const auto& e : r.records)
            rows.push_back({{"index", e.index},
                            {"bucket", to_string(e.bucket)},
                            {"actual", to_string(e.actual)},
                            {"predicted", to_string(e.predicted)},
                            {"correct", e.correct},
                            {"similarity", e.similarity}});
        j["records"] = rows;
    }
    return j;
}

Json to_json(const CrossValidationReport& r) {
    Json folds = Json::array();
    for (const auto& f : r.folds) folds.push_back(to_json(f));
    std::size_t n = 0;
    for (const auto& f : r.folds) n += f.records.size();
    return {{"model", r.label.model},
            {"dpf_source", r.label.dpf_source},
            {"policy", r.label.policy},
            {"accuracy", r.accuracy.mean},
            {"accuracy_std", r.accuracy.stddev},
            {"similarity", r.similarity.mean},
            {"similarity_std", r.similarity.stddev},
            {"sim_time_s", r.total_sim_time},
            {"sim_1vs1", num_or_null(r.bucket_similarity[0])},
            {"sim_1vsN", num_or_null(r.bucket_similarity[1])},
            {"sim_NvsN", num_or_null(r.bucket_similarity[2])},
            {"n_records", n},
            {"folds", folds}};
}

std::string bench_csv_header() { return "model,dpf_source,policy,median_s,ratio_vs_slowest,repetitions"; }

std::string to_csv_row(const BenchmarkRow& r) {
    std::ostringstream os;
    os << r.label.model << ',' << r.label.dpf_source << ',' << r.label.policy << ',' << fmt(r.median_s) << ','
       << fmt(r.ratio_vs_slowest) << ',' << r.repetitions;
    return os.str();
}

Json to_json(const BenchmarkRow& r) {
    return {{"model", r.label.model},
            {"dpf_source", r.label.dpf_source},
            {"policy", r.label.policy},
            {"median_s", r.median_s},
            {"ratio_vs_slowest", r.ratio_vs_slowest},
            {"repetitions", r.repetitions}};
}

}  // namespace attrition
