#include "doctest.h"
#include "support.hpp"

using namespace attrition;
using namespace testing;

namespace {

CombatRecord record_of(const Catalog& c, const CombatState& s, const Eigen::MatrixXd& m) {
    const auto out = tick_oracle_simulate(s, m, TargetSelectionPolicy::destroy_score(), c);
    CombatRecord r;
    r.t0 = 0;
    r.tf = static_cast<long>(std::ceil(out.duration_frames));
    r.a0 = s.army_a;
    r.b0 = s.army_b;
    r.af = out.survivors_a;
    r.bf = out.survivors_b;
    r.kills = out.kills;
    return r;
}

}  // namespace

TEST_CASE("similarity counts surviving uids") {
    const CombatState initial{{unit(0, 0, 1), unit(1, 0, 1)}, {unit(2, 1, 1), unit(3, 1, 1)}};
    const CombatState actual{{unit(0, 0, 1)}, {}};
    CHECK(final_state_similarity(initial, actual, actual) == 1.0);
    // S = 4 units. A: |S∩F| = 1, |S∩F'| = 2; B: 0 vs 0
    const CombatState predicted{{unit(0, 0, 1), unit(1, 0, 1)}, {}};
    CHECK(final_state_similarity(initial, predicted, actual) == doctest::Approx(1.0 - 1.0 / 4.0));
    // only the surviving head count matters, not which side it is on
    const CombatState opposite{{}, {unit(2, 1, 1), unit(3, 1, 1)}};
    CHECK(final_state_similarity(initial, opposite, actual) == doctest::Approx(1.0 - 1.0 / 4.0));
    CHECK(final_state_similarity(initial, CombatState{}, initial) == doctest::Approx(0.0));
}

TEST_CASE("heterogeneity buckets") {
    CombatRecord r;
    r.a0 = {unit(0, 0, 1), unit(1, 0, 1)};
    r.b0 = {unit(2, 1, 1)};
    CHECK(bucket_by_heterogeneity(r) == Bucket::OneVsOne);
    r.b0.push_back(unit(3, 0, 1));
    CHECK(bucket_by_heterogeneity(r) == Bucket::OneVsN);
    r.a0.push_back(unit(4, 1, 1));
    CHECK(bucket_by_heterogeneity(r) == Bucket::NvsN);
    CHECK(std::string(to_string(Bucket::OneVsN)) == "1vsN");
}

TEST_CASE("evaluate against oracle-labelled records") {
    const Catalog c = duel_catalog();
    const Eigen::MatrixXd m{{0.0, 10.0}, {5.0, 0.0}};
    CombatDataset ds;
    ds.records.push_back(record_of(c, {{unit(0, 0, 40)}, {unit(1, 1, 30), unit(2, 1, 30)}}, m));
    ds.records.push_back(record_of(c, {{unit(3, 0, 40)}, {unit(4, 1, 30)}}, m));
    DpfTable t;
    t.per_pair = m;
    refresh_domain_vectors(t, c);
    const auto r = evaluate(CombatModel(ModelKind::Decreasing, t, TargetSelectionPolicy::destroy_score()), ds, c);
    CHECK(r.winner_accuracy == 1.0);
    CHECK(r.mean_similarity == doctest::Approx(1.0));
    CHECK(r.bucket_counts[0] == 2);
    CHECK(std::isnan(r.bucket_similarity[2]));
    CHECK(r.records.size() == 2);
    CHECK(r.label.model == "decreasing");
    CHECK(predict_winner_accuracy(CombatModel(ModelKind::Decreasing, t, TargetSelectionPolicy::destroy_score()), ds, c) == 1.0);
}

TEST_CASE("a stalemate prediction counts as wrong") {
    Catalog c({ground_type(0, "gun", 10, 5, 1), ground_type(1, "gun2", 10, 5, 1)});
    CombatRecord r;
    r.t0 = 0;
    r.tf = 2;
    r.a0 = {unit(0, 0, 10)};
    r.b0 = {unit(1, 1, 10)};
    r.af = r.a0;
    r.kills = {{2.0, 1}};
    CombatDataset ds;
    ds.records = {r};
    DpfTable zero;
    zero.per_pair = Eigen::MatrixXd::Zero(2, 2);
    refresh_domain_vectors(zero, c);
    const auto rep = evaluate(CombatModel(ModelKind::Decreasing, zero, TargetSelectionPolicy::destroy_score()), ds, c);
    CHECK(rep.winner_accuracy == 0.0);
    CHECK(rep.records[0].predicted == Winner::Stalemate);
    CHECK(rep.mean_similarity == doctest::Approx(0.5));
}

TEST_CASE("cross validation on a small oracle dataset") {
    const Catalog c = synthetic_catalog();
    OracleDatasetOptions opt;
    opt.n_records = 60;
    opt.seed = 5;
    const auto ds = oracle_dataset(c, static_dpf(c).per_pair, TargetSelectionPolicy::destroy_score(), opt);
    CrossValidationConfig cfg;
    cfg.kind = ModelKind::Sustained;
    cfg.policy = PolicyKind::DestroyScore;
    cfg.folds = 5;
    const auto r = cross_validate(ds, c, cfg);
    CHECK(r.folds.size() == 5);
    CHECK(r.label.dpf_source == "learned");
    CHECK(r.accuracy.mean > 0.5);
    CHECK(r.similarity.mean <= 1.0);
    const auto again = cross_validate(ds, c, cfg);
    CHECK(again.accuracy.mean == r.accuracy.mean);
}

TEST_CASE("benchmark needs three repetitions and reports ratios") {
    const Catalog c = duel_catalog();
    const Eigen::MatrixXd m{{0.0, 10.0}, {5.0, 0.0}};
    CombatDataset ds;
    ds.records.push_back(record_of(c, {{unit(0, 0, 40)}, {unit(1, 1, 30)}}, m));
    DpfTable t;
    t.per_pair = m;
    refresh_domain_vectors(t, c);
    std::vector<NamedModel> models{{"decreasing", CombatModel(ModelKind::Decreasing, t, TargetSelectionPolicy::destroy_score())},
                                   {"lanchester", CombatModel(ModelKind::Lanchester, t, TargetSelectionPolicy::destroy_score())}};
    CHECK_THROWS_AS(benchmark_models(models, ds, c, 2), ValidationError);
    const auto rows = benchmark_models(models, ds, c, 3);
    REQUIRE(rows.size() == 2);
    CHECK(std::max(rows[0].ratio_vs_slowest, rows[1].ratio_vs_slowest) >= 1.0);
    CHECK(std::min(rows[0].ratio_vs_slowest, rows[1].ratio_vs_slowest) == doctest::Approx(1.0));
}

TEST_CASE("csv headers") {
    CHECK(eval_csv_header() == "model,dpf_source,policy,accuracy,similarity,sim_time_s,sim_1vs1,sim_1vsN,sim_NvsN,n_records");
    CHECK(bench_csv_header() == "model,dpf_source,policy,median_s,ratio_vs_slowest,repetitions");
}
