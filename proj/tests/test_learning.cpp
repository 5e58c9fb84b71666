#include "doctest.h"
#include "support.hpp"

using namespace attrition;
using namespace testing;

namespace {

CombatRecord duel_record() {
    CombatRecord r;
    r.t0 = 100;
    r.tf = 105;
    r.a0 = {unit(0, 0, 40)};
    r.b0 = {unit(1, 1, 30), unit(2, 1, 30)};
    r.bf = {unit(2, 1, 10)};
    r.kills = {{103.0, 1}, {105.0, 0}};
    return r;
}

}  // namespace

TEST_CASE("learned dpf splits victim health over eligible attackers") {
    const Catalog c = duel_catalog();
    CombatDataset ds;
    ds.records = {duel_record()};
    const auto report = learn_dpf_report(ds, c);
    // alpha alone kills a 30 hp beta in 3 frames
    CHECK(report.table.per_pair(0, 1) == doctest::Approx(10.0));
    // 40 hp over two betas, each credited the full 5 frames
    CHECK(report.table.per_pair(1, 0) == doctest::Approx(4.0));
    CHECK(report.attack_time(1, 0) == doctest::Approx(10.0));
    CHECK(report.table.per_pair(0, 0) == 0.0);
    CHECK(report.table.provenance == DpfProvenance::Learned);
    CHECK(report.uncovered.size() == 2);  // same-type pairs are attackable but never seen
    CHECK(report.skipped_kills == 0);
}

TEST_CASE("accumulators add up across records") {
    const Catalog c = duel_catalog();
    DpfAccumulators one(2), two(2);
    one.add_record(duel_record(), c);
    two.add_record(duel_record(), c);
    two += one;
    CHECK(two.damage_to_type(0, 1) == doctest::Approx(60.0));
    CHECK(two.time_attacking_type(0, 1) == doctest::Approx(6.0));
}

TEST_CASE("kills nobody could have made are skipped") {
    Catalog c({ground_type(0, "gun", 10, 5, 1), ground_type(1, "wall", 50, 0, 0)});
    CombatRecord r;
    r.t0 = 0;
    r.tf = 10;
    r.a0 = {unit(0, 1, 50)};
    r.b0 = {unit(1, 0, 10)};
    r.kills = {{10.0, 1}};
    r.af = r.a0;
    CombatDataset ds;
    ds.records = {r};
    CHECK(learn_dpf_report(ds, c).skipped_kills == 1);
}

TEST_CASE("borda: first-killed type scores n-1") {
    const Catalog c = synthetic_catalog();
    const TypeId trooper = *c.find("trooper"), bulwark = *c.find("bulwark"), lancer = *c.find("lancer"),
                 crawler = *c.find("crawler");
    CombatRecord r;
    r.t0 = 0;
    r.tf = 50;
    r.a0 = {full(0, c[crawler]), full(1, c[crawler])};
    r.b0 = {full(10, c[trooper]), full(11, c[bulwark]), full(12, c[lancer]), full(13, c[trooper])};
    r.kills = {{5.0, 11}, {9.0, 10}, {20.0, 13}};
    r.af = r.a0;
    r.bf = {full(12, c[lancer])};
    BordaTally tally(c.size());
    tally.add_record(r, c);
    const auto& g = tally.points[static_cast<std::size_t>(ArmyComposition::GroundOnly)];
    CHECK(g(bulwark) == 2.0);
    CHECK(g(trooper) == 1.0);
    CHECK(g(lancer) == 0.0);
    CHECK(tally.appearances[0](trooper) == 1.0);
    // B's only kills were none, but A's single type still appears once
    CHECK(tally.appearances[0](crawler) == 1.0);
    CHECK(tally.total_points() == 3.0);

    CombatDataset ds;
    ds.records = {r};
    const auto p = learn_borda_policy(ds, c);
    CHECK(p.kind == PolicyKind::BordaCount);
    CHECK(p.borda_scores[0](bulwark) > p.borda_scores[0](trooper));
}

TEST_CASE("borda needs at least one kill") {
    const Catalog c = duel_catalog();
    auto r = duel_record();
    r.kills.clear();
    CombatDataset ds;
    ds.records = {r};
    CHECK_THROWS_AS(learn_borda_policy(ds, c), ValidationError);
}

TEST_CASE("folds partition the records evenly") {
    CombatDataset ds;
    for (int i = 0; i < 23; ++i) ds.records.push_back(duel_record());
    const auto split = make_folds(ds, 10, 7);
    CHECK(split.assignments.size() == 23);
    std::array<int, 10> counts{};
    for (auto f : split.assignments) ++counts[f];
    CHECK(*std::max_element(counts.begin(), counts.end()) - *std::min_element(counts.begin(), counts.end()) <= 1);
    CHECK(make_folds(ds, 10, 7).assignments == split.assignments);
    const auto [train, eval] = train_eval_split(ds, split, 3);
    CHECK(train.records.size() + eval.records.size() == 23);
    CHECK(eval.records.size() == static_cast<std::size_t>(counts[3]));
    CHECK_THROWS_AS(make_folds(ds, 1, 0), ValidationError);
    CHECK_THROWS_AS(make_folds(ds, 24, 0), ValidationError);
}

TEST_CASE("model file round trip") {
    const Catalog c = duel_catalog();
    CombatDataset ds;
    ds.records = {duel_record()};
    const auto m = learn_model(ds, c);
    CHECK(m.n_records == 1);
    const auto back = learned_model_from_json(to_json(m), c);
    CHECK(back.dpf.per_pair.isApprox(m.dpf.per_pair));
    CHECK(back.borda.borda_scores[0].isApprox(m.borda.borda_scores[0]));
    CHECK(to_json(back) == to_json(m));
    CHECK_THROWS_AS(learned_model_from_json(to_json(m), synthetic_catalog()), ValidationError);
}
