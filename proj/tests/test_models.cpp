#include "doctest.h"
#include "support.hpp"

using namespace attrition;
using namespace testing;

namespace {

Eigen::MatrixXd duel_matrix() { return Eigen::MatrixXd{{0.0, 10.0}, {5.0, 0.0}}; }

CombatModel duel_model(ModelKind kind) {
    DpfTable t;
    t.per_pair = duel_matrix();
    refresh_domain_vectors(t, duel_catalog());
    return CombatModel(kind, t, TargetSelectionPolicy::destroy_score());
}

}  // namespace

TEST_CASE("decreasing: one 40hp/10dpf against two 30hp/5dpf") {
    const Catalog c = duel_catalog();
    const CombatState s{{unit(0, 0, 40)}, {unit(1, 1, 30), unit(2, 1, 30)}};
    const auto out = decreasing_simulate(s, duel_matrix(), TargetSelectionPolicy::destroy_score(), c);
    CHECK(out.winner == Winner::B);
    CHECK(out.duration_frames == doctest::Approx(5.0));
    REQUIRE(out.survivors_b.size() == 1);
    CHECK(out.survivors_b[0].uid == 2);
    CHECK(out.survivors_b[0].health() == doctest::Approx(10.0));
    REQUIRE(out.kills.size() == 2);
    CHECK(out.kills[0].uid == 1);
    CHECK(out.kills[0].frame == doctest::Approx(3.0));
    CHECK(out.kills[1].uid == 0);
    CHECK(out.kills[1].frame == doctest::Approx(5.0));
}

TEST_CASE("decreasing: a side that cannot hurt the other is a stalemate or a one-sided win") {
    Catalog c({ground_type(0, "gun", 10, 5, 1), ground_type(1, "wall", 50, 0, 0)});
    Eigen::MatrixXd m{{0.0, 5.0}, {0.0, 0.0}};
    const auto out = decreasing_simulate(CombatState{{unit(0, 0, 10)}, {unit(1, 1, 50)}}, m,
                                         TargetSelectionPolicy::destroy_score(), c);
    CHECK(out.winner == Winner::A);
    CHECK(out.duration_frames == doctest::Approx(10.0));
    const auto none = decreasing_simulate(CombatState{{unit(0, 1, 50)}, {unit(1, 1, 50)}}, m,
                                          TargetSelectionPolicy::destroy_score(), c);
    CHECK(none.winner == Winner::Stalemate);
}

TEST_CASE("lanchester closed form") {
    const auto p = LanchesterParams::from_rates(0.01, 0.04);
    // β a0² = 0.04·100 = 4 > α b0² = 0.01·100 = 1, so A wins with √(100 − 25) left
    const double t = lanchester_end_time(10, 10, p);
    CHECK(std::isfinite(t));
    const auto end = lanchester_counts_at(10, 10, p, t);
    CHECK(end.a == doctest::Approx(std::sqrt(75.0)));
    CHECK(end.b == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(std::isinf(lanchester_end_time(10, 20, LanchesterParams::from_rates(0.04, 0.01))) == false);
    // exact balance never ends
    CHECK(std::isinf(lanchester_end_time(10, 10, LanchesterParams::from_rates(0.02, 0.02))));
}

TEST_CASE("lanchester params from armies") {
    const Catalog c = duel_catalog();
    const CombatState s{{unit(0, 0, 40), unit(1, 0, 20)}, {unit(2, 1, 30)}};
    Eigen::VectorXd dpf(2);
    dpf << 10.0, 5.0;
    const auto p = lanchester_params(s, dpf, c);
    CHECK(p.alpha == doctest::Approx(5.0 / 30.0));
    CHECK(p.beta == doctest::Approx(10.0 / 30.0));
}

TEST_CASE("sustained: time to destroy is health over dpf") {
    ArmyAggregates victim, attacker;
    victim.hp_ground = 120;
    victim.hp_air = 0;
    attacker.dpf_ground = 4;
    CHECK(sustained_time_to_destroy(victim, attacker) == doctest::Approx(30.0));
    victim.hp_air = 40;
    CHECK(std::isinf(sustained_time_to_destroy(victim, attacker)));
    attacker.dpf_both = 2;
    // air needs the both-weapon dpf: 40/2 = 20, ground then only has 4: 30
    CHECK(sustained_time_to_destroy(victim, attacker) == doctest::Approx(30.0));
}

TEST_CASE("sustained picks the side that destroys first") {
    const Catalog c = duel_catalog();
    const auto out = simulate(duel_model(ModelKind::Sustained), CombatState{{unit(0, 0, 40)}, {unit(1, 1, 30)}}, c);
    // A needs 3 frames, B needs 8
    CHECK(out.winner == Winner::A);
    CHECK(out.duration_frames == doctest::Approx(3.0));
    REQUIRE(out.survivors_a.size() == 1);
    CHECK(out.survivors_a[0].health() == doctest::Approx(25.0));
}

TEST_CASE("tick oracle: focused 1v1 finishes on the frame the damage lands") {
    const Catalog c = duel_catalog();
    const auto out = tick_oracle_simulate(CombatState{{unit(0, 0, 40)}, {unit(1, 1, 30)}}, duel_matrix(),
                                          TargetSelectionPolicy::destroy_score(), c);
    CHECK(out.winner == Winner::A);
    CHECK(out.duration_frames == doctest::Approx(3.0));
    REQUIRE(out.survivors_a.size() == 1);
    CHECK(out.survivors_a[0].health() == doctest::Approx(25.0));
}

TEST_CASE("tick oracle: uniform spread kills equal targets together") {
    const Catalog c = duel_catalog();
    TickOracleOptions opt;
    opt.targeting = OracleTargeting::UniformSpread;
    const auto out = tick_oracle_simulate(CombatState{{unit(0, 0, 40)}, {unit(1, 1, 10), unit(2, 1, 10)}},
                                          duel_matrix(), TargetSelectionPolicy::destroy_score(), c, opt);
    CHECK(out.winner == Winner::A);
    REQUIRE(out.kills.size() == 2);
    CHECK(out.kills[0].frame == out.kills[1].frame);
}

TEST_CASE("ltd models only predict a winner") {
    const Catalog c = duel_catalog();
    const CombatState s{{unit(0, 0, 40)}, {unit(1, 1, 30)}};
    CHECK(predict_winner(duel_model(ModelKind::Ltd), s, c) == Winner::A);
    CHECK(predict_winner(duel_model(ModelKind::Ltd2), s, c) == Winner::A);
    const auto out = simulate(duel_model(ModelKind::Ltd), s, c);
    CHECK(out.survivors_b.empty());
    CHECK(out.survivors_a.size() == 1);
}

TEST_CASE("model names round trip") {
    for (auto k : {ModelKind::Lanchester, ModelKind::Sustained, ModelKind::Decreasing, ModelKind::TickOracle,
                   ModelKind::Ltd, ModelKind::Ltd2})
        CHECK(model_kind_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(model_kind_from_string("nope"), ValidationError);
}

TEST_CASE("swapping armies swaps the outcome") {
    const Catalog c = duel_catalog();
    const CombatState s{{unit(0, 0, 40)}, {unit(1, 1, 30), unit(2, 1, 30)}};
    for (auto k : {ModelKind::Lanchester, ModelKind::Sustained, ModelKind::Decreasing, ModelKind::TickOracle}) {
        const auto m = duel_model(k);
        const auto fwd = simulate(m, s, c);
        const auto back = simulate(m, swapped(s), c);
        CHECK(back.winner == flip(fwd.winner));
        CHECK(back.duration_frames == doctest::Approx(fwd.duration_frames));
        CHECK(uids(back.survivors_a) == uids(fwd.survivors_b));
    }
}

TEST_CASE("outcome json round trip") {
    const Catalog c = duel_catalog();
    const auto out = simulate(duel_model(ModelKind::Decreasing), CombatState{{unit(0, 0, 40)}, {unit(1, 1, 30), unit(2, 1, 30)}}, c);
    CHECK(to_json(combat_outcome_from_json(to_json(out))) == to_json(out));
}
