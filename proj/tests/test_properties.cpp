// Seeded property checks; each runs kCases random instances.
#include <sstream>

#include "doctest.h"
#include "support.hpp"

using namespace attrition;
using namespace testing;

namespace {

constexpr int kCases = 1000;

CombatState random_state(const Catalog& c, Rng& rng, int max_types = 2, bool full_health = false) {
    CombatGenOptions opt;
    opt.max_units = 12;
    opt.max_types_per_side = max_types;
    opt.full_health = full_health;
    Uid next = static_cast<Uid>(uniform_index(rng, 1000)) * 100;
    return random_combat(c, rng, opt, next);
}

CombatModel model_for(ModelKind k, const Catalog& c) {
    return CombatModel(k, static_dpf(c), TargetSelectionPolicy::destroy_score());
}

bool same_units(const Army& a, const Army& b) {
    if (uids(a) != uids(b)) return false;
    std::map<Uid, double> h;
    for (const auto& u : a) h[u.uid] = u.health();
    for (const auto& u : b)
        if (std::abs(h[u.uid] - u.health()) > 1e-6 * std::max(1.0, u.health())) return false;
    return true;
}

const std::array<ModelKind, 3> kModels{ModelKind::Lanchester, ModelKind::Sustained, ModelKind::Decreasing};

}  // namespace

TEST_CASE("models are antisymmetric under swapping the armies") {
    const Catalog c = synthetic_catalog();
    for (auto kind : kModels) {
        const auto m = model_for(kind, c);
        for (int i = 0; i < kCases; ++i) {
            Rng rng(splitmix64(static_cast<std::uint64_t>(i)));
            const auto s = random_state(c, rng);
            const auto fwd = simulate(m, s, c);
            const auto back = simulate(m, swapped(s), c);
            CAPTURE(i);
            CAPTURE(to_string(kind));
            CHECK(back.winner == flip(fwd.winner));
            CHECK(same_units(back.survivors_a, fwd.survivors_b));
            CHECK(same_units(back.survivors_b, fwd.survivors_a));
        }
    }
}

TEST_CASE("models are deterministic") {
    const Catalog c = synthetic_catalog();
    auto models = std::vector<CombatModel>{model_for(ModelKind::Decreasing, c), model_for(ModelKind::Sustained, c),
                                           model_for(ModelKind::Lanchester, c)};
    models.push_back(CombatModel(ModelKind::Decreasing, static_dpf(c), TargetSelectionPolicy::random(77)));
    for (const auto& m : models)
        for (int i = 0; i < kCases; ++i) {
            Rng rng(splitmix64(1000 + static_cast<std::uint64_t>(i)));
            const auto s = random_state(c, rng);
            CAPTURE(i);
            CHECK(to_json(simulate(m, s, c)) == to_json(simulate(m, s, c)));
        }
}

TEST_CASE("unit order inside an army does not matter") {
    const Catalog c = synthetic_catalog();
    for (auto kind : kModels) {
        const auto m = model_for(kind, c);
        for (int i = 0; i < kCases; ++i) {
            Rng rng(splitmix64(2000 + static_cast<std::uint64_t>(i)));
            const auto s = random_state(c, rng);
            auto p = s;
            shuffle(p.army_a, rng);
            shuffle(p.army_b, rng);
            const auto x = simulate(m, s, c), y = simulate(m, p, c);
            CAPTURE(i);
            CHECK(x.winner == y.winner);
            CHECK(x.duration_frames == doctest::Approx(y.duration_frames));
            CHECK(same_units(x.survivors_a, y.survivors_a));
            CHECK(same_units(x.survivors_b, y.survivors_b));
        }
    }
}

TEST_CASE("decreasing survivors are wounded initial units of the winner") {
    const Catalog c = synthetic_catalog();
    const auto m = model_for(ModelKind::Decreasing, c);
    for (int i = 0; i < kCases; ++i) {
        Rng rng(splitmix64(3000 + static_cast<std::uint64_t>(i)));
        const auto s = random_state(c, rng, 3);
        const auto out = simulate(m, s, c);
        CAPTURE(i);
        std::map<Uid, double> initial;
        for (const auto* army : {&s.army_a, &s.army_b})
            for (const auto& u : *army) initial[u.uid] = u.health();
        for (const auto* army : {&out.survivors_a, &out.survivors_b})
            for (const auto& u : *army) {
                REQUIRE(initial.count(u.uid));
                CHECK(u.health() > 0.0);
                CHECK(u.health() <= initial[u.uid] + 1e-9);
            }
        if (out.winner == Winner::A) CHECK(out.survivors_b.empty());
        if (out.winner == Winner::B) CHECK(out.survivors_a.empty());
        CHECK(out.kills.size() + out.survivors_a.size() + out.survivors_b.size() == initial.size());
        for (std::size_t k = 1; k < out.kills.size(); ++k) CHECK(out.kills[k - 1].frame <= out.kills[k].frame);
    }
}

TEST_CASE("lanchester invariant holds along the trajectory") {
    for (int i = 0; i < kCases; ++i) {
        Rng rng(splitmix64(4000 + static_cast<std::uint64_t>(i)));
        const double alpha = uniform_real(rng, 0.001, 0.1), beta = uniform_real(rng, 0.001, 0.1);
        const double a0 = uniform_real(rng, 1, 50), b0 = uniform_real(rng, 1, 50);
        const auto p = LanchesterParams::from_rates(alpha, beta);
        const double end = lanchester_end_time(a0, b0, p);
        const double t = uniform_real(rng, 0.0, std::isfinite(end) ? end : 100.0);
        const auto at = lanchester_counts_at(a0, b0, p, t);
        CAPTURE(i);
        CHECK(beta * at.a * at.a - alpha * at.b * at.b ==
              doctest::Approx(beta * a0 * a0 - alpha * b0 * b0).epsilon(1e-7).scale(std::max(a0 * a0, b0 * b0) * 0.1));
        CHECK(at.a <= a0 + 1e-9);
        CHECK(at.b <= b0 + 1e-9);
    }
}

TEST_CASE("similarity lies in [0, 1] and is 1 on a perfect prediction") {
    const Catalog c = synthetic_catalog();
    const auto m = model_for(ModelKind::Decreasing, c);
    const auto l = model_for(ModelKind::Lanchester, c);
    for (int i = 0; i < kCases; ++i) {
        Rng rng(splitmix64(5000 + static_cast<std::uint64_t>(i)));
        const auto s = random_state(c, rng);
        const auto x = simulate(m, s, c), y = simulate(l, s, c);
        const CombatState fx{x.survivors_a, x.survivors_b}, fy{y.survivors_a, y.survivors_b};
        const double sim = final_state_similarity(s, fx, fy);
        CAPTURE(i);
        CHECK(sim >= 0.0);
        CHECK(sim <= 1.0);
        CHECK(final_state_similarity(s, fx, fx) == 1.0);
        CHECK(final_state_similarity(s, fx, fy) == final_state_similarity(s, fy, fx));
    }
}

TEST_CASE("combat state and record json round trip") {
    const Catalog c = synthetic_catalog();
    for (int i = 0; i < kCases; ++i) {
        Rng rng(splitmix64(6000 + static_cast<std::uint64_t>(i)));
        auto s = random_state(c, rng);
        for (auto& u : s.army_a)
            if (bernoulli(rng, 0.5)) u.pos = Position{uniform_real(rng, -100, 100), uniform_real(rng, 0, 1e4)};
        CAPTURE(i);
        CHECK(to_json(combat_state_from_json(Json::parse(to_json(s).dump()))) == to_json(s));
        const auto out = tick_oracle_simulate(s, static_dpf(c).per_pair, TargetSelectionPolicy::destroy_score(), c);
        CombatRecord r;
        r.t0 = static_cast<long>(uniform_index(rng, 100000));
        r.tf = r.t0 + static_cast<long>(std::ceil(out.duration_frames));
        r.a0 = s.army_a;
        r.b0 = s.army_b;
        r.af = out.survivors_a;
        r.bf = out.survivors_b;
        for (auto k : out.kills) r.kills.push_back({k.frame + static_cast<double>(r.t0), k.uid});
        CHECK(to_json(combat_record_from_json(Json::parse(to_json(r).dump()))) == to_json(r));
    }
}

TEST_CASE("detection recovers generated fights") {
    const Catalog c = synthetic_catalog();
    OracleDatasetOptions opt;
    opt.n_records = 3 * kCases;
    opt.seed = 91;
    opt.combat.max_types_per_side = 2;
    auto ds = oracle_dataset(c, static_dpf(c).per_pair, TargetSelectionPolicy::destroy_score(), opt);
    // range closure only reaches units a participant can shoot at, so keep
    // fights where every unit can hit every enemy
    auto reaches = [&](const Army& from, const Army& to) {
        for (const auto& u : from)
            for (const auto& v : to)
                if (!c.can_target(u.type_id, v.type_id)) return false;
        return true;
    };
    std::erase_if(ds.records, [&](const CombatRecord& r) { return !reaches(r.a0, r.b0) || !reaches(r.b0, r.a0); });
    REQUIRE(ds.records.size() >= static_cast<std::size_t>(kCases));
    ds.records.resize(kCases);
    const auto found = detect_combats(trace_from_records(ds.records, c, c.id()), c);
    REQUIRE(found.size() == ds.records.size());
    for (std::size_t i = 0; i < found.size(); ++i) {
        const auto& a = ds.records[i];
        const auto& b = found[i];
        CAPTURE(i);
        CHECK(b.reason == EndReason::ArmyDestroyed);
        CHECK(uids(a.a0) == uids(b.a0));
        CHECK(uids(a.b0) == uids(b.b0));
        CHECK(uids(a.af) == uids(b.af));
        CHECK(uids(a.bf) == uids(b.bf));
        CHECK(actual_winner(a) == actual_winner(b));
        CHECK(a.kills.size() == b.kills.size());
    }
}

TEST_CASE("folds partition any dataset size") {
    for (int i = 0; i < kCases; ++i) {
        Rng rng(splitmix64(7000 + static_cast<std::uint64_t>(i)));
        const std::size_t k = 2 + uniform_index(rng, 9);
        const std::size_t n = k + uniform_index(rng, 60);
        CombatDataset ds;
        ds.records.resize(n);
        const auto split = make_folds(ds, k, rng());
        std::vector<std::size_t> counts(k, 0);
        for (auto f : split.assignments) ++counts[f];
        CAPTURE(i);
        CHECK(*std::max_element(counts.begin(), counts.end()) - *std::min_element(counts.begin(), counts.end()) <= 1);
        std::size_t total = 0;
        for (std::size_t f = 0; f < k; ++f) {
            const auto [train, eval] = train_eval_split(ds, split, f);
            CHECK(train.records.size() + eval.records.size() == n);
            total += eval.records.size();
        }
        CHECK(total == n);
    }
}

TEST_CASE("learned dpf is non-negative and zero where no attack is possible") {
    const Catalog c = synthetic_catalog();
    OracleDatasetOptions opt;
    opt.n_records = kCases;
    opt.seed = 17;
    opt.combat.max_types_per_side = 3;
    const auto ds = oracle_dataset(c, static_dpf(c).per_pair, TargetSelectionPolicy::destroy_score(), opt);
    const auto t = learn_dpf(ds, c);
    for (TypeId i = 0; i < static_cast<TypeId>(c.size()); ++i)
        for (TypeId j = 0; j < static_cast<TypeId>(c.size()); ++j) {
            CHECK(t.per_pair(i, j) >= 0.0);
            if (!c.can_target(i, j)) CHECK(t.per_pair(i, j) == 0.0);
        }
    // learning is additive over records: splitting the dataset does not change sums
    DpfAccumulators whole(c.size()), halves(c.size()), second(c.size());
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        whole.add_record(ds.records[i], c);
        (i % 2 ? second : halves).add_record(ds.records[i], c);
    }
    halves += second;
    CHECK(whole.damage_to_type.isApprox(halves.damage_to_type));
    CHECK(whole.time_attacking_type.isApprox(halves.time_attacking_type));
}

TEST_CASE("forward model invariants on random play") {
    const Catalog c = broodwar();
    const auto start = diamond_start(c);
    const auto m = model_for(ModelKind::Decreasing, c);
    Rng rng(99);
    auto s = start;
    for (int i = 0; i < kCases; ++i) {
        if (s.terminal() || s.frame > 20000) s = start;
        CAPTURE(i);
        for (int p = 0; p < 2; ++p) {
            const auto legal = legal_actions(s, p, c);
            BigCount product(1);
            for (const auto& options : legal) product *= static_cast<std::uint32_t>(options.size());
            CHECK(product == branching_factor(s, p, c));
        }
        const auto a = random_policy(s, 0, c, rng), b = random_policy(s, 1, c, rng);
        const auto next = step(s, a, b, m, c);
        CHECK(next.frame > s.frame);
        CHECK(next.total_size(0) <= s.total_size(0));
        CHECK(next.total_size(1) <= s.total_size(1));
        CHECK_NOTHROW(validate_state(next, c));
        const double e = evaluate_state(next, c);
        CHECK(e >= -1.0);
        CHECK(e <= 1.0);
        CHECK(to_json(state_from_json(Json::parse(to_json(next).dump()), next.graph)) == to_json(next));
        s = next;
    }
}

TEST_CASE("evaluation is antisymmetric in the players") {
    const Catalog c = broodwar();
    const auto start = diamond_start(c);
    const auto m = model_for(ModelKind::Decreasing, c);
    Rng rng(5);
    auto s = start;
    for (int i = 0; i < kCases; ++i) {
        if (s.terminal() || s.frame > 20000) s = start;
        auto mirrored = s;
        for (auto& g : mirrored.groups) g.player = 1 - g.player;
        canonicalize(mirrored);
        CAPTURE(i);
        CHECK(evaluate_state(mirrored, c) == doctest::Approx(-evaluate_state(s, c)));
        s = step(s, random_policy(s, 0, c, rng), random_policy(s, 1, c, rng), m, c);
    }
}

TEST_CASE("learned model json round trip") {
    const Catalog c = synthetic_catalog();
    for (int i = 0; i < kCases; ++i) {
        Rng rng(splitmix64(8000 + static_cast<std::uint64_t>(i)));
        LearnedModel m;
        m.catalog_ref = c.id();
        m.dpf.per_pair = perturbed_dpf(c, rng, 0.5);
        m.dpf.provenance = DpfProvenance::Learned;
        refresh_domain_vectors(m.dpf, c);
        std::array<Eigen::VectorXd, 3> scores;
        for (auto& v : scores) {
            v.resize(static_cast<Eigen::Index>(c.size()));
            for (auto& x : v) x = uniform_real(rng, 0.0, 5.0);
        }
        m.borda = TargetSelectionPolicy::borda(scores);
        m.n_records = uniform_index(rng, 5000);
        m.source = "case " + std::to_string(i);
        const auto back = learned_model_from_json(Json::parse(to_json(m).dump()), c);
        CAPTURE(i);
        CHECK(to_json(back) == to_json(m));
        CHECK(back.dpf.per_pair == m.dpf.per_pair);
    }
}
