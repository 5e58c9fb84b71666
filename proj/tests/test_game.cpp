#include "doctest.h"
#include "support.hpp"

using namespace attrition;
using namespace testing;

namespace {

HighLevelState table1(const Catalog& c) {
    auto graph = graph_of("fixtures/table1_map.json", Abstraction::RC_MB);
    auto s = state_from_json(read_json_file(data_path("fixtures/table1_state.json")), graph);
    validate_state(s, c);
    return s;
}

HighLevelState bare(const Catalog& c, std::vector<Group> groups, Abstraction a = Abstraction::RC_MB) {
    HighLevelState s;
    s.graph = graph_of("maps/diamond6.json", a);
    s.abstraction = a;
    s.groups = std::move(groups);
    canonicalize(s);
    validate_state(s, c);
    return s;
}

Group grp(int player, TypeId type, int size, double hp, int region) {
    Group g;
    g.player = player;
    g.type_id = type;
    g.size = size;
    g.avg_hp = hp;
    g.region = region;
    return g;
}

CombatModel decreasing(const Catalog& c) {
    return CombatModel(ModelKind::Decreasing, static_dpf(c), TargetSelectionPolicy::destroy_score());
}

}  // namespace

TEST_CASE("region graph with and without chokepoint nodes") {
    const auto rc = graph_of("maps/diamond6.json", Abstraction::RC_MB);
    const auto r = graph_of("maps/diamond6.json", Abstraction::R_MB);
    CHECK(rc->neighbors(0) == std::vector<int>{6});
    CHECK(r->neighbors(0) == std::vector<int>{1});
    CHECK_FALSE(r->active(6));
    CHECK(rc->active(6));
    CHECK(rc->hops(0, 5) == 6);
    CHECK(r->hops(0, 5) == 4);
    CHECK(r->hops(2, 3) == 2);
    CHECK(rc->adjacent(1, 2));
    CHECK_FALSE(rc->adjacent(0, 1));
    bool exact = false;
    CHECK(rc->locate({610, 1000}, &exact) == 6);
    CHECK(exact);
    CHECK(r->locate({610, 1000}) == 1);
    CHECK(rc->locate({1500, 3000}, &exact) == 3);
    CHECK_FALSE(exact);
    CHECK(rc->distance(1, 2) == doctest::Approx(std::hypot(600.0, 500.0)));
}

TEST_CASE("maps are validated") {
    MapSpec m = load_map(data_path("maps/diamond6.json"));
    m.edges.push_back({0, 0});
    CHECK_THROWS_AS(validate_map(m), ValidationError);
    m = load_map(data_path("maps/diamond6.json"));
    m.edges.pop_back();  // 7-5 gone: region 5 unreachable
    CHECK_THROWS_AS(RegionGraph(m, Abstraction::RC_MB), ValidationError);
    CHECK(point_in_polygon({1, 1}, {{0, 0}, {2, 0}, {2, 2}, {0, 2}}));
    CHECK_FALSE(point_in_polygon({3, 1}, {{0, 0}, {2, 0}, {2, 2}, {0, 2}}));
    CHECK(map_from_json(to_json(m)).regions.size() == m.regions.size());
}

TEST_CASE("base, tanks and vultures give six joint actions") {
    const Catalog c = broodwar();
    const auto s = table1(c);
    const auto legal = legal_actions(s, 0, c);
    REQUIRE(legal.size() == 3);
    CHECK(legal[0].size() == 1);
    CHECK(legal[0][0].action == GroupAction::NA);
    CHECK(legal[1].size() == 3);
    CHECK(legal[2].size() == 2);
    CHECK(branching_factor(s, 0, c) == BigCount(6));
    CHECK(branching_factor(s, 0, c).to_string() == "6");
}

TEST_CASE("busy groups keep their action") {
    const Catalog c = broodwar();
    auto s = table1(c);
    s.frame = 100;  // tanks still moving, vultures still idling
    CHECK(branching_factor(s, 0, c) == BigCount(1));
    s.frame = 300;  // tanks arrived
    CHECK(branching_factor(s, 0, c) == BigCount(3));
}

TEST_CASE("attack is legal only with an enemy in the region") {
    const Catalog c = broodwar();
    const TypeId marine = *c.find("Marine");
    const auto s = bare(c, {grp(0, marine, 3, 40, 1), grp(1, marine, 2, 40, 1)});
    const auto legal = legal_actions(s, 0, c);
    REQUIRE(legal.size() == 1);
    CHECK(legal[0].size() == 5);  // move to 6, 2, 3; attack; idle
    CHECK(std::any_of(legal[0].begin(), legal[0].end(), [](const GroupCommand& g) { return g.action == GroupAction::Attack; }));
    const auto t = table1(c);
    CHECK_THROWS_AS(validate_actions(t, 0, {{1, GroupAction::Attack, -1}}, c), ValidationError);
    CHECK_THROWS_AS(validate_actions(t, 0, {{1, GroupAction::Move, 0}}, c), ValidationError);
    CHECK_THROWS_AS(validate_actions(t, 0, {{3, GroupAction::Idle, -1}}, c), ValidationError);
    CHECK_THROWS_AS(validate_actions(t, 0, {{1, GroupAction::Move, 1}, {2, GroupAction::Idle, -1}}, c), ValidationError);
    CHECK_NOTHROW(validate_actions(t, 0, {{0, GroupAction::NA, -1}, {1, GroupAction::Move, 1}, {2, GroupAction::Idle, -1}}, c));
    CHECK_NOTHROW(validate_actions(t, 0, {}, c));
}

TEST_CASE("big counts multiply past 64 bits") {
    BigCount b(1);
    for (int i = 0; i < 30; ++i) b *= 1000;
    CHECK(b.to_string() == "1" + std::string(90, '0'));
    CHECK_FALSE(b.fits_u64());
    BigCount small(7);
    small *= 6;
    CHECK(small.fits_u64());
    CHECK(small.to_u64() == 42);
}

TEST_CASE("moving takes distance over speed") {
    const Catalog c = broodwar();
    const TypeId marine = *c.find("Marine");
    auto s = bare(c, {grp(0, marine, 3, 40, 1), grp(1, marine, 2, 40, 5)});
    const auto next = step(s, {{0, GroupAction::Move, 2}}, {}, decreasing(c), c);
    const long travel = static_cast<long>(std::ceil(std::hypot(600.0, 500.0) / 4.0));
    CHECK(next.frame == travel);
    const auto moved = std::find_if(next.groups.begin(), next.groups.end(), [](const Group& g) { return g.player == 0; });
    CHECK(moved->region == 2);
}

TEST_CASE("attacking resolves the fight in the region") {
    const Catalog c = broodwar();
    const TypeId marine = *c.find("Marine");
    auto s = bare(c, {grp(0, marine, 6, 40, 2), grp(1, marine, 2, 40, 2)});
    const auto next = advance_segment(s, {{0, GroupAction::Attack, 2}}, {}, decreasing(c), c, 400);
    CHECK(next.eliminated(1));
    CHECK(next.total_size(0) >= 5);
    CHECK(next.terminal());
    CHECK(evaluate_state(next, c) == doctest::Approx(1.0));
}

TEST_CASE("harmless units fall to the winner, invincible ones sit out") {
    const Catalog c = broodwar();
    const TypeId wraith = *c.find("Wraith"), vulture = *c.find("Vulture"), cc = *c.find("Command Center"),
                 marine = *c.find("Marine");
    auto s = bare(c, {grp(0, wraith, 1, 120, 2), grp(1, vulture, 3, 80, 2)});
    auto fight = resolve_region_combat(s, 2, decreasing(c), c);
    CHECK(fight.winner == Winner::A);
    CHECK(s.eliminated(1));
    CHECK(s.groups[0].avg_hp == doctest::Approx(120.0));

    Group base = grp(0, cc, 1, 1500, 1);
    base.action = GroupAction::NA;
    s = bare(c, {base, grp(1, marine, 4, 40, 1)});
    fight = resolve_region_combat(s, 1, decreasing(c), c);
    CHECK(fight.winner == Winner::B);
    CHECK(s.eliminated(0));
    CHECK(s.total_size(1) == 4);
}

TEST_CASE("canonical form merges same player, type and region") {
    const Catalog c = broodwar();
    const TypeId marine = *c.find("Marine");
    HighLevelState s;
    s.graph = graph_of("maps/diamond6.json", Abstraction::RC_MB);
    s.groups = {grp(1, marine, 1, 40, 4), grp(0, marine, 2, 40, 1), grp(0, marine, 2, 20, 1)};
    canonicalize(s);
    REQUIRE(s.groups.size() == 2);
    CHECK(s.groups[0].player == 0);
    CHECK(s.groups[0].size == 4);
    CHECK(s.groups[0].avg_hp == doctest::Approx(30.0));
}

TEST_CASE("abstraction from the scenario") {
    const Catalog c = broodwar();
    const auto s = diamond_start(c);
    CHECK(s.groups.size() == 8);
    CHECK(s.total_size(0) == 11);
    CHECK(evaluate_state(s, c) == doctest::Approx(0.0));
    const auto units = expand_groups(s, c);
    CHECK(units.size() == 22);
    const auto again = abstract_from_units(units, s.graph, s.abstraction, c);
    CHECK(to_json(again) == to_json(s));
}

TEST_CASE("buildings other than bases only count with the all-buildings variants") {
    const Catalog c = broodwar();
    const TypeId barracks = *c.find("Barracks"), marine = *c.find("Marine"), scv = *c.find("SCV");
    std::vector<PlacedUnit> units{{0, full(0, c[barracks])}, {0, full(1, c[marine])}, {0, full(2, c[scv])}};
    for (auto& u : units) u.unit.pos = Position{900, 1000};
    const auto mb = abstract_from_units(units, graph_of("maps/diamond6.json", Abstraction::RC_MB), Abstraction::RC_MB, c);
    const auto ma = abstract_from_units(units, graph_of("maps/diamond6.json", Abstraction::RC_MA), Abstraction::RC_MA, c);
    CHECK(mb.groups.size() == 1);
    CHECK(ma.groups.size() == 2);
}

TEST_CASE("state json round trip") {
    const Catalog c = broodwar();
    const auto s = table1(c);
    CHECK(to_json(state_from_json(to_json(s), s.graph)) == to_json(s));
}

TEST_CASE("scripted player walks toward the enemy and attacks on contact") {
    const Catalog c = broodwar();
    const auto s = table1(c);
    const auto orders = scripted_policy(s, 0, c);
    REQUIRE(orders.size() == 3);
    CHECK(orders[1].action == GroupAction::Move);
    CHECK(orders[1].target_region == 1);
    CHECK(orders[2].target_region == 2);
    const TypeId marine = *c.find("Marine");
    const auto meet = bare(c, {grp(0, marine, 3, 40, 2), grp(1, marine, 2, 40, 2)});
    CHECK(scripted_policy(meet, 1, c)[0].action == GroupAction::Attack);
}

TEST_CASE("random player only issues legal orders") {
    const Catalog c = broodwar();
    const auto s = diamond_start(c);
    Rng rng(3);
    for (int i = 0; i < 50; ++i) CHECK_NOTHROW(validate_actions(s, i % 2, random_policy(s, i % 2, c, rng), c));
    CHECK(random_policy(s, 0, c, 9) == random_policy(s, 0, c, 9));
}
