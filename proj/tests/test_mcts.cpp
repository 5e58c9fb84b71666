#include <sstream>

#include "doctest.h"
#include "support.hpp"

using namespace attrition;
using namespace testing;

namespace {

CombatModel decreasing(const Catalog& c) {
    return CombatModel(ModelKind::Decreasing, static_dpf(c), TargetSelectionPolicy::destroy_score());
}

MctsConfig small(std::uint64_t seed) {
    MctsConfig cfg;
    cfg.playout_budget = 200;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("config validation") {
    MctsConfig cfg;
    CHECK_NOTHROW(validate_config(cfg));
    cfg.epsilon = 1.5;
    CHECK_THROWS_AS(validate_config(cfg), ValidationError);
    cfg = {};
    cfg.playout_budget = 0;
    CHECK_THROWS_AS(validate_config(cfg), ValidationError);
    cfg = {};
    cfg.max_tree_depth = 0;
    CHECK_THROWS_AS(validate_config(cfg), ValidationError);
}

TEST_CASE("search is deterministic for a seed and returns a legal set") {
    const Catalog c = broodwar();
    const auto s = diamond_start(c);
    const auto a = search(s, 0, small(11), decreasing(c), c);
    const auto b = search(s, 0, small(11), decreasing(c), c);
    CHECK(a.best == b.best);
    CHECK(a.iterations == 200);
    CHECK(a.nodes > 1);
    CHECK_NOTHROW(validate_actions(s, 0, a.best, c));
    int visits = 0;
    for (const auto& [set, n] : a.root_visits) visits += n;
    CHECK(visits == a.iterations);
}

TEST_CASE("search attacks a weaker army in its own region") {
    const Catalog c = broodwar();
    const TypeId tank = *c.find("Siege Tank"), marine = *c.find("Marine");
    HighLevelState s;
    s.graph = graph_of("maps/diamond6.json", Abstraction::RC_MB);
    Group mine;
    mine.player = 0;
    mine.type_id = tank;
    mine.size = 4;
    mine.avg_hp = 150;
    mine.region = 2;
    Group theirs = mine;
    theirs.player = 1;
    theirs.type_id = marine;
    theirs.size = 2;
    theirs.avg_hp = 40;
    s.groups = {mine, theirs};
    canonicalize(s);
    auto cfg = small(4);
    cfg.playout_budget = 500;
    const auto r = search(s, 0, cfg, decreasing(c), c);
    REQUIRE(r.best.size() == 1);
    CHECK(r.best[0].action == GroupAction::Attack);
}

TEST_CASE("a short match runs and logs each cycle") {
    const Catalog c = broodwar();
    const auto s = diamond_start(c);
    AgentSpec a{AgentKind::Mcts, small(1), decreasing(c)};
    AgentSpec b{AgentKind::Random, {}, decreasing(c)};
    MatchConfig mc;
    mc.max_frames = 2000;
    mc.seed = 8;
    std::ostringstream log;
    const auto r = play_match(s, a, b, decreasing(c), c, mc, &log);
    CHECK(r.cycles >= 1);
    CHECK(r.length <= 2000);
    std::istringstream lines(log.str());
    int n = 0;
    for (std::string line; std::getline(lines, line); ++n) {
        const auto j = Json::parse(line);
        CHECK(j.contains("frame"));
        CHECK(j["players"].size() == 2);
    }
    CHECK(n == r.cycles);
    const auto again = play_match(s, a, b, decreasing(c), c, mc);
    CHECK(again.final_eval == r.final_eval);
    CHECK(again.length == r.length);
}

TEST_CASE("scripted beats random more often than not") {
    const Catalog c = broodwar();
    const auto s = diamond_start(c);
    AgentSpec a{AgentKind::Scripted, {}, decreasing(c)};
    AgentSpec b{AgentKind::Random, {}, decreasing(c)};
    std::vector<MatchResult> results;
    for (int i = 0; i < 10; ++i) {
        MatchConfig mc;
        mc.seed = static_cast<std::uint64_t>(i);
        results.push_back(play_match(s, a, b, decreasing(c), c, mc));
    }
    const auto sum = summarize(results, "scripted", "random", "decreasing");
    CHECK(sum.games == 10);
    CHECK(sum.win_pct + sum.loss_pct <= 100.0);
    CHECK(sum.avg_eval > 0.0);
    CHECK(to_csv_row(sum).rfind("scripted,random,decreasing,10,", 0) == 0);
}

TEST_CASE("agent and outcome names") {
    CHECK(agent_kind_from_string("mcts") == AgentKind::Mcts);
    CHECK_THROWS_AS(agent_kind_from_string("human"), ValidationError);
    CHECK(std::string(to_string(MatchOutcome::Timeout)) == "timeout");
    CHECK(match_csv_header() == "agent_a,agent_b,model,games,avg_eval,win_pct,loss_pct,avg_length");
}
