#include <ostream>
#include <sstream>

#include "attrition/mcts.hpp"

namespace attrition {

const char* to_string(AgentKind k) {
    switch (k) {
        case AgentKind::Mcts: return "mcts";
        case AgentKind::Scripted: return "scripted";
        case AgentKind::Random: return "random";
    }
    return "?";
}

AgentKind agent_kind_from_string(std::string_view s) {
    for (auto k : {AgentKind::Mcts, AgentKind::Scripted, AgentKind::Random})
        if (s == to_string(k)) return k;
    throw ValidationError("unknown agent '" + std::string(s) + "'");
}

const char* to_string(MatchOutcome o) {
    switch (o) {
        case MatchOutcome::WinA: return "A";
        case MatchOutcome::WinB: return "B";
        case MatchOutcome::Draw: return "draw";
        case MatchOutcome::Timeout: return "timeout";
    }
    return "?";
}

MatchResult play_match(const HighLevelState& initial, const AgentSpec& a, const AgentSpec& b,
                       const CombatModel& world, const Catalog& catalog, const MatchConfig& cfg, std::ostream* log) {
    if (cfg.max_frames <= 0 || cfg.plan_interval <= 0) throw ValidationError("match: frame limits must be positive");
    validate_state(initial, catalog);
    const std::array<const AgentSpec*, 2> agents{&a, &b};
    std::array<Rng, 2> rngs{Rng(splitmix64(cfg.seed * 2 + 1)), Rng(splitmix64(cfg.seed * 2 + 2))};

    HighLevelState s = initial;
    MatchResult result;
    const long start = s.frame;
    while (!s.terminal() && s.frame - start < cfg.max_frames) {
        std::array<PlayerActionSet, 2> orders;
        Json players = Json::array();
        for (int p = 0; p < 2; ++p) {
            const auto& agent = *agents[p];
            Json visits = Json::array();
            switch (agent.kind) {
                case AgentKind::Random: orders[p] = random_policy(s, p, catalog, rngs[p]); break;
                case AgentKind::Scripted: orders[p] = scripted_policy(s, p, catalog); break;
                case AgentKind::Mcts: {
                    if (branching_factor(s, p, catalog) == BigCount(1)) {
                        orders[p] = random_policy(s, p, catalog, rngs[p]);
                        break;
                    }
                    MctsConfig mc = agent.mcts;
                    mc.seed = splitmix64(agent.mcts.seed ^ splitmix64(cfg.seed * 1000003 + result.cycles * 2 + p));
                    const auto found = search(s, p, mc, agent.model, catalog);
                    orders[p] = found.best;
                    if (log)
                        for (const auto& [set, n] : found.root_visits) visits.push_back({{"visits", n}, {"actions", to_json(set, s)}});
                    break;
                }
            }
            if (log) players.push_back({{"agent", to_string(agent.kind)}, {"actions", to_json(orders[p], s)}, {"root_visits", visits}});
        }
        if (log)
            *log << Json{{"game", cfg.game_index}, {"frame", s.frame}, {"eval", evaluate_state(s, catalog)}, {"players", players}}.dump()
                 << '\n';
        const long horizon = std::min(s.frame + cfg.plan_interval, start + cfg.max_frames);
        s = advance_segment(s, orders[0], orders[1], world, catalog, horizon);
        ++result.cycles;
    }
    result.length = s.frame - start;
    result.final_eval = evaluate_state(s, catalog);
    const bool a_gone = s.eliminated(0), b_gone = s.eliminated(1);
    result.outcome = a_gone && b_gone ? MatchOutcome::Draw
                     : b_gone         ? MatchOutcome::WinA
                     : a_gone         ? MatchOutcome::WinB
                                      : MatchOutcome::Timeout;
    return result;
}

MatchSummary summarize(const std::vector<MatchResult>& results, std::string agent_a, std::string agent_b,
                       std::string model) {
    MatchSummary s{std::move(agent_a), std::move(agent_b), std::move(model)};
    s.games = results.size();
    if (results.empty()) return s;
    for (const auto& r : results) {
        s.avg_eval += r.final_eval;
        s.win_pct += r.outcome == MatchOutcome::WinA;
        s.loss_pct += r.outcome == MatchOutcome::WinB;
        s.avg_length += static_cast<double>(r.length);
    }
    const double n = static_cast<double>(results.size());
    s.avg_eval /= n;
    s.win_pct *= 100.0 / n;
    s.loss_pct *= 100.0 / n;
    s.avg_length /= n;
    return s;
}

std::string match_csv_header() { return "agent_a,agent_b,model,games,avg_eval,win_pct,loss_pct,avg_length"; }

std::string to_csv_row(const MatchSummary& s) {
    std::ostringstream os;
    os.precision(6);
    os << s.agent_a << ',' << s.agent_b << ',' << s.model << ',' << s.games << ',' << s.avg_eval << ',' << s.win_pct
       << ',' << s.loss_pct << ',' << s.avg_length;
    return os.str();
}

Json to_json(const MatchSummary& s) {
    return {{"agent_a", s.agent_a},   {"agent_b", s.agent_b},   {"model", s.model},
            {"games", s.games},       {"avg_eval", s.avg_eval}, {"win_pct", s.win_pct},
            {"loss_pct", s.loss_pct}, {"avg_length", s.avg_length}};
}

Json to_json(const MatchResult& r) {
    return {{"outcome", to_string(r.outcome)}, {"final_eval", r.final_eval}, {"length", r.length}, {"cycles", r.cycles}};
}

}  // namespace attrition
