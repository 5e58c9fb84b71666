#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "attrition/game.hpp"

namespace attrition {

enum class SimultaneousPolicy { Alt };

struct MctsConfig {
    double epsilon = 0.2;
    int max_tree_depth = 10;
    long playout_length = 2880;
    int playout_budget = 10000;
    SimultaneousPolicy simultaneous = SimultaneousPolicy::Alt;
    long plan_interval = 400;
    std::uint64_t seed = 0;
};

void validate_config(const MctsConfig& cfg);

struct SearchResult {
    PlayerActionSet best;
    std::vector<std::pair<PlayerActionSet, int>> root_visits;  // in expansion order
    int iterations = 0;
    std::size_t nodes = 0;
};

/// ε-greedy MCTS with Alt resolution of the simultaneous move: even plies let
/// `player` commit, odd plies the opponent, and the state advances one planning
/// segment once both have. Node values are kept from player A's point of view
/// and read with the sign of the node's mover.
SearchResult search(const HighLevelState& root, int player, const MctsConfig& cfg, const CombatModel& model,
                    const Catalog& catalog);

// ---------------------------------------------------------------------------
// Matches

enum class AgentKind { Mcts, Scripted, Random };
const char* to_string(AgentKind k);
AgentKind agent_kind_from_string(std::string_view s);

struct AgentSpec {
    AgentKind kind = AgentKind::Random;
    MctsConfig mcts;
    CombatModel model;  // forward model used by the search
};

enum class MatchOutcome { WinA, WinB, Draw, Timeout };
const char* to_string(MatchOutcome o);

struct MatchConfig {
    long max_frames = 28800;
    long plan_interval = 400;
    std::uint64_t seed = 0;
    int game_index = 0;
};

struct MatchResult {
    MatchOutcome outcome = MatchOutcome::Timeout;
    double final_eval = 0.0;  // player A's view
    long length = 0;
    int cycles = 0;
};

/// Plays `initial` forward in plan_interval segments, asking each agent for
/// orders at every boundary. `world` resolves the fights of the actual game.
/// When `log` is set, one JSON line per planning cycle is written to it.
MatchResult play_match(const HighLevelState& initial, const AgentSpec& a, const AgentSpec& b,
                       const CombatModel& world, const Catalog& catalog, const MatchConfig& cfg,
                       std::ostream* log = nullptr);

struct MatchSummary {
    std::string agent_a;
    std::string agent_b;
    std::string model;
    std::size_t games = 0;
    double avg_eval = 0.0;
    double win_pct = 0.0;
    double loss_pct = 0.0;
    double avg_length = 0.0;
};

MatchSummary summarize(const std::vector<MatchResult>& results, std::string agent_a, std::string agent_b,
                       std::string model);
/// agent_a,agent_b,model,games,avg_eval,win_pct,loss_pct,avg_length
std::string match_csv_header();
std::string to_csv_row(const MatchSummary& s);
Json to_json(const MatchSummary& s);
Json to_json(const MatchResult& r);

}  // namespace attrition
