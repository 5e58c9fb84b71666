#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "attrition/models.hpp"
#include "attrition/rng.hpp"
#include "attrition/serialization.hpp"

namespace attrition {

inline constexpr long kIdleFrames = 400;

// ---------------------------------------------------------------------------
// Maps

enum class RegionKind { Region, Chokepoint };

enum class Abstraction { R_MB, R_MA, RC_MB, RC_MA };
const char* to_string(Abstraction a);
Abstraction abstraction_from_string(std::string_view s);
inline bool with_chokepoints(Abstraction a) { return a == Abstraction::RC_MB || a == Abstraction::RC_MA; }
inline bool with_all_buildings(Abstraction a) { return a == Abstraction::R_MA || a == Abstraction::RC_MA; }

struct RegionSpec {
    int id = 0;
    RegionKind kind = RegionKind::Region;
    Position center;
    std::vector<Position> polygon;  // may be empty; membership then falls back to the nearest center
};

/// Variant-independent map: regions and chokepoints with the adjacency of the
/// full decomposition (chokepoints are nodes between regions).
struct MapSpec {
    std::string name;
    std::vector<RegionSpec> regions;  // ids are dense 0..n-1
    std::vector<std::pair<int, int>> edges;
};

void validate_map(const MapSpec& map);
Json to_json(const MapSpec& map);
MapSpec map_from_json(const Json& j);
MapSpec load_map(const std::filesystem::path& path);

/// Region graph for one abstraction. Without chokepoints, chokepoint nodes are
/// inactive and the regions they joined become adjacent.
class RegionGraph {
public:
    RegionGraph(const MapSpec& map, Abstraction abstraction);

    std::size_t size() const { return nodes_.size(); }
    const RegionSpec& region(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
    bool active(int id) const { return id >= 0 && static_cast<std::size_t>(id) < active_.size() && active_[id]; }
    const std::vector<int>& neighbors(int id) const { return adjacency_.at(static_cast<std::size_t>(id)); }
    bool adjacent(int a, int b) const;
    double distance(int a, int b) const;
    /// Hop distance between active regions, -1 when unreachable.
    int hops(int a, int b) const { return hops_[static_cast<std::size_t>(a) * nodes_.size() + b]; }
    /// Active region containing p, or the nearest active center (`exact` reports which).
    int locate(const Position& p, bool* exact = nullptr) const;

private:
    std::vector<RegionSpec> nodes_;
    std::vector<bool> active_;
    std::vector<std::vector<int>> adjacency_;
    std::vector<int> hops_;
};

bool point_in_polygon(const Position& p, const std::vector<Position>& polygon);

// ---------------------------------------------------------------------------
// High-level state

enum class GroupAction { NA, Move, Attack, Idle };
const char* to_string(GroupAction a);
GroupAction group_action_from_string(std::string_view s);

struct Group {
    int player = 0;
    TypeId type_id = 0;
    int size = 1;
    double avg_hp = 1.0;
    int region = 0;
    GroupAction action = GroupAction::Idle;
    int target_region = -1;
    long end_frame = 0;

    bool busy(long frame) const { return action != GroupAction::NA && end_frame > frame; }
};

struct HighLevelState {
    long frame = 0;
    std::shared_ptr<const RegionGraph> graph;
    std::vector<Group> groups;  // canonical order: player, region, type
    Abstraction abstraction = Abstraction::RC_MB;

    bool eliminated(int player) const;
    bool terminal() const { return eliminated(0) || eliminated(1); }
    int total_size(int player) const;
};

void canonicalize(HighLevelState& state);
void validate_state(const HighLevelState& state, const Catalog& catalog);

Json to_json(const Group& g);
Group group_from_json(const Json& j);
/// {"format_version", "frame", "abstraction", "groups": [...]}
Json to_json(const HighLevelState& s);
HighLevelState state_from_json(const Json& j, std::shared_ptr<const RegionGraph> graph);

struct PlacedUnit {
    int player = 0;
    Unit unit;
};

/// Groups units by (player, type, region), keeping military non-workers plus
/// bases (MB) or all buildings (MA). Units outside every region go to the
/// nearest one and are reported in `warnings`.
HighLevelState abstract_from_units(const std::vector<PlacedUnit>& units, std::shared_ptr<const RegionGraph> graph,
                                   Abstraction abstraction, const Catalog& catalog,
                                   std::vector<std::string>* warnings = nullptr);

/// Inverse of abstract_from_units up to positions: `size` units at the region
/// center with health avg_hp each.
std::vector<PlacedUnit> expand_groups(const HighLevelState& state, const Catalog& catalog);

struct Scenario {
    std::string map;  // path relative to the scenario file
    Abstraction abstraction = Abstraction::RC_MB;
    std::vector<PlacedUnit> units;
};

/// {"format_version", "map", "abstraction", "units": [{player, type|type_id, x, y, count?, hp?}]}
Scenario scenario_from_json(const Json& j, const Catalog& catalog);
Scenario load_scenario(const std::filesystem::path& path, const Catalog& catalog);

// ---------------------------------------------------------------------------
// Actions

struct GroupCommand {
    std::size_t group = 0;  // index into state.groups
    GroupAction action = GroupAction::Idle;
    int target_region = -1;

    friend bool operator==(const GroupCommand&, const GroupCommand&) = default;
};

/// One command per friendly group in state order. Empty means "no new orders".
using PlayerActionSet = std::vector<GroupCommand>;

Json to_json(const PlayerActionSet& actions, const HighLevelState& state);

/// Per friendly group (in state order), the commands it may take.
std::vector<std::vector<GroupCommand>> legal_actions(const HighLevelState& state, int player, const Catalog& catalog);

/// Arbitrary-precision unsigned count (decimal limbs), enough for products of
/// per-group option counts.
class BigCount {
public:
    BigCount(std::uint64_t v = 1);
    BigCount& operator*=(std::uint32_t factor);
    std::string to_string() const;
    bool fits_u64() const;
    std::uint64_t to_u64() const;
    friend bool operator==(const BigCount&, const BigCount&) = default;

private:
    std::vector<std::uint32_t> limbs_;  // base 1e9, least significant first
};

BigCount branching_factor(const HighLevelState& state, int player, const Catalog& catalog);

void validate_actions(const HighLevelState& state, int player, const PlayerActionSet& actions, const Catalog& catalog);

// ---------------------------------------------------------------------------
// Forward model

struct RegionCombat {
    int region = 0;
    Winner winner = Winner::Stalemate;
    double duration = 0.0;
};

/// Resolves a fight among all groups in `region`: harmless and invincible
/// units sit out, the rest fight with `model`, then the winner clears the
/// loser's harmless units. Writes survivors back into state.groups.
RegionCombat resolve_region_combat(HighLevelState& state, int region, const CombatModel& model,
                                   const Catalog& catalog);

/// Applies both players' orders, fights in every contested region holding an
/// active Attack, then advances to the next action completion (or `horizon`
/// when earlier; kIdleFrames when nothing is pending).
HighLevelState step(const HighLevelState& state, const PlayerActionSet& actions_a, const PlayerActionSet& actions_b,
                    const CombatModel& model, const Catalog& catalog, long horizon = -1);

/// Orders at `state.frame`, then steps without new orders until `horizon` or
/// elimination.
HighLevelState advance_segment(const HighLevelState& state, const PlayerActionSet& actions_a,
                               const PlayerActionSet& actions_b, const CombatModel& model, const Catalog& catalog,
                               long horizon);

/// advance_segment without the legality check, for callers that build their
/// action sets from legal_actions (search playouts).
HighLevelState advance_segment_trusted(const HighLevelState& state, const PlayerActionSet& actions_a,
                                       const PlayerActionSet& actions_b, const CombatModel& model,
                                       const Catalog& catalog, long horizon);

// ---------------------------------------------------------------------------
// Baseline players

PlayerActionSet random_policy(const HighLevelState& state, int player, const Catalog& catalog, Rng& rng);
PlayerActionSet random_policy(const HighLevelState& state, int player, const Catalog& catalog, std::uint64_t seed);
/// Attack when an enemy shares the region, otherwise walk one hop toward the
/// enemy-held region closest to the player's army, Idle when no enemy is left.
PlayerActionSet scripted_policy(const HighLevelState& state, int player, const Catalog& catalog);

/// 2·score(A) / (score(A) + score(B)) − 1 with score = Σ size·destroy score;
/// 0 when both scores are 0. From player A's point of view.
double evaluate_state(const HighLevelState& state, const Catalog& catalog);

}  // namespace attrition
