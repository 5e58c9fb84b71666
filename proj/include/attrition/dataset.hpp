#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "attrition/core.hpp"
#include "attrition/models.hpp"
#include "attrition/serialization.hpp"

namespace attrition {

// ---------------------------------------------------------------------------
// Unit-event traces

enum class EventKind { Spawn, Death, OrderAttack, Damage, Move, GameEnd };
const char* to_string(EventKind k);
EventKind event_kind_from_string(std::string_view s);

struct TraceEvent {
    long frame = 0;
    EventKind kind = EventKind::Spawn;
    Uid uid = 0;
    int player = 0;
    TypeId type_id = 0;
    std::optional<Position> pos;
    std::optional<Uid> target_uid;  // OrderAttack, Damage
    double amount = 0.0;            // Damage
    std::optional<double> hp;       // Spawn; defaults to the type's max
    std::optional<double> shield;   // Spawn; defaults to the type's max
};

struct Trace {
    std::string catalog_ref;
    std::vector<TraceEvent> events;
};

/// Newline-delimited JSON: a header line {"format_version", "catalog_ref"}
/// followed by one event object per line.
Trace read_trace(std::istream& in);
Trace load_trace(const std::filesystem::path& path);
void write_trace(const Trace& trace, std::ostream& out);

// ---------------------------------------------------------------------------
// Combat records

enum class EndReason { ArmyDestroyed, Peace, Reinforcement, GameEnd };
const char* to_string(EndReason r);
EndReason end_reason_from_string(std::string_view s);

struct CombatRecord {
    long t0 = 0;
    long tf = 0;
    EndReason reason = EndReason::ArmyDestroyed;
    Army a0, b0, af, bf;
    std::vector<Kill> kills;  // ordered by frame
    std::vector<Uid> passive;

    CombatState initial_state() const { return {a0, b0}; }
    long length() const { return tf - t0; }
};

/// Label read off the end state: the side with survivors wins, nobody left is
/// a draw, survivors on both sides is a stalemate (not a finished fight).
Winner actual_winner(const CombatRecord& r);

void validate_record(const CombatRecord& r);

struct CombatDataset {
    std::vector<CombatRecord> records;
    std::string catalog_ref;
    std::string source;
};

void validate_dataset(const CombatDataset& ds, const Catalog& catalog);

Json to_json(const CombatRecord& r);
CombatRecord combat_record_from_json(const Json& j);
/// {"format_version", "catalog_ref", "source", "records": [...]}
Json to_json(const CombatDataset& ds);
CombatDataset combat_dataset_from_json(const Json& j);
CombatDataset load_dataset(const std::filesystem::path& path);
void save_dataset(const CombatDataset& ds, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Detection, filtering, statistics

inline constexpr long kDefaultPeaceWindow = 144;  // 6 s at 24 fps

struct DetectOptions {
    long peace_window = kDefaultPeaceWindow;
};

std::vector<CombatRecord> detect_combats(const Trace& trace, const Catalog& catalog, const DetectOptions& options = {});

struct TrainingFilter {
    std::vector<TypeId> excluded_types;
};

/// Types whose name mentions a mine (their splash hits friends too).
std::vector<TypeId> default_excluded_types(const Catalog& catalog);
TrainingFilter default_training_filter(const Catalog& catalog);

/// Keeps ArmyDestroyed records without excluded types where both sides fought.
CombatDataset filter_for_training(const CombatDataset& ds, const TrainingFilter& filter);

struct RangeStat {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct DatasetStats {
    std::size_t n_records = 0;
    std::array<std::size_t, 4> by_reason{};  // indexed by EndReason
    RangeStat length;
    RangeStat units;
    RangeStat types;
};

DatasetStats dataset_stats(const CombatDataset& ds);
Json to_json(const DatasetStats& s);

}  // namespace attrition
