#include "attrition/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_set>

namespace attrition {

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::Spawn: return "spawn";
        case EventKind::Death: return "death";
        case EventKind::OrderAttack: return "order_attack";
        case EventKind::Damage: return "damage";
        case EventKind::Move: return "move";
        case EventKind::GameEnd: return "game_end";
    }
    return "?";
}

EventKind event_kind_from_string(std::string_view s) {
    if (s == "spawn") return EventKind::Spawn;
    if (s == "death") return EventKind::Death;
    if (s == "order_attack") return EventKind::OrderAttack;
    if (s == "damage") return EventKind::Damage;
    if (s == "move") return EventKind::Move;
    if (s == "game_end") return EventKind::GameEnd;
    throw ValidationError("unknown event kind '" + std::string(s) + "'");
}

const char* to_string(EndReason r) {
    switch (r) {
        case EndReason::ArmyDestroyed: return "army_destroyed";
        case EndReason::Peace: return "peace";
        case EndReason::Reinforcement: return "reinforcement";
        case EndReason::GameEnd: return "game_end";
    }
    return "?";
}

EndReason end_reason_from_string(std::string_view s) {
    if (s == "army_destroyed") return EndReason::ArmyDestroyed;
    if (s == "peace") return EndReason::Peace;
    if (s == "reinforcement") return EndReason::Reinforcement;
    if (s == "game_end") return EndReason::GameEnd;
    throw ValidationError("unknown end reason '" + std::string(s) + "'");
}

// --- traces ---------------------------------------------------------------

namespace {

Json event_to_json(const TraceEvent& e) {
    Json j = {{"frame", e.frame}, {"kind", to_string(e.kind)}};
    if (e.kind != EventKind::GameEnd) {
        j["uid"] = e.uid;
        j["player"] = e.player;
        j["type_id"] = e.type_id;
    }
    if (e.pos) {
        j["x"] = e.pos->x;
        j["y"] = e.pos->y;
    }
    if (e.target_uid) j["target_uid"] = *e.target_uid;
    if (e.kind == EventKind::Damage) j["amount"] = e.amount;
    if (e.hp) j["hp"] = *e.hp;
    if (e.shield) j["shield"] = *e.shield;
    return j;
}

TraceEvent event_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("expected an event object");
    TraceEvent e;
    e.frame = j.at("frame").get<long>();
    e.kind = event_kind_from_string(j.at("kind").get<std::string>());
    e.uid = j.value("uid", Uid{0});
    e.player = j.value("player", 0);
    e.type_id = j.value("type_id", 0);
    if (j.contains("x") && j.contains("y")) e.pos = Position{j["x"].get<double>(), j["y"].get<double>()};
    if (j.contains("target_uid")) e.target_uid = j["target_uid"].get<Uid>();
    e.amount = j.value("amount", 0.0);
    if (j.contains("hp")) e.hp = j["hp"].get<double>();
    if (j.contains("shield")) e.shield = j["shield"].get<double>();
    return e;
}

}  // namespace

Trace read_trace(std::istream& in) {
    Trace trace;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const Json::parse_error& e) {
            throw ValidationError("trace line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!have_header) {
            check_format_version(j, "trace header");
            trace.catalog_ref = j.value("catalog_ref", std::string{});
            have_header = true;
            continue;
        }
        try {
            trace.events.push_back(event_from_json(j));
        } catch (const Json::exception& e) {
            throw ValidationError("trace line " + std::to_string(line_no) + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError("trace line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!have_header) throw ValidationError("trace: missing header line");
    return trace;
}

Trace load_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    return read_trace(in);
}

void write_trace(const Trace& trace, std::ostream& out) {
    out << Json{{"format_version", kFormatVersion}, {"catalog_ref", trace.catalog_ref}}.dump() << '\n';
    for (const auto& e : trace.events) out << event_to_json(e).dump() << '\n';
}

// --- records --------------------------------------------------------------

Winner actual_winner(const CombatRecord& r) {
    if (r.af.empty() && r.bf.empty()) return Winner::Draw;
    if (r.bf.empty()) return Winner::A;
    if (r.af.empty()) return Winner::B;
    return Winner::Stalemate;
}

void validate_record(const CombatRecord& r) {
    if (r.t0 > r.tf) throw ValidationError("record: t0 > tf");
    std::unordered_set<Uid> a_ids, b_ids;
    for (const auto& u : r.a0) a_ids.insert(u.uid);
    for (const auto& u : r.b0) {
        if (a_ids.count(u.uid)) throw ValidationError("record: uid in both armies");
        b_ids.insert(u.uid);
    }
    for (const auto& u : r.af)
        if (!a_ids.count(u.uid)) throw ValidationError("record: af is not a subset of a0");
    for (const auto& u : r.bf)
        if (!b_ids.count(u.uid)) throw ValidationError("record: bf is not a subset of b0");
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& k : r.kills) {
        if (!a_ids.count(k.uid) && !b_ids.count(k.uid)) throw ValidationError("record: killed uid not in a0 or b0");
        if (k.frame < prev) throw ValidationError("record: kills not ordered by frame");
        prev = k.frame;
    }
    if (r.reason == EndReason::ArmyDestroyed && !r.af.empty() && !r.bf.empty())
        throw ValidationError("record: army_destroyed with survivors on both sides");
}

void validate_dataset(const CombatDataset& ds, const Catalog& catalog) {
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        const auto& r = ds.records[i];
        try {
            validate_record(r);
            for (const Army* army : {&r.a0, &r.b0})
                for (const auto& u : *army) (void)catalog[u.type_id];
        } catch (const ValidationError& e) {
            throw ValidationError("record " + std::to_string(i) + ": " + e.what());
        }
    }
}

Json to_json(const CombatRecord& r) {
    Json kills = Json::array();
    for (const auto& k : r.kills) kills.push_back({{"frame", k.frame}, {"uid", k.uid}});
    return {{"t0", r.t0},
            {"tf", r.tf},
            {"reason", to_string(r.reason)},
            {"a0", to_json(r.a0)},
            {"b0", to_json(r.b0)},
            {"af", to_json(r.af)},
            {"bf", to_json(r.bf)},
            {"kills", kills},
            {"passive", r.passive}};
}

CombatRecord combat_record_from_json(const Json& j) {
    try {
        CombatRecord r;
        r.t0 = j.at("t0").get<long>();
        r.tf = j.at("tf").get<long>();
        r.reason = end_reason_from_string(j.at("reason").get<std::string>());
        r.a0 = army_from_json(j.at("a0"));
        r.b0 = army_from_json(j.at("b0"));
        r.af = army_from_json(j.at("af"));
        r.bf = army_from_json(j.at("bf"));
        for (const auto& k : j.at("kills")) r.kills.push_back({k.at("frame").get<double>(), k.at("uid").get<Uid>()});
        r.passive = j.value("passive", std::vector<Uid>{});
        return r;
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("record: ") + e.what());
    }
}

Json to_json(const CombatDataset& ds) {
    Json records = Json::array();
    for (const auto& r : ds.records) records.push_back(to_json(r));
    return {{"format_version", kFormatVersion},
            {"catalog_ref", ds.catalog_ref},
            {"source", ds.source},
            {"records", std::move(records)}};
}

CombatDataset combat_dataset_from_json(const Json& j) {
    check_format_version(j, "dataset");
    CombatDataset ds;
    ds.catalog_ref = j.value("catalog_ref", std::string{});
    ds.source = j.value("source", std::string{});
    if (!j.contains("records") || !j["records"].is_array()) throw ValidationError("dataset: missing 'records' array");
    ds.records.reserve(j["records"].size());
    std::size_t i = 0;
    for (const auto& r : j["records"]) {
        try {
            ds.records.push_back(combat_record_from_json(r));
        } catch (const ValidationError& e) {
            throw ValidationError("dataset record " + std::to_string(i) + ": " + e.what());
        }
        ++i;
    }
    return ds;
}

CombatDataset load_dataset(const std::filesystem::path& path) { return combat_dataset_from_json(read_json_file(path)); }

void save_dataset(const CombatDataset& ds, const std::filesystem::path& path) {
    write_text_file(path, to_json(ds).dump() + "\n");
}

// --- filtering & stats ----------------------------------------------------

std::vector<TypeId> default_excluded_types(const Catalog& catalog) {
    std::vector<TypeId> out;
    for (const auto& t : catalog.types()) {
        std::string lower = t.name;
        std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
        if (lower.find("mine") != std::string::npos) out.push_back(t.type_id);
    }
    return out;
}

TrainingFilter default_training_filter(const Catalog& catalog) { return {default_excluded_types(catalog)}; }

namespace {

bool all_passive(const Army& army, const std::unordered_set<Uid>& passive) {
    return std::all_of(army.begin(), army.end(), [&](const Unit& u) { return passive.count(u.uid) > 0; });
}

}  // namespace

CombatDataset filter_for_training(const CombatDataset& ds, const TrainingFilter& filter) {
    CombatDataset out;
    out.catalog_ref = ds.catalog_ref;
    out.source = ds.source;
    const std::set<TypeId> excluded(filter.excluded_types.begin(), filter.excluded_types.end());
    for (const auto& r : ds.records) {
        if (r.reason != EndReason::ArmyDestroyed) continue;
        auto has_excluded = [&](const Army& army) {
            return std::any_of(army.begin(), army.end(), [&](const Unit& u) { return excluded.count(u.type_id) > 0; });
        };
        if (has_excluded(r.a0) || has_excluded(r.b0)) continue;
        const std::unordered_set<Uid> passive(r.passive.begin(), r.passive.end());
        if (all_passive(r.a0, passive) || all_passive(r.b0, passive)) continue;
        out.records.push_back(r);
    }
    return out;
}

DatasetStats dataset_stats(const CombatDataset& ds) {
    DatasetStats s;
    s.n_records = ds.records.size();
    if (ds.records.empty()) return s;
    auto first = true;
    auto update = [&](RangeStat& st, double v) {
        st.mean += v;
        if (first || v < st.min) st.min = v;
        if (first || v > st.max) st.max = v;
    };
    for (const auto& r : ds.records) {
        ++s.by_reason[static_cast<std::size_t>(r.reason)];
        std::set<TypeId> types;
        for (const auto& u : r.a0) types.insert(u.type_id);
        for (const auto& u : r.b0) types.insert(u.type_id);
        update(s.length, static_cast<double>(r.length()));
        update(s.units, static_cast<double>(r.a0.size() + r.b0.size()));
        update(s.types, static_cast<double>(types.size()));
        first = false;
    }
    const double n = static_cast<double>(ds.records.size());
    s.length.mean /= n;
    s.units.mean /= n;
    s.types.mean /= n;
    return s;
}

Json to_json(const DatasetStats& s) {
    auto range = [](const RangeStat& r) { return Json{{"mean", r.mean}, {"min", r.min}, {"max", r.max}}; };
    Json reasons = Json::object();
    for (std::size_t i = 0; i < s.by_reason.size(); ++i) reasons[to_string(static_cast<EndReason>(i))] = s.by_reason[i];
    return {{"format_version", kFormatVersion},
            {"records", s.n_records},
            {"by_reason", reasons},
            {"length_frames", range(s.length)},
            {"units_per_combat", range(s.units)},
            {"types_per_combat", range(s.types)}};
}

}  // namespace attrition
