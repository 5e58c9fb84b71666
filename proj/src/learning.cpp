#include "attrition/learning.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "attrition/rng.hpp"

namespace attrition {

namespace {

// Finds which initial army a uid belongs to.
std::optional<std::pair<const Unit*, int>> locate(const CombatRecord& r, Uid uid) {
    for (const auto& u : r.a0)
        if (u.uid == uid) return std::make_pair(&u, 0);
    for (const auto& u : r.b0)
        if (u.uid == uid) return std::make_pair(&u, 1);
    return std::nullopt;
}

}  // namespace

void DpfAccumulators::add_record(const CombatRecord& record, const Catalog& catalog) {
    std::array<double, 2> previous{static_cast<double>(record.t0), static_cast<double>(record.t0)};
    std::vector<Kill> kills = record.kills;
    std::stable_sort(kills.begin(), kills.end(), [](const Kill& a, const Kill& b) { return a.frame < b.frame; });
    for (const auto& kill : kills) {
        const auto found = locate(record, kill.uid);
        if (!found) throw ValidationError("kill of uid " + std::to_string(kill.uid) + " not in the initial armies");
        const auto [victim, player] = *found;
        const Army& enemy = player == 0 ? record.b0 : record.a0;
        const double elapsed = std::max(0.0, kill.frame - previous[player]);
        previous[player] = kill.frame;

        std::size_t eligible = 0;
        for (const auto& u : enemy) eligible += catalog.can_target(u.type_id, victim->type_id);
        if (eligible == 0) {
            ++skipped_kills;
            continue;
        }
        const double split = victim->health() / static_cast<double>(eligible);
        for (const auto& u : enemy) {
            if (!catalog.can_target(u.type_id, victim->type_id)) continue;
            damage_to_type(u.type_id, victim->type_id) += split;
            time_attacking_type(u.type_id, victim->type_id) += elapsed;
        }
    }
}

DpfAccumulators& DpfAccumulators::operator+=(const DpfAccumulators& other) {
    damage_to_type += other.damage_to_type;
    time_attacking_type += other.time_attacking_type;
    skipped_kills += other.skipped_kills;
    return *this;
}

DpfLearningResult learn_dpf_report(const CombatDataset& ds, const Catalog& catalog) {
    if (ds.records.empty()) throw ValidationError("cannot learn from an empty dataset");
    DpfAccumulators acc(catalog.size());
    for (const auto& r : ds.records) acc.add_record(r, catalog);

    DpfLearningResult out;
    const auto& time = acc.time_attacking_type;
    out.table.per_pair = (time.array() > 0.0).select(acc.damage_to_type.cwiseQuotient(time), 0.0);
    out.table.provenance = DpfProvenance::Learned;
    refresh_domain_vectors(out.table, catalog);
    out.attack_time = time;
    out.skipped_kills = acc.skipped_kills;
    for (TypeId i = 0; i < static_cast<TypeId>(catalog.size()); ++i)
        for (TypeId j = 0; j < static_cast<TypeId>(catalog.size()); ++j)
            if (catalog.can_target(i, j) && time(i, j) <= 0.0) out.uncovered.emplace_back(i, j);
    return out;
}

DpfTable learn_dpf(const CombatDataset& ds, const Catalog& catalog) { return learn_dpf_report(ds, catalog).table; }

BordaTally::BordaTally(std::size_t k) {
    for (auto& p : points) p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    for (auto& a : appearances) a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
}

void BordaTally::add_record(const CombatRecord& record, const Catalog& catalog) {
    std::vector<Kill> kills = record.kills;
    std::stable_sort(kills.begin(), kills.end(), [](const Kill& a, const Kill& b) { return a.frame < b.frame; });
    for (int player = 0; player < 2; ++player) {
        const Army& defenders = player == 0 ? record.a0 : record.b0;
        const Army& attackers = player == 0 ? record.b0 : record.a0;
        if (defenders.empty()) continue;
        const auto tally = static_cast<std::size_t>(composition_of(attackers, catalog));

        std::vector<TypeId> present;
        for (const auto& u : defenders)
            if (std::find(present.begin(), present.end(), u.type_id) == present.end()) present.push_back(u.type_id);
        const double n = static_cast<double>(present.size());
        for (TypeId t : present) appearances[tally](t) += 1.0;

        std::unordered_map<Uid, TypeId> type_of;
        for (const auto& u : defenders) type_of.emplace(u.uid, u.type_id);
        std::vector<TypeId> ranked;
        for (const auto& k : kills) {
            auto it = type_of.find(k.uid);
            if (it == type_of.end()) continue;
            if (std::find(ranked.begin(), ranked.end(), it->second) != ranked.end()) continue;
            points[tally](it->second) += n - 1.0 - static_cast<double>(ranked.size());
            ranked.push_back(it->second);
        }
    }
}

BordaTally& BordaTally::operator+=(const BordaTally& other) {
    for (std::size_t c = 0; c < 3; ++c) {
        points[c] += other.points[c];
        appearances[c] += other.appearances[c];
    }
    return *this;
}

std::array<Eigen::VectorXd, 3> BordaTally::averages() const {
    std::array<Eigen::VectorXd, 3> out;
    for (std::size_t c = 0; c < 3; ++c)
        out[c] = (appearances[c].array() > 0.0).select(points[c].cwiseQuotient(appearances[c]), 0.0);
    return out;
}

double BordaTally::total_points() const {
    double s = 0.0;
    for (const auto& p : points) s += p.sum();
    return s;
}

TargetSelectionPolicy learn_borda_policy(const CombatDataset& ds, const Catalog& catalog) {
    BordaTally tally(catalog.size());
    bool any_kill = false;
    for (const auto& r : ds.records) {
        tally.add_record(r, catalog);
        any_kill = any_kill || !r.kills.empty();
    }
    if (!any_kill) throw ValidationError("no kills in the dataset; cannot rank targets");
    return TargetSelectionPolicy::borda(tally.averages());
}

FoldSplit make_folds(const CombatDataset& ds, std::size_t fold_count, std::uint64_t seed) {
    if (fold_count < 2) throw ValidationError("need at least 2 folds");
    if (ds.records.size() < fold_count) throw ValidationError("fewer records than folds");
    std::vector<std::size_t> order(ds.records.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(splitmix64(seed));
    shuffle(order, rng);
    FoldSplit split{fold_count, std::vector<std::size_t>(order.size()), seed};
    for (std::size_t pos = 0; pos < order.size(); ++pos) split.assignments[order[pos]] = pos % fold_count;
    return split;
}

std::pair<CombatDataset, CombatDataset> train_eval_split(const CombatDataset& ds, const FoldSplit& split,
                                                         std::size_t fold) {
    if (fold >= split.fold_count) throw ValidationError("fold " + std::to_string(fold) + " out of range");
    if (split.assignments.size() != ds.records.size()) throw ValidationError("fold split does not match dataset");
    CombatDataset train{{}, ds.catalog_ref, ds.source}, test{{}, ds.catalog_ref, ds.source};
    for (std::size_t i = 0; i < ds.records.size(); ++i)
        (split.assignments[i] == fold ? test : train).records.push_back(ds.records[i]);
    return {std::move(train), std::move(test)};
}

LearnedModel learn_model(const CombatDataset& ds, const Catalog& catalog) {
    auto report = learn_dpf_report(ds, catalog);
    LearnedModel m;
    m.catalog_ref = ds.catalog_ref.empty() ? catalog.id() : ds.catalog_ref;
    m.dpf = std::move(report.table);
    m.borda = learn_borda_policy(ds, catalog);
    m.source = ds.source;
    m.n_records = ds.records.size();
    m.uncovered = std::move(report.uncovered);
    return m;
}

Json to_json(const LearnedModel& m) {
    Json uncovered = Json::array();
    for (const auto& [i, j] : m.uncovered) uncovered.push_back({i, j});
    return {{"format_version", kFormatVersion},
            {"catalog_ref", m.catalog_ref},
            {"dpf_matrix", to_json(m.dpf.per_pair)},
            {"borda_scores",
             {{"ground_only", to_json(m.borda.borda_scores[0])},
              {"air_only", to_json(m.borda.borda_scores[1])},
              {"mixed", to_json(m.borda.borda_scores[2])}}},
            {"provenance",
             {{"dpf", m.dpf.provenance == DpfProvenance::Learned ? "learned" : "static"},
              {"source", m.source},
              {"n_records", m.n_records},
              {"uncovered_pairs", uncovered}}}};
}

LearnedModel learned_model_from_json(const Json& j, const Catalog& catalog) {
    check_format_version(j, "model file");
    LearnedModel m;
    m.catalog_ref = j.value("catalog_ref", std::string());
    if (!j.contains("dpf_matrix")) throw ValidationError("model file: missing dpf_matrix");
    m.dpf.per_pair = matrix_from_json(j["dpf_matrix"]);
    const auto k = static_cast<Eigen::Index>(catalog.size());
    if (m.dpf.per_pair.rows() != k || m.dpf.per_pair.cols() != k)
        throw ValidationError("model file: dpf_matrix is not " + std::to_string(k) + "x" + std::to_string(k));
    if ((m.dpf.per_pair.array() < 0.0).any()) throw ValidationError("model file: negative DPF entry");
    const auto& prov = j.value("provenance", Json::object());
    m.dpf.provenance = prov.value("dpf", std::string("learned")) == "static" ? DpfProvenance::Static
                                                                             : DpfProvenance::Learned;
    m.source = prov.value("source", std::string());
    m.n_records = prov.value("n_records", std::size_t{0});
    for (const auto& p : prov.value("uncovered_pairs", Json::array())) m.uncovered.emplace_back(p[0], p[1]);
    refresh_domain_vectors(m.dpf, catalog);
    m.borda = policy_from_json({{"kind", "borda"}, {"borda_scores", j.at("borda_scores")}});
    validate_policy(m.borda, catalog.size());
    return m;
}

LearnedModel load_model(const std::filesystem::path& path, const Catalog& catalog) {
    return learned_model_from_json(read_json_file(path), catalog);
}

void save_model(const LearnedModel& m, const std::filesystem::path& path) {
    write_text_file(path, to_json(m).dump(2) + "\n");
}

}  // namespace attrition
