#include <algorithm>
#include <cmath>
#include <deque>

#include "attrition/game.hpp"

namespace attrition {

const char* to_string(Abstraction a) {
    switch (a) {
        case Abstraction::R_MB: return "R-MB";
        case Abstraction::R_MA: return "R-MA";
        case Abstraction::RC_MB: return "RC-MB";
        case Abstraction::RC_MA: return "RC-MA";
    }
    return "?";
}

Abstraction abstraction_from_string(std::string_view s) {
    for (auto a : {Abstraction::R_MB, Abstraction::R_MA, Abstraction::RC_MB, Abstraction::RC_MA})
        if (s == to_string(a)) return a;
    throw ValidationError("unknown abstraction '" + std::string(s) + "'");
}

bool point_in_polygon(const Position& p, const std::vector<Position>& poly) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const auto& a = poly[i];
        const auto& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) inside = !inside;
    }
    return inside;
}

void validate_map(const MapSpec& map) {
    const int n = static_cast<int>(map.regions.size());
    if (n == 0) throw ValidationError("map: no regions");
    for (int i = 0; i < n; ++i)
        if (map.regions[i].id != i) throw ValidationError("map: region ids must be dense and ordered (0..n-1)");
    for (const auto& [a, b] : map.edges) {
        if (a < 0 || b < 0 || a >= n || b >= n || a == b)
            throw ValidationError("map: bad edge " + std::to_string(a) + "-" + std::to_string(b));
    }
    for (const auto& r : map.regions)
        if (!r.polygon.empty() && r.polygon.size() < 3) throw ValidationError("map: polygon needs 3+ vertices");
}

Json to_json(const MapSpec& map) {
    Json regions = Json::array();
    for (const auto& r : map.regions) {
        Json poly = Json::array();
        for (const auto& p : r.polygon) poly.push_back({p.x, p.y});
        regions.push_back({{"id", r.id},
                           {"kind", r.kind == RegionKind::Region ? "region" : "chokepoint"},
                           {"center", {r.center.x, r.center.y}},
                           {"polygon", poly}});
    }
    Json edges = Json::array();
    for (const auto& [a, b] : map.edges) edges.push_back({a, b});
    return {{"format_version", kFormatVersion}, {"name", map.name}, {"regions", regions}, {"edges", edges}};
}

MapSpec map_from_json(const Json& j) {
    check_format_version(j, "map");
    MapSpec map;
    map.name = j.value("name", std::string("map"));
    try {
        for (const auto& r : j.at("regions")) {
            RegionSpec spec;
            spec.id = r.at("id").get<int>();
            const auto kind = r.value("kind", std::string("region"));
            if (kind != "region" && kind != "chokepoint") throw ValidationError("map: unknown region kind " + kind);
            spec.kind = kind == "region" ? RegionKind::Region : RegionKind::Chokepoint;
            spec.center = {r.at("center").at(0).get<double>(), r.at("center").at(1).get<double>()};
            for (const auto& p : r.value("polygon", Json::array())) spec.polygon.push_back({p.at(0), p.at(1)});
            map.regions.push_back(std::move(spec));
        }
        for (const auto& e : j.at("edges")) map.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("map: ") + e.what());
    }
    std::sort(map.regions.begin(), map.regions.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    validate_map(map);
    return map;
}

MapSpec load_map(const std::filesystem::path& path) { return map_from_json(read_json_file(path)); }

RegionGraph::RegionGraph(const MapSpec& map, Abstraction abstraction) : nodes_(map.regions) {
    validate_map(map);
    const std::size_t n = nodes_.size();
    const bool chokes = with_chokepoints(abstraction);
    active_.resize(n);
    for (std::size_t i = 0; i < n; ++i) active_[i] = chokes || nodes_[i].kind == RegionKind::Region;

    std::vector<std::vector<int>> full(n);
    for (const auto& [a, b] : map.edges) {
        full[a].push_back(b);
        full[b].push_back(a);
    }
    adjacency_.assign(n, {});
    for (std::size_t r = 0; r < n; ++r) {
        if (!active_[r]) continue;
        if (chokes) {
            adjacency_[r] = full[r];
        } else {
            // walk through chokepoints to the regions on their other side
            std::vector<bool> seen(n, false);
            std::deque<int> queue{static_cast<int>(r)};
            seen[r] = true;
            while (!queue.empty()) {
                const int cur = queue.front();
                queue.pop_front();
                for (int nb : full[cur]) {
                    if (seen[nb]) continue;
                    seen[nb] = true;
                    if (active_[nb]) adjacency_[r].push_back(nb);
                    else queue.push_back(nb);
                }
            }
        }
        std::sort(adjacency_[r].begin(), adjacency_[r].end());
        adjacency_[r].erase(std::unique(adjacency_[r].begin(), adjacency_[r].end()), adjacency_[r].end());
    }

    hops_.assign(n * n, -1);
    for (std::size_t s = 0; s < n; ++s) {
        if (!active_[s]) continue;
        std::deque<int> queue{static_cast<int>(s)};
        hops_[s * n + s] = 0;
        while (!queue.empty()) {
            const int cur = queue.front();
            queue.pop_front();
            for (int nb : adjacency_[cur]) {
                if (hops_[s * n + nb] >= 0) continue;
                hops_[s * n + nb] = hops_[s * n + cur] + 1;
                queue.push_back(nb);
            }
        }
    }
    const auto first = std::find(active_.begin(), active_.end(), true) - active_.begin();
    for (std::size_t i = 0; i < n; ++i)
        if (active_[i] && hops_[first * n + i] < 0) throw ValidationError("map: region graph is not connected");
}

bool RegionGraph::adjacent(int a, int b) const {
    const auto& nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
}

double RegionGraph::distance(int a, int b) const {
    const auto& p = region(a).center;
    const auto& q = region(b).center;
    return std::hypot(p.x - q.x, p.y - q.y);
}

int RegionGraph::locate(const Position& p, bool* exact) const {
    // chokepoints are carved out of the regions around them, so test them first
    for (RegionKind kind : {RegionKind::Chokepoint, RegionKind::Region}) {
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (!active_[i] || nodes_[i].kind != kind || nodes_[i].polygon.empty()) continue;
            if (point_in_polygon(p, nodes_[i].polygon)) {
                if (exact) *exact = true;
                return static_cast<int>(i);
            }
        }
    }
    int best = -1;
    double best_d = kInfinity;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!active_[i]) continue;
        const double d = std::hypot(p.x - nodes_[i].center.x, p.y - nodes_[i].center.y);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    if (exact) *exact = false;
    return best;
}

}  // namespace attrition
