#include "attrition/mcts.hpp"

#include <algorithm>

namespace attrition {

namespace {

struct Node {
    HighLevelState state;
    int mover = 0;
    bool has_pending = false;  // the other player already committed `pending` at this ply
    PlayerActionSet pending;
    PlayerActionSet edge;  // action that led here from the parent
    int parent = -1;
    int depth = 0;
    std::vector<int> children;
    int visits = 0;
    double total = 0.0;  // sum of rewards from A's point of view
};

class Tree {
public:
    Tree(const HighLevelState& root, int player, const MctsConfig& cfg, const CombatModel& model,
         const Catalog& catalog)
        : cfg_(cfg), model_(model), catalog_(catalog), rng_(splitmix64(cfg.seed ^ 0x6d637473ULL)) {
        Node n;
        n.state = root;
        n.mover = player;
        nodes_.push_back(std::move(n));
        nodes_.reserve(static_cast<std::size_t>(cfg.playout_budget) + 1);
    }

    void iterate() {
        std::vector<int> path{0};
        int cur = 0;
        while (true) {
            const Node& node = nodes_[cur];
            if (node.state.terminal() || node.depth >= cfg_.max_tree_depth) break;
            if (node.children.empty()) {
                cur = expand(cur, random_policy(node.state, node.mover, catalog_, rng_));
                path.push_back(cur);
                break;
            }
            if (bernoulli(rng_, cfg_.epsilon)) {
                PlayerActionSet a = random_policy(node.state, node.mover, catalog_, rng_);
                const int known = find_child(cur, a);
                if (known < 0) {
                    cur = expand(cur, std::move(a));
                    path.push_back(cur);
                    break;
                }
                cur = known;
            } else {
                cur = best_child(cur);
            }
            path.push_back(cur);
        }
        const double reward = rollout(cur);
        for (int n : path) {
            ++nodes_[n].visits;
            nodes_[n].total += reward;
        }
    }

    SearchResult result(int iterations) const {
        SearchResult r;
        r.iterations = iterations;
        r.nodes = nodes_.size();
        int best = -1;
        for (int c : nodes_[0].children) {
            r.root_visits.emplace_back(nodes_[c].edge, nodes_[c].visits);
            if (best < 0 || nodes_[c].visits > nodes_[best].visits) best = c;
        }
        if (best >= 0) r.best = nodes_[best].edge;
        return r;
    }

private:
    int find_child(int n, const PlayerActionSet& a) const {
        for (int c : nodes_[n].children)
            if (nodes_[c].edge == a) return c;
        return -1;
    }

    // highest mean for the node's mover; ties keep the first expanded
    int best_child(int n) const {
        const double sign = nodes_[n].mover == 0 ? 1.0 : -1.0;
        int best = -1;
        double best_v = -kInfinity;
        for (int c : nodes_[n].children) {
            const auto& ch = nodes_[c];
            const double v = ch.visits ? sign * ch.total / ch.visits : 0.0;
            if (v > best_v) {
                best_v = v;
                best = c;
            }
        }
        return best;
    }

    HighLevelState joint_step(const HighLevelState& s, int first, const PlayerActionSet& first_action,
                              const PlayerActionSet& second_action) const {
        const auto& a = first == 0 ? first_action : second_action;
        const auto& b = first == 0 ? second_action : first_action;
        return advance_segment_trusted(s, a, b, model_, catalog_, s.frame + cfg_.plan_interval);
    }

    int expand(int n, PlayerActionSet action) {
        Node child;
        const Node& parent = nodes_[n];
        child.parent = n;
        child.depth = parent.depth + 1;
        child.mover = 1 - parent.mover;
        if (!parent.has_pending) {
            child.state = parent.state;
            child.has_pending = true;
            child.pending = action;
        } else {
            child.state = joint_step(parent.state, child.mover, parent.pending, action);
        }
        child.edge = std::move(action);
        nodes_.push_back(std::move(child));
        const int id = static_cast<int>(nodes_.size()) - 1;
        nodes_[n].children.push_back(id);
        return id;
    }

    double rollout(int n) {
        const Node& node = nodes_[n];
        HighLevelState s = node.state;
        if (node.has_pending && !s.terminal())
            s = joint_step(s, 1 - node.mover, node.pending, random_policy(s, node.mover, catalog_, rng_));
        const long end = s.frame + cfg_.playout_length;
        while (!s.terminal() && s.frame < end) {
            const auto a = random_policy(s, 0, catalog_, rng_);
            const auto b = random_policy(s, 1, catalog_, rng_);
            s = advance_segment_trusted(s, a, b, model_, catalog_, std::min(end, s.frame + cfg_.plan_interval));
        }
        return evaluate_state(s, catalog_);
    }

    const MctsConfig& cfg_;
    const CombatModel& model_;
    const Catalog& catalog_;
    Rng rng_;
    std::vector<Node> nodes_;
};

}  // namespace

void validate_config(const MctsConfig& cfg) {
    if (!(cfg.epsilon >= 0.0 && cfg.epsilon <= 1.0)) throw ValidationError("epsilon must lie in [0, 1]");
    if (cfg.max_tree_depth <= 0 || cfg.playout_length <= 0 || cfg.playout_budget <= 0 || cfg.plan_interval <= 0)
        throw ValidationError("search budgets must be positive");
}

SearchResult search(const HighLevelState& root, int player, const MctsConfig& cfg, const CombatModel& model,
                    const Catalog& catalog) {
    validate_config(cfg);
    if (player != 0 && player != 1) throw ValidationError("player must be 0 or 1");
    if (root.terminal()) return {};
    Tree tree(root, player, cfg, model, catalog);
    for (int i = 0; i < cfg.playout_budget; ++i) tree.iterate();
    return tree.result(cfg.playout_budget);
}

}  // namespace attrition
