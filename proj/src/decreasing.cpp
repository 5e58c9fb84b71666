#include <cmath>

#include "attrition/models.hpp"

namespace attrition {

namespace {

double dpf_against(const Army& attackers, const Unit& target, const Eigen::MatrixXd& per_pair) {
    double sum = 0.0;
    for (const Unit& u : attackers) sum += per_pair(u.type_id, target.type_id);
    return sum;
}

}  // namespace

CombatOutcome decreasing_simulate(const CombatState& state, const Eigen::MatrixXd& per_pair,
                                  const TargetSelectionPolicy& policy, const Catalog& catalog) {
    const auto k = static_cast<Eigen::Index>(catalog.size());
    if (per_pair.rows() != k || per_pair.cols() != k) throw ValidationError("dpf matrix does not match catalog size");

    CombatOutcome out;
    out.model = ModelKind::Decreasing;
    Army a = sorted_targets(policy, state.army_a, state.army_b, catalog);
    Army b = sorted_targets(policy, state.army_b, state.army_a, catalog);
    std::size_t i = 0;  // A's unit that B is trying to kill
    std::size_t j = 0;  // B's unit that A is trying to kill
    double elapsed = 0.0;

    while (!a.empty() && !b.empty()) {
        // skip targets nobody alive can damage; attackers only ever die, so a
        // skipped unit stays unkillable
        double dpf_on_b = 0.0, dpf_on_a = 0.0;
        for (; j < b.size(); ++j)
            if ((dpf_on_b = dpf_against(a, b[j], per_pair)) > 0.0) break;
        for (; i < a.size(); ++i)
            if ((dpf_on_a = dpf_against(b, a[i], per_pair)) > 0.0) break;
        const double t_b = j < b.size() ? b[j].health() / dpf_on_b : kInfinity;  // A kills B[j]
        const double t_a = i < a.size() ? a[i].health() / dpf_on_a : kInfinity;  // B kills A[i]
        if (std::isinf(t_a) && std::isinf(t_b)) break;

        if (nearly_equal(t_a, t_b)) {
            elapsed += std::min(t_a, t_b);
            out.kills.push_back({elapsed, a[i].uid});
            out.kills.push_back({elapsed, b[j].uid});
            a.erase(a.begin() + static_cast<std::ptrdiff_t>(i));
            b.erase(b.begin() + static_cast<std::ptrdiff_t>(j));
        } else if (t_b < t_a) {
            elapsed += t_b;
            if (i < a.size()) apply_damage(a[i], dpf_on_a * t_b);
            out.kills.push_back({elapsed, b[j].uid});
            b.erase(b.begin() + static_cast<std::ptrdiff_t>(j));
        } else {
            elapsed += t_a;
            if (j < b.size()) apply_damage(b[j], dpf_on_b * t_a);
            out.kills.push_back({elapsed, a[i].uid});
            a.erase(a.begin() + static_cast<std::ptrdiff_t>(i));
        }
    }

    out.duration_frames = elapsed;
    if (a.empty() && b.empty())
        out.winner = Winner::Draw;
    else if (a.empty())
        out.winner = Winner::B;
    else if (b.empty())
        out.winner = Winner::A;
    else
        out.winner = Winner::Stalemate;
    out.survivors_a = std::move(a);
    out.survivors_b = std::move(b);
    return out;
}

CombatOutcome decreasing_simulate(const CombatState& state, const DpfTable& dpf, const TargetSelectionPolicy& policy,
                                  const Catalog& catalog) {
    return decreasing_simulate(state, dpf.per_pair, policy, catalog);
}

CombatOutcome decreasing_simulate(const CombatState& state, const DpfVector& dpf, const TargetSelectionPolicy& policy,
                                  const Catalog& catalog) {
    return decreasing_simulate(state, expand_dpf_vector(dpf, catalog), policy, catalog);
}

}  // namespace attrition
