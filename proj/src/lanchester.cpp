#include <cmath>

#include "attrition/models.hpp"

namespace attrition {

LanchesterParams LanchesterParams::from_rates(double alpha, double beta) {
    LanchesterParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.intensity = std::sqrt(alpha * beta);
    if (alpha > 0.0 && beta > 0.0) {
        p.r_alpha = std::sqrt(alpha / beta);
        p.r_beta = std::sqrt(beta / alpha);
    } else {
        p.r_alpha = alpha > 0.0 ? kInfinity : 0.0;
        p.r_beta = beta > 0.0 ? kInfinity : 0.0;
    }
    return p;
}

namespace {

// Average DPF `attacker` deals to `victim`, blending the air and ground means
// by the victim's mean health in each domain.
double blended_dpf(const ArmyAggregates& attacker, const ArmyAggregates& victim) {
    const double total = victim.avg_hp_air + victim.avg_hp_ground;
    if (!(total > 0.0)) return 0.0;
    return attacker.mean_dpf_air * (victim.avg_hp_air / total) + attacker.mean_dpf_ground * (victim.avg_hp_ground / total);
}

enum class Verdict { A, B, Draw, None };

Verdict square_law_verdict(double a0, double b0, const LanchesterParams& p) {
    if (p.alpha <= 0.0 && p.beta <= 0.0) return Verdict::None;
    if (p.alpha <= 0.0) return Verdict::A;
    if (p.beta <= 0.0) return Verdict::B;
    // |A0|/|B0| vs R_alpha, squared to stay exact for integer counts
    const double lhs = a0 * a0 * p.beta;
    const double rhs = b0 * b0 * p.alpha;
    if (nearly_equal(lhs, rhs)) return Verdict::Draw;
    return lhs > rhs ? Verdict::A : Verdict::B;
}

}  // namespace

LanchesterParams lanchester_params(const CombatState& state, const DpfVector& dpf, const Catalog& catalog) {
    const auto a = aggregate_army(state.army_a, dpf, catalog);
    const auto b = aggregate_army(state.army_b, dpf, catalog);
    const double alpha = a.avg_hp > 0.0 ? blended_dpf(b, a) / a.avg_hp : 0.0;
    const double beta = b.avg_hp > 0.0 ? blended_dpf(a, b) / b.avg_hp : 0.0;
    return LanchesterParams::from_rates(alpha, beta);
}

double lanchester_end_time(double a0, double b0, const LanchesterParams& p) {
    switch (square_law_verdict(a0, b0, p)) {
        case Verdict::None:
        case Verdict::Draw: return kInfinity;
        case Verdict::A: {
            if (p.alpha <= 0.0) return b0 / (p.beta * a0);
            const double x = (b0 / a0) * p.r_alpha;
            return std::log((1.0 + x) / (1.0 - x)) / (2.0 * p.intensity);
        }
        case Verdict::B: {
            if (p.beta <= 0.0) return a0 / (p.alpha * b0);
            const double x = (a0 / b0) * p.r_beta;
            return std::log((1.0 + x) / (1.0 - x)) / (2.0 * p.intensity);
        }
    }
    return kInfinity;
}

ForceCounts lanchester_counts_at(double a0, double b0, const LanchesterParams& p, double t) {
    if (t <= 0.0) return {a0, b0};
    t = std::min(t, lanchester_end_time(a0, b0, p));
    if (p.alpha <= 0.0 || p.beta <= 0.0) {
        // one-sided: the attacked force shrinks linearly
        return {std::max(0.0, a0 - p.alpha * b0 * t), std::max(0.0, b0 - p.beta * a0 * t)};
    }
    const double grow = std::exp(p.intensity * t);
    const double decay = 1.0 / grow;
    const double a = 0.5 * ((a0 - p.r_alpha * b0) * grow + (a0 + p.r_alpha * b0) * decay);
    const double b = 0.5 * ((b0 - p.r_beta * a0) * grow + (b0 + p.r_beta * a0) * decay);
    return {std::max(0.0, a), std::max(0.0, b)};
}

ForceCounts lanchester_state_at(const CombatState& state, const LanchesterParams& p, double t) {
    return lanchester_counts_at(static_cast<double>(state.army_a.size()), static_cast<double>(state.army_b.size()), p, t);
}

namespace {

// Keeps ceil(s) units of `winner`; the destruction order comes from the policy
// with the loser as attacker, and the first kept unit carries the fraction.
Army realize_survivors(const Army& winner, const Army& loser, double s, const TargetSelectionPolicy& policy,
                       const Catalog& catalog) {
    const Army ordered = sorted_targets(policy, winner, loser, catalog);
    const double n = static_cast<double>(ordered.size());
    s = std::clamp(s, 0.0, n);
    const auto kept = static_cast<std::size_t>(std::ceil(s - 1e-9));
    const std::size_t first_kept = ordered.size() - kept;
    Army out(ordered.begin() + static_cast<std::ptrdiff_t>(first_kept), ordered.end());
    const double frac = s - std::floor(s + 1e-9);
    if (!out.empty() && frac > 1e-9) scale_health(out.front(), frac);
    return out;
}

}  // namespace

CombatOutcome lanchester_simulate(const CombatState& state, const DpfVector& dpf, const TargetSelectionPolicy& policy,
                                  const Catalog& catalog) {
    CombatOutcome out;
    out.model = ModelKind::Lanchester;
    const auto p = lanchester_params(state, dpf, catalog);
    const double a0 = static_cast<double>(state.army_a.size());
    const double b0 = static_cast<double>(state.army_b.size());

    switch (square_law_verdict(a0, b0, p)) {
        case Verdict::None:
            out.winner = Winner::Stalemate;
            out.survivors_a = state.army_a;
            out.survivors_b = state.army_b;
            return out;
        case Verdict::Draw: {
            // continuous mutual annihilation never ends; take the Sustained length
            const auto agg_a = aggregate_army(state.army_a, dpf, catalog);
            const auto agg_b = aggregate_army(state.army_b, dpf, catalog);
            out.winner = Winner::Draw;
            out.duration_frames =
                std::min(sustained_time_to_destroy(agg_a, agg_b), sustained_time_to_destroy(agg_b, agg_a));
            if (!std::isfinite(out.duration_frames)) out.duration_frames = 0.0;
            return out;
        }
        case Verdict::A: {
            double radicand = a0 * a0 - (p.beta > 0.0 ? p.alpha / p.beta : 0.0) * b0 * b0;
            if (radicand < 0.0) {
                radicand = 0.0;
                out.clamped = true;
            }
            out.winner = Winner::A;
            out.duration_frames = lanchester_end_time(a0, b0, p);
            out.survivors_a = realize_survivors(state.army_a, state.army_b, std::sqrt(radicand), policy, catalog);
            return out;
        }
        case Verdict::B: {
            double radicand = b0 * b0 - (p.alpha > 0.0 ? p.beta / p.alpha : 0.0) * a0 * a0;
            if (radicand < 0.0) {
                radicand = 0.0;
                out.clamped = true;
            }
            out.winner = Winner::B;
            out.duration_frames = lanchester_end_time(a0, b0, p);
            out.survivors_b = realize_survivors(state.army_b, state.army_a, std::sqrt(radicand), policy, catalog);
            return out;
        }
    }
    return out;
}

}  // namespace attrition
