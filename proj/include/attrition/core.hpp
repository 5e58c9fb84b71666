#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace attrition {

using TypeId = int;
using Uid = std::int64_t;

/// Thrown when an input violates a documented invariant (bad catalog, bad
/// combat state, malformed file). The CLI maps it to exit code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Domain { Ground, Air };

struct UnitTypeStats {
    TypeId type_id = 0;
    std::string name;
    double max_hp = 1.0;
    double max_shield = 0.0;
    double max_energy = 0.0;
    double mineral_cost = 0.0;
    double gas_cost = 0.0;
    double weapon_damage_ground = 0.0;  // 0 = cannot attack ground
    double weapon_damage_air = 0.0;     // 0 = cannot attack air
    double cooldown_ground = 0.0;       // frames between hits
    double cooldown_air = 0.0;
    double range_ground = 0.0;  // pixels
    double range_air = 0.0;
    double top_speed = 0.0;  // pixels per frame
    bool is_flyer = false;
    bool is_building = false;
    bool can_attack = false;
    bool is_detector = false;
    bool is_transport = false;
    bool is_worker = false;
    bool is_base = false;
    std::optional<double> destroy_score_override;

    bool attacks_ground() const { return weapon_damage_ground > 0.0; }
    bool attacks_air() const { return weapon_damage_air > 0.0; }
    bool attacks(Domain d) const { return d == Domain::Air ? attacks_air() : attacks_ground(); }
    Domain domain() const { return is_flyer ? Domain::Air : Domain::Ground; }
    double max_health() const { return max_hp + max_shield; }
    bool is_military() const { return can_attack || is_detector || is_transport; }
};

/// Unit-type table indexed by type id. Ids must be exactly 0..k-1.
class Catalog {
public:
    Catalog() = default;
    explicit Catalog(std::vector<UnitTypeStats> types, std::string id = "catalog");

    std::size_t size() const { return types_.size(); }
    const UnitTypeStats& operator[](TypeId t) const;
    const std::vector<UnitTypeStats>& types() const { return types_; }
    const std::string& id() const { return id_; }
    bool contains(TypeId t) const { return t >= 0 && static_cast<std::size_t>(t) < types_.size(); }

    /// Attackability predicate standing in for the explicit edge set: a ground
    /// weapon hits non-flyers, an air weapon hits flyers.
    bool can_target(TypeId attacker, TypeId victim) const {
        return (*this)[attacker].attacks((*this)[victim].domain());
    }
    std::optional<TypeId> find(std::string_view name) const;

private:
    std::vector<UnitTypeStats> types_;
    std::string id_;
};

struct Position {
    double x = 0.0;
    double y = 0.0;
};

struct Unit {
    Uid uid = 0;
    TypeId type_id = 0;
    double hp = 0.0;
    double shield = 0.0;
    double energy = 0.0;
    std::optional<Position> pos;

    /// Health used by every evaluator and model: hit points plus shield.
    double health() const { return hp + shield; }
};

/// Removes `amount` of health, shield first.
void apply_damage(Unit& u, double amount);
/// Scales remaining health (hp and shield alike) by `factor` in (0, 1].
void scale_health(Unit& u, double factor);

using Army = std::vector<Unit>;

struct CombatState {
    Army army_a;
    Army army_b;
};

/// Checks uid uniqueness, non-empty armies, known types and hp bounds.
void validate_combat_state(const CombatState& state, const Catalog& catalog);

CombatState swapped(const CombatState& state);

using DpfVector = Eigen::VectorXd;

enum class DpfProvenance { Static, Learned };

struct DpfTable {
    Eigen::MatrixXd per_pair;  // (i, j): damage per frame a type-i unit deals to a type-j unit
    DpfVector per_unit_ground;
    DpfVector per_unit_air;
    DpfProvenance provenance = DpfProvenance::Static;

    std::size_t size() const { return static_cast<std::size_t>(per_pair.rows()); }
};

/// Fills per_unit_ground / per_unit_air with the per-domain minimum over the
/// positive entries of each row.
void refresh_domain_vectors(DpfTable& table, const Catalog& catalog);

/// damage / cooldown per target domain.
DpfTable static_dpf(const Catalog& catalog);

/// DPF(i) = min_j DPF(i, j) over the targets type i can actually damage.
/// Rows with no positive entry project to 0; see types_without_targets().
DpfVector project_min_dpf(const DpfTable& table);
std::vector<TypeId> types_without_targets(const DpfTable& table);

/// Per-pair matrix implied by a per-unit vector: row i is dpf[i] wherever type
/// i can target type j, zero elsewhere.
Eigen::MatrixXd expand_dpf_vector(const DpfVector& dpf, const Catalog& catalog);

double destroy_score(const UnitTypeStats& type);

/// Σ_A √health·DPF − Σ_B √health·DPF
double ltd2(const CombatState& state, const DpfVector& dpf);
/// Σ_A health·DPF − Σ_B health·DPF
double ltd(const CombatState& state, const DpfVector& dpf);

}  // namespace attrition
