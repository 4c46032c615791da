#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cqed/types.hpp"

namespace cqed {

/// Level configuration. Scheme A: cavity drives 1->2 and 1->3, a free-space
/// control couples 4<->3. Scheme B: cavity drives 1->2, 1->3 and 1->4.
enum class SchemeId { A, B };

/// Input-output relation: as written (no cavity detuning term) or with the
/// mean-field cavity detuning phase added.
enum class IoMode { as_printed, physical };

/// How the Bloch generator is assembled.
enum class GeneratorMode { corrected_lindblad, as_printed };

struct DecayChannel {
    int upper;
    int lower;
    Real rate;
};

/// All frequencies and rates are in units of the common decay rate Gamma.
struct LevelScheme {
    static constexpr int n_levels = kLevels;
    static constexpr int ground = 1;

    SchemeId id = SchemeId::A;
    Real delta_23 = 0.0;
    Real delta_34 = 0.0; // scheme B only
    Real gamma_2 = 1.0;
    Real gamma_3 = 1.0;
    Real gamma_4 = 1.0;
    // Optional branching |2>->|4>, |3>->|4>; zero unless a study asks for it.
    Real branch_24 = 0.0;
    Real branch_34 = 0.0;

    Real delta_24() const { return delta_23 + delta_34; }
    Real gamma(int level) const;
    std::vector<DecayChannel> decay_channels() const;
};

struct SystemConfig {
    LevelScheme scheme;
    Real cooperativity = 0.0;
    Real delta_p = 0.0;
    Real delta_c = 0.0;
    Real omega_c = 0.0;       // control Rabi frequency, scheme A only
    Real delta_control = 0.0; // control detuning, scheme A only
    // Relative dipole weights of the cavity transitions 1->2, 1->3, 1->4.
    std::array<Real, 3> dipole_weights{1.0, 1.0, 1.0};
    IoMode io_mode = IoMode::as_printed;
    Real kappa = 1.0;
    GeneratorMode generator_mode = GeneratorMode::corrected_lindblad;

    Real weight(int upper_level) const { return dipole_weights[upper_level - 2]; }
    std::vector<int> cavity_levels() const;
};

struct CavityTransition {
    int lower = 1;
    int upper;
    Real weight;
    Real detuning;
};

struct ControlDrive {
    int lower = 4;
    int upper = 3;
    Real rabi;
    Real detuning;
};

struct CavityDrive {
    std::vector<CavityTransition> transitions;
    std::optional<ControlDrive> control;

    const CavityTransition& to_level(int upper) const;
};

/// Full list of invariant violations; empty means the config is usable.
std::vector<std::string> validate(const SystemConfig& config);

/// Throws ConfigError listing every violation.
void require_valid(const SystemConfig& config);

/// Per-transition detunings and weights. Throws ConfigError on an invalid
/// config (in particular a control field in scheme B).
CavityDrive derive_drives(const SystemConfig& config);

std::string_view to_string(SchemeId id);
std::string_view to_string(IoMode mode);
std::string_view to_string(GeneratorMode mode);
SchemeId parse_scheme(std::string_view text);
IoMode parse_io_mode(std::string_view text);
GeneratorMode parse_generator_mode(std::string_view text);

// Configuration file: a flat JSON object. Keys: scheme, C, delta_p, delta_c,
// delta_23, delta_34, omega_c, delta_control, gamma_2, gamma_3, gamma_4,
// io_mode, kappa, generator_mode, dipole_weights. Unknown keys are rejected.
nlohmann::json to_json(const SystemConfig& config);
SystemConfig config_from_json(const nlohmann::json& doc);
SystemConfig load_config(const std::string& path);

} // namespace cqed
