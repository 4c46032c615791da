#include "cqed/model.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cqed {

Real LevelScheme::gamma(int level) const
{
    switch (level) {
    case 2: return gamma_2;
    case 3: return gamma_3;
    case 4: return gamma_4;
    default: return 0.0;
    }
}

std::vector<DecayChannel> LevelScheme::decay_channels() const
{
    std::vector<DecayChannel> channels{
        {2, 1, gamma_2}, {3, 1, gamma_3}, {4, 1, gamma_4}};
    if (branch_24 > 0.0) channels.push_back({2, 4, branch_24});
    if (branch_34 > 0.0) channels.push_back({3, 4, branch_34});
    return channels;
}

std::vector<int> SystemConfig::cavity_levels() const
{
    if (scheme.id == SchemeId::A) return {2, 3};
    return {2, 3, 4};
}

const CavityTransition& CavityDrive::to_level(int upper) const
{
    for (const auto& t : transitions)
        if (t.upper == upper) return t;
    throw Error("no cavity transition to level " + std::to_string(upper));
}

std::vector<std::string> validate(const SystemConfig& c)
{
    std::vector<std::string> errors;
    auto check = [&](bool ok, const char* msg) {
        if (!ok) errors.emplace_back(msg);
    };
    const auto& s = c.scheme;
    const Real values[] = {c.cooperativity, c.delta_p, c.delta_c, c.omega_c,
                           c.delta_control, c.kappa, s.delta_23, s.delta_34,
                           s.gamma_2, s.gamma_3, s.gamma_4, s.branch_24,
                           s.branch_34, c.dipole_weights[0],
                           c.dipole_weights[1], c.dipole_weights[2]};
    bool finite = true;
    for (Real v : values) finite = finite && std::isfinite(v);
    check(finite, "all parameters must be finite");
    check(c.cooperativity >= 0.0, "C >= 0");
    check(c.kappa > 0.0, "kappa > 0");
    check(c.omega_c >= 0.0, "omega_c >= 0");
    check(s.delta_23 >= 0.0, "delta_23 >= 0");
    check(s.delta_34 >= 0.0, "delta_34 >= 0");
    check(s.gamma_2 >= 0.0 && s.gamma_3 >= 0.0 && s.gamma_4 >= 0.0,
          "decay rates gamma >= 0");
    check(s.branch_24 >= 0.0 && s.branch_34 >= 0.0, "branching rates >= 0");
    check(c.dipole_weights[0] >= 0.0 && c.dipole_weights[1] >= 0.0 &&
              c.dipole_weights[2] >= 0.0,
          "dipole weights >= 0");
    if (s.id == SchemeId::B) {
        check(c.omega_c == 0.0, "no control field in scheme B");
        check(s.branch_24 == 0.0 && s.branch_34 == 0.0,
              "branching channels are defined for scheme A only");
    }
    return errors;
}

void require_valid(const SystemConfig& config)
{
    const auto errors = validate(config);
    if (errors.empty()) return;
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += " [" + e + "]";
    throw ConfigError(msg);
}

CavityDrive derive_drives(const SystemConfig& c)
{
    require_valid(c);
    CavityDrive drive;
    const auto& s = c.scheme;
    if (s.id == SchemeId::A) {
        drive.transitions.push_back({1, 2, c.weight(2), c.delta_p + s.delta_23});
        drive.transitions.push_back({1, 3, c.weight(3), c.delta_p});
        drive.control = ControlDrive{4, 3, c.omega_c, c.delta_control};
    } else {
        drive.transitions.push_back({1, 2, c.weight(2), c.delta_p + s.delta_24()});
        drive.transitions.push_back({1, 3, c.weight(3), c.delta_p + s.delta_34});
        drive.transitions.push_back({1, 4, c.weight(4), c.delta_p});
    }
    return drive;
}

std::string_view to_string(SchemeId id) { return id == SchemeId::A ? "A" : "B"; }

std::string_view to_string(IoMode mode)
{
    return mode == IoMode::as_printed ? "as_printed" : "physical";
}

std::string_view to_string(GeneratorMode mode)
{
    return mode == GeneratorMode::corrected_lindblad ? "corrected_lindblad"
                                                     : "as_printed";
}

SchemeId parse_scheme(std::string_view text)
{
    if (text == "A" || text == "a") return SchemeId::A;
    if (text == "B" || text == "b") return SchemeId::B;
    throw ConfigError("unknown scheme '" + std::string(text) + "' (expected A or B)");
}

IoMode parse_io_mode(std::string_view text)
{
    if (text == "as_printed") return IoMode::as_printed;
    if (text == "physical") return IoMode::physical;
    throw ConfigError("unknown io_mode '" + std::string(text) + "'");
}

GeneratorMode parse_generator_mode(std::string_view text)
{
    if (text == "corrected_lindblad") return GeneratorMode::corrected_lindblad;
    if (text == "as_printed") return GeneratorMode::as_printed;
    throw ConfigError("unknown generator_mode '" + std::string(text) + "'");
}

nlohmann::json to_json(const SystemConfig& c)
{
    const auto& s = c.scheme;
    nlohmann::json weights = nlohmann::json::array();
    for (int level : c.cavity_levels()) weights.push_back(c.weight(level));
    return {{"scheme", to_string(s.id)},
            {"C", c.cooperativity},
            {"delta_p", c.delta_p},
            {"delta_c", c.delta_c},
            {"delta_23", s.delta_23},
            {"delta_34", s.delta_34},
            {"omega_c", c.omega_c},
            {"delta_control", c.delta_control},
            {"gamma_2", s.gamma_2},
            {"gamma_3", s.gamma_3},
            {"gamma_4", s.gamma_4},
            {"io_mode", to_string(c.io_mode)},
            {"kappa", c.kappa},
            {"generator_mode", to_string(c.generator_mode)},
            {"dipole_weights", weights}};
}

SystemConfig config_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    static const std::set<std::string> known{
        "scheme",  "C",       "delta_p", "delta_c",       "delta_23",
        "delta_34", "omega_c", "delta_control", "gamma_2", "gamma_3",
        "gamma_4", "io_mode", "kappa",   "generator_mode", "dipole_weights"};
    for (const auto& item : doc.items())
        if (!known.contains(item.key()))
            throw ConfigError("unknown configuration key '" + item.key() + "'");

    auto number = [&](const char* key, Real fallback) -> Real {
        if (!doc.contains(key)) return fallback;
        const auto& v = doc.at(key);
        if (!v.is_number())
            throw ConfigError(std::string("key '") + key + "' must be a number");
        return v.get<Real>();
    };
    auto text = [&](const char* key) -> std::optional<std::string> {
        if (!doc.contains(key)) return std::nullopt;
        const auto& v = doc.at(key);
        if (!v.is_string())
            throw ConfigError(std::string("key '") + key + "' must be a string");
        return v.get<std::string>();
    };

    SystemConfig c;
    if (auto v = text("scheme")) c.scheme.id = parse_scheme(*v);
    if (auto v = text("io_mode")) c.io_mode = parse_io_mode(*v);
    if (auto v = text("generator_mode")) c.generator_mode = parse_generator_mode(*v);
    c.cooperativity = number("C", c.cooperativity);
    c.delta_p = number("delta_p", c.delta_p);
    c.delta_c = number("delta_c", c.delta_c);
    c.omega_c = number("omega_c", c.omega_c);
    c.delta_control = number("delta_control", c.delta_control);
    c.kappa = number("kappa", c.kappa);
    c.scheme.delta_23 = number("delta_23", c.scheme.delta_23);
    c.scheme.delta_34 = number("delta_34", c.scheme.delta_34);
    c.scheme.gamma_2 = number("gamma_2", c.scheme.gamma_2);
    c.scheme.gamma_3 = number("gamma_3", c.scheme.gamma_3);
    c.scheme.gamma_4 = number("gamma_4", c.scheme.gamma_4);

    if (doc.contains("dipole_weights")) {
        const auto& w = doc.at("dipole_weights");
        const auto levels = c.cavity_levels();
        if (!w.is_array() || w.size() != levels.size())
            throw ConfigError("dipole_weights must be an array of " +
                              std::to_string(levels.size()) + " numbers for scheme " +
                              std::string(to_string(c.scheme.id)));
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (!w[i].is_number()) throw ConfigError("dipole_weights entries must be numbers");
            c.dipole_weights[levels[i] - 2] = w[i].get<Real>();
        }
    }
    require_valid(c);
    return c;
}

SystemConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open configuration file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("malformed configuration file '" + path + "': " + e.what());
    }
    return config_from_json(doc);
}

} // namespace cqed
