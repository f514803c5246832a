#include "coorbital/system_params.hpp"

#include "coorbital/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace coorbital {

namespace {

void require_positive(double v, const char* name) {
    if (!std::isfinite(v) || !(v > 0.0)) {
        throw ConfigError(std::string(name) + " must be finite and > 0");
    }
}

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

}  // namespace

void validate(const MassConfig& cfg) {
    require_positive(cfg.m0, "m0");
    require_positive(cfg.m1, "m1");
    require_positive(cfg.m2, "m2");
    require_positive(cfg.epsilon, "epsilon");
    require_positive(cfg.upsilon0, "upsilon0");
}

bool lighter_planet_first(const MassConfig& cfg) { return cfg.m1 <= cfg.m2; }

DerivedConstants derive_constants(const MassConfig& cfg) {
    validate(cfg);
    const double m0 = cfg.m0, m1 = cfg.m1, m2 = cfg.m2, eps = cfg.epsilon, ups = cfg.upsilon0;
    const double u13 = std::cbrt(ups);
    const double m0_23 = std::cbrt(m0 * m0);

    DerivedConstants c;
    c.mu1 = m0 + eps * m1;
    c.mu2 = m0 + eps * m2;
    c.mhat1 = m0 * m1 / c.mu1;
    c.mhat2 = m0 * m2 / c.mu2;

    // n^2 a^3 = mu with n = upsilon0
    c.a10 = std::cbrt(c.mu1 / (ups * ups));
    c.a20 = std::cbrt(c.mu2 / (ups * ups));
    c.a_star = std::cbrt(m0 / (ups * ups));
    c.lambda10 = c.mhat1 * std::sqrt(c.mu1 * c.a10);
    c.lambda20 = c.mhat2 * std::sqrt(c.mu2 * c.a20);
    c.lambda1_star = c.mhat1 * std::sqrt(c.mu1 * c.a_star);
    c.lambda2_star = c.mhat2 * std::sqrt(c.mu2 * c.a_star);

    c.kappa = m1 / (m1 + m2);
    c.D = m1 * m2 / m0;
    c.A = 1.5 * u13 / m0_23 * (1.0 / m1 + 1.0 / m2);
    c.B = 1.5 / u13 * m0_23 * c.D;
    c.E = 1.5 * u13 / m0_23 / (m1 + m2);
    c.K = std::sqrt(7.0 * std::numbers::pi * std::numbers::pi * c.A * c.B / 6.0);
    return c;
}

bool gascheau_stable(double central, double planet1, double planet2) {
    if (!(central > 0.0) || planet1 < 0.0 || planet2 < 0.0) {
        throw ConfigError("gascheau_stable: masses must be non-negative with a positive central mass");
    }
    const double total = central + planet1 + planet2;
    return 27.0 * (central * planet1 + central * planet2 + planet1 * planet2) < total * total;
}

bool gascheau_stable(const MassConfig& cfg) {
    validate(cfg);
    return gascheau_stable(cfg.m0, cfg.epsilon * cfg.m1, cfg.epsilon * cfg.m2);
}

MassConfig with_epsilon(MassConfig cfg, double epsilon) {
    cfg.epsilon = epsilon;
    validate(cfg);
    return cfg;
}

MassConfig parse_config(std::string_view text) {
    constexpr std::array<std::string_view, 5> keys{"m0", "m1", "m2", "epsilon", "upsilon0"};
    std::array<std::optional<double>, 5> values;

    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto val = trim(line.substr(eq + 1));

        std::size_t slot = keys.size();
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (keys[i] == key) slot = i;
        }
        if (slot == keys.size()) {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        }
        if (values[slot]) {
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
        }

        double v = 0.0;
        const auto* first = val.data();
        const auto* last = val.data() + val.size();
        if (!val.empty() && *first == '+') ++first;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last) {
            throw ConfigError("line " + std::to_string(line_no) + ": '" + std::string(val) + "' is not a number");
        }
        values[slot] = v;
    }

    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (!values[i]) throw ConfigError("missing key '" + std::string(keys[i]) + "'");
    }
    MassConfig cfg{*values[0], *values[1], *values[2], *values[3], *values[4]};
    validate(cfg);
    return cfg;
}

MassConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace coorbital
