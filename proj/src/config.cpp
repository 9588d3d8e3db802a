#include "lightmass/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace lightmass {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double number(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "inf" || t == "+inf") return INFINITY;
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw InvalidInput("config: " + key + ": not a number: '" + t + "'");
    }
}

int integer(const std::string& key, const std::string& text) {
    const double v = number(key, text);
    if (v != std::floor(v) || std::abs(v) > 1e9)
        throw InvalidInput("config: " + key + ": not an integer");
    return static_cast<int>(v);
}

bool boolean(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw InvalidInput("config: " + key + ": expected true or false");
}

std::vector<double> list(const std::string& key, const std::string& text) {
    std::string t = text;
    for (char& c : t)
        if (c == ',') c = ' ';
    std::istringstream in(t);
    std::vector<double> out;
    for (std::string tok; in >> tok;) out.push_back(number(key, tok));
    if (out.empty()) throw InvalidInput("config: " + key + ": empty list");
    return out;
}

std::pair<double, double> pair(const std::string& key, const std::string& text) {
    const auto v = list(key, text);
    if (v.size() != 2) throw InvalidInput("config: " + key + ": expected two values");
    return {v[0], v[1]};
}

void noise_part(std::map<std::string, std::function<void(const std::string&)>>& h,
                const std::string& prefix, const std::string& corner, NoisePartConfig& part) {
    h[prefix + ".kind"] = [&part, prefix](const std::string& v) {
        part.kind = trim(v);
        if (part.kind != "white" && part.kind != "rational")
            throw InvalidInput("config: " + prefix + ".kind must be white or rational");
    };
    h[prefix + "." + corner] = [&part, k = prefix + "." + corner](const std::string& v) {
        part.corner = number(k, v);
    };
    h[prefix + ".numerator"] = [&part, k = prefix + ".numerator"](const std::string& v) {
        part.numerator = list(k, v);
    };
    h[prefix + ".denominator"] = [&part, k = prefix + ".denominator"](const std::string& v) {
        part.denominator = list(k, v);
    };
    h[prefix + ".amplitude"] = [&part, k = prefix + ".amplitude"](const std::string& v) {
        part.amplitude = number(k, v);
    };
}

}  // namespace

NoiseModel Config::noise() const {
    NoiseModel n;
    if (force.kind == "white") {
        n.force = white_force(force.corner, plant.omega_m);
        n.omega_F = force.corner;
    } else {
        n.force = RationalSpectrum(force.numerator, force.denominator, force.amplitude);
    }
    if (sensing.kind == "white") {
        n.sensing = white_sensing(sensing.corner, plant.omega_m);
        n.omega_S = sensing.corner;
    } else {
        n.sensing = RationalSpectrum(sensing.numerator, sensing.denominator, sensing.amplitude);
    }
    return n;
}

InputFieldState Config::resolved_input() const {
    if (!autotune || input.kind != SqueezeKind::fds) return input;
    TuneBand b = band;
    if (band_relative) {
        b.lo *= plant.omega_q;
        b.hi *= plant.omega_q;
    }
    return autotune_filter(plant, input.r, b);
}

std::optional<TemporalModeBasis> Config::basis() const {
    if (!tau) return std::nullopt;
    TemporalModeBasis b{N, *tau};
    b.validate();
    return b;
}

SweepSpec Config::sweep_spec() const {
    SweepSpec s;
    s.plant = plant;
    s.input = input;
    if (autotune) s.autotune = band;
    s.relative_band = band_relative;
    s.noise = noise();
    s.ray = ray;
    s.lo = bracket_lo;
    s.hi = bracket_hi;
    s.basis = basis();
    s.N = N;
    s.cov = cov;
    s.tol = tol;
    s.coarse_points = coarse_points;
    s.rel_width = rel_width;
    s.delta_report = delta_report;
    s.verify_doubled_n = verify_doubled_n;
    return s;
}

Config parse_config(std::istream& in) {
    Config c;
    using Handler = std::function<void(const std::string&)>;
    std::map<std::string, Handler> h;
    auto num = [&h](const std::string& key, double& dst) {
        h[key] = [&dst, key](const std::string& v) { dst = number(key, v); };
    };
    auto integ = [&h](const std::string& key, int& dst) {
        h[key] = [&dst, key](const std::string& v) { dst = integer(key, v); };
    };
    auto flag = [&h](const std::string& key, bool& dst) {
        h[key] = [&dst, key](const std::string& v) { dst = boolean(key, v); };
    };
    auto lst = [&h](const std::string& key, std::vector<double>& dst) {
        h[key] = [&dst, key](const std::string& v) { dst = list(key, v); };
    };

    num("plant.omega_m", c.plant.omega_m);
    num("plant.gamma_m", c.plant.gamma_m);
    num("plant.omega_q", c.plant.omega_q);
    num("plant.eta", c.plant.eta);
    noise_part(h, "noise.force", "omega_F", c.force);
    noise_part(h, "noise.sensing", "omega_S", c.sensing);

    h["squeeze.kind"] = [&c](const std::string& v) { c.input.kind = parse_squeeze_kind(trim(v)); };
    num("squeeze.r", c.input.r);
    num("squeeze.theta", c.input.theta);
    num("squeeze.gamma_f", c.input.filter.gamma_f);
    num("squeeze.delta", c.input.filter.delta);
    flag("squeeze.autotune", c.autotune);
    h["squeeze.band"] = [&c](const std::string& v) {
        std::tie(c.band.lo, c.band.hi) = pair("squeeze.band", v);
    };
    flag("squeeze.band_relative", c.band_relative);

    integ("basis.N", c.N);
    h["basis.tau"] = [&c](const std::string& v) {
        if (trim(v) == "auto")
            c.tau.reset();
        else
            c.tau = number("basis.tau", v);
    };

    h["quad.method"] = [&c](const std::string& v) {
        const std::string t = trim(v);
        if (t == "state_space")
            c.cov.method = CovarianceMethod::state_space;
        else if (t == "quadrature")
            c.cov.method = CovarianceMethod::quadrature;
        else
            throw InvalidInput("config: quad.method must be state_space or quadrature");
    };
    num("quad.omega_max", c.cov.quad.omega_max);
    num("quad.points_per_decade", c.cov.quad.points_per_decade);
    integ("quad.nodes_per_panel", c.cov.quad.nodes_per_panel);
    integ("quad.tail_order", c.cov.quad.tail_order);

    num("tol.eps_ppt", c.tol.eps_ppt);
    num("tol.eps_det", c.tol.eps_det);
    num("tol.eps_phys", c.tol.eps_phys);
    num("tol.eps_imag", c.tol.eps_imag);
    num("tol.rel_width", c.rel_width);
    num("tol.delta_report", c.delta_report);

    h["sweep.ray"] = [&c](const std::string& v) {
        const std::string t = trim(v);
        if (t == "omega_S")
            c.ray = RayKind::omega_S;
        else if (t == "beta_S")
            c.ray = RayKind::beta_S;
        else
            throw InvalidInput("config: sweep.ray must be omega_S or beta_S");
    };
    h["sweep.bracket"] = [&c](const std::string& v) {
        std::tie(c.bracket_lo, c.bracket_hi) = pair("sweep.bracket", v);
    };
    integ("sweep.coarse_points", c.coarse_points);
    flag("sweep.verify_doubled_n", c.verify_doubled_n);
    lst("sweep.omega_F", c.omega_F_list);
    lst("sweep.omega_S", c.omega_S_list);
    lst("sweep.omega_q", c.omega_q_list);
    lst("sweep.eta", c.eta_list);
    lst("sweep.beta_S", c.beta_S_list);
    h["sweep.omega_range"] = [&c](const std::string& v) {
        std::tie(c.range_lo, c.range_hi) = pair("sweep.omega_range", v);
    };
    integ("sweep.points", c.points);

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidInput("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const auto it = h.find(key);
        if (it == h.end())
            throw InvalidInput("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        it->second(line.substr(eq + 1));
    }

    c.plant.validate();
    c.input.validate();
    if (c.N < 1) throw InvalidInput("config: basis.N must be >= 1");
    if (c.points < 2) throw InvalidInput("config: sweep.points must be >= 2");
    (void)c.noise();  // validates the spectra
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("config: cannot open '" + path + "'");
    return parse_config(in);
}

}  // namespace lightmass
