#include "oscatter/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "oscatter/math_util.hpp"

namespace oscatter {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct KeyValue {
    std::string value;
    int line;
};
using Section = std::map<std::string, KeyValue>;

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const KeyValue& kv, const std::string& key) {
    try {
        std::size_t pos = 0;
        double v = std::stod(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        fail(kv.line, "key '" + key + "' expects a number, got '" + kv.value + "'");
    }
}

std::int64_t parse_int(const KeyValue& kv, const std::string& key) {
    try {
        std::size_t pos = 0;
        std::int64_t v = std::stoll(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        fail(kv.line, "key '" + key + "' expects an integer, got '" + kv.value + "'");
    }
}

bool parse_bool(const KeyValue& kv, const std::string& key) {
    if (kv.value == "true") return true;
    if (kv.value == "false") return false;
    fail(kv.line, "key '" + key + "' expects true or false, got '" + kv.value + "'");
}

std::array<double, 3> parse_vector(const KeyValue& kv, const std::string& key, int dim) {
    std::array<double, 3> out{0, 0, 0};
    std::stringstream ss(kv.value);
    std::string part;
    int j = 0;
    while (std::getline(ss, part, ',')) {
        if (j >= dim) fail(kv.line, "key '" + key + "' has more than " + std::to_string(dim) + " components");
        try {
            out[j++] = std::stod(trim(part));
        } catch (...) {
            fail(kv.line, "key '" + key + "' has a non-numeric component '" + trim(part) + "'");
        }
    }
    if (j != dim) fail(kv.line, "key '" + key + "' needs " + std::to_string(dim) + " components");
    return out;
}

std::vector<std::array<double, 3>> parse_sites(const KeyValue& kv, int dim) {
    std::vector<std::array<double, 3>> out;
    std::stringstream ss(kv.value);
    std::string part;
    while (std::getline(ss, part, ';')) {
        KeyValue sub{trim(part), kv.line};
        out.push_back(parse_vector(sub, "sites", dim));
    }
    if (out.empty()) fail(kv.line, "empty site list");
    return out;
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"model",
         {"units", "dimension", "particle_mass", "oscillator_mass", "frequency", "coupling",
          "potential_range", "level_cap", "sites", "time_window"}},
        {"incident", {"kind", "wavevector", "center", "width", "normalize", "total_wavenumber"}},
        {"grid", {"spacing", "margin"}},
        {"plane", {"distance", "pixel_count", "pixel_spacing", "pixel_width", "center"}},
        {"detector", {"oscillator_mass", "frequency", "level_cap"}},
        {"run", {"shots", "seed", "inelastic_fraction"}},
        {"oracle",
         {"x_min", "x_max", "points", "time_step", "total_time", "per_site_level_cap", "time_points",
          "absorber", "absorber_width"}},
    };
    return s;
}

}  // namespace

ParsedConfig parse_config(const std::string& text) {
    std::map<std::string, Section> sections;
    {
        std::stringstream ss(text);
        std::string raw_line;
        std::string current;
        int line = 0;
        while (std::getline(ss, raw_line)) {
            ++line;
            std::string s = trim(raw_line);
            const auto hash = s.find('#');
            if (hash != std::string::npos) s = trim(s.substr(0, hash));
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']') fail(line, "malformed section header '" + s + "'");
                current = trim(s.substr(1, s.size() - 2));
                if (!schema().count(current)) fail(line, "unknown section '" + current + "'");
                sections[current];
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos) fail(line, "expected key = value, got '" + s + "'");
            if (current.empty()) fail(line, "key outside any section");
            const std::string key = trim(s.substr(0, eq));
            const std::string value = trim(s.substr(eq + 1));
            if (!schema().at(current).count(key))
                fail(line, "unknown key '" + key + "' in section [" + current + "]");
            if (sections[current].count(key)) fail(line, "duplicate key '" + key + "'");
            sections[current][key] = {value, line};
        }
    }

    ParsedConfig c;
    auto get = [&](const std::string& sec, const std::string& key) -> const KeyValue* {
        auto si = sections.find(sec);
        if (si == sections.end()) return nullptr;
        auto ki = si->second.find(key);
        return ki == si->second.end() ? nullptr : &ki->second;
    };

    // [model]
    if (!sections.count("model")) throw ConfigError("config is missing the [model] section");
    RawModelParameters& m = c.model_raw;
    if (auto* kv = get("model", "units")) {
        if (kv->value == "natural")
            m.natural_units = true;
        else if (kv->value == "physical")
            m.natural_units = false;
        else
            fail(kv->line, "units must be natural or physical");
    }
    if (auto* kv = get("model", "dimension")) m.dimension = static_cast<int>(parse_int(*kv, "dimension"));
    if (auto* kv = get("model", "particle_mass")) m.particle_mass = parse_double(*kv, "particle_mass");
    if (auto* kv = get("model", "oscillator_mass")) m.oscillator_mass = parse_double(*kv, "oscillator_mass");
    if (auto* kv = get("model", "frequency")) m.frequency = parse_double(*kv, "frequency");
    if (auto* kv = get("model", "coupling")) m.coupling = parse_double(*kv, "coupling");
    if (auto* kv = get("model", "potential_range")) m.potential_range = parse_double(*kv, "potential_range");
    if (auto* kv = get("model", "level_cap")) m.level_cap = static_cast<int>(parse_int(*kv, "level_cap"));
    if (auto* kv = get("model", "sites"))
        m.sites = parse_sites(*kv, m.dimension);
    else
        throw ConfigError("config [model] must list sites");
    if (auto* kv = get("model", "time_window")) m.time_window = parse_double(*kv, "time_window");

    // [incident]
    if (auto* kv = get("incident", "kind")) {
        if (kv->value == "plane_wave")
            m.incident.kind = IncidentWave::Kind::plane_wave;
        else if (kv->value == "gaussian_packet")
            m.incident.kind = IncidentWave::Kind::gaussian_packet;
        else
            fail(kv->line, "kind must be plane_wave or gaussian_packet");
    }
    if (auto* kv = get("incident", "wavevector")) m.incident.wavevector = parse_vector(*kv, "wavevector", m.dimension);
    if (auto* kv = get("incident", "center")) m.incident.center = parse_vector(*kv, "center", m.dimension);
    if (auto* kv = get("incident", "width")) m.incident.width = parse_double(*kv, "width");
    if (auto* kv = get("incident", "normalize")) m.incident.normalize = parse_bool(*kv, "normalize");
    if (auto* kv = get("incident", "total_wavenumber"))
        m.incident.total_wavenumber = parse_double(*kv, "total_wavenumber");

    // [grid]
    if (auto* kv = get("grid", "spacing")) c.grid_spacing = parse_double(*kv, "spacing");
    if (auto* kv = get("grid", "margin")) c.grid_margin = parse_double(*kv, "margin");

    // [plane]
    if (sections.count("plane")) {
        c.has_plane = true;
        if (auto* kv = get("plane", "distance")) c.plane_distance = parse_double(*kv, "distance");
        if (auto* kv = get("plane", "pixel_count")) c.plane_pixel_count = static_cast<int>(parse_int(*kv, "pixel_count"));
        if (auto* kv = get("plane", "pixel_spacing")) c.plane_pixel_spacing = parse_double(*kv, "pixel_spacing");
        if (auto* kv = get("plane", "pixel_width")) c.plane_pixel_width = parse_double(*kv, "pixel_width");
        if (auto* kv = get("plane", "center")) c.plane_center = parse_double(*kv, "center");
    }

    // [detector]
    if (sections.count("detector")) {
        c.has_detector = true;
        c.detector_raw = RawModelParameters{};
        c.detector_raw.natural_units = m.natural_units;
        c.detector_raw.dimension = m.dimension;
        if (auto* kv = get("detector", "oscillator_mass"))
            c.detector_raw.oscillator_mass = parse_double(*kv, "oscillator_mass");
        if (auto* kv = get("detector", "frequency")) c.detector_raw.frequency = parse_double(*kv, "frequency");
        if (auto* kv = get("detector", "level_cap"))
            c.detector_raw.level_cap = static_cast<int>(parse_int(*kv, "level_cap"));
    }

    // [run]
    if (auto* kv = get("run", "shots")) c.shots = static_cast<std::uint64_t>(parse_int(*kv, "shots"));
    if (auto* kv = get("run", "seed")) c.seed = static_cast<std::uint64_t>(parse_int(*kv, "seed"));
    if (auto* kv = get("run", "inelastic_fraction")) c.inelastic_fraction = parse_double(*kv, "inelastic_fraction");

    // [oracle]
    if (auto* kv = get("oracle", "x_min")) c.oracle_x_min = parse_double(*kv, "x_min");
    if (auto* kv = get("oracle", "x_max")) c.oracle_x_max = parse_double(*kv, "x_max");
    if (auto* kv = get("oracle", "points")) c.oracle_points = static_cast<int>(parse_int(*kv, "points"));
    if (auto* kv = get("oracle", "time_step")) c.oracle_time_step = parse_double(*kv, "time_step");
    if (auto* kv = get("oracle", "total_time")) c.oracle_total_time = parse_double(*kv, "total_time");
    if (auto* kv = get("oracle", "per_site_level_cap"))
        c.oracle_level_cap = static_cast<int>(parse_int(*kv, "per_site_level_cap"));
    if (auto* kv = get("oracle", "time_points")) c.oracle_time_points = static_cast<int>(parse_int(*kv, "time_points"));
    if (auto* kv = get("oracle", "absorber")) c.oracle_absorber = parse_bool(*kv, "absorber");
    if (auto* kv = get("oracle", "absorber_width")) c.oracle_absorber_width = parse_double(*kv, "absorber_width");

    return c;
}

std::string serialize_config(const ParsedConfig& c) {
    std::string out;
    const RawModelParameters& m = c.model_raw;
    out += "[model]\n";
    out += "units = " + std::string(m.natural_units ? "natural" : "physical") + "\n";
    out += "dimension = " + std::to_string(m.dimension) + "\n";
    out += "particle_mass = " + format_full(m.particle_mass) + "\n";
    out += "oscillator_mass = " + format_full(m.oscillator_mass) + "\n";
    out += "frequency = " + format_full(m.frequency) + "\n";
    out += "coupling = " + format_full(m.coupling) + "\n";
    out += "potential_range = " + format_full(m.potential_range) + "\n";
    out += "level_cap = " + std::to_string(m.level_cap) + "\n";
    out += "sites = ";
    for (std::size_t i = 0; i < m.sites.size(); ++i) {
        for (int j = 0; j < m.dimension; ++j)
            out += format_full(m.sites[i][j]) + (j + 1 < m.dimension ? "," : "");
        if (i + 1 < m.sites.size()) out += "; ";
    }
    out += "\n";
    if (m.time_window) out += "time_window = " + format_full(*m.time_window) + "\n";

    out += "\n[incident]\n";
    out += "kind = " + std::string(m.incident.kind == IncidentWave::Kind::plane_wave ? "plane_wave"
                                                                                     : "gaussian_packet") + "\n";
    out += "wavevector = ";
    for (int j = 0; j < m.dimension; ++j)
        out += format_full(m.incident.wavevector[j]) + (j + 1 < m.dimension ? "," : "");
    out += "\n";
    out += "center = ";
    for (int j = 0; j < m.dimension; ++j)
        out += format_full(m.incident.center[j]) + (j + 1 < m.dimension ? "," : "");
    out += "\n";
    out += "width = " + format_full(m.incident.width) + "\n";
    out += "normalize = " + std::string(m.incident.normalize ? "true" : "false") + "\n";
    if (m.incident.total_wavenumber)
        out += "total_wavenumber = " + format_full(*m.incident.total_wavenumber) + "\n";

    out += "\n[grid]\n";
    out += "spacing = " + format_full(c.grid_spacing) + "\n";
    out += "margin = " + format_full(c.grid_margin) + "\n";

    if (c.has_plane) {
        out += "\n[plane]\n";
        out += "distance = " + format_full(c.plane_distance) + "\n";
        out += "pixel_count = " + std::to_string(c.plane_pixel_count) + "\n";
        out += "pixel_spacing = " + format_full(c.plane_pixel_spacing) + "\n";
        out += "pixel_width = " + format_full(c.plane_pixel_width) + "\n";
        out += "center = " + format_full(c.plane_center) + "\n";
    }
    if (c.has_detector) {
        out += "\n[detector]\n";
        out += "oscillator_mass = " + format_full(c.detector_raw.oscillator_mass) + "\n";
        out += "frequency = " + format_full(c.detector_raw.frequency) + "\n";
        out += "level_cap = " + std::to_string(c.detector_raw.level_cap) + "\n";
    }

    out += "\n[run]\n";
    out += "shots = " + std::to_string(c.shots) + "\n";
    out += "seed = " + std::to_string(c.seed) + "\n";
    if (c.inelastic_fraction) out += "inelastic_fraction = " + format_full(*c.inelastic_fraction) + "\n";

    out += "\n[oracle]\n";
    out += "x_min = " + format_full(c.oracle_x_min) + "\n";
    out += "x_max = " + format_full(c.oracle_x_max) + "\n";
    out += "points = " + std::to_string(c.oracle_points) + "\n";
    out += "time_step = " + format_full(c.oracle_time_step) + "\n";
    out += "total_time = " + format_full(c.oracle_total_time) + "\n";
    out += "per_site_level_cap = " + std::to_string(c.oracle_level_cap) + "\n";
    out += "time_points = " + std::to_string(c.oracle_time_points) + "\n";
    out += "absorber = " + std::string(c.oracle_absorber ? "true" : "false") + "\n";
    out += "absorber_width = " + format_full(c.oracle_absorber_width) + "\n";
    return out;
}

std::uint64_t config_hash(const ParsedConfig& c) { return fnv1a(serialize_config(c)); }

ModelConfig build_primary_model(const ParsedConfig& c) { return build_model(c.model_raw); }

ModelConfig build_detector_model(const ParsedConfig& c, const ModelConfig& primary) {
    if (!c.has_detector || !c.has_plane)
        throw ConfigError("experiment needs [detector] and [plane] sections");

    ModelConfig det;
    det.dimension = primary.dimension;
    det.particle_mass = primary.particle_mass;
    det.level_cap = c.detector_raw.level_cap;
    det.incident = primary.incident;
    det.scales = primary.scales;
    det.coupling = primary.coupling;
    det.potential_range = primary.potential_range;

    // detector values share the primary's input units in either mode
    det.oscillator_mass = c.detector_raw.oscillator_mass / c.model_raw.oscillator_mass;
    det.frequency = c.detector_raw.frequency / c.model_raw.frequency;
    if (det.oscillator_mass <= 0) throw ConfigError("detector: non-positive oscillator mass");
    if (det.frequency <= 0) throw ConfigError("detector: non-positive frequency");
    if (det.level_cap < 1) throw ConfigError("detector: level cap must be >= 1");

    const DetectorPlane plane = build_plane(c, primary);
    det.sites = plane.pixel_centers;
    return det;
}

DetectorPlane build_plane(const ParsedConfig& c, const ModelConfig& primary) {
    if (!c.has_plane) throw ConfigError("missing [plane] section");
    if (c.plane_pixel_count < 1) throw ConfigError("plane: pixel_count must be >= 1");
    if (c.plane_pixel_spacing <= 0 || c.plane_pixel_width <= 0 || c.plane_distance <= 0)
        throw ConfigError("plane: distance, pixel_spacing and pixel_width must be positive");

    // plane lengths share the primary's input units in either mode
    const double scale = 1.0 / primary.scales.length;

    DetectorPlane plane;
    plane.dim = primary.dimension;
    plane.distance = c.plane_distance * scale;
    plane.pixel_width = c.plane_pixel_width * scale;
    for (int i = 0; i < c.plane_pixel_count; ++i) {
        const double r = c.plane_center + (i - 0.5 * (c.plane_pixel_count - 1)) * c.plane_pixel_spacing;
        std::array<double, 3> p{0, 0, 0};
        p[0] = r * scale;
        plane.pixel_centers.push_back(p);
    }
    plane.validate();
    return plane;
}

ExperimentSpec build_experiment(const ParsedConfig& c) {
    ExperimentSpec spec;
    spec.diffractor = build_primary_model(c);
    spec.plane = build_plane(c, spec.diffractor);
    spec.detector = build_detector_model(c, spec.diffractor);
    spec.grid_spacing = c.grid_spacing * spec.diffractor.ell();
    spec.grid_margin = c.grid_margin;
    spec.shots = c.shots;
    spec.seed = c.seed;
    spec.inelastic_fraction = c.inelastic_fraction;
    spec.workers = c.workers;
    spec.config_hash = config_hash(c);

    // the detector must span at least two fringes of the coarsest pair
    if (spec.diffractor.sites.size() >= 2) {
        double span = 0;
        for (const auto& s1 : spec.diffractor.sites)
            for (const auto& s2 : spec.diffractor.sites) {
                double d2 = 0;
                for (int j = 0; j < spec.diffractor.dimension; ++j)
                    d2 += (s1[j] - s2[j]) * (s1[j] - s2[j]);
                span = std::max(span, std::sqrt(d2));
            }
        const double k = spec.diffractor.incident.kinematic_wavenumber(spec.diffractor.dimension);
        double qmax = 0;
        for (std::size_t p = 0; p < spec.plane.pixel_centers.size(); ++p) {
            const auto q = spec.plane.pixel_q(p, k);
            double q2 = 0;
            for (int j = 0; j < spec.diffractor.dimension; ++j) q2 += q[j] * q[j];
            qmax = std::max(qmax, std::sqrt(q2));
        }
        if (qmax * span < 4.0 * pi)
            throw ConfigError("detector plane does not cover the central fringes of the pattern");
    }
    return spec;
}

std::vector<std::string> preset_names() {
    return {"plane_wave_weights", "two_site", "one_site", "double_slit_scale", "oracle_weak"};
}

std::string preset_config(const std::string& name) {
    if (name == "plane_wave_weights") {
        return
            "[model]\n"
            "units = natural\n"
            "dimension = 1\n"
            "particle_mass = 0.2\n"
            "oscillator_mass = 1\n"
            "frequency = 1\n"
            "coupling = 0.05\n"
            "potential_range = 0.05\n"
            "level_cap = 8\n"
            "sites = 0\n"
            "\n[incident]\n"
            "kind = plane_wave\n"
            "wavevector = 1.2\n"
            "normalize = true\n"
            "\n[grid]\n"
            "spacing = 0.05\n"
            "margin = 12\n"
            "\n[run]\n"
            "shots = 10000\n"
            "seed = 1\n";
    }
    if (name == "two_site" || name == "one_site") {
        std::string sites = name == "two_site" ? "-20; 20" : "0";
        return
            "[model]\n"
            "units = natural\n"
            "dimension = 1\n"
            "particle_mass = 0.2\n"
            "oscillator_mass = 1\n"
            "frequency = 1\n"
            "coupling = 0.05\n"
            "potential_range = 0.05\n"
            "level_cap = 8\n"
            "sites = " + sites + "\n"
            "\n[incident]\n"
            "kind = plane_wave\n"
            "wavevector = 0\n"
            "normalize = true\n"
            "total_wavenumber = 8\n"
            "\n[grid]\n"
            "spacing = 0.1\n"
            "margin = 10\n"
            "\n[plane]\n"
            "distance = 6000\n"
            "pixel_count = 81\n"
            "pixel_spacing = 14\n"
            "pixel_width = 14\n"
            "center = 0\n"
            "\n[detector]\n"
            "oscillator_mass = 4\n"
            "frequency = 8\n"
            "level_cap = 10\n"
            "\n[run]\n"
            "shots = 100000\n"
            "seed = 7\n"
            "inelastic_fraction = 0.9\n";
    }
    if (name == "double_slit_scale") {
        // 600 eV electrons on two 62 nm clusters 272 nm apart; 238.2 um pixels
        const double k_per_nm = std::sqrt(2.0 * 511e3 * 600.0) / hbar_c_eV_nm;
        const double ell1 = hbar_c_eV_nm / std::sqrt(511e3 * 1.0);
        const double site_step = 4.0 * ell1;
        std::string sites;
        for (int cluster = 0; cluster < 2; ++cluster) {
            const double center = cluster == 0 ? -136.0 : 136.0;
            const int per = static_cast<int>(std::floor(62.0 / site_step)) + 1;  // spans ~62 nm
            for (int i = 0; i < per; ++i) {
                const double x = center + (i - 0.5 * (per - 1)) * site_step;
                if (!sites.empty()) sites += "; ";
                sites += format_full(x);
            }
        }
        return
            "[model]\n"
            "units = physical\n"
            "dimension = 1\n"
            "particle_mass = 511\n"
            "oscillator_mass = 511\n"
            "frequency = 1.0\n"
            "coupling = 1.0\n"
            "potential_range = 0.02\n"
            "level_cap = 8\n"
            "sites = " + sites + "\n"
            "\n[incident]\n"
            "kind = plane_wave\n"
            "wavevector = 0\n"
            "normalize = true\n"
            "total_wavenumber = " + format_full(k_per_nm) + "\n"
            "\n[grid]\n"
            "spacing = 0.3\n"
            "margin = 8\n"
            "\n[plane]\n"
            "distance = 5.5e9\n"
            "pixel_count = 41\n"
            "pixel_spacing = 238200\n"
            "pixel_width = 238200\n"
            "center = 0\n"
            "\n[detector]\n"
            "oscillator_mass = 511000\n"
            "frequency = 0.6\n"
            "level_cap = 10\n"
            "\n[run]\n"
            "shots = 100000\n"
            "seed = 7\n"
            "inelastic_fraction = 0.9\n";
    }
    if (name == "oracle_weak") {
        return
            "[model]\n"
            "units = natural\n"
            "dimension = 1\n"
            "particle_mass = 1\n"
            "oscillator_mass = 1\n"
            "frequency = 1\n"
            "coupling = 0.02\n"
            "potential_range = 0.4\n"
            "level_cap = 8\n"
            "sites = 0\n"
            "\n[incident]\n"
            "kind = gaussian_packet\n"
            "wavevector = 2.4\n"
            "center = -20\n"
            "width = 5\n"
            "normalize = true\n"
            "\n[grid]\n"
            "spacing = 0.1\n"
            "margin = 8\n"
            "\n[run]\n"
            "shots = 1\n"
            "seed = 1\n"
            "\n[oracle]\n"
            "x_min = -70\n"
            "x_max = 80\n"
            "points = 256\n"
            "time_step = 5e-4\n"
            "total_time = 20\n"
            "per_site_level_cap = 4\n"
            "time_points = 400\n"
            "absorber = false\n"
            "absorber_width = 10\n";
    }
    throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace oscatter
