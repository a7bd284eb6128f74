#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "oscatter/config.hpp"
#include "oscatter/far_field.hpp"
#include "oscatter/finite_time.hpp"
#include "oscatter/histogram.hpp"
#include "oscatter/jumps.hpp"
#include "oscatter/manifest.hpp"
#include "oscatter/oracle.hpp"
#include "oscatter/sources.hpp"

namespace fs = std::filesystem;
using namespace oscatter;

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonArgs {
    std::string config_path;
    std::string preset;
    std::string output_dir;
    std::string format = "csv";
    std::int64_t seed_override = -1;
    int workers = 0;
    bool events = false;
    bool fields = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-c,--config", args.config_path, "configuration file");
    cmd->add_option("-p,--preset", args.preset, "built-in preset name");
    cmd->add_option("-o,--output-dir", args.output_dir, "output directory");
    cmd->add_option("--seed", args.seed_override, "override the configured seed");
    cmd->add_option("--workers", args.workers, "worker threads for shot sampling");
    cmd->add_option("--format", args.format, "csv or json histogram output")
        ->check(CLI::IsMember({"csv", "json"}));
}

ParsedConfig load_config(const CommonArgs& args) {
    std::string text;
    if (!args.preset.empty() && !args.config_path.empty())
        throw ConfigError("give either --config or --preset, not both");
    if (!args.preset.empty()) {
        text = preset_config(args.preset);
    } else if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw ConfigError("cannot read config file '" + args.config_path + "'");
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    } else {
        throw ConfigError("a --config file or --preset name is required");
    }
    ParsedConfig c = parse_config(text);
    if (args.seed_override >= 0) c.seed = static_cast<std::uint64_t>(args.seed_override);
    if (args.workers > 0) c.workers = args.workers;
    return c;
}

fs::path resolve_output_dir(const CommonArgs& args) {
    std::string dir = args.output_dir;
    if (dir.empty()) {
        const char* env = std::getenv("OSCATTER_OUTPUT_DIR");
        dir = env ? env : ".";
    }
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (!fs::is_directory(p)) throw IoError("cannot create output directory '" + dir + "'");
    return p;
}

struct Writer {
    fs::path dir;
    RunManifest manifest;

    void file(const std::string& name, const std::string& content) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw IoError("cannot write '" + (dir / name).string() + "'");
        out << content;
        manifest.outputs.push_back(name);
    }
    void finish() {
        manifest.finished_utc = utc_now();
        std::ofstream out(dir / "manifest.json", std::ios::binary);
        out << manifest.json();
    }
};

std::string weights_csv(const JumpWeightTable& table, const ProbabilityTable& probs) {
    std::string out = "site,level,weight,source_norm,probability,closed\n";
    std::size_t pi = 0;
    for (const auto& e : table.entries) {
        double p = 0;
        if (pi < probs.outcomes.size() && probs.outcomes[pi].site == e.site &&
            probs.outcomes[pi].level == e.level) {
            p = probs.outcomes[pi].weight;
            ++pi;
        }
        out += std::to_string(e.site) + "," + e.level.str() + "," + format_full(e.weight) + "," +
               format_full(e.source_norm) + "," + format_full(p) + "," + (e.closed ? "1" : "0") + "\n";
    }
    out += "elastic,," + format_full(table.elastic_weight) + ",," + format_full(probs.elastic_prob) + ",0\n";
    return out;
}

nlohmann::json histogram_json(const Histogram& h) {
    nlohmann::json j;
    j["site_positions"] = h.site_positions;
    j["site_counts"] = h.site_counts;
    j["elastic_count"] = h.elastic_count;
    j["shots"] = h.shots;
    j["seed"] = h.seed;
    j["config_hash"] = h.config_hash;
    return j;
}

int cmd_weights(const CommonArgs& args) {
    ParsedConfig c = load_config(args);
    Writer w{resolve_output_dir(args), {}};
    w.manifest.subcommand = "weights";
    w.manifest.config_hash = config_hash(c);
    w.manifest.seed = c.seed;
    w.manifest.started_utc = utc_now();

    ModelConfig model = build_primary_model(c);
    Grid grid = Grid::covering(model, c.grid_spacing * model.ell(), c.grid_margin);
    ScalarField psi = sample_incident(model, grid);
    JumpWeightTable table = jump_weights(psi, model);
    const double eta = c.inelastic_fraction ? *c.inelastic_fraction : default_inelastic_fraction(table);
    ProbabilityTable probs = normalize(table, eta);

    w.file("weights.csv", weights_csv(table, probs));
    w.finish();
    std::cout << "weights: " << table.entries.size() << " channels, inelastic fraction "
              << format_full(probs.inelastic_fraction) << ", tail fraction "
              << format_full(table.tail_fraction) << "\n";
    return 0;
}

int cmd_diffract(const CommonArgs& args) {
    ParsedConfig c = load_config(args);
    Writer w{resolve_output_dir(args), {}};
    w.manifest.subcommand = "diffract";
    w.manifest.config_hash = config_hash(c);
    w.manifest.seed = c.seed;
    w.manifest.started_utc = utc_now();

    ModelConfig model = build_primary_model(c);
    Grid grid = Grid::covering(model, c.grid_spacing * model.ell(), c.grid_margin);
    ScalarField psi = sample_incident(model, grid);
    ScalarField source = elastic_source(psi, model);
    DetectorPlane plane = build_plane(c, model);
    auto amps = far_field(source, plane);

    std::string csv = "pixel_position,q,re,im,intensity\n";
    for (std::size_t p = 0; p < amps.size(); ++p) {
        const auto q = plane.pixel_q(p, source.k_out);
        csv += format_full(plane.pixel_centers[p][0]) + "," + format_full(q[0]) + "," +
               format_full(amps[p].real()) + "," + format_full(amps[p].imag()) + "," +
               format_full(std::norm(amps[p])) + "\n";
    }
    w.file("farfield.csv", csv);
    if (args.fields) {
        std::string dump = "x0,x1,x2,re,im\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto x = grid.point(i);
            dump += format_full(x[0]) + "," + format_full(x[1]) + "," + format_full(x[2]) + "," +
                    format_full(source.amp[i].real()) + "," + format_full(source.amp[i].imag()) + "\n";
        }
        w.file("source_field.csv", dump);
    }
    w.finish();
    std::cout << "diffract: " << amps.size() << " pixels\n";
    return 0;
}

int cmd_detect(const CommonArgs& args) {
    ParsedConfig c = load_config(args);
    Writer w{resolve_output_dir(args), {}};
    w.manifest.subcommand = "detect";
    w.manifest.config_hash = config_hash(c);
    w.manifest.seed = c.seed;
    w.manifest.started_utc = utc_now();

    ModelConfig model = build_primary_model(c);
    Grid grid = Grid::covering(model, c.grid_spacing * model.ell(), c.grid_margin);
    ScalarField psi = sample_incident(model, grid);
    JumpWeightTable table = jump_weights(psi, model);
    const double eta = c.inelastic_fraction ? *c.inelastic_fraction : default_inelastic_fraction(table);
    ProbabilityTable probs = normalize(table, eta);

    Histogram hist;
    hist.site_counts.assign(model.sites.size(), 0);
    hist.site_positions.resize(model.sites.size());
    for (std::size_t s = 0; s < model.sites.size(); ++s) hist.site_positions[s] = model.sites[s][0];
    hist.seed = c.seed;
    hist.config_hash = config_hash(c);

    std::string events = event_log_header() + "\n";
    for (std::uint64_t shot = 0; shot < c.shots; ++shot) {
        RngStream stream(c.seed, shot);
        DetectionEvent ev = sample_jump(probs, stream, model);
        if (ev.elastic)
            ++hist.elastic_count;
        else
            ++hist.site_counts[static_cast<std::size_t>(ev.site)];
        ++hist.shots;
        events += event_log_line(shot, ev) + "\n";
    }
    hist.check_conservation();

    w.file("histogram.csv", histogram_csv(hist));
    w.file("events.csv", events);
    if (args.format == "json") w.file("histogram.json", histogram_json(hist).dump(2) + "\n");
    w.finish();
    std::cout << "detect: " << (hist.shots - hist.elastic_count) << " detections in " << hist.shots
              << " shots\n";
    return 0;
}

int cmd_experiment(const CommonArgs& args) {
    ParsedConfig c = load_config(args);
    Writer w{resolve_output_dir(args), {}};
    w.manifest.subcommand = "experiment";
    w.manifest.config_hash = config_hash(c);
    w.manifest.seed = c.seed;
    w.manifest.started_utc = utc_now();

    ExperimentSpec spec = build_experiment(c);
    ExperimentResult res = run_experiment(spec);

    w.file("histogram.csv", histogram_csv(res.histogram));
    std::string intensity = "pixel_position,intensity\n";
    for (std::size_t p = 0; p < res.pixel_intensity.size(); ++p)
        intensity += format_full(spec.plane.pixel_centers[p][0]) + "," +
                     format_full(res.pixel_intensity[p]) + "\n";
    w.file("intensity.csv", intensity);

    nlohmann::json report;
    report["shots"] = res.histogram.shots;
    report["detections"] = res.histogram.shots - res.histogram.elastic_count;
    report["elastic_count"] = res.histogram.elastic_count;
    report["inelastic_fraction"] = res.inelastic_fraction;
    report["k_out"] = res.k_out;
    report["config_hash"] = config_hash(c);
    report["seed"] = c.seed;
    try {
        report["visibility"] = visibility(res.histogram);
        report["fringe_period_pixels"] = fringe_period_sites(res.histogram);
    } catch (const HistogramError& e) {
        report["visibility"] = nullptr;
        report["visibility_note"] = e.what();
    }
    w.file("report.json", report.dump(2) + "\n");

    if (args.events) {
        std::string events = event_log_header() + "\n";
        for (std::uint64_t shot = 0; shot < spec.shots; ++shot) {
            RngStream stream(spec.seed, shot);
            DetectionEvent ev = sample_jump(res.table, stream, spec.detector);
            events += event_log_line(shot, ev) + "\n";
        }
        w.file("events.csv", events);
    }
    if (args.format == "json") w.file("histogram.json", histogram_json(res.histogram).dump(2) + "\n");
    w.finish();
    std::cout << "experiment: " << (res.histogram.shots - res.histogram.elastic_count)
              << " detections in " << res.histogram.shots << " shots\n";
    return 0;
}

int cmd_oracle(const CommonArgs& args) {
    ParsedConfig c = load_config(args);
    Writer w{resolve_output_dir(args), {}};
    w.manifest.subcommand = "oracle";
    w.manifest.config_hash = config_hash(c);
    w.manifest.seed = c.seed;
    w.manifest.started_utc = utc_now();

    ModelConfig model = build_primary_model(c);
    const double h = (c.oracle_x_max - c.oracle_x_min) / c.oracle_points;
    Grid grid(1, {c.oracle_x_min, 0, 0}, h, {c.oracle_points, 1, 1});

    CoupledState state = initial_state(model, grid, c.oracle_level_cap);
    EvolveOptions opt;
    opt.time_step = c.oracle_time_step;
    opt.total_time = c.oracle_total_time;
    opt.per_site_level_cap = c.oracle_level_cap;
    opt.absorber = c.oracle_absorber;
    opt.absorber_width = c.oracle_absorber_width;
    EvolveDiagnostics diag = evolve(state, model, opt);
    const auto probs = state.channel_probabilities();

    std::vector<double> first_order;
    if (model.sites.size() == 1)
        first_order = first_order_prediction(model, grid, c.oracle_total_time, c.oracle_time_points,
                                             c.oracle_level_cap);

    nlohmann::json report;
    report["config_hash"] = config_hash(c);
    nlohmann::json params;
    params["coupling"] = model.coupling;
    params["particle_mass"] = model.particle_mass;
    params["potential_range"] = model.potential_range;
    params["grid_points"] = c.oracle_points;
    params["grid_spacing"] = h;
    params["time_step"] = c.oracle_time_step;
    params["total_time"] = c.oracle_total_time;
    params["per_site_level_cap"] = c.oracle_level_cap;
    params["sites"] = model.sites.size();
    report["parameters"] = params;
    report["steps"] = diag.steps;
    report["norm_drift"] = diag.norm_drift;
    report["boundary_monitor"] = diag.boundary_monitor;
    report["leakage"] = diag.leakage;
    report["absorbed"] = diag.absorbed;
    nlohmann::json channels = nlohmann::json::array();
    for (std::size_t ch = 0; ch < state.channels.size(); ++ch) {
        nlohmann::json entry;
        entry["site_levels"] = state.channels[ch].site_levels;
        entry["probability"] = probs[ch];
        if (!first_order.empty() && state.channels[ch].site_levels.size() == 1) {
            const int lev = state.channels[ch].site_levels[0];
            if (lev >= 1 && lev < static_cast<int>(first_order.size())) {
                entry["first_order"] = first_order[lev];
                if (first_order[lev] > 0)
                    entry["relative_error"] = std::abs(probs[ch] - first_order[lev]) / first_order[lev];
            }
        }
        channels.push_back(entry);
    }
    report["channels"] = channels;
    w.file("oracle_report.json", report.dump(2) + "\n");
    w.finish();
    std::cout << "oracle: " << diag.steps << " steps, norm drift " << format_full(diag.norm_drift)
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"oscillator-array scattering and detection simulator"};
    app.require_subcommand(1);

    CommonArgs args;
    auto* weights = app.add_subcommand("weights", "dump the jump-weight table for a model");
    add_common(weights, args);
    auto* diffract = app.add_subcommand("diffract", "elastic source and far-field profile");
    add_common(diffract, args);
    diffract->add_flag("--fields", args.fields, "also dump the source field samples");
    auto* detect = app.add_subcommand("detect", "sample quantum jumps for one incident field");
    add_common(detect, args);
    auto* experiment = app.add_subcommand("experiment", "two-stage diffraction + detection run");
    add_common(experiment, args);
    experiment->add_flag("--events", args.events, "also write the per-shot event log");
    auto* oracle = app.add_subcommand("oracle", "coupled-channel evolution vs first-order check");
    add_common(oracle, args);

    try {
        app.parse(argc, argv);
        if (weights->parsed()) return cmd_weights(args);
        if (diffract->parsed()) return cmd_diffract(args);
        if (detect->parsed()) return cmd_detect(args);
        if (experiment->parsed()) return cmd_experiment(args);
        if (oracle->parsed()) return cmd_oracle(args);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ModelError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "filesystem error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
