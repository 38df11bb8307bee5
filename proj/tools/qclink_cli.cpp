// Command-line front end: scenario-driven simulations and sweeps emitted as
// deterministic CSV tables, each paired with a replayable run manifest.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qclink/analysis.hpp"
#include "qclink/scenario.hpp"
#include "qclink/sim.hpp"

namespace fs = std::filesystem;
using njson = nlohmann::ordered_json;
using namespace qclink;

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string fmt_km(double x) {  // reported distances rounded to 0.1 km
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.1f", x);
    return buf;
}

struct CommonOpts {
    std::string config_path;  // empty: built-in default scenario
    std::string out_dir = ".";
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
};

Scenario resolve_scenario(const CommonOpts& o) {
    Scenario s = o.config_path.empty() ? default_paper_scenario()
                                       : load_scenario(o.config_path);
    std::map<std::string, std::string> overrides;
    for (const std::string& kv : o.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        }
        overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    s = with_overrides(s, overrides);
    if (o.seed) s.seed = *o.seed;
    const std::vector<std::string> violations = validate(s);
    if (!violations.empty()) {
        std::string msg = "invalid scenario:";
        for (const std::string& v : violations) msg += "\n  " + v;
        throw std::runtime_error(msg);
    }
    return s;
}

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_manifest(const CommonOpts& o, const std::string& command,
                    const njson& args, const std::vector<std::string>& outputs,
                    std::uint64_t effective_seed, double duration_s) {
    njson m;
    m["command"] = command;
    m["scenario"] = o.config_path;
    m["overrides"] = o.sets;
    m["seed"] = effective_seed;
    m["args"] = args;
    m["outputs"] = outputs;
    m["version"] = kToolVersion;
    m["duration_s"] = duration_s;
    write_text(fs::path(o.out_dir) / (command + ".manifest"), m.dump(2) + "\n");
}

struct Stats {
    double mean = 0.0, stddev = 0.0, min = 0.0, max = 0.0;
};

Stats series_stats(const std::vector<double>& xs) {
    Stats st;
    if (xs.empty()) return st;
    double sum = 0, sq = 0;
    st.min = st.max = xs[0];
    for (double x : xs) {
        sum += x;
        sq += x * x;
        st.min = std::min(st.min, x);
        st.max = std::max(st.max, x);
    }
    st.mean = sum / xs.size();
    st.stddev = std::sqrt(std::max(0.0, sq / xs.size() - st.mean * st.mean));
    return st;
}

// ---- drift-run --------------------------------------------------------

std::vector<std::string> run_drift(const Scenario& s, const njson& args,
                                   const std::string& out_dir) {
    const double duration = args.at("duration_s").get<double>();
    const bool control_on = args.at("control").get<std::string>() == "on";
    const std::vector<DriftRecord> records =
        run_stabilization(s, duration, control_on, s.seed);

    std::ostringstream csv;
    csv << "t_s,direction,i1,i2,counts_spcm_a,counts_spcm_b,fidelity,"
           "visibility_window\n";
    for (const DriftRecord& r : records) {
        csv << fmt(r.t_s) << ',' << to_string(r.direction) << ',' << fmt(r.i1)
            << ',' << fmt(r.i2) << ',' << r.counts_spcm_a << ','
            << r.counts_spcm_b << ',' << fmt(r.fidelity) << ','
            << fmt(r.visibility_window) << '\n';
    }
    write_text(fs::path(out_dir) / "drift-run.csv", csv.str());

    for (Direction d : {Direction::node1_to_node2, Direction::node2_to_node1}) {
        const Stats st = series_stats(window_visibilities(records, d));
        std::printf("%s: mean visibility %s +/- %s (min %s)\n",
                    to_string(d).c_str(), fmt(st.mean).c_str(),
                    fmt(st.stddev).c_str(), fmt(st.min).c_str());
        if (!control_on && st.max - st.min > 0.5) {
            std::printf("%s: visibility non-stationary (range %s)\n",
                        to_string(d).c_str(), fmt(st.max - st.min).c_str());
        }
    }
    return {"drift-run.csv"};
}

// ---- visibility-hist --------------------------------------------------

std::map<std::string, std::vector<double>> read_drift_visibilities(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty input: " + path);
    std::vector<std::string> header;
    {
        std::istringstream hs(line);
        std::string col;
        while (std::getline(hs, col, ',')) header.push_back(col);
    }
    const auto col_of = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw std::runtime_error("missing column '" + name + "' in " + path);
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t dir_col = col_of("direction");
    const std::size_t vis_col = col_of("visibility_window");
    std::map<std::string, std::vector<double>> by_dir;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() <= std::max(dir_col, vis_col)) continue;
        by_dir[cells[dir_col]].push_back(std::stod(cells[vis_col]));
    }
    if (by_dir.empty()) throw std::runtime_error("no data rows in " + path);
    return by_dir;
}

std::vector<std::string> run_hist(const njson& args, const std::string& out_dir) {
    const std::string input = args.at("input").get<std::string>();
    const int bins = args.at("bins").get<int>();
    const auto by_dir = read_drift_visibilities(input);

    std::ostringstream csv;
    csv << "direction,bin_lo,bin_hi,count\n";
    for (const auto& [dir, samples] : by_dir) {
        const Histogram h = visibility_histogram(samples, bins);
        for (std::size_t i = 0; i < h.counts.size(); ++i) {
            csv << dir << ',' << fmt(h.bin_edges[i]) << ','
                << fmt(h.bin_edges[i + 1]) << ',' << h.counts[i] << '\n';
        }
        std::printf("%s: min %s mean %s std %s, all samples > 0.78: %s\n",
                    dir.c_str(), fmt(h.min).c_str(), fmt(h.mean).c_str(),
                    fmt(h.stddev).c_str(), h.min > 0.78 ? "yes" : "no");
    }
    write_text(fs::path(out_dir) / "visibility-hist.csv", csv.str());
    return {"visibility-hist.csv"};
}

// ---- distance-sweep ---------------------------------------------------

std::vector<std::string> run_distance(const Scenario& base, const njson& args,
                                      const std::string& out_dir) {
    const double zmax = args.at("zmax_km").get<double>();
    const double step = args.at("step_km").get<double>();
    std::vector<double> powers = args.at("powers_dbm").get<std::vector<double>>();
    if (powers.empty()) powers.push_back(base.launch_dbm_per_channel());
    if (zmax < base.fiber.length_km) {
        throw std::runtime_error("sweep excludes calibration point");
    }
    std::vector<double> grid;
    for (double z = step; z <= zmax + 1e-9; z += step) grid.push_back(z);

    std::ostringstream csv;
    csv << "power_dbm,z_km,v_12,v_21,ber,raman_12_cps,raman_21_cps\n";
    std::ostringstream footer;
    for (double p : powers) {
        Scenario s = base;
        s.launch_dbm.assign(s.launch_dbm.size(), p);
        for (const SweepRow& row : visibility_vs_distance(s, grid)) {
            csv << fmt(p) << ',' << fmt(row.z_km) << ',' << fmt(row.v_12) << ','
                << fmt(row.v_21) << ',' << fmt(row.ber) << ','
                << fmt(row.raman_12_cps) << ',' << fmt(row.raman_21_cps) << '\n';
        }
        const double d12 = max_distance(s, Direction::node1_to_node2);
        const double d21 = max_distance(s, Direction::node2_to_node1);
        const ClassicalReach cl = classical_max_distance(s);
        footer << "# power_dbm=" << fmt(p) << " max_km_1->2=" << fmt_km(d12)
               << " max_km_2->1=" << fmt_km(d21)
               << " classical_efec_km=" << fmt_km(cl.z_km)
               << " binding=" << to_string(d21 <= d12 ? Direction::node2_to_node1
                                                      : Direction::node1_to_node2)
               << '\n';
    }
    csv << footer.str();
    std::fputs(footer.str().c_str(), stdout);
    write_text(fs::path(out_dir) / "distance-sweep.csv", csv.str());
    return {"distance-sweep.csv"};
}

// ---- multichannel-sweep -----------------------------------------------

std::vector<std::string> run_multichannel(const Scenario& base, const njson& args,
                                          const std::string& out_dir) {
    const std::vector<int> channels = args.at("channels").get<std::vector<int>>();
    const double filter_ghz = args.at("filter_ghz").get<double>();
    const double spacing = args.at("spacing_ghz").get<double>();
    const FiberType fiber = args.at("fiber").get<std::string>() == "standard"
                                ? FiberType::standard
                                : FiberType::dispersion_shifted;
    const double zmax = args.at("zmax_km").get<double>();
    const double step = args.at("step_km").get<double>();
    std::vector<double> grid;
    for (double z = step; z <= zmax + 1e-9; z += step) grid.push_back(z);

    std::ostringstream csv;
    csv << "n_channels,z_km,v_12,v_21\n";
    std::ostringstream footer;
    for (int n : channels) {
        Scenario s = base;
        s.plan = build_channel_plan(n, spacing, base.plan.quantum_wavelength_nm);
        s.fiber.fiber_type = fiber;
        s.quantum_filter_bw_ghz = filter_ghz;
        s.launch_dbm.assign(static_cast<std::size_t>(n),
                            base.launch_dbm_per_channel());
        if (!s.raman.channel_scaling.covers(n, spacing, fiber)) {
            throw std::runtime_error("uncalibrated configuration");
        }
        for (const SweepRow& row : visibility_vs_distance(s, grid)) {
            csv << n << ',' << fmt(row.z_km) << ',' << fmt(row.v_12) << ','
                << fmt(row.v_21) << '\n';
        }
        for (Direction d : {Direction::node1_to_node2, Direction::node2_to_node1}) {
            std::string crossing = "n/a";
            try {
                crossing = fmt_km(max_distance(s, d));
            } catch (const std::exception&) {
            }
            footer << "# n=" << n << " direction=" << to_string(d)
                   << " crossing_km=" << crossing << '\n';
        }
    }
    csv << footer.str();
    std::fputs(footer.str().c_str(), stdout);
    write_text(fs::path(out_dir) / "multichannel-sweep.csv", csv.str());
    return {"multichannel-sweep.csv"};
}

// ---- calibrate ---------------------------------------------------------

std::vector<std::string> run_calibrate(const Scenario& base, const njson& args,
                                       const std::string& out_dir) {
    struct Point {
        double dbm, c12, c21;
    };
    std::vector<Point> pts;
    for (const auto& m : args.at("measured")) {
        const auto triple = m.get<std::vector<double>>();
        if (triple.size() != 3) {
            throw std::runtime_error("--measured expects dbm,counts12,counts21");
        }
        if (triple[1] <= 0.0 || triple[2] <= 0.0) {
            throw std::runtime_error("measured counts must be positive");
        }
        pts.push_back({triple[0], triple[1], triple[2]});
    }
    if (pts.empty()) throw std::runtime_error("no --measured points given");

    const RamanParams p =
        calibrate(base.fiber.length_km, pts[0].dbm, pts[0].c12, pts[0].c21,
                  base.fiber.attenuation_db_per_km);
    std::string res12 = "n/a", res21 = "n/a";
    if (pts.size() > 1) {
        const double mw = dbm_to_mw(pts[1].dbm);
        const double r12 =
            std::abs(s12(base.fiber.length_km, mw, p) - pts[1].c12) / pts[1].c12;
        const double r21 =
            std::abs(s21(base.fiber.length_km, mw, p) - pts[1].c21) / pts[1].c21;
        res12 = fmt(r12);
        res21 = fmt(r21);
        if (std::max(r12, r21) > 0.05) {
            std::printf("warning: large linearity residual (%s, %s) -- measured "
                        "counts are not proportional to launch power\n",
                        res12.c_str(), res21.c_str());
        }
    }
    std::ostringstream csv;
    csv << "beta_12,beta_21,alpha_db_per_km,filter_bw_ghz,residual_12,"
           "residual_21\n";
    csv << fmt(p.beta_12) << ',' << fmt(p.beta_21) << ','
        << fmt(p.alpha_db_per_km) << ',' << fmt(p.filter_bw_ghz) << ',' << res12
        << ',' << res21 << '\n';
    write_text(fs::path(out_dir) / "calibrate.csv", csv.str());
    std::printf("beta_12=%s beta_21=%s counts/(s*mW*km), residuals %s / %s\n",
                fmt(p.beta_12).c_str(), fmt(p.beta_21).c_str(), res12.c_str(),
                res21.c_str());
    return {"calibrate.csv"};
}

// ---- dispatch / replay --------------------------------------------------

std::vector<std::string> dispatch(const std::string& command,
                                  const CommonOpts& common, const njson& args) {
    if (command == "visibility-hist") return run_hist(args, common.out_dir);
    const Scenario s = resolve_scenario(common);
    if (command == "drift-run") return run_drift(s, args, common.out_dir);
    if (command == "distance-sweep") return run_distance(s, args, common.out_dir);
    if (command == "multichannel-sweep") {
        return run_multichannel(s, args, common.out_dir);
    }
    if (command == "calibrate") return run_calibrate(s, args, common.out_dir);
    throw std::runtime_error("unknown command in manifest: " + command);
}

int run_and_record(const std::string& command, const CommonOpts& common,
                   const njson& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::string> outputs = dispatch(command, common, args);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::uint64_t seed = common.seed.value_or(0);
    if (!common.seed && command != "visibility-hist") {
        seed = resolve_scenario(common).seed;
    }
    write_manifest(common, command, args, outputs, seed, elapsed);
    return 0;
}

int run_replay(const std::string& manifest_path, std::string out_dir) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot read " + manifest_path);
    const njson m = njson::parse(in);
    const fs::path manifest_dir = fs::path(manifest_path).parent_path();
    if (out_dir.empty()) out_dir = (manifest_dir / "replay").string();

    CommonOpts common;
    common.config_path = m.at("scenario").get<std::string>();
    common.sets = m.at("overrides").get<std::vector<std::string>>();
    common.seed = m.at("seed").get<std::uint64_t>();
    common.out_dir = out_dir;
    const std::vector<std::string> outputs =
        dispatch(m.at("command").get<std::string>(), common, m.at("args"));

    bool all_identical = true;
    for (const std::string& name : outputs) {
        const fs::path original = manifest_dir / name;
        const fs::path replayed = fs::path(out_dir) / name;
        std::ifstream a(original, std::ios::binary), b(replayed, std::ios::binary);
        const std::string sa((std::istreambuf_iterator<char>(a)), {});
        const std::string sb((std::istreambuf_iterator<char>(b)), {});
        const bool same = a && b && sa == sb;
        all_identical &= same;
        std::printf("%s: %s\n", name.c_str(), same ? "identical" : "differs");
    }
    return all_identical ? 0 : 1;
}

void add_common(CLI::App* cmd, CommonOpts& common, bool with_config = true) {
    if (with_config) {
        cmd->add_option("config", common.config_path, "scenario JSON path")
            ->check(CLI::ExistingFile);
    }
    cmd->add_option("--out", common.out_dir, "output directory");
    cmd->add_option("--set", common.sets, "scenario override key=value");
    auto* seed_opt = cmd->add_option("--seed", "RNG seed override");
    seed_opt->each([&common](const std::string& v) {
        common.seed = std::stoull(v);
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-way polarization-encoded quantum / classical DWDM link "
                 "simulator and planner"};
    app.require_subcommand(1);

    CommonOpts drift_common;
    double drift_duration = 1000.0;
    std::string drift_control = "on";
    auto* drift = app.add_subcommand(
        "drift-run", "simulate the stabilization loop over time");
    add_common(drift, drift_common);
    drift->add_option("--duration", drift_duration, "simulated seconds")
        ->check(CLI::PositiveNumber);
    drift->add_option("--control", drift_control, "feedback loop on/off")
        ->check(CLI::IsMember({"on", "off"}));

    CommonOpts hist_common;
    std::string hist_input;
    int hist_bins = 20;
    auto* hist = app.add_subcommand("visibility-hist",
                                    "histogram a drift-run visibility series");
    hist->add_option("input", hist_input, "drift-run CSV")
        ->required()
        ->check(CLI::ExistingFile);
    hist->add_option("--bins", hist_bins, "histogram bins")
        ->check(CLI::PositiveNumber);
    hist->add_option("--out", hist_common.out_dir, "output directory");

    CommonOpts dist_common;
    std::vector<double> dist_powers;
    double dist_zmax = 100.0, dist_step = 1.0;
    auto* dist = app.add_subcommand("distance-sweep",
                                    "visibility and BER vs link length");
    add_common(dist, dist_common);
    dist->add_option("--powers", dist_powers, "launch powers in dBm");
    dist->add_option("--zmax", dist_zmax, "max length km")
        ->check(CLI::PositiveNumber);
    dist->add_option("--step", dist_step, "grid step km")
        ->check(CLI::PositiveNumber);

    CommonOpts mc_common;
    std::vector<int> mc_channels{1, 2, 4, 8, 16};
    double mc_filter = 1.0, mc_spacing = 100.0;
    double mc_zmax = 100.0, mc_step = 1.0;
    std::string mc_fiber = "standard";
    auto* mc = app.add_subcommand("multichannel-sweep",
                                  "visibility vs length for N channels");
    add_common(mc, mc_common);
    mc->add_option("--channels", mc_channels, "channel counts");
    mc->add_option("--filter-ghz", mc_filter, "quantum filter bandwidth GHz")
        ->check(CLI::PositiveNumber);
    mc->add_option("--spacing", mc_spacing, "grid spacing GHz")
        ->check(CLI::IsMember({100.0, 200.0}));
    mc->add_option("--fiber", mc_fiber, "fiber type")
        ->check(CLI::IsMember({"DS", "standard"}));
    mc->add_option("--zmax", mc_zmax, "max length km")->check(CLI::PositiveNumber);
    mc->add_option("--step", mc_step, "grid step km")->check(CLI::PositiveNumber);

    CommonOpts cal_common;
    std::vector<std::vector<double>> cal_measured;
    auto* cal = app.add_subcommand(
        "calibrate", "fit Raman coefficients from measured count rates");
    add_common(cal, cal_common);
    cal->add_option("--measured", cal_measured,
                    "dbm counts12 counts21 (repeatable)")
        ->expected(3)
        ->required();

    std::string replay_manifest, replay_out;
    auto* rep = app.add_subcommand("replay",
                                   "re-run a manifest and compare outputs");
    rep->add_option("manifest", replay_manifest, "manifest path")
        ->required()
        ->check(CLI::ExistingFile);
    rep->add_option("--out", replay_out, "replay output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (drift->parsed()) {
            njson args;
            args["duration_s"] = drift_duration;
            args["control"] = drift_control;
            return run_and_record("drift-run", drift_common, args);
        }
        if (hist->parsed()) {
            njson args;
            args["input"] = hist_input;
            args["bins"] = hist_bins;
            return run_and_record("visibility-hist", hist_common, args);
        }
        if (dist->parsed()) {
            njson args;
            args["powers_dbm"] = dist_powers;
            args["zmax_km"] = dist_zmax;
            args["step_km"] = dist_step;
            return run_and_record("distance-sweep", dist_common, args);
        }
        if (mc->parsed()) {
            njson args;
            args["channels"] = mc_channels;
            args["filter_ghz"] = mc_filter;
            args["spacing_ghz"] = mc_spacing;
            args["fiber"] = mc_fiber;
            args["zmax_km"] = mc_zmax;
            args["step_km"] = mc_step;
            return run_and_record("multichannel-sweep", mc_common, args);
        }
        if (cal->parsed()) {
            njson args;
            args["measured"] = cal_measured;
            return run_and_record("calibrate", cal_common, args);
        }
        if (rep->parsed()) return run_replay(replay_manifest, replay_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
