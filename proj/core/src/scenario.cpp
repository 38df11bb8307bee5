#include "qclink/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qclink {

using nlohmann::json;

namespace {

json fiber_type_json(FiberType t) { return to_string(t); }

FiberType fiber_type_from_json(const json& j) {
    const std::string s = j.get<std::string>();
    if (s == "DS") return FiberType::dispersion_shifted;
    if (s == "standard") return FiberType::standard;
    throw std::invalid_argument("unknown fiber_type: " + s);
}

json budget_json(const LossBudget& b) {
    json entries = json::array();
    for (const auto& [name, db] : b.entries) entries.push_back({name, db});
    return {{"entries", entries}};
}

LossBudget budget_from_json(const json& j, Direction d) {
    LossBudget b;
    b.direction = d;
    for (const auto& e : j.at("entries")) {
        b.entries.emplace_back(e.at(0).get<std::string>(), e.at(1).get<double>());
    }
    return b;
}

json detector_json(const DetectorSpec& d) {
    return {{"efficiency", d.efficiency},
            {"dark_prob_per_gate", d.dark_prob_per_gate},
            {"gate_rate_hz", d.gate_rate_hz},
            {"gate_width_ns", d.gate_width_ns}};
}

DetectorSpec detector_from_json(const json& j) {
    DetectorSpec d;
    d.efficiency = j.at("efficiency").get<double>();
    d.dark_prob_per_gate = j.at("dark_prob_per_gate").get<double>();
    d.gate_rate_hz = j.at("gate_rate_hz").get<double>();
    d.gate_width_ns = j.at("gate_width_ns").get<double>();
    return d;
}

}  // namespace

double Scenario::launch_dbm_per_channel() const {
    if (launch_dbm.empty()) throw std::invalid_argument("scenario has no launch powers");
    return launch_dbm.front();
}

NoiseScenario Scenario::noise_scenario() const {
    NoiseScenario ns;
    ns.launch_dbm_per_channel = launch_dbm_per_channel();
    ns.n_channels = plan.n_classical();
    ns.spacing_ghz = plan.grid_spacing_ghz;
    ns.fiber = fiber.fiber_type;
    ns.filter_bw_ghz = quantum_filter_bw_ghz;
    return ns;
}

double Scenario::total_loss_db(Direction d) const {
    return qclink::total_loss_db(budget(d), fiber);
}

Scenario default_paper_scenario() {
    Scenario s;
    s.plan = build_channel_plan(2, 100.0, 1546.12);
    s.fiber = FiberSpec{23.0, 0.2, 0.22, FiberType::dispersion_shifted};

    // Receiver-side splice/connector entry is fitted so the simulated count
    // levels reconcile the measured visibilities with the dark and Raman
    // calibration rates.
    const double kFittedSpliceDb = 2.5821365188;
    s.budget_12.direction = Direction::node1_to_node2;
    s.budget_12.entries = {{"dwdm_mux", 3.5},
                           {"dwdm_demux", 3.5},
                           {"pol_controller", 3.0},
                           {"node1_insertion", 1.0},
                           {"node2_insertion", 1.0},
                           {"splice_connectors", kFittedSpliceDb}};
    s.budget_21.direction = Direction::node2_to_node1;
    s.budget_21.entries = {{"dwdm_mux", 3.5},
                           {"dwdm_demux", 3.5},
                           {"node1_insertion", 1.0},
                           {"node2_insertion", 1.0},
                           {"splice_connectors", kFittedSpliceDb}};

    s.source_node1 = SourceSpec{1.0};
    s.source_node2 = SourceSpec{1.0};
    s.detector_a = DetectorSpec{0.15, 3.7e-5, 1e5, 2.5};
    s.detector_b = DetectorSpec{0.15, 3.2e-5, 1e5, 2.5};
    s.raman = calibrate(23.0, -19.8, 1.63, 4.58, 0.2);
    s.launch_dbm = {-19.8, -19.8};
    s.ber_anchors = {{-19.8, 70.0}, {-17.8, 69.0}};
    return s;
}

std::vector<std::string> validate(const Scenario& s) {
    std::vector<std::string> v;
    if (s.plan.n_classical() < 1 || s.plan.n_classical() > 16) {
        v.push_back("channel plan must contain 1..16 classical channels");
    }
    for (std::size_t i = 0; i < s.plan.classical_wavelengths_nm.size(); ++i) {
        const double w = s.plan.classical_wavelengths_nm[i];
        if (std::abs(w - s.plan.quantum_wavelength_nm) < 1e-9) {
            v.push_back("classical channel collides with the quantum slot");
        }
        for (std::size_t j = i + 1; j < s.plan.classical_wavelengths_nm.size(); ++j) {
            if (std::abs(w - s.plan.classical_wavelengths_nm[j]) < 1e-9) {
                v.push_back("duplicate classical wavelengths");
            }
        }
    }
    if (!(s.fiber.length_km > 0.0)) v.push_back("fiber length must be > 0");
    if (!(s.fiber.attenuation_db_per_km > 0.0)) v.push_back("fiber attenuation must be > 0");
    if (s.fiber.mean_dgd_ps < 0.0) v.push_back("mean DGD must be >= 0");
    for (const LossBudget* b : {&s.budget_12, &s.budget_21}) {
        for (const auto& [name, db] : b->entries) {
            if (db < 0.0) v.push_back("negative loss entry: " + name);
        }
    }
    for (const DetectorSpec* d : {&s.detector_a, &s.detector_b}) {
        if (d->efficiency < 0.0 || d->efficiency > 1.0) v.push_back("detector efficiency out of [0,1]");
        if (d->dark_prob_per_gate < 0.0 || d->dark_prob_per_gate > 1.0) {
            v.push_back("dark count probability out of [0,1]");
        }
        if (!(d->gate_rate_hz > 0.0)) v.push_back("gate rate must be > 0");
    }
    if (s.source_node1.mean_photon_number < 0.0 || s.source_node2.mean_photon_number < 0.0) {
        v.push_back("mean photon number must be >= 0");
    }
    if (static_cast<int>(s.launch_dbm.size()) != s.plan.n_classical()) {
        v.push_back("launch power list must match the channel plan");
    }
    for (double p : s.launch_dbm) {
        if (p < -40.0 || p > 10.0) v.push_back("launch power outside [-40, +10] dBm");
        if (std::abs(p - s.launch_dbm.front()) > 1e-12) {
            v.push_back("per-channel launch powers must be equal");
            break;
        }
    }
    const DgdCheck dgd = dgd_constraint(s.fiber.mean_dgd_ps, s.plan.grid_spacing_ghz);
    if (!dgd.pass) {
        std::ostringstream os;
        os << "DGD constraint violated: tau*delta_omega = " << dgd.tau_delta_omega;
        v.push_back(os.str());
    }
    if (!s.raman.channel_scaling.covers(s.plan.n_classical(), s.plan.grid_spacing_ghz,
                                        s.fiber.fiber_type)) {
        v.push_back("uncalibrated configuration: channel scaling table has no entry");
    }
    if (!(s.quantum_filter_bw_ghz > 0.0)) v.push_back("quantum filter bandwidth must be > 0");
    if (s.ber_anchors.empty()) v.push_back("BER calibration anchors missing");
    try {
        normalize(s.quantum_input_sop);
    } catch (const std::exception&) {
        v.push_back("quantum input SOP is degenerate");
    }
    return v;
}

std::string scenario_to_json_string(const Scenario& s) {
    json j;
    j["plan"] = {{"quantum_wavelength_nm", s.plan.quantum_wavelength_nm},
                 {"classical_wavelengths_nm", s.plan.classical_wavelengths_nm},
                 {"grid_spacing_ghz", s.plan.grid_spacing_ghz}};
    j["fiber"] = {{"length_km", s.fiber.length_km},
                  {"attenuation_db_per_km", s.fiber.attenuation_db_per_km},
                  {"mean_dgd_ps", s.fiber.mean_dgd_ps},
                  {"fiber_type", fiber_type_json(s.fiber.fiber_type)}};
    j["budget_12"] = budget_json(s.budget_12);
    j["budget_21"] = budget_json(s.budget_21);
    j["source_node1"] = {{"mean_photon_number", s.source_node1.mean_photon_number}};
    j["source_node2"] = {{"mean_photon_number", s.source_node2.mean_photon_number}};
    j["detector_a"] = detector_json(s.detector_a);
    j["detector_b"] = detector_json(s.detector_b);
    json scaling = json::array();
    for (const auto& r : s.raman.channel_scaling.rows) {
        scaling.push_back({{"n", r.n_channels},
                           {"spacing_ghz", r.spacing_ghz},
                           {"fiber_type", fiber_type_json(r.fiber)},
                           {"factor", r.factor}});
    }
    j["raman"] = {{"beta_12", s.raman.beta_12},
                  {"beta_21", s.raman.beta_21},
                  {"alpha_db_per_km", s.raman.alpha_db_per_km},
                  {"filter_bw_ghz", s.raman.filter_bw_ghz},
                  {"cal_n_channels", s.raman.cal_n_channels},
                  {"cal_spacing_ghz", s.raman.cal_spacing_ghz},
                  {"cal_fiber", fiber_type_json(s.raman.cal_fiber)},
                  {"channel_scaling", scaling}};
    j["apc"] = {{"loop_period_s", s.apc.loop_period_s},
                {"log_period_s", s.apc.log_period_s},
                {"visibility_window_s", s.apc.visibility_window_s},
                {"dither_amplitude", s.apc.dither_amplitude},
                {"step_gain", s.apc.step_gain},
                {"jitter_sigma", s.apc.jitter_sigma},
                {"visibility_penalty", s.apc.visibility_penalty},
                {"drift_rate_rad_per_sqrt_s", s.apc.drift_rate_rad_per_sqrt_s},
                {"residual_pigtail_drift", s.apc.residual_pigtail_drift}};
    j["launch_dbm"] = s.launch_dbm;
    j["quantum_filter_bw_ghz"] = s.quantum_filter_bw_ghz;
    j["quantum_input_sop"] = {{"ex_re", s.quantum_input_sop.ex.real()},
                              {"ex_im", s.quantum_input_sop.ex.imag()},
                              {"ey_re", s.quantum_input_sop.ey.real()},
                              {"ey_im", s.quantum_input_sop.ey.imag()}};
    j["alignment_error_rad_12"] = s.alignment_error_rad_12;
    j["alignment_error_rad_21"] = s.alignment_error_rad_21;
    j["pbs_extinction_db"] = s.pbs_extinction_db;
    json anchors = json::array();
    for (const auto& a : s.ber_anchors) {
        anchors.push_back({{"launch_dbm", a.launch_dbm}, {"efec_reach_km", a.efec_reach_km}});
    }
    j["ber_anchors"] = anchors;
    j["seed"] = s.seed;
    return j.dump(2) + "\n";
}

Scenario scenario_from_json_string(const std::string& text) {
    const json j = json::parse(text);
    Scenario s;
    s.plan.quantum_wavelength_nm = j.at("plan").at("quantum_wavelength_nm").get<double>();
    s.plan.classical_wavelengths_nm =
        j.at("plan").at("classical_wavelengths_nm").get<std::vector<double>>();
    s.plan.grid_spacing_ghz = j.at("plan").at("grid_spacing_ghz").get<double>();
    const json& jf = j.at("fiber");
    s.fiber = FiberSpec{jf.at("length_km").get<double>(),
                        jf.at("attenuation_db_per_km").get<double>(),
                        jf.at("mean_dgd_ps").get<double>(),
                        fiber_type_from_json(jf.at("fiber_type"))};
    s.budget_12 = budget_from_json(j.at("budget_12"), Direction::node1_to_node2);
    s.budget_21 = budget_from_json(j.at("budget_21"), Direction::node2_to_node1);
    s.source_node1.mean_photon_number =
        j.at("source_node1").at("mean_photon_number").get<double>();
    s.source_node2.mean_photon_number =
        j.at("source_node2").at("mean_photon_number").get<double>();
    s.detector_a = detector_from_json(j.at("detector_a"));
    s.detector_b = detector_from_json(j.at("detector_b"));
    const json& jr = j.at("raman");
    s.raman.beta_12 = jr.at("beta_12").get<double>();
    s.raman.beta_21 = jr.at("beta_21").get<double>();
    s.raman.alpha_db_per_km = jr.at("alpha_db_per_km").get<double>();
    s.raman.filter_bw_ghz = jr.at("filter_bw_ghz").get<double>();
    s.raman.cal_n_channels = jr.at("cal_n_channels").get<int>();
    s.raman.cal_spacing_ghz = jr.at("cal_spacing_ghz").get<double>();
    s.raman.cal_fiber = fiber_type_from_json(jr.at("cal_fiber"));
    s.raman.channel_scaling.rows.clear();
    for (const auto& r : jr.at("channel_scaling")) {
        s.raman.channel_scaling.rows.push_back(
            {r.at("n").get<int>(), r.at("spacing_ghz").get<double>(),
             fiber_type_from_json(r.at("fiber_type")), r.at("factor").get<double>()});
    }
    const json& ja = j.at("apc");
    s.apc.loop_period_s = ja.at("loop_period_s").get<double>();
    s.apc.log_period_s = ja.at("log_period_s").get<double>();
    s.apc.visibility_window_s = ja.at("visibility_window_s").get<double>();
    s.apc.dither_amplitude = ja.at("dither_amplitude").get<double>();
    s.apc.step_gain = ja.at("step_gain").get<double>();
    s.apc.jitter_sigma = ja.at("jitter_sigma").get<double>();
    s.apc.visibility_penalty = ja.at("visibility_penalty").get<double>();
    s.apc.drift_rate_rad_per_sqrt_s = ja.at("drift_rate_rad_per_sqrt_s").get<double>();
    s.apc.residual_pigtail_drift = ja.at("residual_pigtail_drift").get<bool>();
    s.launch_dbm = j.at("launch_dbm").get<std::vector<double>>();
    s.quantum_filter_bw_ghz = j.at("quantum_filter_bw_ghz").get<double>();
    const json& js = j.at("quantum_input_sop");
    s.quantum_input_sop = {{js.at("ex_re").get<double>(), js.at("ex_im").get<double>()},
                           {js.at("ey_re").get<double>(), js.at("ey_im").get<double>()}};
    s.alignment_error_rad_12 = j.at("alignment_error_rad_12").get<double>();
    s.alignment_error_rad_21 = j.at("alignment_error_rad_21").get<double>();
    s.pbs_extinction_db = j.at("pbs_extinction_db").get<double>();
    s.ber_anchors.clear();
    for (const auto& a : j.at("ber_anchors")) {
        s.ber_anchors.push_back({a.at("launch_dbm").get<double>(),
                                 a.at("efec_reach_km").get<double>()});
    }
    s.seed = j.at("seed").get<std::uint64_t>();
    return s;
}

Scenario with_overrides(const Scenario& s,
                        const std::map<std::string, std::string>& overrides) {
    json j = json::parse(scenario_to_json_string(s));
    for (const auto& [key, value] : overrides) {
        // Dotted path -> JSON pointer; the target must already exist.
        std::string pointer = "/";
        for (char c : key) pointer += (c == '.') ? '/' : c;
        const json::json_pointer ptr(pointer);
        if (!j.contains(ptr)) {
            throw std::invalid_argument("unknown override key: " + key);
        }
        json parsed;
        try {
            parsed = json::parse(value);
        } catch (const json::parse_error&) {
            parsed = value;  // plain string
        }
        // Scalar assigned to a uniform array broadcasts over it.
        if (j.at(ptr).is_array() && parsed.is_number()) {
            for (auto& e : j.at(ptr)) e = parsed;
        } else {
            j.at(ptr) = parsed;
        }
    }
    return scenario_from_json_string(j.dump());
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return scenario_from_json_string(ss.str());
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scenario: " + path);
    out << scenario_to_json_string(s);
}

}  // namespace qclink
