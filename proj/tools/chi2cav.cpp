// chi2cav — batch front-end: sectors | synthesize | simulate | qec | fom.
//
// Exit codes: 0 success, 1 quality target unmet (artifacts still written),
// 2 bad arguments / config / validation failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "chi2cav/gates.hpp"
#include "chi2cav/hardware.hpp"
#include "chi2cav/io.hpp"
#include "chi2cav/optimizer.hpp"
#include "chi2cav/qec.hpp"

using namespace chi2cav;
using io::json;

namespace {

struct Out {
    std::filesystem::path dir;
    std::string config_hash;
    json meta = json::object();

    void stamp(json& j) const {
        j["version"] = io::kVersion;
        j["config_hash"] = config_hash;
    }
    std::string stamp_csv(const std::string& csv) const {
        return "# chi2cav " + std::string(io::kVersion) + " config " + config_hash + "\n" + csv;
    }
    void write_json(const std::string& name, json j) const {
        stamp(j);
        io::write_text((dir / name).string(), j.dump(2) + "\n");
    }
    void write_csv(const std::string& name, const std::string& csv) const {
        io::write_text((dir / name).string(), stamp_csv(csv));
    }
    void finish() const {
        json m = meta;
        m["version"] = io::kVersion;
        m["config_hash"] = config_hash;
        m["written_at"] = static_cast<long long>(::time(nullptr));
        io::write_text((dir / "meta.json").string(), m.dump(2) + "\n");
    }
};

Out make_out(const std::string& dir, const json& config) {
    Out out;
    out.dir = dir.empty() ? "." : dir;
    std::filesystem::create_directories(out.dir);
    out.config_hash = io::fnv1a_hex(config.dump());
    out.meta["config"] = config;
    return out;
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys,
                    const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys) known = known || it.key() == k;
        if (!known) throw CLI::ValidationError(where + ": unknown key '" + it.key() + "'");
    }
}

opt::SynthesisConfig synthesis_config(const json& j, unsigned seed) {
    reject_unknown(j, {"s", "delta_tau", "amplitude_scale", "max_iters", "restarts",
                       "target_infidelity", "learning_rate", "smooth_cells", "smooth_iters",
                       "smooth_learning_rate", "lambda_bw", "lambda_pow", "anneal_every",
                       "robustness_eps", "robustness_floor"},
                   "synthesis config");
    opt::SynthesisConfig cfg;
    cfg.seed = seed;
    cfg.s = j.value("s", cfg.s);
    cfg.delta_tau = j.value("delta_tau", cfg.delta_tau);
    cfg.amplitude_scale = j.value("amplitude_scale", cfg.amplitude_scale);
    cfg.max_iters = j.value("max_iters", cfg.max_iters);
    cfg.restarts = j.value("restarts", cfg.restarts);
    cfg.target_infidelity = j.value("target_infidelity", cfg.target_infidelity);
    cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
    cfg.smooth_cells = j.value("smooth_cells", cfg.smooth_cells);
    cfg.smooth_iters = j.value("smooth_iters", cfg.smooth_iters);
    cfg.smooth_learning_rate = j.value("smooth_learning_rate", cfg.smooth_learning_rate);
    cfg.lambda_bw = j.value("lambda_bw", cfg.lambda_bw);
    cfg.lambda_pow = j.value("lambda_pow", cfg.lambda_pow);
    cfg.anneal_every = j.value("anneal_every", cfg.anneal_every);
    cfg.robustness_eps = j.value("robustness_eps", cfg.robustness_eps);
    cfg.robustness_floor = j.value("robustness_floor", cfg.robustness_floor);
    cfg.validate();
    return cfg;
}

// --- sectors -----------------------------------------------------------------

int cmd_sectors(int k_max, const std::string& out_dir) {
    fock::SectorTable table(k_max);
    json j = {{"k_max", k_max}, {"sectors", io::sectors_to_json(table, k_max)}};
    if (out_dir.empty()) {
        j["version"] = io::kVersion;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    Out out = make_out(out_dir, json{{"command", "sectors"}, {"k_max", k_max}});
    out.write_json("sectors.json", j);
    out.finish();
    return 0;
}

// --- synthesize --------------------------------------------------------------

int cmd_synthesize(const std::string& gate, const std::string& spec_path,
                   const json& config, unsigned seed, const std::string& out_dir) {
    fock::SectorTable table(8);
    GateSpec spec;
    if (!spec_path.empty()) {
        spec = io::spec_from_json(io::read_json_file(spec_path), table);
    } else {
        auto found = gates::by_name(gate, table);
        if (!found) throw CLI::ValidationError("unknown gate '" + gate + "'");
        spec = *found;
    }
    require_valid(spec);

    opt::SynthesisConfig cfg = synthesis_config(config, seed);
    json full_config = config;
    full_config["command"] = "synthesize";
    full_config["gate"] = spec.name;
    full_config["seed"] = seed;
    Out out = make_out(out_dir, full_config);

    Propagator prop(8);
    opt::SynthesisResult stage1 = opt::synthesize(prop, spec, cfg);
    opt::SmoothResult stage2 = opt::smooth(prop, stage1.params, spec, cfg);
    opt::RobustnessReport robust =
        opt::robustness_check(prop, stage2.pulse, spec, cfg.robustness_eps, cfg.robustness_floor);

    out.write_csv("stage1_pulse.csv", io::stage1_pulse_csv(stage1.params));
    out.write_csv("stage2_pulse.csv", io::stage2_pulse_csv(stage2.pulse));

    std::ostringstream hist;
    hist << "iter,fidelity\n";
    for (std::size_t i = 0; i < stage1.history.size(); ++i) {
        hist.precision(17);
        hist << i << "," << stage1.history[i] << "\n";
    }
    out.write_csv("history.csv", hist.str());

    json rob = json::array();
    for (const auto& e : robust.entries)
        rob.push_back({{"kind", e.kind}, {"factor", e.factor}, {"fidelity", e.fidelity}});
    json result = {{"gate", spec.name},
                   {"stage1_fidelity", stage1.fidelity},
                   {"stage2_fidelity", stage2.fidelity},
                   {"target_met", stage1.target_met},
                   {"best_restart", stage1.best_restart},
                   {"total_duration", stage1.params.total_duration()},
                   {"segments", stage1.params.segments()},
                   {"smooth_ok", stage2.ok},
                   {"bandwidth", stage2.bandwidth},
                   {"peak_amplitude", stage2.peak_amplitude},
                   {"robustness", {{"nominal", robust.nominal},
                                   {"floor", robust.floor},
                                   {"pass", robust.pass},
                                   {"entries", rob}}}};
    out.write_json("result.json", result);
    out.finish();

    std::cout << spec.name << ": stage1 F=" << stage1.fidelity
              << " stage2 F=" << stage2.fidelity
              << (stage1.target_met ? "" : " (target unmet)") << "\n";
    return stage1.target_met ? 0 : 1;
}

// --- simulate ----------------------------------------------------------------

std::vector<Segment> read_pulse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("cannot open pulse file '" + path + "'");
    std::vector<Segment> segs;
    std::string line;
    bool header_seen = false;
    bool stage1 = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (line.rfind("segment_index", 0) == 0) { stage1 = true; continue; }
            if (line.rfind("t_start", 0) == 0) continue;
            throw CLI::ValidationError("unrecognized pulse CSV header: " + line);
        }
        std::istringstream row(line);
        double c0, c1, c2, c3;
        char comma;
        if (!(row >> c0 >> comma >> c1 >> comma >> c2 >> comma >> c3))
            throw CLI::ValidationError("malformed pulse CSV row: " + line);
        // stage1: index,duration,re,im   stage2: t_start,dt,re,im
        segs.push_back({{c2, c3}, c1});
        (void)stage1;
    }
    if (segs.empty()) throw CLI::ValidationError("pulse file has no segments");
    return segs;
}

int cmd_simulate(const std::string& pulse_path, const std::string& state_path,
                 const std::vector<int>& basis, double record, const std::string& out_dir) {
    std::vector<Segment> segs = read_pulse_csv(pulse_path);
    fock::SectorTable table(8);
    StateVector init;
    if (!state_path.empty())
        init = io::state_from_json(io::read_json_file(state_path), table);
    else if (basis.size() == 3)
        init = StateVector::basis_state(table, {basis[0], basis[1], basis[2]});
    else
        throw CLI::ValidationError("simulate needs --state FILE or --basis a b c");

    Propagator prop(8);
    auto [fin, traj] = prop.propagate(segs, init, record);

    json config = {{"command", "simulate"}, {"pulse", pulse_path},
                   {"record", record}, {"segments", static_cast<int>(segs.size())}};
    Out out = make_out(out_dir, config);
    out.write_csv("trajectory.csv", io::trajectory_csv(traj));
    out.write_json("final_state.json", io::state_to_json(fin, table));
    out.finish();

    std::cout << "final <n_a>=" << fin.mean_occupation(table, fock::Mode::A)
              << " <n_b>=" << fin.mean_occupation(table, fock::Mode::B)
              << " <n_c>=" << fin.mean_occupation(table, fock::Mode::C) << "\n";
    return 0;
}

// --- qec ---------------------------------------------------------------------

int qec_roundtrip(const json& config, unsigned seed, const std::string& out_dir) {
    const int trials = config.value("trials", 100);
    const double floor = config.value("min_fidelity", 1.0 - 1e-9);
    fock::SectorTable table(8);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    double min_f = 1.0, sum_f = 0.0;
    for (int t = 0; t < trials; ++t) {
        const double th = std::acos(1.0 - 2.0 * u(rng)) / 2.0, ph = 2.0 * M_PI * u(rng);
        const Complex alpha = std::cos(th), beta = std::polar(std::sin(th), ph);
        qec::SparseState code;  // |C(α,β)⟩ with the |11⟩ ancillas
        for (const auto& [o, a] : qec::encode(alpha, beta).amps) {
            qec::Occ n = o;
            n[qec::C1] = n[qec::C2] = 1;
            code.amps[n] = a;
        }
        qec::SparseState lossy = qec::apply_annihilator(code, t % 2 ? qec::B2 : qec::B1);
        lossy.normalize();
        qec::SparseState fixed = qec::correction_circuit(lossy, table);
        // fidelity to |C⟩ with the ancilla flag traced out
        double f = 0.0;
        for (int c1 = 0; c1 <= 1; ++c1)
            for (int c2 = 0; c2 <= 1; ++c2) {
                qec::SparseState ref;
                for (const auto& [o, a] : qec::encode(alpha, beta).amps) {
                    qec::Occ n = o;
                    n[qec::C1] = c1;
                    n[qec::C2] = c2;
                    ref.amps[n] = a;
                }
                f += std::norm(ref.dot(fixed));
            }
        min_f = std::min(min_f, f);
        sum_f += f;
    }
    json result = {{"trials", trials}, {"min_fidelity", min_f},
                   {"mean_fidelity", sum_f / trials}, {"floor", floor}};
    Out out = make_out(out_dir, config);
    out.write_json("roundtrip.json", result);
    out.finish();
    std::cout << "roundtrip min F=" << min_f << " mean F=" << sum_f / trials << "\n";
    return min_f >= floor ? 0 : 1;
}

int qec_lifetime(const json& config, const std::string& out_dir) {
    qec::LifetimeConfig base;
    base.N = config.value("N", base.N);
    base.period = config.value("period", base.period);
    base.circuit_time = config.value("circuit_time", base.circuit_time);
    base.horizon = config.value("horizon", base.horizon);
    std::vector<double> grid = config.value("N_grid", std::vector<double>{});

    fock::SectorTable table(8);
    qec::CorrectionChannel channel(table);
    Out out = make_out(out_dir, config);

    auto curves_csv = [](const qec::LifetimeCurves& c) {
        std::ostringstream os;
        os.precision(17);
        os << "t,unprotected,uncorrected,corrected\n";
        for (std::size_t i = 0; i < c.t.size(); ++i)
            os << c.t[i] << "," << c.unprotected[i] << "," << c.uncorrected[i] << ","
               << c.corrected[i] << "\n";
        return os.str();
    };

    qec::LifetimeCurves curves = qec::lifetime_experiment(base, channel);
    out.write_csv("lifetime.csv", curves_csv(curves));

    json result = {{"N", base.N}, {"period", base.period},
                   {"leaked_weight", curves.leaked_weight}};
    if (!grid.empty()) {
        const double n_star = qec::breakeven_N(grid, base, channel);
        result["breakeven_N"] = n_star;
        std::ostringstream os;
        os.precision(17);
        os << "N,corrected_at_horizon,unprotected_at_horizon\n";
        for (double n : grid) {
            qec::LifetimeConfig c = base;
            c.N = n;
            qec::LifetimeCurves cv = qec::lifetime_experiment(c, channel);
            os << n << "," << cv.corrected.back() << "," << cv.unprotected.back() << "\n";
        }
        out.write_csv("breakeven.csv", os.str());
        std::cout << "breakeven N*=" << n_star << "\n";
    }
    out.write_json("lifetime.json", result);
    out.finish();
    return 0;
}

// --- fom ---------------------------------------------------------------------

double unit_pick(const json& j, const char* si, const char* conv, double factor,
                 bool required = true) {
    const bool has_si = j.contains(si), has_conv = j.contains(conv);
    if (has_si && has_conv)
        throw CLI::ValidationError(std::string("give exactly one of ") + si + " / " + conv);
    if (has_si) return j.at(si).get<double>();
    if (has_conv) return j.at(conv).get<double>() * factor;
    if (required) throw CLI::ValidationError(std::string("missing ") + si + " (or " + conv + ")");
    return -1.0;
}

int cmd_fom(const json& config, const std::string& out_dir) {
    reject_unknown(config, {"command", "Q", "n", "chi2", "chi2_pm_per_V", "V_shg", "V_shg_um3",
                            "V_twm", "V_twm_um3", "lambda_a", "lambda_a_nm", "omega_b",
                            "omega_c", "omega_p", "drive_amplitude"},
                   "fom config");
    hw::HardwareParams p;
    p.Q = config.at("Q").get<double>();
    p.n = config.value("n", p.n);
    p.chi2 = unit_pick(config, "chi2", "chi2_pm_per_V", 1e-12);
    p.V_shg = unit_pick(config, "V_shg", "V_shg_um3", 1e-18);
    p.lambda_a = unit_pick(config, "lambda_a", "lambda_a_nm", 1e-9);
    const double v_twm = unit_pick(config, "V_twm", "V_twm_um3", 1e-18, false);
    if (v_twm > 0.0) p.V_twm = v_twm;
    if (config.contains("omega_b")) p.omega_b = config.at("omega_b").get<double>();
    if (config.contains("omega_c")) p.omega_c = config.at("omega_c").get<double>();
    if (config.contains("omega_p")) p.omega_p = config.at("omega_p").get<double>();

    json report = {{"inputs", {{"Q", p.Q}, {"chi2", p.chi2}, {"V_shg", p.V_shg},
                               {"lambda_a", p.lambda_a}, {"n", p.n}}},
                   {"constants", {{"hbar", hw::kHbar}, {"eps0", hw::kEps0},
                                  {"c", hw::kSpeedOfLight}}},
                   {"omega_a", p.omega_a()},
                   {"omega_b", p.omega_b_eff()},
                   {"figure_of_merit", hw::figure_of_merit(p)},
                   {"cavity_lifetime", hw::cavity_lifetime(p.Q, p.omega_a())}};
    if (p.V_twm && p.omega_c) {
        report["pulse_unit"] = hw::pulse_unit(p);
        if (p.omega_p && config.contains("drive_amplitude"))
            report["drive_photon_number"] =
                hw::drive_photon_number(config.at("drive_amplitude").get<double>(), p);
    }

    if (out_dir.empty()) {
        report["version"] = io::kVersion;
        std::cout << report.dump(2) << "\n";
    } else {
        Out out = make_out(out_dir, config);
        out.write_json("fom.json", report);
        out.finish();
        std::cout << "N=" << report["figure_of_merit"].get<double>() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Driven chi(2) cavity toolkit: pulse synthesis, simulation, QEC, hardware"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    unsigned seed = 0;
    app.add_option("--config", config_path, "JSON config file")->capture_default_str();
    app.add_option("--seed", seed, "global RNG seed")->capture_default_str();
    app.add_option("--out", out_dir, "output directory");

    auto* sc_sectors = app.add_subcommand("sectors", "list charge sectors");
    int k_max = 8;
    sc_sectors->add_option("--kmax", k_max, "largest charge")->check(CLI::Range(0, 8));

    auto* sc_synth = app.add_subcommand("synthesize", "two-stage pulse synthesis");
    std::string gate, spec_path;
    sc_synth->add_option("--gate", gate, "registry gate name");
    sc_synth->add_option("--spec", spec_path, "gate spec JSON file");

    auto* sc_sim = app.add_subcommand("simulate", "propagate a state under a pulse");
    std::string pulse_path, state_path;
    std::vector<int> basis;
    double record = -1.0;
    sc_sim->add_option("--pulse", pulse_path, "pulse CSV (stage 1 or 2)")->required();
    sc_sim->add_option("--state", state_path, "initial state JSON");
    sc_sim->add_option("--basis", basis, "initial basis state n_a n_b n_c")->expected(3);
    sc_sim->add_option("--record", record, "sampling interval (<= 0: segment ends)");

    auto* sc_qec = app.add_subcommand("qec", "error-correction experiments");
    std::string qec_mode;
    sc_qec->add_option("mode", qec_mode, "roundtrip | lifetime")
        ->required()
        ->check(CLI::IsMember({"roundtrip", "lifetime"}));

    auto* sc_fom = app.add_subcommand("fom", "hardware figures of merit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        json config = json::object();
        if (!config_path.empty()) {
            config = io::read_json_file(config_path);
            if (!config.is_object()) throw CLI::ValidationError("config must be a JSON object");
        }
        if (sc_sectors->parsed()) return cmd_sectors(k_max, out_dir);
        if (sc_synth->parsed()) {
            if (gate.empty() == spec_path.empty())
                throw CLI::ValidationError("synthesize needs exactly one of --gate / --spec");
            return cmd_synthesize(gate, spec_path, config, seed, out_dir);
        }
        if (sc_sim->parsed()) return cmd_simulate(pulse_path, state_path, basis, record, out_dir);
        if (sc_qec->parsed())
            return qec_mode == "roundtrip" ? qec_roundtrip(config, seed, out_dir)
                                           : qec_lifetime(config, out_dir);
        if (sc_fom->parsed()) return cmd_fom(config, out_dir);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
