#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string cli = CHI2CAV_CLI_PATH;

int run(const std::string& args) {
    const int rc = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("chi2cav_test_" + name);
    fs::remove_all(d);
    return d;
}

}  // namespace

TEST_CASE("bad arguments exit 2") {
    CHECK(run("") == 2);                       // missing subcommand
    CHECK(run("frobnicate") == 2);
    CHECK(run("sectors --kmax 99") == 2);      // out of range
    CHECK(run("synthesize") == 2);             // neither --gate nor --spec
    CHECK(run("synthesize --gate no_such_gate") == 2);
    CHECK(run("qec") == 2);
    CHECK(run("qec sideways") == 2);
    CHECK(run("fom") == 2);                    // missing required params
}

TEST_CASE("sectors emits stamped artifact") {
    fs::path d = fresh_dir("sectors");
    CHECK(run("--out " + d.string() + " sectors --kmax 2") == 0);
    json j = json::parse(slurp(d / "sectors.json"));
    CHECK(j["version"] == "0.1.0");
    CHECK(j.contains("config_hash"));
    CHECK(j["sectors"].size() == 3);  // K = 0, 1, 2
    CHECK(fs::exists(d / "meta.json"));
}

TEST_CASE("synthesize on an easy gate, then simulate the pulse") {
    fs::path cfg_path = fs::temp_directory_path() / "chi2cav_test_syn.json";
    {
        std::ofstream out(cfg_path);
        out << R"({"s": 12, "max_iters": 400, "restarts": 2, "smooth_cells": 128,
                   "smooth_iters": 100})";
    }
    fs::path d = fresh_dir("syn");
    CHECK(run("--config " + cfg_path.string() + " --seed 5 --out " + d.string() +
              " synthesize --gate entangler") == 0);
    json r = json::parse(slurp(d / "result.json"));
    CHECK(r["gate"] == "entangler");
    CHECK(r["stage1_fidelity"].get<double>() >= 0.999);
    CHECK(r["target_met"].get<bool>());
    const std::string pulse = slurp(d / "stage2_pulse.csv");
    CHECK(pulse.rfind("# chi2cav 0.1.0 config ", 0) == 0);
    CHECK(pulse.find("t_start,dt,re_p,im_p") != std::string::npos);

    // determinism: same seed, byte-identical primary artifacts
    fs::path d2 = fresh_dir("syn2");
    CHECK(run("--config " + cfg_path.string() + " --seed 5 --out " + d2.string() +
              " synthesize --gate entangler") == 0);
    CHECK(slurp(d2 / "stage2_pulse.csv") == pulse);
    CHECK(slurp(d2 / "result.json") == slurp(d / "result.json"));

    // entangler pulse on |020> -> <n_b> ~ <n_c> ~ 1
    fs::path ds = fresh_dir("sim");
    CHECK(run("--out " + ds.string() + " simulate --pulse " + (d / "stage2_pulse.csv").string() +
              " --basis 0 2 0 --record 0.5") == 0);
    const std::string traj = slurp(ds / "trajectory.csv");
    CHECK(traj.find("t,n_a,n_b,n_c") != std::string::npos);
    std::istringstream rows(traj.substr(traj.find("t,n_a")));
    std::string line, last;
    std::getline(rows, line);  // header
    while (std::getline(rows, line))
        if (!line.empty()) last = line;
    double t, na, nb, nc;
    char c;
    std::istringstream(last) >> t >> c >> na >> c >> nb >> c >> nc;
    CHECK(std::abs(2 * na + nb + nc - 2.0) < 1e-9);
    CHECK(nb == doctest::Approx(1.0).epsilon(0.05));
    CHECK(nc == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("synthesize rejects an invalid spec file") {
    fs::path bad = fs::temp_directory_path() / "chi2cav_test_bad_spec.json";
    {
        std::ofstream out(bad);
        // charge-violating pair: |040> -> |100>
        out << R"({"name": "bad_charge", "pairs": [{
                "input":  {"amplitudes": [{"state": [0,4,0], "re": 1.0, "im": 0.0}]},
                "target": {"amplitudes": [{"state": [1,0,0], "re": 1.0, "im": 0.0}]}}]})";
    }
    CHECK(run("synthesize --spec " + bad.string()) == 2);
}

TEST_CASE("qec roundtrip ideal mode") {
    fs::path d = fresh_dir("qec");
    fs::path cfg = fs::temp_directory_path() / "chi2cav_test_qec.json";
    {
        std::ofstream out(cfg);
        out << R"({"trials": 25})";
    }
    CHECK(run("--config " + cfg.string() + " --seed 2 --out " + d.string() + " qec roundtrip") == 0);
    json r = json::parse(slurp(d / "roundtrip.json"));
    CHECK(r["min_fidelity"].get<double>() >= 1.0 - 1e-9);
}

TEST_CASE("fom prints the scenario report") {
    fs::path cfg = fs::temp_directory_path() / "chi2cav_test_fom.json";
    {
        std::ofstream out(cfg);
        out << R"({"Q": 1e7, "chi2_pm_per_V": 31, "V_shg_um3": 800, "lambda_a_nm": 750})";
    }
    fs::path d = fresh_dir("fom");
    CHECK(run("--config " + cfg.string() + " --out " + d.string() + " fom") == 0);
    json r = json::parse(slurp(d / "fom.json"));
    const double n = r["figure_of_merit"].get<double>();
    CHECK(n > 0.003);
    CHECK(n < 0.3);
    CHECK(r["inputs"]["chi2"].get<double>() == doctest::Approx(31e-12));

    // both unit spellings of the same key -> exit 2
    fs::path both = fs::temp_directory_path() / "chi2cav_test_fom_bad.json";
    {
        std::ofstream out(both);
        out << R"({"Q": 1e7, "chi2": 31e-12, "chi2_pm_per_V": 31,
                   "V_shg_um3": 800, "lambda_a_nm": 750})";
    }
    CHECK(run("--config " + both.string() + " fom") == 2);
}
