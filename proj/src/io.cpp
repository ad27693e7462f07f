#include "chi2cav/io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chi2cav::io {

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

json state_to_json(const StateVector& sv, const fock::SectorTable& table) {
    json amps = json::array();
    for (const auto& [K, v] : sv.amplitudes) {
        const fock::ChargeSector& sec = table.sector(K);
        for (int i = 0; i < sec.dim(); ++i) {
            const Complex a = v(i);
            if (a == Complex{0.0, 0.0}) continue;
            const fock::FockState& s = sec.basis[static_cast<std::size_t>(i)];
            amps.push_back({{"state", {s.n_a, s.n_b, s.n_c}}, {"re", a.real()}, {"im", a.imag()}});
        }
    }
    return {{"amplitudes", amps}};
}

StateVector state_from_json(const json& j, const fock::SectorTable& table) {
    StateVector sv;
    for (const json& e : j.at("amplitudes")) {
        const auto& s = e.at("state");
        fock::FockState fs{s.at(0).get<int>(), s.at(1).get<int>(), s.at(2).get<int>()};
        if (fs.n_a < 0 || fs.n_b < 0 || fs.n_c < 0)
            throw std::invalid_argument("state_from_json: negative occupation");
        const int K = fs.charge();
        if (!table.has(K)) throw std::invalid_argument("state_from_json: charge exceeds built K_max");
        const fock::ChargeSector& sec = table.sector(K);
        auto it = sv.amplitudes.find(K);
        if (it == sv.amplitudes.end())
            it = sv.amplitudes.emplace(K, fock::Vector::Zero(sec.dim())).first;
        it->second(sec.index_of(fs)) += Complex{e.at("re").get<double>(), e.at("im").get<double>()};
    }
    return sv;
}

json spec_to_json(const GateSpec& spec, const fock::SectorTable& table) {
    json pairs = json::array();
    for (const auto& [in, out] : spec.pairs)
        pairs.push_back({{"input", state_to_json(in, table)}, {"target", state_to_json(out, table)}});
    return {{"name", spec.name}, {"notes", spec.notes}, {"pairs", pairs}};
}

GateSpec spec_from_json(const json& j, const fock::SectorTable& table) {
    GateSpec spec;
    spec.name = j.value("name", "");
    spec.notes = j.value("notes", "");
    for (const json& p : j.at("pairs"))
        spec.pairs.emplace_back(state_from_json(p.at("input"), table),
                                state_from_json(p.at("target"), table));
    return spec;
}

json sectors_to_json(const fock::SectorTable& table, int K_max) {
    json out = json::array();
    for (int K = 0; K <= K_max; ++K) {
        const fock::ChargeSector& sec = table.sector(K);
        json basis = json::array();
        for (const fock::FockState& s : sec.basis) basis.push_back({s.n_a, s.n_b, s.n_c});
        out.push_back({{"K", K}, {"dim", sec.dim()}, {"basis", basis}});
    }
    return out;
}

namespace {
std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}
}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,n_a,n_b,n_c\n";
    for (const TrajectorySample& s : traj.samples)
        out += fmt(s.t) + "," + fmt(s.n_a) + "," + fmt(s.n_b) + "," + fmt(s.n_c) + "\n";
    return out;
}

std::string stage1_pulse_csv(const PulseParams& params) {
    std::string out = "segment_index,duration,re_p,im_p\n";
    for (int l = 0; l < params.segments(); ++l) {
        const Complex p = params.amplitude(l);
        out += std::to_string(l) + "," + fmt(params.duration(l)) + "," + fmt(p.real()) + "," +
               fmt(p.imag()) + "\n";
    }
    return out;
}

std::string stage2_pulse_csv(const SampledPulse& pulse) {
    std::string out = "t_start,dt,re_p,im_p\n";
    for (int k = 0; k < pulse.cells(); ++k) {
        const Complex p = pulse.amplitudes[static_cast<std::size_t>(k)];
        out += fmt(k * pulse.dt) + "," + fmt(pulse.dt) + "," + fmt(p.real()) + "," + fmt(p.imag()) + "\n";
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_text: cannot open " + path);
    f << text;
}

json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("read_json_file: cannot open " + path);
    return json::parse(f);
}

}  // namespace chi2cav::io
