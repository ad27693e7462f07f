#include "chi2cav/gatespec.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace chi2cav {

std::vector<int> GateSpec::sectors() const {
    std::set<int> ks;
    for (const auto& [in, out] : pairs) {
        for (const auto& [K, v] : in.amplitudes)
            if (v.squaredNorm() > 0.0) ks.insert(K);
        for (const auto& [K, v] : out.amplitudes)
            if (v.squaredNorm() > 0.0) ks.insert(K);
    }
    return {ks.begin(), ks.end()};
}

ValidationReport validate_spec(const GateSpec& spec, double tol) {
    ValidationReport rep;
    const int d = spec.num_pairs();
    if (d == 0) {
        rep.violations.push_back({"spec has no pairs"});
        return rep;
    }
    // Charge support must match between input and target of each pair.
    for (int k = 0; k < d; ++k) {
        const auto& [in, out] = spec.pairs[static_cast<std::size_t>(k)];
        std::set<int> in_ks, out_ks;
        for (const auto& [K, v] : in.amplitudes)
            if (v.norm() > tol) in_ks.insert(K);
        for (const auto& [K, v] : out.amplitudes)
            if (v.norm() > tol) out_ks.insert(K);
        if (in_ks != out_ks)
            rep.violations.push_back({"pair " + std::to_string(k) +
                                      ": input and target charge support differ (charge not conserved)"});
    }
    // Input orthonormality and Gram consistency.
    for (int i = 0; i < d; ++i) {
        const auto& si = spec.pairs[static_cast<std::size_t>(i)].first;
        if (std::abs(si.norm() - 1.0) > tol)
            rep.violations.push_back({"input " + std::to_string(i) + " is not normalized"});
        for (int j = i + 1; j < d; ++j) {
            const auto& sj = spec.pairs[static_cast<std::size_t>(j)].first;
            Complex g_in = si.dot(sj);
            if (std::abs(g_in) > tol)
                rep.violations.push_back({"inputs " + std::to_string(i) + "," + std::to_string(j) +
                                          " are not orthogonal"});
            Complex g_out = spec.pairs[static_cast<std::size_t>(i)].second.dot(
                spec.pairs[static_cast<std::size_t>(j)].second);
            if (std::abs(g_out - g_in) > tol)
                rep.violations.push_back({"pairs " + std::to_string(i) + "," + std::to_string(j) +
                                          ": Gram matrix mismatch between inputs and targets"});
        }
        double tn = spec.pairs[static_cast<std::size_t>(i)].second.norm();
        if (std::abs(tn - 1.0) > tol)
            rep.violations.push_back({"target " + std::to_string(i) + " is not normalized"});
    }
    return rep;
}

void require_valid(const GateSpec& spec) {
    ValidationReport rep = validate_spec(spec);
    if (!rep.valid())
        throw std::invalid_argument("GateSpec '" + spec.name + "' invalid: " + rep.violations.front().what);
}

GateSpec reversed(const GateSpec& spec) {
    GateSpec out;
    out.name = spec.name + "_reversed";
    out.notes = spec.notes;
    for (const auto& [in, tgt] : spec.pairs) out.pairs.emplace_back(tgt, in);
    return out;
}

}  // namespace chi2cav
