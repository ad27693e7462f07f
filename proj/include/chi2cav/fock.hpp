// fock.hpp — Charge-sector bases of the three-mode Fock space and the
// block-structured mode operators built on top of them.
//
// The cavity Hamiltonian conserves the charge 2*n_a + n_b + n_c, so every
// operator we need decomposes into finite blocks indexed by that charge.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

namespace chi2cav::fock {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Mode { A, B, C };

// Charge weight of a mode: photons in mode a count twice.
inline int mode_weight(Mode m) noexcept { return m == Mode::A ? 2 : 1; }

struct FockState {
    int n_a{0};
    int n_b{0};
    int n_c{0};

    int charge() const noexcept { return 2 * n_a + n_b + n_c; }

    friend bool operator==(const FockState&, const FockState&) = default;
    friend auto operator<=>(const FockState&, const FockState&) = default;
};

// Complete, lexicographically ordered basis of all occupation triples with
// fixed charge K.
struct ChargeSector {
    int K{0};
    std::vector<FockState> basis;

    int dim() const noexcept { return static_cast<int>(basis.size()); }

    // Index of a state in this sector's basis; -1 if absent.
    int index_of(const FockState& s) const;
};

ChargeSector enumerate_sector(int K);

// Lazily built table of sectors 0..K_max. Immutable after construction;
// safe to share across threads.
class SectorTable {
  public:
    explicit SectorTable(int K_max);

    int k_max() const noexcept { return K_max_; }
    const ChargeSector& sector(int K) const;
    bool has(int K) const noexcept { return K >= 0 && K <= K_max_; }

  private:
    int K_max_;
    std::vector<ChargeSector> sectors_;
};

// Operator stored per source charge sector. Each block maps sector K into
// sector K + charge_shift (0 for charge-conserving operators, -2 for a,
// -1 for b and c).
struct BlockOperator {
    int charge_shift{0};
    std::map<int, Matrix> blocks;  // source K -> matrix (rows in K+shift)

    const Matrix& block(int K) const {
        auto it = blocks.find(K);
        if (it == blocks.end()) throw std::out_of_range("BlockOperator: no block for sector K=" + std::to_string(K));
        return it->second;
    }
    bool has_block(int K) const { return blocks.count(K) != 0; }
};

struct HamiltonianTerms {
    BlockOperator h_shg;  // a b†² + a† b²
    BlockOperator h_x;    // b†c + b c†
    BlockOperator h_y;    // i (b†c − b c†)
};

// H(t) = H_shg + Re(p) H_x + Im(p) H_y, all charge conserving.
HamiltonianTerms build_hamiltonian_terms(int K_max);
HamiltonianTerms build_hamiltonian_terms(const SectorTable& table);

// Annihilation operator for one mode, with its fixed charge decrement.
BlockOperator build_annihilator(Mode mode, int K_max);
BlockOperator build_annihilator(Mode mode, const SectorTable& table);

// Diagonal of the number operator for one mode, restricted to a sector.
Eigen::VectorXd number_diagonal(const ChargeSector& sector, Mode mode);

// Hamiltonian at drive value p, restricted to one sector.
Matrix sector_hamiltonian(const HamiltonianTerms& terms, int K, Complex p);

}  // namespace chi2cav::fock
