#include "chi2cav/fock.hpp"

#include <cmath>

namespace chi2cav::fock {

int ChargeSector::index_of(const FockState& s) const {
    for (int i = 0; i < dim(); ++i)
        if (basis[static_cast<std::size_t>(i)] == s) return i;
    return -1;
}

ChargeSector enumerate_sector(int K) {
    if (K < 0) throw std::invalid_argument("enumerate_sector: K must be non-negative");
    ChargeSector sec;
    sec.K = K;
    for (int n_a = 0; 2 * n_a <= K; ++n_a)
        for (int n_b = 0; 2 * n_a + n_b <= K; ++n_b)
            sec.basis.push_back({n_a, n_b, K - 2 * n_a - n_b});
    return sec;
}

SectorTable::SectorTable(int K_max) : K_max_(K_max) {
    if (K_max < 0) throw std::invalid_argument("SectorTable: K_max must be non-negative");
    sectors_.reserve(static_cast<std::size_t>(K_max) + 1);
    for (int K = 0; K <= K_max; ++K) sectors_.push_back(enumerate_sector(K));
}

const ChargeSector& SectorTable::sector(int K) const {
    if (!has(K)) throw std::out_of_range("SectorTable: sector K=" + std::to_string(K) + " not built");
    return sectors_[static_cast<std::size_t>(K)];
}

namespace {

// <m-1| x |m> = sqrt(m)
double ladder(int m) { return std::sqrt(static_cast<double>(m)); }

// Matrix of a b†² + a† b² within sector K.
Matrix shg_block(const ChargeSector& sec) {
    const int d = sec.dim();
    Matrix m = Matrix::Zero(d, d);
    for (int col = 0; col < d; ++col) {
        const FockState& s = sec.basis[static_cast<std::size_t>(col)];
        // a b†² : (n_a, n_b) -> (n_a - 1, n_b + 2)
        if (s.n_a >= 1) {
            FockState t{s.n_a - 1, s.n_b + 2, s.n_c};
            int row = sec.index_of(t);
            m(row, col) += ladder(s.n_a) * ladder(s.n_b + 1) * ladder(s.n_b + 2);
        }
        // a† b² : (n_a, n_b) -> (n_a + 1, n_b - 2)
        if (s.n_b >= 2) {
            FockState t{s.n_a + 1, s.n_b - 2, s.n_c};
            int row = sec.index_of(t);
            m(row, col) += ladder(s.n_a + 1) * ladder(s.n_b) * ladder(s.n_b - 1);
        }
    }
    return m;
}

// Matrix of b†c + b c† within sector K.
Matrix bc_real_block(const ChargeSector& sec) {
    const int d = sec.dim();
    Matrix m = Matrix::Zero(d, d);
    for (int col = 0; col < d; ++col) {
        const FockState& s = sec.basis[static_cast<std::size_t>(col)];
        if (s.n_c >= 1) {  // b† c
            FockState t{s.n_a, s.n_b + 1, s.n_c - 1};
            m(sec.index_of(t), col) += ladder(s.n_b + 1) * ladder(s.n_c);
        }
        if (s.n_b >= 1) {  // b c†
            FockState t{s.n_a, s.n_b - 1, s.n_c + 1};
            m(sec.index_of(t), col) += ladder(s.n_b) * ladder(s.n_c + 1);
        }
    }
    return m;
}

// Matrix of i(b†c − b c†) within sector K.
Matrix bc_imag_block(const ChargeSector& sec) {
    const int d = sec.dim();
    Matrix m = Matrix::Zero(d, d);
    const Complex i{0.0, 1.0};
    for (int col = 0; col < d; ++col) {
        const FockState& s = sec.basis[static_cast<std::size_t>(col)];
        if (s.n_c >= 1) {
            FockState t{s.n_a, s.n_b + 1, s.n_c - 1};
            m(sec.index_of(t), col) += i * ladder(s.n_b + 1) * ladder(s.n_c);
        }
        if (s.n_b >= 1) {
            FockState t{s.n_a, s.n_b - 1, s.n_c + 1};
            m(sec.index_of(t), col) -= i * ladder(s.n_b) * ladder(s.n_c + 1);
        }
    }
    return m;
}

}  // namespace

HamiltonianTerms build_hamiltonian_terms(const SectorTable& table) {
    HamiltonianTerms terms;
    for (int K = 0; K <= table.k_max(); ++K) {
        const ChargeSector& sec = table.sector(K);
        terms.h_shg.blocks[K] = shg_block(sec);
        terms.h_x.blocks[K] = bc_real_block(sec);
        terms.h_y.blocks[K] = bc_imag_block(sec);
    }
    return terms;
}

HamiltonianTerms build_hamiltonian_terms(int K_max) {
    return build_hamiltonian_terms(SectorTable(K_max));
}

BlockOperator build_annihilator(Mode mode, const SectorTable& table) {
    BlockOperator op;
    op.charge_shift = -mode_weight(mode);
    for (int K = -op.charge_shift; K <= table.k_max(); ++K) {
        const ChargeSector& src = table.sector(K);
        const ChargeSector& dst = table.sector(K + op.charge_shift);
        Matrix m = Matrix::Zero(dst.dim(), src.dim());
        for (int col = 0; col < src.dim(); ++col) {
            FockState s = src.basis[static_cast<std::size_t>(col)];
            int n = mode == Mode::A ? s.n_a : mode == Mode::B ? s.n_b : s.n_c;
            if (n == 0) continue;
            FockState t = s;
            (mode == Mode::A ? t.n_a : mode == Mode::B ? t.n_b : t.n_c) = n - 1;
            m(dst.index_of(t), col) = ladder(n);
        }
        op.blocks[K] = m;
    }
    return op;
}

BlockOperator build_annihilator(Mode mode, int K_max) {
    return build_annihilator(mode, SectorTable(K_max));
}

Eigen::VectorXd number_diagonal(const ChargeSector& sector, Mode mode) {
    Eigen::VectorXd d(sector.dim());
    for (int i = 0; i < sector.dim(); ++i) {
        const FockState& s = sector.basis[static_cast<std::size_t>(i)];
        d(i) = mode == Mode::A ? s.n_a : mode == Mode::B ? s.n_b : s.n_c;
    }
    return d;
}

Matrix sector_hamiltonian(const HamiltonianTerms& terms, int K, Complex p) {
    return terms.h_shg.block(K) + p.real() * terms.h_x.block(K) + p.imag() * terms.h_y.block(K);
}

}  // namespace chi2cav::fock
