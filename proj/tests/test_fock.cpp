#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chi2cav/fock.hpp"

using namespace chi2cav;
using fock::FockState;
using fock::Mode;

namespace {

// Brute-force count of triples with 2n_a+n_b+n_c = K.
int brute_count(int K) {
    int c = 0;
    for (int a = 0; a <= K; ++a)
        for (int b = 0; b <= K; ++b)
            for (int d = 0; d <= K; ++d)
                if (2 * a + b + d == K) ++c;
    return c;
}

}  // namespace

TEST_CASE("sector enumeration") {
    CHECK(fock::enumerate_sector(0).dim() == 1);
    CHECK(fock::enumerate_sector(0).basis[0] == FockState{0, 0, 0});

    auto s2 = fock::enumerate_sector(2);
    REQUIRE(s2.dim() == 4);
    CHECK(s2.basis[0] == FockState{0, 0, 2});
    CHECK(s2.basis[1] == FockState{0, 1, 1});
    CHECK(s2.basis[2] == FockState{0, 2, 0});
    CHECK(s2.basis[3] == FockState{1, 0, 0});

    CHECK(fock::enumerate_sector(4).dim() == 9);
    for (int K = 0; K <= 12; ++K) {
        auto s = fock::enumerate_sector(K);
        CHECK(s.dim() == brute_count(K));
        for (const FockState& st : s.basis) CHECK(st.charge() == K);
    }
    CHECK_THROWS_AS(fock::enumerate_sector(-1), std::invalid_argument);
}

TEST_CASE("hamiltonian matrix elements") {
    fock::SectorTable table(8);
    auto terms = fock::build_hamiltonian_terms(table);

    // <020| a b†² |100> = √2 within the K=2 block.
    const auto& s2 = table.sector(2);
    int i100 = s2.index_of({1, 0, 0}), i020 = s2.index_of({0, 2, 0});
    CHECK(terms.h_shg.block(2)(i020, i100).real() == doctest::Approx(std::sqrt(2.0)));

    int i011 = s2.index_of({0, 1, 1});
    CHECK(terms.h_x.block(2)(i011, i020).real() == doctest::Approx(std::sqrt(2.0)));

    for (int K = 0; K <= 8; ++K) {
        CHECK((terms.h_shg.block(K) - terms.h_shg.block(K).adjoint()).norm() < 1e-12);
        CHECK((terms.h_x.block(K) - terms.h_x.block(K).adjoint()).norm() < 1e-12);
        CHECK((terms.h_y.block(K) - terms.h_y.block(K).adjoint()).norm() < 1e-12);
    }
}

TEST_CASE("annihilators") {
    fock::SectorTable table(8);
    auto b = fock::build_annihilator(Mode::B, table);
    CHECK(b.charge_shift == -1);
    const auto& s4 = table.sector(4);
    const auto& s3 = table.sector(3);
    CHECK(b.block(4)(s3.index_of({0, 3, 0}), s4.index_of({0, 4, 0})).real() == doctest::Approx(2.0));

    auto a = fock::build_annihilator(Mode::A, table);
    CHECK(a.charge_shift == -2);
    CHECK(a.block(4).rows() == table.sector(2).dim());

    auto c = fock::build_annihilator(Mode::C, table);
    CHECK(c.block(1)(0, table.sector(1).index_of({0, 0, 1})).real() == doctest::Approx(1.0));

    // x†x diagonal equals the number operator.
    for (Mode m : {Mode::A, Mode::B, Mode::C}) {
        auto op = fock::build_annihilator(m, table);
        for (int K = -op.charge_shift; K <= 8; ++K) {
            fock::Matrix num = op.block(K).adjoint() * op.block(K);
            Eigen::VectorXd diag = fock::number_diagonal(table.sector(K), m);
            CHECK((num - fock::Matrix(diag.cast<fock::Complex>().asDiagonal())).norm() < 1e-12);
        }
    }
}
