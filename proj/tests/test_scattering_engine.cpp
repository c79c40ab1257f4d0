#include <doctest.h>

#include <cmath>
#include <random>

#include "spinscatter/models.hpp"
#include "spinscatter/oracles.hpp"
#include "spinscatter/scattering_engine.hpp"
#include "test_support.hpp"

using namespace spinscatter;
using Eigen::MatrixXcd;

namespace {

ScatteringModel free_chain(int N, double t) {
    std::vector<MatrixXcd> eps(N, MatrixXcd::Zero(1, 1));
    return ScatteringModel(N, t, MatrixXcd::Zero(1, 1), std::move(eps));
}

}  // namespace

TEST_SUITE("scattering_engine") {

TEST_CASE("effective Hamiltonian at band center, N = 1, d = 1") {
    const ScatteringModel m = free_chain(1, 1.0);
    const MatrixXcd H = build_effective_hamiltonian(m, 2.0);
    MatrixXcd expected(3, 3);
    const cxd mi(0.0, -1.0);
    expected << mi, -1.0, 0.0, -1.0, 0.0, -1.0, 0.0, -1.0, mi;
    CHECK((H - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("only the self-energies make H' non-Hermitian") {
    testing::RandomModelGen gen(11);
    for (int trial = 0; trial < 5; ++trial) {
        const auto sample = gen.next();
        const int d = sample.model.dim();
        const MatrixXcd H = build_effective_hamiltonian(sample.model, sample.kinetic_in);
        MatrixXcd anti = 0.5 * (H - H.adjoint().eval());
        // strip the lead corners: what remains must vanish
        anti.topLeftCorner(d, d).setZero();
        anti.bottomRightCorner(d, d).setZero();
        CHECK(anti.cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("12x12 molecular assembly has exactly two non-Hermitian diagonal blocks") {
    MolecularParams p;
    p.s = 1.0;
    p.D1 = p.D2 = -0.05;
    p.J12x = p.J12z = 1.0;
    p.J = -0.5;
    const ScatteringModel m = molecular_block(p, 2, 100.0);
    const MatrixXcd H = build_effective_hamiltonian(m, 0.5);
    CHECK(H.rows() == 12);
    int non_hermitian = 0;
    for (int j = 0; j < 4; ++j) {
        const MatrixXcd blk = H.block(3 * j, 3 * j, 3, 3);
        if ((blk - blk.adjoint().eval()).cwiseAbs().maxCoeff() > 1e-12) ++non_hermitian;
    }
    CHECK(non_hermitian == 2);
}

TEST_CASE("free chain is transparent") {
    for (double K : {0.03, 0.8, 2.0, 3.7}) {
        const ScatterOutcome o = solve_scattering(free_chain(3, 1.0), K, 0);
        CHECK(o.T(0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(o.R(0) < 1e-12);
        // |G_{N+1,0}| v = 1 is the same statement before squaring
        const MatrixXcd G = retarded_gf(free_chain(3, 1.0), K);
        const double v = *channel_table(K, free_chain(3, 1.0).lead())[0].v;
        CHECK(std::abs(G(4, 0)) * v == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("G inverts the resolvent") {
    testing::RandomModelGen gen(5);
    for (int trial = 0; trial < 5; ++trial) {
        const auto sample = gen.next();
        const ScatteringModel m = shifted_to_incoming(sample.model, sample.incoming);
        const MatrixXcd G = retarded_gf(m, sample.kinetic_in);
        const MatrixXcd H = build_effective_hamiltonian(m, sample.kinetic_in);
        const int n = static_cast<int>(H.rows());
        const MatrixXcd A =
            (sample.kinetic_in - 2.0 * m.hopping) * MatrixXcd::Identity(n, n) - H;
        CHECK((G * A - MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("flux conservation and oracle agreement on random models") {
    testing::RandomModelGen gen(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const auto sample = gen.next();
        CAPTURE(trial);
        const ScatterOutcome eng = solve_scattering(sample.model, sample.kinetic_in, sample.incoming);
        CHECK(std::abs(eng.flux_sum - 1.0) < 1e-10);
        const ScatterOutcome orc =
            oracles::wavefunction_matching_solve(sample.model, sample.kinetic_in, sample.incoming);
        CHECK((eng.transmission - orc.transmission).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((eng.reflection - orc.reflection).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("elastic reciprocity for d = 1 and real potentials") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> vdist(-0.8, 0.8), kdist(0.3, 3.7);
    for (int trial = 0; trial < 10; ++trial) {
        const int N = 1 + trial % 4;
        std::vector<MatrixXcd> eps, reversed;
        for (int j = 0; j < N; ++j) {
            MatrixXcd e(1, 1);
            e << vdist(rng);
            eps.push_back(e);
        }
        reversed.assign(eps.rbegin(), eps.rend());
        const double K = kdist(rng);
        const ScatterOutcome fwd =
            solve_scattering(ScatteringModel(N, 1.0, MatrixXcd::Zero(1, 1), eps), K, 0);
        const ScatterOutcome bwd =
            solve_scattering(ScatteringModel(N, 1.0, MatrixXcd::Zero(1, 1), reversed), K, 0);
        CHECK(fwd.T(0) == doctest::Approx(bwd.T(0)).epsilon(1e-12));
    }
}

TEST_CASE("inelastic threshold is exact") {
    // d = 2: second channel offset by Delta, coupled by a real exchange
    const double Delta = 0.01, t = 1.0;
    MatrixXcd eps0 = MatrixXcd::Zero(2, 2);
    eps0(1, 1) = Delta;
    MatrixXcd eps1(2, 2);
    eps1 << 0.0, 0.05, 0.05, Delta;
    const ScatteringModel m(1, t, eps0, {eps1});
    for (double K : {Delta / 10.0, Delta / 2.0, Delta * 0.999}) {
        const ScatterOutcome o = solve_scattering(m, K, 0);
        CHECK(o.T(1) == 0.0);
        CHECK(o.R(1) == 0.0);
        CHECK(std::abs(o.flux_sum - 1.0) < 1e-10);
    }
    const ScatterOutcome above = solve_scattering(m, Delta * 1.001, 0);
    CHECK(above.T(1) > 0.0);
}

TEST_CASE("closed or masked incoming channels are rejected") {
    const ScatteringModel chain = free_chain(2, 1.0);
    CHECK_THROWS_AS(solve_scattering(chain, -0.1, 0), std::invalid_argument);
    CHECK_THROWS_AS(solve_scattering(chain, 4.3, 0), std::invalid_argument);

    Eigen::VectorXd mask(2);
    mask << 0.0, 1.0;
    std::vector<MatrixXcd> eps{MatrixXcd::Zero(2, 2)};
    const ScatteringModel masked(1, 1.0, MatrixXcd::Zero(2, 2), eps, mask);
    CHECK_THROWS_AS(solve_scattering(masked, 1.0, 0), std::invalid_argument);
    CHECK_NOTHROW(solve_scattering(masked, 1.0, 1));
}

TEST_CASE("model validation") {
    MatrixXcd not_herm(2, 2);
    not_herm << 0.0, 1.0, 0.5, 0.0;
    CHECK_THROWS_AS(ScatteringModel(1, 1.0, MatrixXcd::Zero(2, 2), {not_herm}),
                    std::invalid_argument);
    MatrixXcd off_diag = MatrixXcd::Zero(2, 2);
    off_diag(0, 1) = 0.1;
    CHECK_THROWS_AS(ScatteringModel(1, 1.0, off_diag, {MatrixXcd::Zero(2, 2)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ScatteringModel(0, 1.0, MatrixXcd::Zero(1, 1), {}), std::invalid_argument);
    CHECK_THROWS_AS(ScatteringModel(1, -1.0, MatrixXcd::Zero(1, 1), {MatrixXcd::Zero(1, 1)}),
                    std::invalid_argument);
}

TEST_CASE("spread Kondo at K_i/t = 0.004 matches the oracle") {
    const ScatteringModel m = kondo_contact_spread(0.5, -0.5, 2, 100.0);
    const double K = 0.004 * 100.0;
    const ScatterOutcome eng = solve_scattering(m, K, 0);
    const ScatterOutcome orc = oracles::wavefunction_matching_solve(m, K, 0);
    CHECK((eng.transmission - orc.transmission).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(eng.T(1) > 0.0);
}

TEST_CASE("phase of the |+> channel is reported in [0, 2pi)") {
    const ScatteringModel m = kondo_contact_spread(0.5, -0.5, 2, 100.0);
    const ScatterOutcome o = solve_scattering(m, 0.1, 0);
    REQUIRE(o.phi_plus().has_value());
    CHECK(*o.phi_plus() >= 0.0);
    CHECK(*o.phi_plus() < 2.0 * 3.14159265358979324);
}

}  // TEST_SUITE
