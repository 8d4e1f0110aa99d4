#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bornlab/qubit.hpp"

using namespace bornlab;
using Catch::Approx;

namespace {

DensityOperator ket0() { return DensityOperator::pure({1.0, 0.0}); }
DensityOperator ket1() { return DensityOperator::pure({0.0, 1.0}); }

} // namespace

TEST_CASE("density operator invariants are enforced", "[qubit]") {
    Matrix2c bad;
    bad << 1.0, complexd(0.2, 0.1), complexd(0.2, -0.3), 0.0;
    CHECK_THROWS_AS(DensityOperator(bad), std::invalid_argument);

    Matrix2c wrong_trace;
    wrong_trace << 0.7, 0, 0, 0.7;
    CHECK_THROWS_AS(DensityOperator(wrong_trace), std::invalid_argument);

    Matrix2c negative;
    negative << 1.2, 0, 0, -0.2;
    CHECK_THROWS_AS(DensityOperator(negative), std::invalid_argument);

    CHECK_NOTHROW(DensityOperator::maximally_mixed());
}

TEST_CASE("effect invariants are enforced", "[qubit]") {
    Matrix2c above_one;
    above_one << 1.5, 0, 0, 0.5;
    CHECK_THROWS_AS(Effect(above_one), std::invalid_argument);
    CHECK_NOTHROW(Effect(Matrix2c::Identity()));
    CHECK_NOTHROW(Effect(Matrix2c::Zero()));
}

TEST_CASE("povm completeness is enforced", "[qubit]") {
    std::vector<Effect> partial;
    partial.emplace_back(0.5 * Matrix2c::Identity());
    CHECK_THROWS_AS(Povm(std::move(partial)), std::invalid_argument);
}

TEST_CASE("born probability on projector pairs", "[qubit]") {
    CHECK(born_probability(ket0(), Effect(ket0().matrix())) == Approx(1.0).margin(1e-14));

    SicSet sic = sic_tetrahedron();
    for (int i = 0; i < 4; ++i)
        CHECK(born_probability(DensityOperator::maximally_mixed(), sic.povm.effects()[i]) ==
              Approx(0.25).margin(1e-14));

    // |0><0| against the tetrahedron projector aligned with +z, then the rest.
    CHECK(born_probability(ket0(), Effect(sic.projectors[0].matrix())) ==
          Approx(1.0).margin(1e-12));
    for (int i = 1; i < 4; ++i)
        CHECK(born_probability(ket0(), Effect(sic.projectors[i].matrix())) ==
              Approx(1.0 / 3).margin(1e-12));
}

TEST_CASE("tetrahedron reference measurement is a SIC", "[qubit]") {
    SicSet sic = sic_tetrahedron();
    for (int i = 0; i < 4; ++i) {
        CHECK((sic.projectors[i].matrix() * sic.projectors[i].matrix()).trace().real() ==
              Approx(1.0).margin(1e-12));
        for (int j = i + 1; j < 4; ++j)
            CHECK((sic.projectors[i].matrix() * sic.projectors[j].matrix()).trace().real() ==
                  Approx(1.0 / 3).margin(1e-12));
    }
    Matrix2c sum = Matrix2c::Zero();
    for (const auto& e : sic.povm.effects()) sum += e.matrix();
    CHECK((sum - Matrix2c::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("pauli measurements", "[qubit]") {
    Povm z = pauli_measurement(PauliAxis::Z);
    CHECK(born_probability(ket0(), z.effects()[0]) == Approx(1.0).margin(1e-14));
    CHECK(born_probability(ket1(), z.effects()[1]) == Approx(1.0).margin(1e-14));

    Eigen::VectorXd dist = outcome_distribution(DensityOperator::maximally_mixed(),
                                                pauli_measurement(PauliAxis::X));
    CHECK(dist[0] == Approx(0.5).margin(1e-14));
    CHECK(dist[1] == Approx(0.5).margin(1e-14));

    dist = outcome_distribution(ket0(), pauli_measurement(PauliAxis::Y));
    CHECK(dist[0] == Approx(0.5).margin(1e-14));
    CHECK(dist[1] == Approx(0.5).margin(1e-14));
}

TEST_CASE("haar states: purity, determinism, first moment", "[qubit]") {
    Rng rng = make_rng(42);
    for (int i = 0; i < 50; ++i) {
        DensityOperator rho = random_pure_state(rng);
        CHECK(rho.purity() == Approx(1.0).margin(1e-12));
    }

    Rng a = make_rng(7), b = make_rng(7);
    for (int i = 0; i < 10; ++i) {
        CHECK(random_pure_state(a).matrix() == random_pure_state(b).matrix());
    }

    Rng mean_rng = make_rng(2024);
    Matrix2c mean = Matrix2c::Zero();
    const int samples = 100000;
    for (int i = 0; i < samples; ++i) mean += random_pure_state(mean_rng).matrix();
    mean /= samples;
    CHECK((mean - 0.5 * Matrix2c::Identity()).cwiseAbs().maxCoeff() < 0.01);
}

TEST_CASE("outcome sampling", "[qubit]") {
    Eigen::VectorXd sure(2);
    sure << 1.0, 0.0;
    Rng rng = make_rng(1);
    for (int i = 0; i < 100; ++i) CHECK(sample_outcome(sure, rng) == 0);

    Eigen::VectorXd dist(2);
    dist << 0.22, 0.78;
    Rng freq_rng = make_rng(99);
    long zeros = 0;
    const long draws = 300000;
    for (long i = 0; i < draws; ++i)
        if (sample_outcome(dist, freq_rng) == 0) ++zeros;
    CHECK(std::abs(static_cast<double>(zeros) / draws - 0.22) < 0.005);

    Rng s1 = make_rng(5), s2 = make_rng(5);
    for (int i = 0; i < 1000; ++i) CHECK(sample_outcome(dist, s1) == sample_outcome(dist, s2));

    Eigen::VectorXd not_normalized(2);
    not_normalized << 0.4, 0.4;
    CHECK_THROWS_AS(sample_outcome(not_normalized, rng), std::invalid_argument);
    Eigen::VectorXd negative(2);
    negative << 1.2, -0.2;
    CHECK_THROWS_AS(sample_outcome(negative, rng), std::invalid_argument);
}

TEST_CASE("probability-only Born rule identity cases", "[qubit]") {
    // Maximally mixed state: p = (1/4,...) and q(j) reduces to the average
    // conditional probability.
    SicSet sic = sic_tetrahedron();
    Povm d = pauli_measurement(PauliAxis::X);
    Eigen::Vector4d p = Eigen::Vector4d::Constant(0.25);
    Eigen::MatrixXd r(2, 4);
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 4; ++i)
            r(j, i) = born_probability(sic.projectors[i], d.effects()[j]);
    Eigen::VectorXd q = urgleichung_predict(p, r);
    for (int j = 0; j < 2; ++j) {
        CHECK(q[j] == Approx(r.row(j).sum() / 4).margin(1e-12));
        CHECK(q[j] ==
              Approx(born_probability(DensityOperator::maximally_mixed(), d.effects()[j]))
                  .margin(1e-12));
    }

    // Deterministic coefficient arithmetic: p = e1, r(j|i) = delta_{j,1}.
    Eigen::Vector4d unit_p(1, 0, 0, 0);
    Eigen::MatrixXd point_r = Eigen::MatrixXd::Zero(2, 4);
    point_r.row(0).setOnes();
    Eigen::VectorXd point_q = urgleichung_predict(unit_p, point_r);
    CHECK(point_q[0] == Approx(1.0).margin(1e-14));
    CHECK(point_q[1] == Approx(0.0).margin(1e-14));

    Eigen::MatrixXd wrong(2, 3);
    CHECK_THROWS_AS(urgleichung_predict(unit_p, wrong), std::invalid_argument);
}

TEST_CASE("probability-only Born rule equals the operator Born rule", "[qubit]") {
    // Randomized equivalence over pure states and Pauli measurements.
    SicSet sic = sic_tetrahedron();
    Rng rng = make_rng(1234);
    for (int trial = 0; trial < 1000; ++trial) {
        DensityOperator rho = random_pure_state(rng);
        Povm d = pauli_measurement(static_cast<PauliAxis>(uniform_below(rng, 3)));
        Eigen::Vector4d p;
        for (int i = 0; i < 4; ++i) p[i] = born_probability(rho, sic.povm.effects()[i]);
        Eigen::MatrixXd r(2, 4);
        for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 4; ++i)
                r(j, i) = born_probability(sic.projectors[i], d.effects()[j]);
        Eigen::VectorXd q = urgleichung_predict(p, r);
        for (int j = 0; j < 2; ++j)
            REQUIRE(q[j] == Approx(born_probability(rho, d.effects()[j])).margin(1e-12));
    }
}

TEST_CASE("outcome distributions are normalized for random inputs", "[qubit]") {
    Rng rng = make_rng(777);
    SicSet sic = sic_tetrahedron();
    std::vector<Povm> povms = {sic.povm, pauli_measurement(PauliAxis::X),
                               pauli_measurement(PauliAxis::Y),
                               sagnac_povm(SagnacParams::from_x(0.77))};
    for (int trial = 0; trial < 200; ++trial) {
        DensityOperator rho = random_pure_state(rng);
        for (const Povm& povm : povms) {
            Eigen::VectorXd dist = outcome_distribution(rho, povm);
            CHECK(dist.minCoeff() >= -1e-12);
            CHECK(dist.sum() == Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("sagnac POVM: completeness and degenerate setting", "[qubit]") {
    for (double x : {1.0, 0.9, 0.6, std::sqrt(kSagnacSicX2)}) {
        Povm povm = sagnac_povm(SagnacParams::from_x(x));
        Matrix2c sum = Matrix2c::Zero();
        for (const auto& e : povm.effects()) sum += e.matrix();
        CHECK((sum - Matrix2c::Identity()).cwiseAbs().maxCoeff() <= 1e-14);
        for (const auto& e : povm.effects())
            CHECK(e.matrix().trace().real() == Approx(0.5).margin(1e-14));
    }

    Povm degenerate = sagnac_povm(SagnacParams::from_x(1.0));
    Matrix2c top = Matrix2c::Zero();
    top(0, 0) = 0.5;
    Matrix2c bottom = Matrix2c::Zero();
    bottom(1, 1) = 0.5;
    CHECK((degenerate.effects()[0].matrix() - top).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((degenerate.effects()[1].matrix() - top).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((degenerate.effects()[2].matrix() - bottom).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((degenerate.effects()[3].matrix() - bottom).cwiseAbs().maxCoeff() <= 1e-14);

    CHECK_THROWS_AS(SagnacParams(0.3, 0.3), std::invalid_argument);
}

TEST_CASE("sagnac POVM at the SIC setting is equiangular", "[qubit]") {
    Povm povm = sagnac_povm(SagnacParams::from_x(std::sqrt(kSagnacSicX2)));
    for (int i = 0; i < 4; ++i) {
        Matrix2c pi_i = 2.0 * povm.effects()[i].matrix();
        CHECK((pi_i * pi_i).trace().real() == Approx(1.0).margin(1e-12));
        for (int j = i + 1; j < 4; ++j) {
            Matrix2c pi_j = 2.0 * povm.effects()[j].matrix();
            CHECK((pi_i * pi_j).trace().real() == Approx(1.0 / 3).margin(1e-12));
        }
    }
}

TEST_CASE("sagnac path-unitary route matches the direct construction", "[qubit]") {
    for (double x : {std::sqrt(kSagnacSicX2), 0.8, 1.0, 0.3}) {
        SagnacParams params = SagnacParams::from_x(x);
        Povm direct = sagnac_povm(params);
        Povm chained = sagnac_povm_from_path_unitary(params);
        for (int i = 0; i < 4; ++i)
            CHECK((direct.effects()[i].matrix() - chained.effects()[i].matrix())
                      .cwiseAbs()
                      .maxCoeff() <= 1e-12);
    }
}
