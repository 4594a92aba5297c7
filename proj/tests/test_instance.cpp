#include <doctest.h>

#include <cmath>

#include "latmix/instance.hpp"
#include "latmix/oracle.hpp"
#include "test_helpers.hpp"

using namespace latmix;

TEST_CASE("noiseless generation gives y = B x_true exactly") {
    const ProblemInstance inst = gen_gaussian_instance(2, 1.0, 7, false);
    const Eigen::VectorXd expected = inst.b * Eigen::Vector2d(-1.0, -1.0);
    CHECK(inst.y == expected);
    CHECK(inst.v.isZero(0.0));
}

TEST_CASE("objective at the truth is zero for noiseless instances") {
    for (double snr : {0.5, 1.0, 25.0}) {
        const ProblemInstance inst = gen_gaussian_instance(4, snr, 11, false);
        CHECK(objective(inst, inst.x_true) == 0.0);
    }
}

TEST_CASE("same seed regenerates an identical instance") {
    const ProblemInstance a = gen_gaussian_instance(3, 10.0, 1, true);
    const ProblemInstance b = gen_gaussian_instance(3, 10.0, 1, true);
    CHECK(a.b == b.b);
    CHECK(a.y == b.y);
    CHECK(a.v == b.v);
}

TEST_CASE("noise toggling keeps the channel fixed for a given seed") {
    const ProblemInstance noisy = gen_gaussian_instance(5, 2.0, 42, true);
    const ProblemInstance clean = gen_gaussian_instance(5, 2.0, 42, false);
    CHECK(noisy.b == clean.b);
}

TEST_CASE("generated instances satisfy y = B x_true + v and f(x_true) = ||v||^2") {
    const auto check_inst = [](const ProblemInstance& inst) {
        CHECK((inst.y - inst.b * inst.x_true.to_vector() - inst.v).norm() < 1e-10);
        const double f = objective(inst, inst.x_true);
        const double vv = inst.v.squaredNorm();
        CHECK(f == doctest::Approx(vv).epsilon(1e-9));
    };
    check_inst(gen_gaussian_instance(6, 10.0, 5, true));
    check_inst(gen_orthogonal_instance(6, 10.0, 5, true));
    check_inst(gen_unit_sphere_instance(6, 5));
    check_inst(gen_adversarial_instance(6, 0.3));
}

TEST_CASE("orthogonal instances have orthogonal columns") {
    const ProblemInstance inst = gen_orthogonal_instance(4, 4.0, 3, false);
    const Eigen::MatrixXd gram = inst.b.transpose() * inst.b;
    double max_offdiag = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) max_offdiag = std::max(max_offdiag, std::abs(gram(i, j)));
    CHECK(max_offdiag < 1e-10);
}

TEST_CASE("orthogonal noiseless instances have no local minima") {
    const ProblemInstance inst = gen_orthogonal_instance(2, 2.0, 5, false);
    CHECK(local_minima_bruteforce(inst).minima.empty());
}

TEST_CASE("n = 1 orthogonal instance is a single nonzero scalar") {
    const ProblemInstance inst = gen_orthogonal_instance(1, 1.0, 0, false);
    CHECK(inst.b.rows() == 1);
    CHECK(inst.b(0, 0) != 0.0);
    CHECK(std::abs(std::abs(inst.b(0, 0)) - 1.0) < 1e-12);
}

TEST_CASE("unit sphere columns have unit norm") {
    const ProblemInstance inst = gen_unit_sphere_instance(2, 11);
    CHECK(std::abs(inst.b.col(0).norm() - 1.0) < 1e-12);
    CHECK(std::abs(inst.b.col(1).norm() - 1.0) < 1e-12);
    CHECK(inst.v.isZero(0.0));
    CHECK(inst.snr == 1.0);
}

TEST_CASE("a wide-angle unit pair makes (+1,+1) a local minimum") {
    // cos(2.5) < -1/2, the threshold of the all-plus-one condition.
    const ProblemInstance inst = testing::unit_pair_instance(2.5);
    const auto report = local_minima_bruteforce(inst);
    REQUIRE(report.minima.size() == 1);
    CHECK(report.minima[0].state == SpinState::all_plus_one(2));
}

TEST_CASE("adversarial local-minima counts are 2^{n/2} - 1") {
    CHECK(local_minima_bruteforce(gen_adversarial_instance(2, 0.5)).minima.size() == 1);
    CHECK(local_minima_bruteforce(gen_adversarial_instance(4, 0.5)).minima.size() == 3);
    CHECK(local_minima_bruteforce(gen_adversarial_instance(6, 0.25)).minima.size() == 7);
}

TEST_CASE("adversarial n=2: the lone local minimum is (+1,+1) with objective 4 eps^2") {
    const ProblemInstance inst = gen_adversarial_instance(2, 0.5);
    const auto report = local_minima_bruteforce(inst);
    REQUIRE(report.minima.size() == 1);
    CHECK(report.minima[0].state == SpinState::all_plus_one(2));
    CHECK(objective(inst, SpinState::all_plus_one(2)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("adversarial global minimum is uniquely all -1 across eps and n") {
    for (int n : {2, 4, 6, 8}) {
        for (double eps : {0.1, 0.5, 0.9}) {
            const auto gm = global_minimum(gen_adversarial_instance(n, eps));
            REQUIRE(gm.states.size() == 1);
            CHECK(gm.states[0].code == 0);
        }
    }
}

TEST_CASE("identity-matrix objective counts disagreeing coordinates") {
    const ProblemInstance inst =
        load_custom_instance(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(0.0, 0.0));
    CHECK(objective(inst, SpinState::all_plus_one(2)) == doctest::Approx(2.0));
}

TEST_CASE("custom 1x1 instance has its global minimum at -1") {
    Eigen::MatrixXd b(1, 1);
    b << 2.0;
    Eigen::VectorXd y(1);
    y << -2.0;
    const auto gm = global_minimum(load_custom_instance(b, y));
    REQUIRE(gm.states.size() == 1);
    CHECK(gm.states[0].code == 0);
    CHECK(gm.value == doctest::Approx(0.0));
}

TEST_CASE("zero-column custom instances are accepted and ties are tolerated") {
    Eigen::MatrixXd b(2, 2);
    b << 1.0, 0.0, 0.0, 0.0;
    const ProblemInstance inst = load_custom_instance(b, Eigen::Vector2d(1.0, 0.0));
    const auto report = local_minima_bruteforce(inst);  // must not throw
    CHECK(report.global_minima.size() == 2);  // coordinate 1 is free
    CHECK(report.minima.empty());
}

TEST_CASE("generator argument validation") {
    CHECK_THROWS_AS(gen_gaussian_instance(0, 1.0, 0, false), std::invalid_argument);
    CHECK_THROWS_AS(gen_gaussian_instance(3, -1.0, 0, false), std::invalid_argument);
    CHECK_THROWS_AS(gen_adversarial_instance(3, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(gen_adversarial_instance(4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gen_adversarial_instance(4, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(load_custom_instance(Eigen::MatrixXd::Zero(2, 3), Eigen::Vector2d(0, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(load_custom_instance(Eigen::MatrixXd::Zero(2, 2), Eigen::Vector3d(0, 0, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(objective(gen_gaussian_instance(3, 1.0, 0, false), SpinState(2, 0)),
                    std::invalid_argument);
}

TEST_CASE("JSON serialization round-trips bit-exactly") {
    const ProblemInstance inst = gen_gaussian_instance(4, 10.0, 123, true);
    const ProblemInstance back = instance_from_json(instance_to_json(inst));
    CHECK(back.n == inst.n);
    CHECK(back.snr == inst.snr);
    CHECK(back.kind == inst.kind);
    CHECK(back.b == inst.b);
    CHECK(back.y == inst.y);
    CHECK(back.v == inst.v);
    CHECK(back.x_true == inst.x_true);
}
