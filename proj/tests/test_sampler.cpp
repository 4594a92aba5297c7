#include <doctest.h>

#include <bit>
#include <cmath>

#include "latmix/mixing.hpp"
#include "latmix/oracle.hpp"
#include "latmix/sampler.hpp"
#include "latmix/spectral.hpp"
#include "test_helpers.hpp"

using namespace latmix;

TEST_CASE("equal candidate objectives give flip probability exactly 1/2") {
    // Column 0 is orthogonal to y, so both conditionals match at site 0.
    const ProblemInstance inst =
        load_custom_instance(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(0.0, 5.0));
    CHECK(flip_probability(inst, SpinState(2, 0), 0, 1.0) == 0.5);
    CHECK(flip_probability(inst, SpinState(2, 1), 0, 1.0) == 0.5);
}

TEST_CASE("objective difference of 2 at alpha2 = 1 gives 1/(1+e)") {
    Eigen::MatrixXd b(1, 1);
    b << 1.0;
    Eigen::VectorXd y(1);
    y << -0.5;  // f(+1) = 2.25, f(-1) = 0.25
    const ProblemInstance inst = load_custom_instance(b, y);
    CHECK(flip_probability(inst, SpinState(1, 0), 0, 1.0) ==
          doctest::Approx(0.2689414213699951).epsilon(1e-14));
}

TEST_CASE("huge temperature flattens the conditional to 1/2") {
    const ProblemInstance inst = gen_gaussian_instance(3, 10.0, 4, true);
    for (int j = 0; j < 3; ++j)
        CHECK(flip_probability(inst, SpinState(3, 5), j, 1e12) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("extreme objective differences saturate without overflow") {
    Eigen::MatrixXd b(1, 1);
    b << 1000.0;
    Eigen::VectorXd y(1);
    y << -1000.0;  // delta/alpha2 ~ 4e8 at alpha2 = 1e-2
    const ProblemInstance inst = load_custom_instance(b, y);
    const double p = flip_probability(inst, SpinState(1, 0), 0, 1e-2);
    CHECK(std::isfinite(p));
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(p == doctest::Approx(0.0));
}

TEST_CASE("plus and minus probabilities are complementary") {
    const ProblemInstance inst = gen_gaussian_instance(4, 10.0, 6, true);
    for (std::uint32_t code : {0u, 5u, 15u}) {
        for (int j = 0; j < 4; ++j) {
            const double p_plus = flip_probability(inst, SpinState(4, code), j, 0.7);
            // The sampler draws -1 with the complementary mass by construction;
            // the two sigmoid branches also agree to machine precision.
            const SpinState smashed(4, code | (1u << j));
            const SpinState cleared(4, code & ~(1u << j));
            CHECK(flip_probability(inst, smashed, j, 0.7) ==
                  doctest::Approx(p_plus).epsilon(1e-15));
            CHECK(flip_probability(inst, cleared, j, 0.7) ==
                  doctest::Approx(p_plus).epsilon(1e-15));
        }
    }
}

TEST_CASE("a step changes at most one coordinate") {
    const ProblemInstance inst = gen_gaussian_instance(6, 5.0, 12, true);
    Rng site(1), draw(2);
    GibbsChain chain(inst, 0.5, SpinState(6, 0));
    std::uint32_t prev = chain.state().code;
    for (int t = 0; t < 2000; ++t) {
        chain.step(site, draw);
        CHECK(std::popcount(prev ^ chain.state().code) <= 1);
        prev = chain.state().code;
    }
}

TEST_CASE("incremental residual matches a fresh recomputation after many steps") {
    const ProblemInstance inst = gen_gaussian_instance(8, 20.0, 77, true);
    Rng site(3), draw(4);
    GibbsChain chain(inst, 0.3, SpinState(8, 0));
    for (int t = 0; t < 100000; ++t) chain.step(site, draw);
    const double incremental = chain.current_objective();
    const double fresh = objective(inst, chain.state());
    CHECK(incremental == doctest::Approx(fresh).epsilon(1e-9));
}

TEST_CASE("orthogonal flip probability is independent of the other coordinates") {
    for (int n : {2, 4, 6}) {
        const ProblemInstance inst = gen_orthogonal_instance(n, 9.0, 50 + n, true);
        const double alpha2 = 0.8;
        for (int j = 0; j < n; ++j) {
            // With orthogonal columns the -1 update probability has a closed form.
            const double p_minus_expected =
                1.0 / (1.0 + std::exp(2.0 * inst.y.dot(inst.b.col(j)) / alpha2));
            for (std::uint32_t code = 0; code < (1u << n); ++code) {
                const double p_plus = flip_probability(inst, SpinState(n, code), j, alpha2);
                CHECK(1.0 - p_plus == doctest::Approx(p_minus_expected).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("one-step frequencies match the transition-matrix row") {
    const ProblemInstance inst = gen_gaussian_instance(3, 10.0, 5, true);
    const double alpha2 = 1.0;
    const TransitionMatrix tm = build_transition_matrix(inst, alpha2);
    const SpinState start(3, 2);
    const long samples = 200000;

    std::vector<long> counts(8, 0);
    Rng site(11), draw(12);
    for (long i = 0; i < samples; ++i) {
        GibbsChain chain(inst, alpha2, start);
        chain.step(site, draw);
        ++counts[chain.state().code];
    }
    for (int j = 0; j < 8; ++j) {
        const double p = tm.p(start.code, j);
        const double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-12) / samples);
        CHECK(std::abs(counts[j] / static_cast<double>(samples) - p) <= 4.0 * sigma);
    }
}

TEST_CASE("run records a zero hit time when started at the global minimum") {
    const ProblemInstance inst = gen_gaussian_instance(4, 10.0, 9, false);
    SamplerConfig config{1.0, 0, 100};
    const auto gm = global_minimum(inst);
    std::vector<std::uint32_t> codes;
    for (const auto& s : gm.states) codes.push_back(s.code);
    const ChainDiagnostics diag = run_chain(inst, config, gm.states[0], codes);
    REQUIRE(diag.hit_time_global.has_value());
    CHECK(*diag.hit_time_global == 0);
}

TEST_CASE("long-run occupation frequencies approach the stationary law") {
    const ProblemInstance inst = gen_orthogonal_instance(4, 4.0, 31, true);
    const TransitionMatrix tm = build_transition_matrix(inst, 1.0);
    SamplerConfig config{1.0, 21, 1000000};
    const ChainDiagnostics diag = run_chain(inst, config, SpinState(4, 0));
    REQUIRE(diag.visit_counts.size() == 16);
    Eigen::VectorXd empirical(16);
    const double total = static_cast<double>(config.max_steps) + 1.0;
    for (int c = 0; c < 16; ++c) empirical[c] = diag.visit_counts[c] / total;
    CHECK(tv_distance(empirical, tm.pi) < 0.02);
}

TEST_CASE("low temperature traps the chain at an adversarial local minimum") {
    const ProblemInstance inst = gen_adversarial_instance(4, 0.5);
    std::vector<std::uint32_t> global_codes{0};
    int escaped = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SamplerConfig config{0.05, seed, 10000};
        const ChainDiagnostics diag =
            run_chain(inst, config, SpinState::all_plus_one(4), global_codes);
        if (diag.hit_time_global) ++escaped;
    }
    CHECK(escaped <= 2);  // >= 90% stay trapped
}

TEST_CASE("fixed seeds reproduce trajectories exactly") {
    const ProblemInstance inst = gen_gaussian_instance(5, 10.0, 1, true);
    SamplerConfig config{0.7, 99, 5000};
    std::vector<TrajectoryRow> t1, t2;
    run_chain(inst, config, SpinState(5, 7), {}, &t1);
    run_chain(inst, config, SpinState(5, 7), {}, &t2);
    REQUIRE(t1.size() == t2.size());
    for (std::size_t i = 0; i < t1.size(); ++i) {
        CHECK(t1[i].code == t2[i].code);
        CHECK(t1[i].objective == t2[i].objective);
    }
}

TEST_CASE("coupling from identical states is immediate") {
    const ProblemInstance inst = gen_orthogonal_instance(4, 4.0, 8, false);
    SamplerConfig config{1.0, 0, 1000};
    CHECK(coupled_run(inst, config, SpinState(4, 5), SpinState(4, 5)) == 0);
}

TEST_CASE("n = 1 coupling resolves on the first step") {
    const ProblemInstance inst = gen_orthogonal_instance(1, 1.0, 3, false);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SamplerConfig config{1.0, seed, 100};
        CHECK(coupled_run(inst, config, SpinState(1, 0), SpinState(1, 1)) == 1);
    }
}

TEST_CASE("coupling times obey the coupon-collector tail") {
    const int n = 4;
    const ProblemInstance inst = gen_orthogonal_instance(n, 10.0, 44, true);
    const long trials = 4000;
    const double threshold = n * std::log(n) + 1.0 * n;  // c = 1
    long late = 0;
    Rng seeds(7);
    for (long i = 0; i < trials; ++i) {
        SamplerConfig config{1.0, seeds.next_u64(), 1000000};
        if (coupled_run(inst, config, SpinState::all_minus_one(n), SpinState::all_plus_one(n)) >
            threshold)
            ++late;
    }
    const double bound = std::exp(-1.0);
    const double sigma = std::sqrt(bound * (1.0 - bound) / trials);
    CHECK(static_cast<double>(late) / trials <= bound + 3.0 * sigma);
}

TEST_CASE("coupled runs require orthogonal instances") {
    const ProblemInstance inst = gen_gaussian_instance(3, 1.0, 0, false);
    SamplerConfig config{1.0, 0, 100};
    CHECK_THROWS_AS(coupled_run(inst, config, SpinState(3, 0), SpinState(3, 7)),
                    std::invalid_argument);
}

TEST_CASE("sampler argument validation") {
    const ProblemInstance inst = gen_gaussian_instance(3, 1.0, 0, false);
    CHECK_THROWS_AS(flip_probability(inst, SpinState(3, 0), 3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(flip_probability(inst, SpinState(3, 0), 0, 0.0), std::invalid_argument);
    SamplerConfig bad{0.0, 0, 100};
    CHECK_THROWS_AS(run_chain(inst, bad, SpinState(3, 0)), std::invalid_argument);
}

TEST_CASE("trajectory CSV has the documented schema") {
    std::vector<TrajectoryRow> rows{{0, 3, 1.5}, {1, 2, 0.25}};
    const std::string csv = trajectory_to_csv(rows);
    CHECK(csv.rfind("step,state_code,objective\n", 0) == 0);
    CHECK(csv.find("0,3,1.5") != std::string::npos);
    CHECK(csv.find("1,2,0.25") != std::string::npos);
}

TEST_CASE("diagnostics serialize to JSON") {
    const ProblemInstance inst = gen_gaussian_instance(3, 1.0, 2, false);
    SamplerConfig config{1.0, 5, 50};
    const ChainDiagnostics diag = run_chain(inst, config, SpinState(3, 0), {0});
    const std::string json = diagnostics_to_json(diag);
    CHECK(json.find("\"steps_taken\"") != std::string::npos);
    CHECK(json.find("\"hit_time_global\"") != std::string::npos);
    CHECK(json.find("\"final_state_code\"") != std::string::npos);
}
