#include "latmix/theory.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>
#include <cmath>
#include <stdexcept>

#include "latmix/oracle.hpp"
#include "latmix/rng.hpp"

namespace latmix {

std::string to_string(EstimateMethod m) {
    switch (m) {
        case EstimateMethod::closed_form: return "closed_form";
        case EstimateMethod::quadrature: return "quadrature";
        case EstimateMethod::monte_carlo: return "monte_carlo";
    }
    return "closed_form";
}

namespace {

ProbabilityEstimate from_counts(long hits, long trials) {
    ProbabilityEstimate est;
    est.method = EstimateMethod::monte_carlo;
    est.trials = trials;
    est.value = static_cast<double>(hits) / trials;
    est.std_error = std::sqrt(est.value * (1.0 - est.value) / trials);
    return est;
}

double rayleigh(Rng& rng) {
    // Norm of a 2-d standard Gaussian: sqrt(-2 ln U).
    return std::sqrt(-2.0 * std::log(1.0 - rng.uniform()));
}

}  // namespace

double ratio_tail(double t) {
    if (t < 1.0) throw std::invalid_argument("ratio_tail: t must be >= 1");
    return 2.0 / (t * t + 1.0);
}

ProbabilityEstimate ratio_tail_monte_carlo(double t, long trials, std::uint64_t seed) {
    if (t < 1.0) throw std::invalid_argument("ratio_tail_monte_carlo: t must be >= 1");
    if (trials < 1) throw std::invalid_argument("ratio_tail_monte_carlo: trials must be >= 1");
    Rng rng(seed);
    long hits = 0;
    for (long i = 0; i < trials; ++i) {
        const double r1 = rayleigh(rng);
        const double r2 = rayleigh(rng);
        if (std::max(r1 * r1, r2 * r2) / (r1 * r2) > t) ++hits;
    }
    return from_counts(hits, trials);
}

ProbabilityEstimate p_local_2x2_gaussian() {
    ProbabilityEstimate est;
    est.method = EstimateMethod::closed_form;
    est.value = 1.0 / 3.0 - 1.0 / std::sqrt(5.0) +
                2.0 * std::atan(std::sqrt(5.0 / 3.0)) / (std::sqrt(5.0) * M_PI);
    return est;
}

ProbabilityEstimate p_local_2x2_gaussian_quadrature() {
    const auto integrand = [](double t) {
        const double s = t * t + 1.0;
        return 4.0 * t / (s * s) * (1.0 - std::acos(-t / 2.0) / M_PI);
    };
    ProbabilityEstimate est;
    est.method = EstimateMethod::quadrature;
    est.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, 1.0, 2.0, 12, 1e-12);
    return est;
}

ProbabilityEstimate p_local_2x2_gaussian_monte_carlo(long trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("monte carlo: trials must be >= 1");
    Rng master(seed);
    long hits = 0;
    const SpinState candidate = SpinState::all_plus_one(2);
    for (long i = 0; i < trials; ++i) {
        // snr = n makes the effective matrix the raw Gaussian channel; with
        // v = 0 local-minimality is scale-invariant anyway.
        const ProblemInstance inst =
            gen_gaussian_instance(2, 2.0, master.next_u64(), /*with_noise=*/false);
        if (is_local_min_lemma1(inst, candidate).is_local_min) ++hits;
    }
    return from_counts(hits, trials);
}

ProbabilityEstimate p_local_2x2_unit_sphere() {
    ProbabilityEstimate est;
    est.method = EstimateMethod::closed_form;
    est.value = 1.0 / 3.0;
    return est;
}

ProbabilityEstimate p_local_2x2_unit_sphere_monte_carlo(long trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("monte carlo: trials must be >= 1");
    Rng master(seed);
    long hits = 0;
    for (long i = 0; i < trials; ++i) {
        const ProblemInstance inst = gen_unit_sphere_instance(2, master.next_u64());
        if (!local_minima_bruteforce(inst).minima.empty()) ++hits;
    }
    return from_counts(hits, trials);
}

ExpectedMinimaBound expected_local_minima_lower_bound(int n, long k_trials, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("expected_local_minima_lower_bound: n must be >= 2");
    if (k_trials < 1) throw std::invalid_argument("expected_local_minima_lower_bound: k_trials must be >= 1");

    Rng master(seed);
    ExpectedMinimaBound result;
    double variance = 0.0;
    // Running binomial coefficient C(n,k).
    double binom = static_cast<double>(n) * (n - 1) / 2.0;
    for (int k = 2; k <= n; ++k) {
        if (k > 2) binom *= static_cast<double>(n - k + 1) / k;
        Rng rng = master.child(static_cast<std::uint64_t>(k));
        long hits = 0;
        Eigen::VectorXd sum(n), col(n);
        for (long trial = 0; trial < k_trials; ++trial) {
            sum.setZero();
            for (int j = 0; j < k; ++j) {
                double norm = 0.0;
                do {
                    for (int i = 0; i < n; ++i) col[i] = rng.normal();
                    norm = col.norm();
                } while (norm == 0.0);
                sum += col / norm;
            }
            if (sum.norm() < 0.5) ++hits;
        }
        TermEstimate term;
        term.k = k;
        term.trials = k_trials;
        term.p_hat = static_cast<double>(hits) / k_trials;
        term.std_error = std::sqrt(term.p_hat * (1.0 - term.p_hat) / k_trials);
        result.terms.push_back(term);
        result.bound += binom * term.p_hat;
        variance += binom * binom * term.std_error * term.std_error;
    }
    result.std_error = std::sqrt(variance);
    return result;
}

double min_alpha2_for_mixing(const ProblemInstance& inst, double c_target) {
    if (!(c_target > 0.0)) throw std::invalid_argument("min_alpha2_for_mixing: c_target must be > 0");
    const LocalMinimaReport report = local_minima_bruteforce(inst);
    double worst_barrier = 0.0;
    for (const auto& m : report.minima) worst_barrier = std::max(worst_barrier, m.barrier);
    return worst_barrier / (2.0 * c_target);
}

std::string estimate_to_json(const ProbabilityEstimate& est) {
    nlohmann::json j;
    j["value"] = est.value;
    j["stderr"] = est.std_error;
    j["trials"] = est.trials;
    j["method"] = to_string(est.method);
    return j.dump(2);
}

std::string expected_minima_bound_to_json(const ExpectedMinimaBound& bound) {
    nlohmann::json j;
    j["bound"] = bound.bound;
    j["stderr"] = bound.std_error;
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : bound.terms) {
        terms.push_back(
            {{"k", t.k}, {"p_hat", t.p_hat}, {"stderr", t.std_error}, {"trials", t.trials}});
    }
    j["terms"] = terms;
    return j.dump(2);
}

}  // namespace latmix
