#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latmix/instance.hpp"

namespace latmix {

enum class EstimateMethod { closed_form, quadrature, monte_carlo };

std::string to_string(EstimateMethod m);

struct ProbabilityEstimate {
    double value = 0.0;
    double std_error = 0.0;  // 0 unless method == monte_carlo
    long trials = 0;
    EstimateMethod method = EstimateMethod::closed_form;
};

/// P(max{r1^2, r2^2} / (r1 r2) > t) = 2/(t^2+1) for two i.i.d. Rayleigh
/// norms; defined for t >= 1.
double ratio_tail(double t);

/// The same tail estimated by sampling Rayleigh pairs.
ProbabilityEstimate ratio_tail_monte_carlo(double t, long trials, std::uint64_t seed);

/// Probability that a noiseless 2x2 i.i.d. Gaussian instance has a local
/// minimum: 1/3 - 1/sqrt(5) + 2 arctan(sqrt(5/3)) / (sqrt(5) pi) ~ 0.145696.
ProbabilityEstimate p_local_2x2_gaussian();

/// Same value by adaptive quadrature of
/// int_1^2 4t/(t^2+1)^2 (1 - arccos(-t/2)/pi) dt, abs tol 1e-12.
ProbabilityEstimate p_local_2x2_gaussian_quadrature();

/// End-to-end: draw 2x2 Gaussian channels, v = 0, and test (+1,+1) with the
/// algebraic local-minimum conditions.
ProbabilityEstimate p_local_2x2_gaussian_monte_carlo(long trials, std::uint64_t seed);

/// Probability that a noiseless 2x2 unit-sphere-column instance has a local
/// minimum: exactly 1/3.
ProbabilityEstimate p_local_2x2_unit_sphere();

/// End-to-end with generated unit-sphere instances and exhaustive search.
ProbabilityEstimate p_local_2x2_unit_sphere_monte_carlo(long trials, std::uint64_t seed);

/// Lower bound on the expected number of local minima of an n x n
/// unit-sphere-column instance: sum_{k=2}^n C(n,k) P_k, with P_k the
/// probability that k uniform unit vectors sum to norm < 1/2, estimated by
/// Monte Carlo with k_trials samples per k.
struct TermEstimate {
    int k = 0;
    double p_hat = 0.0;
    double std_error = 0.0;
    long trials = 0;
};

struct ExpectedMinimaBound {
    double bound = 0.0;
    double std_error = 0.0;  // from the per-k binomial errors
    std::vector<TermEstimate> terms;
};

ExpectedMinimaBound expected_local_minima_lower_bound(int n, long k_trials, std::uint64_t seed);

/// Smallest alpha2 satisfying the barrier/(2 alpha2) <= c_target rule for the
/// worst local minimum; 0 when the instance has none (every temperature
/// mixes). Requires the exhaustive report, so n <= 20.
double min_alpha2_for_mixing(const ProblemInstance& inst, double c_target);

std::string estimate_to_json(const ProbabilityEstimate& est);
std::string expected_minima_bound_to_json(const ExpectedMinimaBound& bound);

}  // namespace latmix
