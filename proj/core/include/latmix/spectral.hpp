#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "latmix/instance.hpp"
#include "latmix/oracle.hpp"

namespace latmix {

/// Dense 2^n x 2^n single-site Gibbs transition matrix and its stationary
/// distribution. Rows sum to 1, detailed balance holds, and p(i,j) = 0 unless
/// i = j or the codes differ in exactly one bit.
struct TransitionMatrix {
    int n = 0;
    double alpha2 = 0.0;
    Eigen::MatrixXd p;
    Eigen::VectorXd pi;
    std::vector<double> objectives;  // the 2^n objective table the chain is built from
    int underflow_floored = 0;       // stationary weights clamped at the 1e-300 floor
};

inline constexpr int kTransitionMatrixMaxN = 12;
inline constexpr int kExactBottleneckMaxN = 4;

/// Build the chain at temperature alpha2. Stationary weights are computed
/// from shifted log-weights exp(-(f - f_min)/(2 alpha2)); weights below
/// 1e-300 are floored and counted in underflow_floored.
TransitionMatrix build_transition_matrix(const ProblemInstance& inst, double alpha2);

/// max_i |sum_j p(i,j) - 1|
double max_row_sum_error(const TransitionMatrix& tm);

/// max_{i,j} |pi_i p(i,j) - pi_j p(j,i)|
double detailed_balance_residual(const TransitionMatrix& tm);

struct SingletonBottleneck {
    SpinState state;
    double alpha2 = 0.0;
    double phi = 0.0;               // Q(S,S^c)/pi(S) for S = {state}
    double gap_upper = 0.0;         // 2 phi  (gamma <= 2 Phi_*)
    double gap_upper_closed_form = 0.0;  // 2 / (1 + e^{barrier/(2 alpha2)})
    double barrier = 0.0;

    /// (1/gap_upper - 1) ln(1/(2 eps)); valid for 0 < eps < 1/2.
    double tmix_lower(double eps) const;
};

struct SpectrumReport {
    int n = 0;
    double alpha2 = 0.0;
    double lambda2 = 0.0;
    double gap = 0.0;              // 1 - lambda2
    double relaxation_time = 0.0;  // 1 / gap
    double lambda_min = 0.0;       // reported so near-periodicity is visible
    std::optional<double> bottleneck_star;
    std::vector<SingletonBottleneck> singleton_bounds;
};

/// Second-largest eigenvalue of the chain via the reversible symmetrization
/// a(i,j) = sqrt(p(i,j) p(j,i)), which equals D^{1/2} P D^{-1/2} and is
/// symmetric by construction. Throws NumericalDegeneracyError when stationary
/// weights were floored (the distribution is no longer trustworthy).
SpectrumReport spectral_gap(const TransitionMatrix& tm);

/// Singleton bound at a verified local minimum: phi is the
/// one-step escape probability mass (1/n) sum_k p_k with p_k the flip
/// probability toward neighbor k.
SingletonBottleneck singleton_bottleneck(const ProblemInstance& inst, double alpha2,
                                         const SpinState& s);

/// Exact bottleneck ratio Phi_* = min_{pi(S) <= 1/2} Q(S,S^c)/pi(S) by
/// enumeration of all 2^{2^n} subsets; guarded at n <= 4.
double exact_bottleneck_star(const TransitionMatrix& tm);

std::string spectrum_to_json(const SpectrumReport& report);

/// Row-major CSV dump of the transition matrix; guarded at n <= 8.
std::string transition_matrix_to_csv(const TransitionMatrix& tm);

}  // namespace latmix
