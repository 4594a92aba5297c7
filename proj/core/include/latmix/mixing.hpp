#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "latmix/spectral.hpp"

namespace latmix {

inline constexpr int kTvCurveMaxN = 8;

/// Worst-case total-variation distance to stationarity, per step.
struct TVCurve {
    double alpha2 = 0.0;
    std::vector<double> d;  // d[t] for t = 0..t_max; non-increasing
};

struct TmixResult {
    long t = 0;
    bool converged = false;  // false: d never reached eps; t is a lower bound
};

/// (1/2) sum_i |mu_i - nu_i|. Inputs must have equal length and sum to
/// 1 +- 1e-9.
double tv_distance(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu);

/// d(t) = max over start states of TV(P^t(x,.), pi) for t = 0..t_max,
/// by iterated dense matrix products. Guarded at n <= 8. When stop_at_d > 0
/// the curve ends early once d(t) <= stop_at_d; it stays valid for
/// tmix queries at eps >= stop_at_d.
TVCurve worst_case_tv_curve(const TransitionMatrix& tm, long t_max, double stop_at_d = -1.0);

/// Minimal t with d(t) <= eps, or {t_max, false} when the curve never gets
/// there.
TmixResult empirical_tmix(const TVCurve& curve, double eps);

/// n ln n + n ln(1/eps): the orthogonal-column coupling bound on tmix(eps).
double coupon_collector_bound(int n, double eps);

/// (1/gap_upper - 1) ln(1/(2 eps)) for 0 < gap_upper <= 2, 0 < eps < 1/2.
double tmix_lower_bound_from_gap(double gap_upper, double eps);

/// Default curve length: 10 n ln n (1 + 1/gap) when the gap is known,
/// else 10^4.
long default_t_max(int n, std::optional<double> gap = std::nullopt);

std::string tv_curve_to_csv(const TVCurve& curve);
std::string tmix_summary_to_json(const TVCurve& curve, const std::vector<double>& eps_values);

}  // namespace latmix
