#include "latmix/mixing.hpp"

#include <nlohmann/json.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "latmix/errors.hpp"

namespace latmix {

double tv_distance(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu) {
    if (mu.size() != nu.size()) throw std::invalid_argument("tv_distance: length mismatch");
    if (std::abs(mu.sum() - 1.0) > 1e-9 || std::abs(nu.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("tv_distance: inputs must sum to 1 within 1e-9");
    return 0.5 * (mu - nu).cwiseAbs().sum();
}

TVCurve worst_case_tv_curve(const TransitionMatrix& tm, long t_max, double stop_at_d) {
    if (tm.n > kTvCurveMaxN)
        throw ResourceLimitError("worst_case_tv_curve limited to n <= " +
                                 std::to_string(kTvCurveMaxN));
    if (t_max < 0) throw std::invalid_argument("worst_case_tv_curve: t_max must be >= 0");

    const Eigen::Index size = tm.p.rows();
    TVCurve curve;
    curve.alpha2 = tm.alpha2;

    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(size, size);
    Eigen::MatrixXd next(size, size);
    const Eigen::RowVectorXd pi_row = tm.pi.transpose();
    for (long t = 0; t <= t_max; ++t) {
        if (t > 0) {
            next.noalias() = power * tm.p;
            power.swap(next);
        }
        double d = 0.0;
        for (Eigen::Index row = 0; row < size; ++row)
            d = std::max(d, (power.row(row) - pi_row).cwiseAbs().sum());
        d *= 0.5;
        curve.d.push_back(d);
        if (stop_at_d > 0.0 && d <= stop_at_d) break;
    }
    return curve;
}

TmixResult empirical_tmix(const TVCurve& curve, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("empirical_tmix: eps must be > 0");
    for (std::size_t t = 0; t < curve.d.size(); ++t) {
        if (curve.d[t] <= eps) return {static_cast<long>(t), true};
    }
    return {static_cast<long>(curve.d.size()) - 1, false};
}

double coupon_collector_bound(int n, double eps) {
    if (n < 1) throw std::invalid_argument("coupon_collector_bound: n must be >= 1");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("coupon_collector_bound: eps must be in (0,1)");
    return n * std::log(static_cast<double>(n)) + n * std::log(1.0 / eps);
}

double tmix_lower_bound_from_gap(double gap_upper, double eps) {
    if (!(gap_upper > 0.0 && gap_upper <= 2.0))
        throw std::invalid_argument("tmix_lower_bound_from_gap: gap_upper must be in (0, 2]");
    if (!(eps > 0.0 && eps < 0.5))
        throw std::invalid_argument("tmix_lower_bound_from_gap: eps must be in (0, 1/2)");
    return (1.0 / gap_upper - 1.0) * std::log(1.0 / (2.0 * eps));
}

long default_t_max(int n, std::optional<double> gap) {
    if (!gap || !(*gap > 0.0)) return 10000;
    const double t = 10.0 * n * std::log(std::max(2.0, static_cast<double>(n))) * (1.0 + 1.0 / *gap);
    return static_cast<long>(std::ceil(t));
}

std::string tv_curve_to_csv(const TVCurve& curve) {
    std::ostringstream out;
    out << "t,d_t\n";
    out.precision(17);
    for (std::size_t t = 0; t < curve.d.size(); ++t) out << t << "," << curve.d[t] << "\n";
    return out.str();
}

std::string tmix_summary_to_json(const TVCurve& curve, const std::vector<double>& eps_values) {
    nlohmann::json j;
    j["alpha2"] = curve.alpha2;
    j["t_max"] = curve.d.empty() ? 0 : curve.d.size() - 1;
    nlohmann::json entries = nlohmann::json::array();
    for (double eps : eps_values) {
        const TmixResult r = empirical_tmix(curve, eps);
        entries.push_back({{"eps", eps}, {"tmix", r.t}, {"converged", r.converged}});
    }
    j["tmix"] = entries;
    return j.dump(2);
}

}  // namespace latmix
