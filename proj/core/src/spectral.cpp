#include "latmix/spectral.hpp"

#include <nlohmann/json.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "latmix/errors.hpp"

namespace latmix {

namespace {

double stable_sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

constexpr double kWeightFloor = 1e-300;

}  // namespace

TransitionMatrix build_transition_matrix(const ProblemInstance& inst, double alpha2) {
    if (inst.n > kTransitionMatrixMaxN)
        throw ResourceLimitError("build_transition_matrix limited to n <= " +
                                 std::to_string(kTransitionMatrixMaxN));
    if (!(alpha2 > 0.0)) throw std::invalid_argument("build_transition_matrix: alpha2 must be > 0");

    TransitionMatrix tm;
    tm.n = inst.n;
    tm.alpha2 = alpha2;
    tm.objectives = exhaustive_objectives(inst);
    const auto& f = tm.objectives;
    const Eigen::Index size = Eigen::Index{1} << inst.n;
    const double inv_n = 1.0 / inst.n;
    const double inv_temp = 1.0 / (2.0 * alpha2);

    tm.p = Eigen::MatrixXd::Zero(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
        double off_diagonal = 0.0;
        for (int k = 0; k < inst.n; ++k) {
            const Eigen::Index j = i ^ (Eigen::Index{1} << k);
            const double prob = inv_n * stable_sigmoid((f[i] - f[j]) * inv_temp);
            tm.p(i, j) = prob;
            off_diagonal += prob;
        }
        tm.p(i, i) = 1.0 - off_diagonal;
    }

    const double fmin = *std::min_element(f.begin(), f.end());
    Eigen::VectorXd w(size);
    for (Eigen::Index i = 0; i < size; ++i) {
        double wi = std::exp(-(f[i] - fmin) * inv_temp);
        if (wi < kWeightFloor) {
            wi = kWeightFloor;
            ++tm.underflow_floored;
        }
        w[i] = wi;
    }
    tm.pi = w / w.sum();
    return tm;
}

double max_row_sum_error(const TransitionMatrix& tm) {
    return (tm.p.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

double detailed_balance_residual(const TransitionMatrix& tm) {
    double worst = 0.0;
    const Eigen::Index size = tm.p.rows();
    for (Eigen::Index i = 0; i < size; ++i) {
        for (int k = 0; k < tm.n; ++k) {
            const Eigen::Index j = i ^ (Eigen::Index{1} << k);
            worst = std::max(worst, std::abs(tm.pi[i] * tm.p(i, j) - tm.pi[j] * tm.p(j, i)));
        }
    }
    return worst;
}

SpectrumReport spectral_gap(const TransitionMatrix& tm) {
    if (tm.underflow_floored > 0)
        throw NumericalDegeneracyError(
            "spectral_gap: " + std::to_string(tm.underflow_floored) +
            " stationary weights underflowed; raise alpha2 or lower SNR");

    const Eigen::Index size = tm.p.rows();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
        a(i, i) = tm.p(i, i);
        for (int k = 0; k < tm.n; ++k) {
            const Eigen::Index j = i ^ (Eigen::Index{1} << k);
            a(i, j) = std::sqrt(tm.p(i, j) * tm.p(j, i));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("spectral_gap: eigendecomposition failed");
    const auto& ev = solver.eigenvalues();  // ascending

    SpectrumReport report;
    report.n = tm.n;
    report.alpha2 = tm.alpha2;
    report.lambda2 = size >= 2 ? ev[size - 2] : std::numeric_limits<double>::quiet_NaN();
    report.gap = 1.0 - report.lambda2;
    report.relaxation_time =
        report.gap > 0.0 ? 1.0 / report.gap : std::numeric_limits<double>::infinity();
    report.lambda_min = ev[0];
    return report;
}

double SingletonBottleneck::tmix_lower(double eps) const {
    if (!(eps > 0.0 && eps < 0.5))
        throw std::invalid_argument("tmix_lower: eps must be in (0, 1/2)");
    return (1.0 / gap_upper - 1.0) * std::log(1.0 / (2.0 * eps));
}

SingletonBottleneck singleton_bottleneck(const ProblemInstance& inst, double alpha2,
                                         const SpinState& s) {
    if (!(alpha2 > 0.0)) throw std::invalid_argument("singleton_bottleneck: alpha2 must be > 0");
    // barrier() also verifies s is a strict, non-global local minimum.
    SingletonBottleneck result;
    result.state = s;
    result.alpha2 = alpha2;
    result.barrier = barrier(inst, s);

    const double own = objective(inst, s);
    const double inv_temp = 1.0 / (2.0 * alpha2);
    double phi = 0.0;
    for (int k = 0; k < inst.n; ++k) {
        const double neighbor = objective(inst, s.flipped(k));
        phi += stable_sigmoid((own - neighbor) * inv_temp);
    }
    result.phi = phi / inst.n;
    result.gap_upper = 2.0 * result.phi;
    result.gap_upper_closed_form = 2.0 / (1.0 + std::exp(result.barrier * inv_temp));
    return result;
}

double exact_bottleneck_star(const TransitionMatrix& tm) {
    if (tm.n > kExactBottleneckMaxN)
        throw ResourceLimitError("exact_bottleneck_star limited to n <= " +
                                 std::to_string(kExactBottleneckMaxN));
    const int size = 1 << tm.n;
    const std::uint64_t subsets = std::uint64_t{1} << size;

    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 1; mask + 1 < subsets; ++mask) {
        double pi_s = 0.0;
        for (int i = 0; i < size; ++i) {
            if ((mask >> i) & 1u) pi_s += tm.pi[i];
        }
        if (pi_s > 0.5) continue;
        double q = 0.0;
        for (int i = 0; i < size; ++i) {
            if (!((mask >> i) & 1u)) continue;
            for (int k = 0; k < tm.n; ++k) {
                const int j = i ^ (1 << k);
                if (!((mask >> j) & 1u)) q += tm.pi[i] * tm.p(i, j);
            }
        }
        best = std::min(best, q / pi_s);
    }
    return best;
}

std::string spectrum_to_json(const SpectrumReport& report) {
    nlohmann::json j;
    j["n"] = report.n;
    j["alpha2"] = report.alpha2;
    j["lambda2"] = report.lambda2;
    j["gap"] = report.gap;
    j["relaxation_time"] = report.relaxation_time;
    j["lambda_min"] = report.lambda_min;
    if (report.bottleneck_star)
        j["bottleneck_star"] = *report.bottleneck_star;
    else
        j["bottleneck_star"] = nullptr;
    nlohmann::json singles = nlohmann::json::array();
    for (const auto& sb : report.singleton_bounds) {
        singles.push_back({{"code", sb.state.code},
                           {"phi", sb.phi},
                           {"gap_upper", sb.gap_upper},
                           {"gap_upper_closed_form", sb.gap_upper_closed_form},
                           {"barrier", sb.barrier}});
    }
    j["singleton_bounds"] = singles;
    return j.dump(2);
}

std::string transition_matrix_to_csv(const TransitionMatrix& tm) {
    if (tm.n > 8) throw ResourceLimitError("transition_matrix_to_csv limited to n <= 8");
    std::ostringstream out;
    out.precision(17);
    const Eigen::Index size = tm.p.rows();
    for (Eigen::Index i = 0; i < size; ++i) {
        for (Eigen::Index j = 0; j < size; ++j) {
            if (j) out << ",";
            out << tm.p(i, j);
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace latmix
