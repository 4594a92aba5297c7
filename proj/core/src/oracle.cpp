#include "latmix/oracle.hpp"

#include <nlohmann/json.hpp>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "latmix/errors.hpp"

namespace latmix {

namespace {

void check_exhaustive_guard(int n) {
    if (n > kExhaustiveMaxN)
        throw ResourceLimitError("exhaustive scan limited to n <= " +
                                 std::to_string(kExhaustiveMaxN) + ", got n = " + std::to_string(n));
}

}  // namespace

std::vector<double> exhaustive_objectives(const ProblemInstance& inst) {
    check_exhaustive_guard(inst.n);
    const int n = inst.n;
    const std::size_t count = std::size_t{1} << n;
    std::vector<double> table(count);

    // Walk states in Gray-code order so consecutive states differ in one
    // coordinate and the residual updates in O(n). The residual is rebuilt
    // from scratch every 512 flips to stop rounding drift from accumulating
    // across a 2^20-state sweep.
    Eigen::VectorXd spins = Eigen::VectorXd::Constant(n, -1.0);
    Eigen::VectorXd r = inst.y - inst.b * spins;
    table[0] = r.squaredNorm();
    std::uint32_t gray = 0;
    for (std::size_t i = 1; i < count; ++i) {
        const int k = std::countr_zero(i);
        gray ^= (std::uint32_t{1} << k);
        spins[k] = -spins[k];
        if ((i & 511u) == 0u) {
            r = inst.y - inst.b * spins;
        } else {
            r -= 2.0 * spins[k] * inst.b.col(k);
        }
        table[gray] = r.squaredNorm();
    }
    return table;
}

GlobalMinimum global_minimum(const ProblemInstance& inst) {
    const std::vector<double> table = exhaustive_objectives(inst);
    GlobalMinimum result;
    result.value = *std::min_element(table.begin(), table.end());
    for (std::size_t c = 0; c < table.size(); ++c) {
        if (table[c] <= result.value + kTieTolerance)
            result.states.emplace_back(inst.n, static_cast<std::uint32_t>(c));
    }
    return result;
}

LocalMinimaReport local_minima_from_table(const ProblemInstance& inst,
                                          const std::vector<double>& table) {
    const int n = inst.n;
    if (table.size() != (std::size_t{1} << n))
        throw std::invalid_argument("local_minima_from_table: table size != 2^n");

    LocalMinimaReport report;
    report.instance_id = inst.label;
    const double fmin = *std::min_element(table.begin(), table.end());
    report.global_objective = fmin;

    for (std::size_t c = 0; c < table.size(); ++c) {
        const double own = table[c];
        if (own <= fmin + kTieTolerance) {
            report.global_minima.emplace_back(n, static_cast<std::uint32_t>(c));
            continue;
        }
        double min_rise = std::numeric_limits<double>::infinity();
        bool strict = true;   // all neighbors above the tie band
        bool weak = true;     // no neighbor below the tie band
        for (int k = 0; k < n; ++k) {
            const double diff = table[c ^ (std::size_t{1} << k)] - own;
            min_rise = std::min(min_rise, diff);
            if (diff <= kTieTolerance) strict = false;
            if (diff < -kTieTolerance) weak = false;
        }
        if (strict) {
            report.minima.push_back(
                {SpinState(n, static_cast<std::uint32_t>(c)), own, min_rise});
        } else if (weak) {
            report.degenerate.emplace_back(n, static_cast<std::uint32_t>(c));
        }
    }
    return report;
}

LocalMinimaReport local_minima_bruteforce(const ProblemInstance& inst) {
    return local_minima_from_table(inst, exhaustive_objectives(inst));
}

namespace {

/// Margins of the per-coordinate inequalities; each equals
/// (objective of neighbor flipped at i - objective of s) / 8.
std::vector<double> lemma1_margins(const ProblemInstance& inst, const SpinState& s) {
    const int n = inst.n;
    Eigen::VectorXd target = -0.5 * inst.v;  // sum_{j in K} h_j - v/2
    for (int j = 0; j < n; ++j) {
        if (s.bit(j)) target += inst.b.col(j);
    }
    std::vector<double> margins(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double half_norm2 = 0.5 * inst.b.col(i).squaredNorm();
        const double proj = inst.b.col(i).dot(target);
        margins[static_cast<std::size_t>(i)] = s.bit(i) ? (half_norm2 - proj) : (proj + half_norm2);
    }
    return margins;
}

void check_lemma_frame(const ProblemInstance& inst, const SpinState& s) {
    if (s.n != inst.n) throw std::invalid_argument("local-minimum condition test: state dimension mismatch");
    if (inst.x_true.code != 0)
        throw std::invalid_argument("local-minimum condition test requires x_true = all -1");
}

}  // namespace

Lemma1Result is_local_min_lemma1(const ProblemInstance& inst, const SpinState& s,
                                 double global_value) {
    check_lemma_frame(inst, s);
    Lemma1Result result;
    result.margins = lemma1_margins(inst, s);
    // The margins are (neighbor - own)/8; apply the tie tolerance on the
    // objective scale so this matches the brute-force classification.
    result.conditions_hold = std::all_of(result.margins.begin(), result.margins.end(),
                                         [](double m) { return 8.0 * m > kTieTolerance; });
    result.is_global = objective(inst, s) <= global_value + kTieTolerance;
    result.is_local_min = result.conditions_hold && !result.is_global;
    return result;
}

Lemma1Result is_local_min_lemma1(const ProblemInstance& inst, const SpinState& s) {
    check_lemma_frame(inst, s);
    return is_local_min_lemma1(inst, s, global_minimum(inst).value);
}

bool sufficient_condition_lemma3(const ProblemInstance& inst, const SpinState& s) {
    check_lemma_frame(inst, s);
    Eigen::VectorXd target = -0.5 * inst.v;
    for (int j = 0; j < inst.n; ++j) {
        if (s.bit(j)) target += inst.b.col(j);
    }
    double min_col_norm = std::numeric_limits<double>::infinity();
    for (int i = 0; i < inst.n; ++i)
        min_col_norm = std::min(min_col_norm, inst.b.col(i).norm());
    return target.norm() < 0.5 * min_col_norm;
}

double barrier(const ProblemInstance& inst, const SpinState& s) {
    if (s.n != inst.n) throw std::invalid_argument("barrier: state dimension mismatch");
    const double own = objective(inst, s);
    double min_rise = std::numeric_limits<double>::infinity();
    for (int k = 0; k < inst.n; ++k) {
        const double diff = objective(inst, s.flipped(k)) - own;
        if (diff <= kTieTolerance)
            throw std::invalid_argument("barrier: state is not a strict local minimum");
        min_rise = std::min(min_rise, diff);
    }
    if (own <= global_minimum(inst).value + kTieTolerance)
        throw std::invalid_argument("barrier: state is a global minimum");
    return min_rise;
}

std::string report_to_json(const LocalMinimaReport& report) {
    nlohmann::json j;
    j["instance_id"] = report.instance_id;
    j["count"] = report.minima.size();
    nlohmann::json minima = nlohmann::json::array();
    for (const auto& m : report.minima) {
        minima.push_back({{"code", m.state.code}, {"objective", m.objective}, {"barrier", m.barrier}});
    }
    j["minima"] = minima;
    std::vector<std::uint32_t> global_codes;
    for (const auto& g : report.global_minima) global_codes.push_back(g.code);
    j["global"] = global_codes;
    j["global_objective"] = report.global_objective;
    std::vector<std::uint32_t> degenerate_codes;
    for (const auto& d : report.degenerate) degenerate_codes.push_back(d.code);
    j["degenerate"] = degenerate_codes;
    return j.dump(2);
}

}  // namespace latmix
