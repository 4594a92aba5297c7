#include "latmix/experiments.hpp"

#include <nlohmann/json.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "latmix/errors.hpp"
#include "latmix/mixing.hpp"
#include "latmix/oracle.hpp"
#include "latmix/rng.hpp"
#include "latmix/spectral.hpp"
#include "latmix/version.hpp"

namespace latmix {

void parallel_for(long count, const std::function<void(long)>& body) {
    if (count <= 0) return;
    const unsigned hw = std::thread::hardware_concurrency();
    const long workers = std::min<long>(count, std::max(1u, std::min(hw, 8u)));
    if (workers <= 1) {
        for (long i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (long w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (long i = w; i < count; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

long default_fig_trials(int n) { return n == 2 ? 100000 : 100; }

namespace {

void check_fig_args(const std::vector<int>& n_list, long trials) {
    if (trials < 1) throw std::invalid_argument("figure experiment: trials must be >= 1");
    if (n_list.empty()) throw std::invalid_argument("figure experiment: empty n list");
    for (int n : n_list) {
        if (n < 1) throw std::invalid_argument("figure experiment: n must be >= 1");
        if (n > kFigMaxN)
            throw ResourceLimitError("figure experiment limited to n <= " +
                                     std::to_string(kFigMaxN));
    }
}

/// Local-minima counts over `trials` noiseless Gaussian channels at one n.
/// With v = 0 the count is invariant to the SNR scaling, so snr = n keeps
/// the effective matrix equal to the raw channel.
std::vector<int> minima_counts(int n, long trials, std::uint64_t seed) {
    std::vector<int> counts(static_cast<std::size_t>(trials), 0);
    Rng root(seed);
    const std::uint64_t base = root.next_u64();
    parallel_for(trials, [&](long trial) {
        Rng trial_rng = Rng(base).child(static_cast<std::uint64_t>(trial));
        const ProblemInstance inst =
            gen_gaussian_instance(n, n, trial_rng.next_u64(), /*with_noise=*/false);
        counts[static_cast<std::size_t>(trial)] =
            static_cast<int>(local_minima_bruteforce(inst).minima.size());
    });
    return counts;
}

FigRow summarize_mean(int n, const std::vector<int>& counts) {
    FigRow row;
    row.n = n;
    row.trials = static_cast<long>(counts.size());
    double sum = 0.0;
    for (int c : counts) sum += c;
    row.value = sum / row.trials;
    double ss = 0.0;
    for (int c : counts) ss += (c - row.value) * (c - row.value);
    const double sample_var = row.trials > 1 ? ss / (row.trials - 1) : 0.0;
    row.std_error = std::sqrt(sample_var / row.trials);
    return row;
}

FigRow summarize_exists(int n, const std::vector<int>& counts) {
    FigRow row;
    row.n = n;
    row.trials = static_cast<long>(counts.size());
    long hits = 0;
    for (int c : counts)
        if (c > 0) ++hits;
    row.value = static_cast<double>(hits) / row.trials;
    row.std_error = std::sqrt(row.value * (1.0 - row.value) / row.trials);
    return row;
}

}  // namespace

std::vector<FigRow> run_fig1(const std::vector<int>& n_list, long trials, std::uint64_t seed) {
    check_fig_args(n_list, trials);
    std::vector<FigRow> rows;
    for (int n : n_list)
        rows.push_back(summarize_mean(n, minima_counts(n, trials, seed + static_cast<std::uint64_t>(n))));
    return rows;
}

std::vector<FigRow> run_fig2(const std::vector<int>& n_list, long trials, std::uint64_t seed) {
    check_fig_args(n_list, trials);
    std::vector<FigRow> rows;
    for (int n : n_list)
        rows.push_back(summarize_exists(n, minima_counts(n, trials, seed + static_cast<std::uint64_t>(n))));
    return rows;
}

std::vector<GapTableRow> run_gap_table(int n, double snr, double alpha2, long trials,
                                       std::uint64_t seed, bool with_noise) {
    if (n > kGapTableMaxN)
        throw ResourceLimitError("gap table limited to n <= " + std::to_string(kGapTableMaxN));
    if (trials < 1) throw std::invalid_argument("gap table: trials must be >= 1");

    std::vector<GapTableRow> rows(static_cast<std::size_t>(trials));
    Rng root(seed);
    const std::uint64_t base = root.next_u64();
    parallel_for(trials, [&](long trial) {
        Rng trial_rng = Rng(base).child(static_cast<std::uint64_t>(trial));
        const ProblemInstance inst = gen_gaussian_instance(n, snr, trial_rng.next_u64(), with_noise);
        GapTableRow row;
        row.trial = trial;
        row.n_local_minima = static_cast<int>(local_minima_bruteforce(inst).minima.size());
        row.spectral_gap = spectral_gap(build_transition_matrix(inst, alpha2)).gap;
        rows[static_cast<std::size_t>(trial)] = row;
    });
    return rows;
}

namespace {

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double nx = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= nx;
    my /= nx;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

}  // namespace

TempSweepResult run_temp_sweep(const ProblemInstance& inst, const std::vector<double>& alpha2_list,
                               double eps) {
    if (inst.n > kGapTableMaxN)
        throw ResourceLimitError("temp sweep limited to n <= " + std::to_string(kGapTableMaxN));
    if (alpha2_list.empty()) throw std::invalid_argument("temp sweep: empty alpha2 list");

    const LocalMinimaReport report = local_minima_bruteforce(inst);
    TempSweepResult result;
    result.eps = eps;
    for (const auto& m : report.minima) result.max_barrier = std::max(result.max_barrier, m.barrier);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double alpha2 : alpha2_list) {
        TempSweepRow row;
        row.alpha2 = alpha2;
        const TransitionMatrix tm = build_transition_matrix(inst, alpha2);
        row.gap = spectral_gap(tm).gap;
        if (report.minima.empty()) {
            row.gap_upper = nan;
            row.gap_upper_closed_form = nan;
            row.tmix_lower = nan;
        } else {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& m : report.minima)
                best = std::min(best, singleton_bottleneck(inst, alpha2, m.state).gap_upper);
            row.gap_upper = best;
            row.gap_upper_closed_form =
                2.0 / (1.0 + std::exp(result.max_barrier / (2.0 * alpha2)));
            row.tmix_lower = tmix_lower_bound_from_gap(row.gap_upper, eps);
        }
        result.rows.push_back(row);
    }

    if (report.minima.empty() || alpha2_list.size() < 2) {
        result.slope_closed_form = nan;
        result.slope_true_gap = nan;
    } else {
        std::vector<double> x, y_closed, y_gap;
        for (const auto& row : result.rows) {
            x.push_back(1.0 / row.alpha2);
            y_closed.push_back(std::log(row.gap_upper_closed_form));
            y_gap.push_back(std::log(row.gap));
        }
        result.slope_closed_form = fitted_slope(x, y_closed);
        result.slope_true_gap = fitted_slope(x, y_gap);
    }
    return result;
}

namespace {

std::string csv_number(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

std::string fig_rows_to_csv(const std::vector<FigRow>& rows, const std::string& value_column) {
    std::ostringstream out;
    out << "n," << value_column << ",stderr,trials\n";
    for (const auto& row : rows)
        out << row.n << "," << csv_number(row.value) << "," << csv_number(row.std_error) << ","
            << row.trials << "\n";
    return out.str();
}

std::string gap_table_to_csv(const std::vector<GapTableRow>& rows) {
    std::ostringstream out;
    out << "trial,n_local_minima,spectral_gap\n";
    for (const auto& row : rows)
        out << row.trial << "," << row.n_local_minima << "," << csv_number(row.spectral_gap) << "\n";
    return out.str();
}

std::string temp_sweep_to_csv(const TempSweepResult& result) {
    std::ostringstream out;
    out << "alpha2,gap,gap_upper_bound,gap_upper_closed_form,tmix_lower\n";
    for (const auto& row : result.rows)
        out << csv_number(row.alpha2) << "," << csv_number(row.gap) << ","
            << csv_number(row.gap_upper) << "," << csv_number(row.gap_upper_closed_form) << ","
            << csv_number(row.tmix_lower) << "\n";
    return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_experiment_manifest(const std::filesystem::path& out_dir, const std::string& name,
                               const std::string& params_json, std::uint64_t seed,
                               const std::vector<std::string>& outputs) {
    nlohmann::json j;
    j["experiment"] = name;
    j["params"] = nlohmann::json::parse(params_json);
    j["seed"] = seed;
    j["artifact"] = {{"name", "latmix"}, {"version", kVersion}};
    j["outputs"] = outputs;
    write_text_file(out_dir / "manifest.json", j.dump(2) + "\n");
}

}  // namespace latmix
