#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "latmix/instance.hpp"

namespace latmix {

inline constexpr int kFigMaxN = 14;
inline constexpr int kGapTableMaxN = 10;

/// Trials used by the figure experiments when the caller does not override:
/// 100 matches the reference setup, except n = 2 where 10^5 makes the
/// closed-form 2x2 probability testable within Monte-Carlo tolerance.
long default_fig_trials(int n);

/// Mean exhaustive local-minima count over noiseless Gaussian instances.
struct FigRow {
    int n = 0;
    double value = 0.0;      // mean count (fig1) or P(>=1 local minimum) (fig2)
    double std_error = 0.0;
    long trials = 0;
};

std::vector<FigRow> run_fig1(const std::vector<int>& n_list, long trials, std::uint64_t seed);

/// Empirical probability of at least one local minimum.
std::vector<FigRow> run_fig2(const std::vector<int>& n_list, long trials, std::uint64_t seed);

/// Per-trial exhaustive local-minima count and exact spectral gap for noisy
/// Gaussian instances at the given temperature.
struct GapTableRow {
    long trial = 0;
    int n_local_minima = 0;
    double spectral_gap = 0.0;
};

std::vector<GapTableRow> run_gap_table(int n, double snr, double alpha2, long trials,
                                       std::uint64_t seed, bool with_noise = true);

/// Gap and singleton bounds across a temperature schedule, with the fitted
/// slope of ln(bound) against 1/alpha2. Slopes are NaN when the instance has
/// no local minima.
struct TempSweepRow {
    double alpha2 = 0.0;
    double gap = 0.0;
    double gap_upper = 0.0;              // min over local minima of 2 Phi(singleton)
    double gap_upper_closed_form = 0.0;  // 2/(1 + e^{max barrier/(2 alpha2)})
    double tmix_lower = 0.0;             // from gap_upper at eps
};

struct TempSweepResult {
    std::vector<TempSweepRow> rows;
    double max_barrier = 0.0;
    double slope_closed_form = 0.0;  // d ln(gap_upper_closed_form) / d (1/alpha2)
    double slope_true_gap = 0.0;     // d ln(gap) / d (1/alpha2)
    double eps = 0.25;
};

TempSweepResult run_temp_sweep(const ProblemInstance& inst, const std::vector<double>& alpha2_list,
                               double eps = 0.25);

std::string fig_rows_to_csv(const std::vector<FigRow>& rows, const std::string& value_column);
std::string gap_table_to_csv(const std::vector<GapTableRow>& rows);
std::string temp_sweep_to_csv(const TempSweepResult& result);

/// Every experiment directory gets a manifest.json capturing the full spec,
/// seed and artifact version, enough to re-run it bit-identically.
void write_experiment_manifest(const std::filesystem::path& out_dir, const std::string& name,
                               const std::string& params_json, std::uint64_t seed,
                               const std::vector<std::string>& outputs);

void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Run `body(i)` for i in [0, count) on a small thread pool. Each index must
/// be independent (per-trial seeds are derived from the master seed), so the
/// result is identical to the sequential order.
void parallel_for(long count, const std::function<void(long)>& body);

}  // namespace latmix
