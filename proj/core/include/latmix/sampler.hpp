#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latmix/instance.hpp"
#include "latmix/rng.hpp"

namespace latmix {

struct SamplerConfig {
    double alpha2 = 1.0;        // squared temperature, > 0
    std::uint64_t seed = 0;
    long max_steps = 10000;     // site selection is always uniform-random

    void validate() const;
};

struct ChainDiagnostics {
    long steps_taken = 0;
    std::optional<long> hit_time_global;   // first step at a global minimum
    std::vector<std::uint64_t> visit_counts;  // indexed by code; empty for n > 16
    SpinState final_state;
    double final_objective = 0.0;
};

/// Probability that coordinate j resamples to +1 given the other coordinates
/// of s, i.e. sigmoid(-(f_plus - f_minus) / (2 alpha2)). Stable for objective
/// differences up to |delta|/alpha2 ~ 1e6 and beyond; the result saturates
/// at 0 or 1 rather than overflowing.
double flip_probability(const ProblemInstance& inst, const SpinState& s, int j, double alpha2);

/// Single-site Gibbs dynamics over {-1,+1}^n with an O(n) incremental
/// objective update (flipping coordinate j moves the residual by -2 s_j b_j).
///
/// The site index and the update draw come from two independent streams so a
/// coupled pair of chains can share both. A chain is sequential; run
/// independent chains on different seeds for parallelism.
class GibbsChain {
public:
    GibbsChain(const ProblemInstance& inst, double alpha2, const SpinState& start);

    const SpinState& state() const { return state_; }
    double current_objective() const { return residual_.squaredNorm(); }

    /// Resample coordinate site: take +1 iff u < flip probability of +1.
    void apply_update(int site, double u);

    /// One step with externally supplied streams (shared by coupled runs).
    void step(Rng& site_rng, Rng& draw_rng);

    /// Probability that coordinate j resamples to +1 from the current state.
    double prob_plus(int j) const;

    /// Rebuild the cached residual from scratch (testing hook).
    void refresh_residual();

private:
    const ProblemInstance* inst_;
    double alpha2_;
    SpinState state_;
    Eigen::VectorXd residual_;            // y - B x, kept incrementally
    Eigen::VectorXd col_norm2_;
    long steps_since_refresh_ = 0;
};

/// Run max_steps single-site updates from `start`. `global_codes`, when
/// supplied (oracle, n <= 20), enables the first-hit record. Fixed seed gives
/// a bit-identical trajectory. `trajectory`, when non-null, receives
/// (step, code, objective) rows including the initial state.
struct TrajectoryRow {
    long step;
    std::uint32_t code;
    double objective;
};

ChainDiagnostics run_chain(const ProblemInstance& inst, const SamplerConfig& config,
                           const SpinState& start,
                           const std::vector<std::uint32_t>& global_codes = {},
                           std::vector<TrajectoryRow>* trajectory = nullptr);

SpinState random_state(int n, Rng& rng);

/// Coupled two-chain experiment from the orthogonal-column coupling argument:
/// both chains see the same site index and the same uniform draw each step,
/// so a coordinate coalesces the first time it is selected and the meeting
/// time is the coupon-collector time of the initial disagreement set.
/// Requires inst.kind == orthogonal. Throws std::runtime_error if the chains
/// have not met after config.max_steps.
long coupled_run(const ProblemInstance& inst, const SamplerConfig& config, const SpinState& s1,
                 const SpinState& s2);

std::string diagnostics_to_json(const ChainDiagnostics& diag);
std::string trajectory_to_csv(const std::vector<TrajectoryRow>& rows);

}  // namespace latmix
