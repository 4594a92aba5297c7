#include "latmix/sampler.hpp"

#include <nlohmann/json.hpp>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace latmix {

namespace {

double stable_sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace

void SamplerConfig::validate() const {
    if (!(alpha2 > 0.0)) throw std::invalid_argument("SamplerConfig: alpha2 must be > 0");
    if (max_steps < 1) throw std::invalid_argument("SamplerConfig: max_steps must be >= 1");
}

double flip_probability(const ProblemInstance& inst, const SpinState& s, int j, double alpha2) {
    if (s.n != inst.n) throw std::invalid_argument("flip_probability: dimension mismatch");
    if (j < 0 || j >= inst.n) throw std::invalid_argument("flip_probability: site out of range");
    if (!(alpha2 > 0.0)) throw std::invalid_argument("flip_probability: alpha2 must be > 0");
    // delta = f(s_j=+1) - f(s_j=-1) = -4 (b_j . r + s_j ||b_j||^2), r = y - Bs.
    const Eigen::VectorXd r = inst.y - inst.b * s.to_vector();
    const double delta =
        -4.0 * (inst.b.col(j).dot(r) + s.spin(j) * inst.b.col(j).squaredNorm());
    return stable_sigmoid(-delta / (2.0 * alpha2));
}

GibbsChain::GibbsChain(const ProblemInstance& inst, double alpha2, const SpinState& start)
    : inst_(&inst), alpha2_(alpha2), state_(start) {
    if (start.n != inst.n) throw std::invalid_argument("GibbsChain: start dimension mismatch");
    if (!(alpha2 > 0.0)) throw std::invalid_argument("GibbsChain: alpha2 must be > 0");
    col_norm2_.resize(inst.n);
    for (int j = 0; j < inst.n; ++j) col_norm2_[j] = inst.b.col(j).squaredNorm();
    refresh_residual();
}

void GibbsChain::refresh_residual() {
    residual_ = inst_->y - inst_->b * state_.to_vector();
    steps_since_refresh_ = 0;
}

double GibbsChain::prob_plus(int j) const {
    const double delta =
        -4.0 * (inst_->b.col(j).dot(residual_) + state_.spin(j) * col_norm2_[j]);
    return stable_sigmoid(-delta / (2.0 * alpha2_));
}

void GibbsChain::apply_update(int site, double u) {
    const int target = (u < prob_plus(site)) ? 1 : 0;
    if (target != state_.bit(site)) {
        state_.code ^= (std::uint32_t{1} << site);
        // Residual moves by -2 s'_j b_j when coordinate j flips to s'_j.
        residual_ -= 2.0 * state_.spin(site) * inst_->b.col(site);
    }
    // Rebuild periodically so rounding drift cannot accumulate over long runs.
    if (++steps_since_refresh_ >= 4096) refresh_residual();
}

void GibbsChain::step(Rng& site_rng, Rng& draw_rng) {
    const int site = static_cast<int>(site_rng.uniform_int(static_cast<std::uint64_t>(inst_->n)));
    apply_update(site, draw_rng.uniform());
}

SpinState random_state(int n, Rng& rng) {
    SpinState s(n, 0);
    for (int k = 0; k < n; ++k) {
        if (rng.uniform() < 0.5) s.code |= (std::uint32_t{1} << k);
    }
    return s;
}

ChainDiagnostics run_chain(const ProblemInstance& inst, const SamplerConfig& config,
                           const SpinState& start, const std::vector<std::uint32_t>& global_codes,
                           std::vector<TrajectoryRow>* trajectory) {
    config.validate();
    if (start.n != inst.n) throw std::invalid_argument("run_chain: start dimension mismatch");

    Rng root(config.seed);
    Rng site_rng = root.child(0);
    Rng draw_rng = root.child(1);

    GibbsChain chain(inst, config.alpha2, start);
    ChainDiagnostics diag;
    const bool track_visits = inst.n <= 16;
    if (track_visits) diag.visit_counts.assign(std::size_t{1} << inst.n, 0);

    auto is_global = [&](std::uint32_t code) {
        return std::find(global_codes.begin(), global_codes.end(), code) != global_codes.end();
    };

    if (track_visits) ++diag.visit_counts[chain.state().code];
    if (!global_codes.empty() && is_global(chain.state().code)) diag.hit_time_global = 0;
    if (trajectory) trajectory->push_back({0, chain.state().code, chain.current_objective()});

    for (long t = 1; t <= config.max_steps; ++t) {
        chain.step(site_rng, draw_rng);
        if (track_visits) ++diag.visit_counts[chain.state().code];
        if (!diag.hit_time_global && !global_codes.empty() && is_global(chain.state().code))
            diag.hit_time_global = t;
        if (trajectory) trajectory->push_back({t, chain.state().code, chain.current_objective()});
    }
    diag.steps_taken = config.max_steps;
    diag.final_state = chain.state();
    diag.final_objective = chain.current_objective();
    return diag;
}

long coupled_run(const ProblemInstance& inst, const SamplerConfig& config, const SpinState& s1,
                 const SpinState& s2) {
    config.validate();
    if (inst.kind != InstanceKind::orthogonal)
        throw std::invalid_argument("coupled_run requires an orthogonal-column instance");
    if (s1.n != inst.n || s2.n != inst.n)
        throw std::invalid_argument("coupled_run: start dimension mismatch");

    Rng root(config.seed);
    Rng site_rng = root.child(0);
    Rng draw_rng = root.child(1);

    GibbsChain a(inst, config.alpha2, s1);
    GibbsChain b(inst, config.alpha2, s2);
    long t = 0;
    while (a.state().code != b.state().code) {
        if (t >= config.max_steps)
            throw std::runtime_error("coupled_run: chains did not meet within max_steps");
        const int site = static_cast<int>(site_rng.uniform_int(static_cast<std::uint64_t>(inst.n)));
        const double u = draw_rng.uniform();
        a.apply_update(site, u);
        b.apply_update(site, u);
        ++t;
    }
    return t;
}

std::string diagnostics_to_json(const ChainDiagnostics& diag) {
    nlohmann::json j;
    j["steps_taken"] = diag.steps_taken;
    if (diag.hit_time_global)
        j["hit_time_global"] = *diag.hit_time_global;
    else
        j["hit_time_global"] = nullptr;
    j["final_state_code"] = diag.final_state.code;
    j["final_objective"] = diag.final_objective;
    if (!diag.visit_counts.empty()) {
        nlohmann::json visits = nlohmann::json::object();
        for (std::size_t c = 0; c < diag.visit_counts.size(); ++c) {
            if (diag.visit_counts[c] > 0) visits[std::to_string(c)] = diag.visit_counts[c];
        }
        j["visit_counts"] = visits;
    }
    return j.dump(2);
}

std::string trajectory_to_csv(const std::vector<TrajectoryRow>& rows) {
    std::ostringstream out;
    out << "step,state_code,objective\n";
    out.precision(17);
    for (const auto& row : rows) out << row.step << "," << row.code << "," << row.objective << "\n";
    return out.str();
}

}  // namespace latmix
