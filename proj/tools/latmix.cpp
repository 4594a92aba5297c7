// latmix: reproducible experiment runner for the Gibbs-sampler integer
// least-squares laboratory. Subcommands cover instance generation, exact
// chain analysis, sampling runs and the figure/table experiments.
//
// Exit codes: 0 success, 2 invalid arguments, 3 resource-limit guard.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "latmix/errors.hpp"
#include "latmix/experiments.hpp"
#include "latmix/instance.hpp"
#include "latmix/mixing.hpp"
#include "latmix/oracle.hpp"
#include "latmix/sampler.hpp"
#include "latmix/spectral.hpp"
#include "latmix/svg.hpp"
#include "latmix/theory.hpp"
#include "latmix/version.hpp"

namespace fs = std::filesystem;
using namespace latmix;

namespace {

constexpr int kExitInvalidArgs = 2;
constexpr int kExitResourceLimit = 3;

struct CommonOpts {
    int n = 4;
    double snr = 1.0;
    double alpha2 = 1.0;
    long trials = -1;  // -1: per-experiment default
    std::uint64_t seed = 0;
    std::string out_dir;
    bool json = false;
    bool csv = false;
};

fs::path ensure_out_dir(const std::string& dir) {
    fs::path p = dir.empty() ? fs::path(".") : fs::path(dir);
    fs::create_directories(p);
    return p;
}

void emit(const fs::path& out_dir, const std::string& filename, const std::string& content,
          bool also_stdout) {
    write_text_file(out_dir / filename, content);
    if (also_stdout) std::cout << content;
}

ProblemInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read instance file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return instance_from_json(buf.str());
}

std::string params_json(std::initializer_list<std::pair<std::string, nlohmann::json>> kv) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : kv) j[k] = v;
    return j.dump();
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) values.push_back(std::stoi(item));
    }
    if (values.empty()) throw std::invalid_argument("empty list: " + text);
    return values;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) values.push_back(std::stod(item));
    }
    if (values.empty()) throw std::invalid_argument("empty list: " + text);
    return values;
}

SvgChart fig_chart(const std::vector<FigRow>& rows, const std::string& title,
                   const std::string& ylabel) {
    SvgChart chart;
    chart.title = title;
    chart.x_label = "n";
    chart.y_label = ylabel;
    SvgSeries series;
    series.name = ylabel;
    for (const auto& row : rows) series.points.emplace_back(row.n, row.value);
    chart.series.push_back(series);
    return chart;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gibbs-sampler integer least-squares laboratory"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    CommonOpts opt;
    std::string kind = "gaussian";
    std::string instance_path;
    double eps = 0.5;
    bool with_noise = true;
    long steps = 10000;
    long t_max = -1;
    std::string start_spec = "random";
    std::string state_spec;
    std::string n_list_spec = "2,4,6,8";
    std::string alpha2_list_spec = "1,0.5,0.25,0.125";
    std::string theory_op = "thm7";
    double tail_t = 2.0;
    double c_target = 1.0;
    std::uint32_t state_code = 0;
    bool dump_matrix = false;
    bool exact_phi = false;
    std::string traj_path;

    auto add_common = [&](CLI::App* cmd, bool with_alpha = true) {
        cmd->add_option("--n", opt.n, "problem dimension");
        cmd->add_option("--snr", opt.snr, "signal-to-noise ratio");
        if (with_alpha) cmd->add_option("--alpha2", opt.alpha2, "squared temperature");
        cmd->add_option("--trials", opt.trials, "trial count (default per experiment)");
        cmd->add_option("--seed", opt.seed, "master seed");
        cmd->add_option("--out", opt.out_dir, "output directory (default: cwd)");
        cmd->add_flag("--json", opt.json, "print JSON to stdout");
        cmd->add_flag("--csv", opt.csv, "print CSV to stdout");
    };

    auto* gen = app.add_subcommand("gen", "generate a problem instance and write instance.json");
    add_common(gen, false);
    gen->add_option("--kind", kind, "gaussian|orthogonal|unit_sphere|adversarial");
    gen->add_option("--eps", eps, "adversarial epsilon in (0,1)");
    gen->add_flag("--noise,!--no-noise", with_noise, "draw Gaussian noise (default on)");

    auto* objective_cmd = app.add_subcommand("objective", "objective value of a state");
    objective_cmd->add_option("--instance", instance_path, "instance JSON file")->required();
    objective_cmd->add_option("--state", state_code, "state code")->required();
    objective_cmd->add_flag("--json", opt.json, "print JSON");

    auto* localmin = app.add_subcommand("localmin", "exhaustive local-minima report");
    localmin->add_option("--instance", instance_path, "instance JSON file")->required();
    localmin->add_option("--out", opt.out_dir, "output directory");
    localmin->add_flag("--json", opt.json, "print JSON");

    auto* gibbs = app.add_subcommand("gibbs", "run the Gibbs sampler");
    add_common(gibbs);
    gibbs->add_option("--instance", instance_path, "instance JSON file")->required();
    gibbs->add_option("--steps", steps, "number of single-site updates");
    gibbs->add_option("--start", start_spec, "start state code, or 'random'");
    gibbs->add_option("--traj", traj_path, "write trajectory CSV to this file");

    auto* couple = app.add_subcommand("couple", "coupled two-chain meeting times");
    add_common(couple);
    couple->add_option("--instance", instance_path, "orthogonal instance JSON file")->required();
    couple->add_option("--steps", steps, "cap on coupling time");

    auto* spectrum = app.add_subcommand("spectrum", "transition matrix spectrum report");
    add_common(spectrum);
    spectrum->add_option("--instance", instance_path, "instance JSON file")->required();
    spectrum->add_flag("--dump-matrix", dump_matrix, "also write matrix.csv (n <= 8)");

    auto* bottleneck = app.add_subcommand("bottleneck", "bottleneck ratios");
    add_common(bottleneck);
    bottleneck->add_option("--instance", instance_path, "instance JSON file")->required();
    bottleneck->add_option("--state", state_spec, "local-minimum state code (default: all)");
    bottleneck->add_flag("--exact", exact_phi, "also enumerate exact Phi* (n <= 4)");

    auto* tv = app.add_subcommand("tv", "worst-case total-variation curve");
    add_common(tv);
    tv->add_option("--instance", instance_path, "instance JSON file")->required();
    tv->add_option("--tmax", t_max, "curve length (default: 10 n ln n (1+1/gap))");

    auto* theory_cmd = app.add_subcommand("theory", "closed-form and Monte-Carlo evaluations");
    add_common(theory_cmd, false);
    theory_cmd->add_option("--op", theory_op, "thm6|thm7|thm8|ratio-tail|temp-rule");
    theory_cmd->add_option("--t", tail_t, "tail threshold for ratio-tail (>= 1)");
    theory_cmd->add_option("--c-target", c_target, "constant in the temperature rule");
    theory_cmd->add_option("--instance", instance_path, "instance file for temp-rule");

    auto* fig1 = app.add_subcommand("fig1", "mean local-minima count vs n");
    add_common(fig1, false);
    fig1->add_option("--n-list", n_list_spec, "comma-separated dimensions");

    auto* fig2 = app.add_subcommand("fig2", "P(at least one local minimum) vs n");
    add_common(fig2, false);
    fig2->add_option("--n-list", n_list_spec, "comma-separated dimensions");

    auto* gap_table = app.add_subcommand("gap-table", "local-minima count and spectral gap per trial");
    add_common(gap_table);
    gap_table->add_flag("--noise,!--no-noise", with_noise, "draw Gaussian noise (default on)");

    auto* temp_sweep = app.add_subcommand("temp-sweep", "gap and bounds across a temperature schedule");
    add_common(temp_sweep, false);
    temp_sweep->add_option("--instance", instance_path, "instance JSON file");
    temp_sweep->add_option("--kind", kind, "generated instance kind when no file given");
    temp_sweep->add_option("--eps", eps, "adversarial epsilon");
    temp_sweep->add_option("--alpha2-list", alpha2_list_spec, "comma-separated schedule");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalidArgs;  // --help/--version exit cleanly
    }

    try {
        if (gen->parsed()) {
            const InstanceKind k = instance_kind_from_string(kind);
            ProblemInstance inst;
            switch (k) {
                case InstanceKind::gaussian:
                    inst = gen_gaussian_instance(opt.n, opt.snr, opt.seed, with_noise);
                    break;
                case InstanceKind::orthogonal:
                    inst = gen_orthogonal_instance(opt.n, opt.snr, opt.seed, with_noise);
                    break;
                case InstanceKind::unit_sphere:
                    inst = gen_unit_sphere_instance(opt.n, opt.seed);
                    break;
                case InstanceKind::adversarial:
                    inst = gen_adversarial_instance(opt.n, eps);
                    break;
                case InstanceKind::custom:
                    throw std::invalid_argument("gen: use a JSON file for custom instances");
            }
            const fs::path out = ensure_out_dir(opt.out_dir);
            emit(out, "instance.json", instance_to_json(inst) + "\n", opt.json);
            write_experiment_manifest(
                out, "gen",
                params_json({{"kind", kind}, {"n", opt.n}, {"snr", opt.snr},
                             {"eps", eps}, {"with_noise", with_noise}}),
                opt.seed, {"instance.json"});
            if (!opt.json) std::cout << (out / "instance.json").string() << "\n";
        } else if (objective_cmd->parsed()) {
            const ProblemInstance inst = load_instance(instance_path);
            const double value = objective(inst, SpinState(inst.n, state_code));
            if (opt.json) {
                nlohmann::json j{{"code", state_code}, {"objective", value}};
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout.precision(17);
                std::cout << value << "\n";
            }
        } else if (localmin->parsed()) {
            const ProblemInstance inst = load_instance(instance_path);
            const LocalMinimaReport report = local_minima_bruteforce(inst);
            const std::string text = report_to_json(report) + "\n";
            if (!opt.out_dir.empty())
                emit(ensure_out_dir(opt.out_dir), "localmin.json", text, opt.json);
            else
                std::cout << text;
        } else if (gibbs->parsed()) {
            const ProblemInstance inst = load_instance(instance_path);
            SamplerConfig config{opt.alpha2, opt.seed, steps};
            SpinState start = SpinState::all_minus_one(inst.n);
            if (start_spec == "random") {
                Rng rng = Rng(opt.seed).child(99);
                start = random_state(inst.n, rng);
            } else {
                start = SpinState(inst.n, static_cast<std::uint32_t>(std::stoul(start_spec)));
            }
            std::vector<std::uint32_t> global_codes;
            if (inst.n <= kExhaustiveMaxN) {
                for (const auto& g : global_minimum(inst).states) global_codes.push_back(g.code);
            }
            std::vector<TrajectoryRow> trajectory;
            ChainDiagnostics diag =
                run_chain(inst, config, start, global_codes,
                          traj_path.empty() ? nullptr : &trajectory);
            if (!traj_path.empty()) write_text_file(traj_path, trajectory_to_csv(trajectory));
            std::cout << diagnostics_to_json(diag) << "\n";
        } else if (couple->parsed()) {
            const ProblemInstance inst = load_instance(instance_path);
            SamplerConfig config{opt.alpha2, opt.seed, steps};
            const long trials = opt.trials < 0 ? 1000 : opt.trials;
            const SpinState s1 = SpinState::all_minus_one(inst.n);
            const SpinState s2 = SpinState::all_plus_one(inst.n);
            std::vector<long> taus(static_cast<std::size_t>(trials));
            Rng root(opt.seed);
            const std::uint64_t base = root.next_u64();
            for (long i = 0; i < trials; ++i) {
                SamplerConfig c = config;
                c.seed = Rng(base).child(static_cast<std::uint64_t>(i)).next_u64();
                taus[static_cast<std::size_t>(i)] = coupled_run(inst, c, s1, s2);
            }
            double mean = 0.0;
            long worst = 0;
            for (long tau : taus) {
                mean += tau;
                worst = std::max(worst, tau);
            }
            mean /= trials;
            nlohmann::json j{{"trials", trials}, {"mean_tau", mean}, {"max_tau", worst},
                             {"bound_nlogn_plus_n", coupon_collector_bound(inst.n, 1.0 / M_E)}};
            std::cout << j.dump(2) << "\n";
        } else if (spectrum->parsed()) {
            const ProblemInstance inst = load_instance(instance_path);
            const TransitionMatrix tm = build_transition_matrix(inst, opt.alpha2);
            SpectrumReport report = spectral_gap(tm);
            if (inst.n <= kExactBottleneckMaxN) report.bottleneck_star = exact_bottleneck_star(tm);
            const LocalMinimaReport minima = local_minima_from_table(inst, tm.objectives);
            for (const auto& m : minima.minima)
                report.singleton_bounds.push_back(singleton_bottleneck(inst, opt.alpha2, m.state));
            const std::string text = spectrum_to_json(report) + "\n";
            const fs::path out = ensure_out_dir(opt.out_dir);
            emit(out, "spectrum.json", text, true);
            if (dump_matrix) emit(out, "matrix.csv", transition_matrix_to_csv(tm), false);
        } else if (bottleneck->parsed()) {
            const ProblemInstance inst = load_instance(instance_path);
            nlohmann::json j = nlohmann::json::object();
            if (exact_phi) {
                const TransitionMatrix tm = build_transition_matrix(inst, opt.alpha2);
                j["phi_star"] = exact_bottleneck_star(tm);
            }
            nlohmann::json singles = nlohmann::json::array();
            if (!state_spec.empty()) {
                const SingletonBottleneck sb = singleton_bottleneck(
                    inst, opt.alpha2, SpinState(inst.n, static_cast<std::uint32_t>(std::stoul(state_spec))));
                singles.push_back({{"code", sb.state.code}, {"phi", sb.phi},
                                   {"gap_upper", sb.gap_upper},
                                   {"gap_upper_closed_form", sb.gap_upper_closed_form},
                                   {"barrier", sb.barrier}});
            } else {
                for (const auto& m : local_minima_bruteforce(inst).minima) {
                    const SingletonBottleneck sb = singleton_bottleneck(inst, opt.alpha2, m.state);
                    singles.push_back({{"code", sb.state.code}, {"phi", sb.phi},
                                       {"gap_upper", sb.gap_upper},
                                       {"gap_upper_closed_form", sb.gap_upper_closed_form},
                                       {"barrier", sb.barrier}});
                }
            }
            j["singletons"] = singles;
            j["alpha2"] = opt.alpha2;
            std::cout << j.dump(2) << "\n";
        } else if (tv->parsed()) {
            const ProblemInstance inst = load_instance(instance_path);
            const TransitionMatrix tm = build_transition_matrix(inst, opt.alpha2);
            long horizon = t_max;
            if (horizon < 0) {
                std::optional<double> gap;
                try {
                    gap = spectral_gap(tm).gap;
                } catch (const NumericalDegeneracyError&) {
                }
                horizon = default_t_max(inst.n, gap);
            }
            const TVCurve curve = worst_case_tv_curve(tm, horizon);
            const fs::path out = ensure_out_dir(opt.out_dir);
            emit(out, "tv_curve.csv", tv_curve_to_csv(curve), opt.csv);
            emit(out, "tmix.json", tmix_summary_to_json(curve, {0.25, 0.1}) + "\n", !opt.csv);
        } else if (theory_cmd->parsed()) {
            const long trials = opt.trials < 0 ? 100000 : opt.trials;
            nlohmann::json j;
            if (theory_op == "thm7") {
                j["closed_form"] = nlohmann::json::parse(estimate_to_json(p_local_2x2_gaussian()));
                j["quadrature"] =
                    nlohmann::json::parse(estimate_to_json(p_local_2x2_gaussian_quadrature()));
                j["monte_carlo"] = nlohmann::json::parse(
                    estimate_to_json(p_local_2x2_gaussian_monte_carlo(trials, opt.seed)));
            } else if (theory_op == "thm6") {
                j["closed_form"] = nlohmann::json::parse(estimate_to_json(p_local_2x2_unit_sphere()));
                j["monte_carlo"] = nlohmann::json::parse(
                    estimate_to_json(p_local_2x2_unit_sphere_monte_carlo(trials, opt.seed)));
            } else if (theory_op == "thm8") {
                j = nlohmann::json::parse(expected_minima_bound_to_json(
                    expected_local_minima_lower_bound(opt.n, trials, opt.seed)));
            } else if (theory_op == "ratio-tail") {
                j["closed_form"] = ratio_tail(tail_t);
                j["monte_carlo"] = nlohmann::json::parse(
                    estimate_to_json(ratio_tail_monte_carlo(tail_t, trials, opt.seed)));
            } else if (theory_op == "temp-rule") {
                if (instance_path.empty())
                    throw std::invalid_argument("temp-rule requires --instance");
                const ProblemInstance inst = load_instance(instance_path);
                j["min_alpha2"] = min_alpha2_for_mixing(inst, c_target);
                j["c_target"] = c_target;
            } else {
                throw std::invalid_argument("unknown theory op: " + theory_op);
            }
            std::cout << j.dump(2) << "\n";
        } else if (fig1->parsed() || fig2->parsed()) {
            const bool is_fig1 = fig1->parsed();
            const std::vector<int> n_list = parse_int_list(n_list_spec);
            std::vector<FigRow> rows;
            for (int n : n_list) {
                const long trials = opt.trials < 0 ? default_fig_trials(n) : opt.trials;
                const auto part = is_fig1 ? run_fig1({n}, trials, opt.seed)
                                          : run_fig2({n}, trials, opt.seed);
                rows.push_back(part.front());
            }
            const std::string value_col = is_fig1 ? "mean_local_minima" : "p_exist";
            const std::string csv = fig_rows_to_csv(rows, value_col);
            const std::string name = is_fig1 ? "fig1" : "fig2";
            const fs::path out = ensure_out_dir(opt.out_dir);
            emit(out, name + ".csv", csv, opt.csv || !opt.json);
            const SvgChart chart =
                fig_chart(rows, is_fig1 ? "Average number of local minima" : "P(local minimum exists)",
                          value_col);
            emit(out, name + ".svg", render_svg_chart(chart), false);
            write_experiment_manifest(out, name,
                                      params_json({{"n_list", n_list_spec},
                                                   {"trials", opt.trials}}),
                                      opt.seed, {name + ".csv", name + ".svg"});
        } else if (gap_table->parsed()) {
            const long trials = opt.trials < 0 ? 10 : opt.trials;
            const auto rows = run_gap_table(opt.n, opt.snr, opt.alpha2, trials, opt.seed, with_noise);
            const std::string csv = gap_table_to_csv(rows);
            const fs::path out = ensure_out_dir(opt.out_dir);
            emit(out, "gap_table.csv", csv, true);
            write_experiment_manifest(out, "gap-table",
                                      params_json({{"n", opt.n}, {"snr", opt.snr},
                                                   {"alpha2", opt.alpha2}, {"trials", trials},
                                                   {"with_noise", with_noise}}),
                                      opt.seed, {"gap_table.csv"});
        } else if (temp_sweep->parsed()) {
            ProblemInstance inst;
            if (!instance_path.empty()) {
                inst = load_instance(instance_path);
            } else if (kind == "adversarial") {
                inst = gen_adversarial_instance(opt.n, eps);
            } else if (kind == "orthogonal") {
                inst = gen_orthogonal_instance(opt.n, opt.snr, opt.seed, false);
            } else {
                inst = gen_gaussian_instance(opt.n, opt.snr, opt.seed, false);
            }
            const TempSweepResult result = run_temp_sweep(inst, parse_double_list(alpha2_list_spec));
            const fs::path out = ensure_out_dir(opt.out_dir);
            emit(out, "temp_sweep.csv", temp_sweep_to_csv(result), true);
            nlohmann::json j{{"max_barrier", result.max_barrier},
                             {"slope_closed_form", result.slope_closed_form},
                             {"slope_true_gap", result.slope_true_gap}};
            emit(out, "temp_sweep.json", j.dump(2) + "\n", false);
            write_experiment_manifest(out, "temp-sweep",
                                      params_json({{"kind", kind}, {"n", opt.n},
                                                   {"alpha2_list", alpha2_list_spec}}),
                                      opt.seed, {"temp_sweep.csv", "temp_sweep.json"});
        }
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResourceLimit;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitInvalidArgs;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
