#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "latmix/instance.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code;
};

/// Run the built binary with stdout/stderr redirected into the work dir.
CliResult run_cli(const fs::path& work_dir, const std::string& args) {
    const std::string cmd = std::string(LATMIX_CLI_PATH) + " " + args + " > " +
                            (work_dir / "stdout.txt").string() + " 2> " +
                            (work_dir / "stderr.txt").string();
    const int raw = std::system(cmd.c_str());
    return {WEXITSTATUS(raw)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("gen/objective/localmin round trip through files") {
    TempDir dir("latmix_cli_roundtrip");
    CHECK(run_cli(dir.path, "gen --kind adversarial --n 4 --eps 0.5 --out " + dir.path.string())
              .exit_code == 0);
    const fs::path inst_file = dir.path / "instance.json";
    REQUIRE(fs::exists(inst_file));
    REQUIRE(fs::exists(dir.path / "manifest.json"));

    const latmix::ProblemInstance inst = latmix::instance_from_json(slurp(inst_file));
    CHECK(inst.n == 4);
    CHECK(inst.kind == latmix::InstanceKind::adversarial);

    CHECK(run_cli(dir.path, "objective --instance " + inst_file.string() + " --state 15")
              .exit_code == 0);
    CHECK(std::stod(slurp(dir.path / "stdout.txt")) == doctest::Approx(2.0));

    CHECK(run_cli(dir.path, "localmin --instance " + inst_file.string()).exit_code == 0);
    const std::string report = slurp(dir.path / "stdout.txt");
    CHECK(report.find("\"count\": 3") != std::string::npos);
}

TEST_CASE("invalid arguments exit with code 2") {
    TempDir dir("latmix_cli_badargs");
    CHECK(run_cli(dir.path, "gen --kind adversarial --n 3 --eps 0.5 --out " + dir.path.string())
              .exit_code == 2);
    CHECK(run_cli(dir.path, "gen --kind gaussian --n 0 --out " + dir.path.string()).exit_code == 2);
}

TEST_CASE("resource guards exit with code 3") {
    TempDir dir("latmix_cli_guard");
    REQUIRE(run_cli(dir.path, "gen --kind gaussian --n 21 --seed 1 --out " + dir.path.string())
                .exit_code == 0);
    const std::string inst_file = (dir.path / "instance.json").string();
    CHECK(run_cli(dir.path, "spectrum --instance " + inst_file + " --alpha2 1 --out " +
                                dir.path.string())
              .exit_code == 3);
    CHECK(run_cli(dir.path, "localmin --instance " + inst_file).exit_code == 3);
}

TEST_CASE("gibbs subcommand reports diagnostics and writes a trajectory") {
    TempDir dir("latmix_cli_gibbs");
    REQUIRE(run_cli(dir.path, "gen --kind gaussian --n 4 --snr 10 --seed 5 --out " +
                                  dir.path.string())
                .exit_code == 0);
    const std::string inst_file = (dir.path / "instance.json").string();
    const std::string traj = (dir.path / "traj.csv").string();
    CHECK(run_cli(dir.path, "gibbs --instance " + inst_file +
                                " --alpha2 1 --steps 500 --seed 3 --start 0 --traj " + traj)
              .exit_code == 0);
    CHECK(slurp(dir.path / "stdout.txt").find("\"steps_taken\": 500") != std::string::npos);
    const std::string csv = slurp(traj);
    CHECK(csv.rfind("step,state_code,objective\n", 0) == 0);
}

TEST_CASE("tv and spectrum subcommands emit files") {
    TempDir dir("latmix_cli_tv");
    REQUIRE(run_cli(dir.path, "gen --kind orthogonal --n 4 --snr 4 --seed 2 --no-noise --out " +
                                  dir.path.string())
                .exit_code == 0);
    const std::string inst_file = (dir.path / "instance.json").string();
    CHECK(run_cli(dir.path, "spectrum --instance " + inst_file + " --alpha2 1 --dump-matrix --out " +
                                dir.path.string())
              .exit_code == 0);
    CHECK(fs::exists(dir.path / "spectrum.json"));
    CHECK(fs::exists(dir.path / "matrix.csv"));
    CHECK(run_cli(dir.path, "tv --instance " + inst_file + " --alpha2 1 --tmax 40 --out " +
                                dir.path.string())
              .exit_code == 0);
    CHECK(fs::exists(dir.path / "tv_curve.csv"));
    CHECK(fs::exists(dir.path / "tmix.json"));
}

TEST_CASE("couple subcommand reports coupling statistics") {
    TempDir dir("latmix_cli_couple");
    REQUIRE(run_cli(dir.path, "gen --kind orthogonal --n 4 --snr 4 --seed 2 --out " +
                                  dir.path.string())
                .exit_code == 0);
    const std::string inst_file = (dir.path / "instance.json").string();
    CHECK(run_cli(dir.path, "couple --instance " + inst_file + " --alpha2 1 --trials 200 --seed 7")
              .exit_code == 0);
    const std::string out = slurp(dir.path / "stdout.txt");
    CHECK(out.find("\"mean_tau\"") != std::string::npos);
}

TEST_CASE("theory subcommand prints the triple comparison") {
    TempDir dir("latmix_cli_theory");
    CHECK(run_cli(dir.path, "theory --op thm7 --trials 2000 --seed 1").exit_code == 0);
    const std::string out = slurp(dir.path / "stdout.txt");
    CHECK(out.find("closed_form") != std::string::npos);
    CHECK(out.find("quadrature") != std::string::npos);
    CHECK(out.find("monte_carlo") != std::string::npos);
    CHECK(run_cli(dir.path, "theory --op nonsense").exit_code == 2);
}

TEST_CASE("figure experiments are deterministic at the file level") {
    TempDir dir("latmix_cli_fig");
    const fs::path out1 = dir.path / "a";
    const fs::path out2 = dir.path / "b";
    fs::create_directories(out1);
    fs::create_directories(out2);
    CHECK(run_cli(dir.path, "fig1 --n-list 2,3 --trials 30 --seed 11 --out " + out1.string())
              .exit_code == 0);
    CHECK(run_cli(dir.path, "fig1 --n-list 2,3 --trials 30 --seed 11 --out " + out2.string())
              .exit_code == 0);
    CHECK(slurp(out1 / "fig1.csv") == slurp(out2 / "fig1.csv"));
    CHECK(fs::exists(out1 / "fig1.svg"));
    CHECK(fs::exists(out1 / "manifest.json"));
}

TEST_CASE("gap-table and temp-sweep write their artifacts") {
    TempDir dir("latmix_cli_gap");
    CHECK(run_cli(dir.path, "gap-table --n 3 --snr 10 --alpha2 1 --trials 4 --seed 2 --out " +
                                dir.path.string())
              .exit_code == 0);
    CHECK(fs::exists(dir.path / "gap_table.csv"));
    CHECK(run_cli(dir.path,
                  "temp-sweep --kind adversarial --n 4 --eps 0.5 --alpha2-list 1,0.5,0.25 --out " +
                      dir.path.string())
              .exit_code == 0);
    CHECK(fs::exists(dir.path / "temp_sweep.csv"));
    const std::string sweep = slurp(dir.path / "temp_sweep.json");
    CHECK(sweep.find("slope_closed_form") != std::string::npos);
}
