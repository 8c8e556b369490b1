#include "stochmech/cli/commands.hpp"
#include "stochmech/cli/config.hpp"
#include "stochmech/control/scenarios.hpp"
#include "stochmech/core/errors.hpp"
#include "stochmech/core/table.hpp"
#include "stochmech/fpsolver/fp.hpp"
#include "stochmech/oracles/kernels.hpp"
#include "stochmech/sde/ensemble.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace stochmech;
using namespace stochmech::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / "stochmech_cli_tests" / name;
    fs::remove_all(dir);
    return dir;
}

ScenarioConfig config(const std::string& text, const std::string& name)
{
    auto c = parse_config_text(text);
    c.out_dir = scratch(name).string();
    return c;
}

RunResult run_quiet(const ScenarioConfig& c, std::string* message = nullptr)
{
    std::ostringstream err;
    auto r = run(c, err);
    if (message)
        *message = err.str();
    return r;
}

std::ifstream open(const ScenarioConfig& c, const std::string& file)
{
    std::ifstream in(fs::path(c.out_dir) / file);
    REQUIRE(in.good());
    return in;
}

std::string slurp(const ScenarioConfig& c, const std::string& file)
{
    auto in = open(c, file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config text round trip and hash")
{
    const auto c = parse_config_text("# oscillator, beam units\n"
                                     "command = kernel\n"
                                     "m = 2\nomega = 0.5\nemittance = 0.1\n"
                                     "n = 1   # the first excited state\n"
                                     "sources = 0.5, -1.25\n"
                                     "out = somewhere\nseed = 99\n");
    CHECK(c.command == "kernel");
    CHECK(c.mode == Mode::beam);
    CHECK(c.action == 0.1);
    CHECK(c.seed == 99);
    CHECK(c.get_int("n", 0) == 1);
    CHECK(c.get_list("sources", {}) == std::vector<double>{0.5, -1.25});

    const auto back = parse_config_text(to_text(c));
    CHECK(back == c);
    CHECK(to_text(back) == to_text(c));
    CHECK(config_hash(back) == config_hash(c));
    auto changed = c;
    changed.set("t", "2");
    CHECK(config_hash(changed) != config_hash(c));

    try {
        parse_config_text("command = spectrum\nnn = 2\n");
        FAIL("unknown key accepted");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "nn");
        CHECK(std::string(e.what()).find("nn") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_text("command = dance\n"), ConfigError);
    CHECK_THROWS_AS(validate(parse_config_text("command = spectrum\nn = two\n")), ConfigError);
    CHECK_THROWS_AS(parse_config_text("command = spectrum\nn 2\n"), ConfigError);
}

TEST_CASE("malformed config gives exit 1 naming the key")
{
    auto c = config("command = spectrum\nn = 2\n", "bad_key");
    c.set("nn", "2");
    std::string message;
    const auto r = run_quiet(c, &message);
    CHECK(r.exit_code == exit_config);
    CHECK(r.report["bad_key"] == "nn");
    CHECK(message.find("nn") != std::string::npos);

    auto neg = config("command = spectrum\nn = -1\n", "bad_n");
    CHECK(run_quiet(neg).exit_code == exit_config);
}

TEST_CASE("spectrum of the n = 2 drift on the central interval")
{
    const auto c = config("command = spectrum\nn = 2\ninterval = -1,1\nparity = odd\nn_eigs = 3\n", "spectrum_n2");
    const auto r = run_quiet(c);
    REQUIRE(r.exit_code == exit_ok);
    CHECK(r.report["config_hash"] == config_hash(c));

    auto in = open(c, "eigenvalues.csv");
    const auto table = read_table_csv(in);
    REQUIRE(table.rows.size() == 3);
    const double expected[] = {7.44, 37.06, 86.41};
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::abs(table.number(i, "mu") - expected[i]) < 0.01);
        CHECK(std::abs(table.number(i, "mu_confluent") - table.number(i, "mu")) < 1e-6);
        CHECK(table.text(i, "parity") == "odd");
    }
    CHECK(fs::exists(fs::path(c.out_dir) / "spectrum.json"));
    CHECK(parse_config_text(slurp(c, "config.snapshot")) == c);
}

TEST_CASE("spectrum of the n = 0 drift has the zero eigenvalue")
{
    const auto c = config("command = spectrum\nn = 0\nn_eigs = 3\n", "spectrum_n0");
    REQUIRE(run_quiet(c).exit_code == exit_ok);
    auto in = open(c, "eigenvalues.csv");
    const auto table = read_table_csv(in);
    REQUIRE(table.rows.size() == 3);
    CHECK(std::abs(table.number(0, "mu")) < 1e-6);
    CHECK(std::abs(table.number(1, "mu") - 1.0) < 1e-3);
}

TEST_CASE("compare: Fokker-Planck solver against the OU kernel")
{
    const auto c = config("command = compare\nengines = fpsolver,ou_oracle\nn = 0\nx0 = 1\ntimes = 1\n", "cmp_ou");
    const auto r = run_quiet(c);
    CHECK(r.exit_code == exit_ok);
    CHECK(r.report["max_l1"].get<double>() <= 1e-3);
    auto in = open(c, "compare.csv");
    const auto table = read_table_csv(in);
    REQUIRE(table.rows.size() == 1);
    CHECK(table.number(0, "t") == 1.0);
}

TEST_CASE("compare: spectral expansion against the Fokker-Planck solver")
{
    const auto c = config("command = compare\nengines = spectral,fpsolver\nn = 1\ninitial = gaussian\nx0 = 0.8\n"
                          "times = 0.1,1\n",
                          "cmp_spectral");
    const auto r = run_quiet(c);
    CHECK(r.exit_code == exit_ok);
    CHECK(r.report["max_l1"].get<double>() <= 1e-3);
}

TEST_CASE("compare: particle ensemble against the n = 1 kernel")
{
    const auto c = config("command = compare\nengines = sde,n1_oracle\nn = 1\nx0 = 0.7\ntimes = 1\n"
                          "n_particles = 20000\nbins = 50\n",
                          "cmp_sde");
    const auto r = run_quiet(c);
    CHECK(r.exit_code == exit_ok);
    CHECK(r.report["max_l1"].get<double>() <= 0.05);

    auto bad = config("command = compare\nengines = spectral,ou_oracle\n", "cmp_bad");
    CHECK(run_quiet(bad).exit_code == exit_config);
}

TEST_CASE("control scenarios")
{
    const auto decay = config("command = control\nkind = decay\ntolerance = 1e-4\n", "ctl_decay");
    const auto r = run_quiet(decay);
    CHECK(r.exit_code == exit_ok);
    CHECK(r.report["residual_max"].get<double>() <= 1e-4);
    CHECK(!r.report["singular_points"].empty());
    auto in = open(decay, "control.csv");
    const auto rows = read_control_csv(in);
    CHECK(!rows.empty());

    auto packet = config("command = control\nkind = packet\nN = 1\n", "ctl_packet");
    std::string message;
    CHECK(run_quiet(packet, &message).exit_code == exit_config);
    CHECK(message.find("N >= 2") != std::string::npos);

    const auto ou = config("command = control\nkind = ou\nt_end = 5\nframes = 5\n", "ctl_ou");
    const auto ro = run_quiet(ou);
    CHECK(ro.exit_code == exit_ok);
    CHECK(ro.report["final_time"].get<double>() == doctest::Approx(5.0));
    CHECK(ro.report["final_ho_relative_deviation"].get<double>() <= 0.01);

    // Config times are in 1/omega and lengths in sigma0, whatever the physical scales.
    const auto scaled = config("command = control\nm = 1\nomega = 2\nhbar = 1\nkind = n1\nx0 = 1.5\nt_end = 3\n"
                               "frames = 1,3\ngrid_points = 2000\n",
                               "ctl_scaled");
    const auto rs = run_quiet(scaled);
    CHECK(rs.exit_code == exit_ok);
    CHECK(rs.report["final_time"].get<double>() == doctest::Approx(1.5));
    CHECK(rs.report["params"]["sigma0"].get<double>() == doctest::Approx(0.5));
    auto rows_in = open(scaled, "control.csv");
    double x_max = 0.0;
    for (const auto& row : read_control_csv(rows_in))
        x_max = std::max(x_max, row.x);
    CHECK(x_max == doctest::Approx(2.5).epsilon(1e-3));
}

TEST_CASE("tolerance failures give exit 3")
{
    const auto c = config("command = kernel\nn = 0\ntolerance = 1e-14\n", "kernel_tight");
    const auto r = run_quiet(c);
    CHECK(r.exit_code == exit_tolerance);
    std::ifstream in(fs::path(c.out_dir) / "report.json");
    const auto report = nlohmann::json::parse(in);
    CHECK(report["exit_code"] == exit_tolerance);
    CHECK(report["pass"] == false);
}

TEST_CASE("emitted tables load with the library readers")
{
    const auto kernel = config("command = kernel\nn = 1\nsources = 0.5,-1\n", "io_kernel");
    REQUIRE(run_quiet(kernel).exit_code == exit_ok);
    auto k_in = open(kernel, "kernel.csv");
    CHECK(!read_kernel_csv(k_in).empty());

    const auto evolve = config("command = evolve\nn = 0\ninitial = gaussian\nx0 = 1\noutput_times = 0.5,1\n"
                               "grid_points = 400\n",
                               "io_evolve");
    const auto re = run_quiet(evolve);
    REQUIRE(re.exit_code == exit_ok);
    auto t_in = open(evolve, "trajectory.csv");
    const auto frames = read_trajectory_csv(t_in);
    REQUIRE(frames.size() == 2);
    CHECK(frames[1].t == 1.0);
    CHECK(re.report["max_mass_drift"].get<double>() < 1e-12);

    const auto sim = config("command = simulate\nn = 2\nx0 = 0.5\nn_particles = 200\nt_end = 0.5\n", "io_sim");
    const auto rs = run_quiet(sim);
    REQUIRE(rs.exit_code == exit_ok);
    CHECK(rs.report["label_violations"] == 0);
    auto s_in = open(sim, "snapshots.csv");
    CHECK(read_snapshot_csv(s_in).size() == 200);
}

TEST_CASE("runs are deterministic given the seed")
{
    const std::string text = "command = simulate\nn = 1\ninitial = gaussian\nx0 = 1\nn_particles = 300\nt_end = 0.3\n";
    auto a = config(text, "seed_a");
    auto b = config(text, "seed_b");
    auto c = config(text, "seed_c");
    c.seed = 2;
    REQUIRE(run_quiet(a).exit_code == exit_ok);
    REQUIRE(run_quiet(b).exit_code == exit_ok);
    REQUIRE(run_quiet(c).exit_code == exit_ok);
    CHECK(slurp(a, "snapshots.csv") == slurp(b, "snapshots.csv"));
    CHECK(slurp(a, "snapshots.csv") != slurp(c, "snapshots.csv"));

    // out_dir is not part of the hash, the seed is.
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("generic table reader")
{
    std::stringstream io("a,b,c\n1,x,\n2.5,y,3\n");
    const auto t = read_table_csv(io);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.number(1, "a") == 2.5);
    CHECK(std::isnan(t.number(0, "c")));
    CHECK(t.text(1, "b") == "y");
    CHECK_THROWS_AS(t.number(0, "b"), DomainError);
    CHECK_THROWS_AS(t.column("d"), DomainError);
    std::stringstream ragged("a,b\n1\n");
    CHECK_THROWS_AS(read_table_csv(ragged), DomainError);
}
