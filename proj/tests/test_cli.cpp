#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pumped/commands.hpp"
#include "pumped/config.hpp"
#include "test_support.hpp"

using namespace pumped;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t k = 0; k < header.size(); ++k)
            if (header[k] == name) return k;
        FAIL("missing column ", name);
        return 0;
    }
};

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::istringstream in(text);
    std::string line;
    REQUIRE(std::getline(in, line));
    std::istringstream hs(line);
    std::string field;
    while (std::getline(hs, field, ',')) csv.header.push_back(field);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream rs(line);
        while (std::getline(rs, field, ','))
            row.push_back(field.empty() ? std::nan("") : std::stod(field));
        REQUIRE(row.size() == csv.header.size());
        csv.rows.push_back(std::move(row));
    }
    return csv;
}

RunConfig case_config(int case_id, const std::string& out_dir) {
    RunConfig config = load_config(std::string(PUMPED_SOURCE_DIR) + "/configs/case" +
                                   std::to_string(case_id) + ".conf");
    config.out_dir = out_dir;
    return config;
}

std::string fresh_dir(const std::string& name) {
    const std::string dir = (std::filesystem::temp_directory_path() / name).string();
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("run command writes the expected tables for case 1") {
    const std::string dir = fresh_dir("pumped_cli_case1");
    std::ostringstream out, err;
    const int code = cmd_run(case_config(1, dir), out, err);
    CHECK(code == kExitOk);
    CHECK(err.str().empty());

    const Csv traj = parse_csv(slurp(dir + "/trajectory.csv"));
    const std::size_t t_col = traj.column("t");
    const std::size_t total_col = traj.column("total_population");
    const std::size_t p11 = traj.column("rho_1_1_re");
    const std::size_t p22 = traj.column("rho_2_2_re");
    const std::size_t c_abs = traj.column("abs_coherence_1_2");
    REQUIRE(traj.rows.size() == 2001);

    // total population rises monotonically to Tr rho0 = 2.0625
    double prev = -1.0;
    for (const auto& row : traj.rows) {
        CHECK(row[total_col] >= prev);
        prev = row[total_col];
        // coherence bounded by the population geometric mean
        CHECK(row[c_abs] <= std::sqrt(std::max(row[p11], 0.0) * std::max(row[p22], 0.0)) + 1e-6);
    }
    CHECK(traj.rows.front()[t_col] == 0.0);
    CHECK(traj.rows.back()[t_col] == 20.0);
    CHECK(std::abs(traj.rows.back()[total_col] - 2.0625) <= 1e-4);

    // normalized Lyapunov curve: starts at 1, never increases, ends near 0
    const Csv lyap = parse_csv(slurp(dir + "/lyapunov.csv"));
    const std::size_t m_col = lyap.column("m_omega_normalized");
    CHECK(lyap.rows.front()[m_col] == 1.0);
    double prev_m = INFINITY;
    for (const auto& row : lyap.rows) {
        CHECK(row[m_col] <= prev_m + 1e-10);
        prev_m = row[m_col];
    }
    CHECK(lyap.rows.back()[m_col] <= 1e-6);

    // the two methods agree
    const Csv delta = parse_csv(slurp(dir + "/method_delta.csv"));
    const std::size_t d_col = delta.column("max_abs_delta");
    for (const auto& row : delta.rows) CHECK(row[d_col] <= 1e-6);
}

TEST_CASE("run output is byte-for-byte reproducible") {
    const std::string dir1 = fresh_dir("pumped_cli_rep1");
    const std::string dir2 = fresh_dir("pumped_cli_rep2");
    std::ostringstream out, err;
    REQUIRE(cmd_run(case_config(2, dir1), out, err) == kExitOk);
    REQUIRE(cmd_run(case_config(2, dir2), out, err) == kExitOk);
    for (const char* name : {"trajectory.csv", "lyapunov.csv", "method_delta.csv"})
        CHECK(slurp(dir1 + "/" + name) == slurp(dir2 + "/" + name));
}

TEST_CASE("normalized Lyapunov curve decays for every bundled case") {
    for (int case_id = 1; case_id <= 4; ++case_id) {
        const std::string dir = fresh_dir("pumped_cli_fig2_" + std::to_string(case_id));
        std::ostringstream out, err;
        REQUIRE(cmd_run(case_config(case_id, dir), out, err) == kExitOk);
        const Csv lyap = parse_csv(slurp(dir + "/lyapunov.csv"));
        const std::size_t m_col = lyap.column("m_omega_normalized");
        CHECK(lyap.rows.front()[m_col] == 1.0);
        double prev_m = INFINITY;
        for (const auto& row : lyap.rows) {
            CHECK(row[m_col] <= prev_m + 1e-10);
            prev_m = row[m_col];
        }
        CHECK(lyap.rows.back()[m_col] <= 1e-6);
    }
}

TEST_CASE("starting at the steady state yields a flat run") {
    // case 3 has rho0 = diag(1, 1)
    RunConfig config = case_config(3, fresh_dir("pumped_cli_flat"));
    config.rho_init = ComplexMatrix::identity(2);
    std::ostringstream out, err;
    REQUIRE(cmd_run(config, out, err) == kExitOk);

    const Csv traj = parse_csv(slurp(config.out_dir + "/trajectory.csv"));
    const std::size_t total_col = traj.column("total_population");
    for (const auto& row : traj.rows)
        CHECK(std::abs(row[total_col] - 2.0) <= 1e-9);

    const Csv lyap = parse_csv(slurp(config.out_dir + "/lyapunov.csv"));
    const std::size_t m_col = lyap.column("m_omega_normalized");
    for (const auto& row : lyap.rows) CHECK(row[m_col] == 0.0);
}

TEST_CASE("spectrum command prints diagnostics and flags bad spectra") {
    std::ostringstream out, err;
    const int code = cmd_spectrum(case_config(2, "."), out, err);
    CHECK(code == kExitOk);
    const std::string text = out.str();
    CHECK(text.find("eigenvalues:") != std::string::npos);
    CHECK(text.find("4.09449778") != std::string::npos);  // reference value 4.0945
    CHECK(text.find("1.3125") != std::string::npos);
    CHECK(text.find("similarity residual") != std::string::npos);
    CHECK(text.find("[pass]") != std::string::npos);

    // closed level with pumping: a zero eigenvalue ends the analysis
    RunConfig trapped = case_config(1, ".");
    trapped.two_level->coupling = 0.0;
    trapped.model = to_model(*trapped.two_level);
    std::ostringstream out2, err2;
    CHECK(cmd_spectrum(trapped, out2, err2) == kExitNumeric);
    CHECK(err2.str().find("non-decaying") != std::string::npos);
}

TEST_CASE("sweep over the coupling") {
    SUBCASE("balanced pumping keeps the difference at zero") {
        RunConfig config = case_config(3, fresh_dir("pumped_cli_sweep3"));
        std::ostringstream out, err;
        REQUIRE(cmd_sweep(config, "coupling_v", 0.0, 50.0, 6, out, err) == kExitOk);
        const Csv sweep = parse_csv(slurp(config.out_dir + "/sweep.csv"));
        const std::size_t solve_col = sweep.column("population_difference_solve");
        const std::size_t dev_col = sweep.column("abs_deviation");
        REQUIRE(sweep.rows.size() == 6);
        for (const auto& row : sweep.rows) {
            CHECK(std::abs(row[solve_col]) <= 1e-12);
            CHECK(row[dev_col] <= 1e-10);
        }
    }
    SUBCASE("unbalanced pumping decays toward zero with V") {
        RunConfig config = case_config(3, fresh_dir("pumped_cli_sweepv"));
        config.two_level->pump_1 = 0.2;  // Lambda_2/Gamma_2 != Lambda_1/Gamma_1
        config.model = to_model(*config.two_level);
        std::ostringstream out, err;
        REQUIRE(cmd_sweep(config, "coupling_v", 0.01, 50.0, 8, out, err) == kExitOk);
        const Csv sweep = parse_csv(slurp(config.out_dir + "/sweep.csv"));
        const std::size_t solve_col = sweep.column("population_difference_solve");
        for (std::size_t k = 0; k + 1 < sweep.rows.size(); ++k)
            CHECK(sweep.rows[k + 1][solve_col] <= sweep.rows[k][solve_col] + 1e-12);
        CHECK(sweep.rows.front()[solve_col] > 0.1);
        CHECK(sweep.rows.back()[solve_col] <= 1e-3);
    }
    SUBCASE("growing decoherence restores the pumping balance") {
        RunConfig config = case_config(3, fresh_dir("pumped_cli_sweepg"));
        config.two_level->pump_1 = 0.2;
        config.model = to_model(*config.two_level);
        std::ostringstream out, err;
        // the Lorentzian suppression decays only as 1/gamma, so the grid must
        // reach far out to sit within 1e-2 of the uncoupled balance 0.8
        REQUIRE(cmd_sweep(config, "coherence_decay", 1.0, 20000.0, 8, out, err) == kExitOk);
        const Csv sweep = parse_csv(slurp(config.out_dir + "/sweep.csv"));
        const std::size_t solve_col = sweep.column("population_difference_solve");
        for (std::size_t k = 0; k + 1 < sweep.rows.size(); ++k)
            CHECK(sweep.rows[k + 1][solve_col] >= sweep.rows[k][solve_col] - 1e-12);
        const double limit = 1.0 / 1.0 - 0.2 / 1.0;
        CHECK(std::abs(sweep.rows.back()[solve_col] - limit) <= 1e-2);
    }
    SUBCASE("unknown parameter name") {
        RunConfig config = case_config(3, ".");
        std::ostringstream out, err;
        CHECK(cmd_sweep(config, "bogus", 0.0, 1.0, 2, out, err) == kExitConfig);
    }
}

TEST_CASE("ensemble-verify command") {
    SUBCASE("case 1 is in the representable class and passes") {
        std::ostringstream out, err;
        CHECK(cmd_ensemble_verify(case_config(1, "."), 1e-3, out, err) == kExitOk);
        CHECK(out.str().find("PASS") != std::string::npos);
    }
    SUBCASE("extra dephasing is rejected as unsupported") {
        RunConfig config = case_config(1, ".");
        config.two_level->coherence_decay = 0.9;
        config.model = to_model(*config.two_level);
        std::ostringstream out, err;
        CHECK(cmd_ensemble_verify(config, 1e-3, out, err) == kExitValidation);
        CHECK(err.str().find("dephasing") != std::string::npos);
    }
    SUBCASE("zero pump with zero rate passes trivially") {
        RunConfig config = case_config(3, ".");
        config.two_level->pump_1 = config.two_level->pump_2 = 0.0;
        config.model = to_model(*config.two_level);
        std::ostringstream out, err;
        CHECK(cmd_ensemble_verify(config, 1e-3, out, err) == kExitOk);
    }
}

TEST_CASE("fixtures command passes and prints the table") {
    std::ostringstream out, err;
    CHECK(cmd_fixtures(out, err) == kExitOk);
    const std::string text = out.str();
    for (const char* needle : {"case 1", "case 4", "1.0625", "11.1803", "PASS"})
        CHECK(text.find(needle) != std::string::npos);
    CHECK(text.find("FAIL") == std::string::npos);
}

TEST_CASE("number formatting is stable") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(2.0625) == "2.0625");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(1e-17) == "1e-17");
}
