#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <mcchan/io.hpp>

using Catch::Approx;
using mcchan::ChannelConfig;
using mcchan::ConfigError;

namespace {

const std::string kMinimal = R"({
  "mu_um2_per_s": 490.0,
  "L_um": 100.0,
  "k_per_s": 0.05,
  "mu_hat_um_per_s": 9.9
})";

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        lines.push_back(line);
    return lines;
}

std::vector<double> split_row(const std::string& line) {
    std::vector<double> vals;
    std::istringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ','))
        vals.push_back(std::stod(cell));
    return vals;
}

} // namespace

TEST_CASE("minimal config parses with sweep defaults", "[io]") {
    const ChannelConfig cfg = mcchan::parse_channel_config(kMinimal, "test");
    CHECK(cfg.mu == 490.0);
    CHECK(cfg.L == 100.0);
    CHECK(cfg.k == 0.05);
    CHECK(cfg.mu_hat == 9.9);
    CHECK(cfg.sweep.wmin == 1e-4);
    CHECK(cfg.sweep.wmax == 1e1);
    CHECK(cfg.sweep.points == 400);
    CHECK(!cfg.sim.has_value());
    CHECK(cfg.channel().L == 100.0);
    CHECK(cfg.membrane().k == 0.05);
}

TEST_CASE("sweep and sim blocks are honored", "[io]") {
    const std::string text = R"({
      "mu_um2_per_s": 490, "L_um": 100, "k_per_s": 0.05, "mu_hat_um_per_s": 9.9,
      "sweep": {"wmin": 1e-3, "wmax": 1.0, "points": 100},
      "sim": {"nx": 40, "dt": 0.002, "t_end": 400}
    })";
    const ChannelConfig cfg = mcchan::parse_channel_config(text, "test");
    CHECK(cfg.sweep.wmin == 1e-3);
    CHECK(cfg.sweep.wmax == 1.0);
    CHECK(cfg.sweep.points == 100);
    REQUIRE(cfg.sim.has_value());
    CHECK(cfg.sim->nx == 40);
    CHECK(cfg.sim->dt == 0.002);
    CHECK(cfg.sim->t_end == 400.0);
}

TEST_CASE("parse errors carry line and column", "[io]") {
    const std::string broken = "{\n  \"mu_um2_per_s\": 490,\n  \"L_um\": oops\n}";
    try {
        mcchan::parse_channel_config(broken, "cfg.json");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("cfg.json") != std::string::npos);
        CHECK(msg.find("line 3") != std::string::npos);
    }
}

TEST_CASE("validation errors name the offending field", "[io]") {
    auto expect_mentions = [](const std::string& text, const std::string& needle) {
        try {
            mcchan::parse_channel_config(text, "t");
            FAIL("expected ConfigError for " + needle);
        } catch (const ConfigError& e) {
            INFO(e.what());
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    expect_mentions(R"({"mu_um2_per_s": 490, "L_um": 100, "k_per_s": 0.05})",
                    "mu_hat_um_per_s");
    expect_mentions(
        R"({"mu_um2_per_s": -1, "L_um": 100, "k_per_s": 0.05, "mu_hat_um_per_s": 9.9})",
        "mu_um2_per_s");
    expect_mentions(
        R"({"mu_um2_per_s": 490, "L_um": "wide", "k_per_s": 0.05, "mu_hat_um_per_s": 9.9})",
        "L_um");
    expect_mentions(
        R"({"mu_um2_per_s": 490, "L_um": 100, "k_per_s": 0.05, "mu_hat_um_per_s": 9.9, "mu": 1})",
        "unknown field 'mu'");
    expect_mentions(R"({"mu_um2_per_s": 490, "L_um": 100, "k_per_s": 0.05,
                        "mu_hat_um_per_s": 9.9, "sweep": {"wmin": 1, "wmax": 0.5, "points": 10}})",
                    "sweep bounds");
    expect_mentions(R"({"mu_um2_per_s": 490, "L_um": 100, "k_per_s": 0.05,
                        "mu_hat_um_per_s": 9.9, "sim": {"nx": 8, "dt": 0.01, "t_end": 10}})",
                    "sim.nx");
    expect_mentions("[1, 2]", "object");
}

TEST_CASE("missing files are reported as config errors", "[io]") {
    REQUIRE_THROWS_AS(mcchan::load_channel_config("/nonexistent/path.json"), ConfigError);
}

TEST_CASE("nine significant digits in serialized numbers", "[io]") {
    CHECK(mcchan::format_sig9(0.20309683914010455) == "0.203096839");
    CHECK(mcchan::format_sig9(1e-4) == "0.0001");
    CHECK(mcchan::format_sig9(0.0) == "0");
    CHECK(mcchan::format_sig9(-6.0) == "-6");
    CHECK(mcchan::format_sig9(123456789.123) == "123456789");
}

TEST_CASE("sweep rows decompose and serialize deterministically", "[io]") {
    const mcchan::DiffusionChannel chan(490.0, 100.0);
    const mcchan::BoundaryLayer bl = mcchan::passive_boundary(mcchan::PassiveMembrane(0.05, 9.9));
    const mcchan::SweepSpec sweep{1e-4, 1e1, 25};

    const auto rows = mcchan::compute_sweep_rows(chan, bl, sweep);
    REQUIRE(rows.size() == 25);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        CHECK(std::abs(r.gain_db_channel - (r.gain_db_g1 + r.gain_db_gff + r.gain_db_gd)) <
              1e-9);
        if (i > 0)
            CHECK(r.omega > rows[i - 1].omega);
    }
    CHECK(std::abs(rows.front().gain_db_channel) < 0.1);

    std::ostringstream a, b;
    mcchan::write_bode_csv(a, rows);
    mcchan::write_bode_csv(b, mcchan::compute_sweep_rows(chan, bl, sweep));
    CHECK(a.str() == b.str());

    const auto lines = split_lines(a.str());
    REQUIRE(lines.size() == 26);
    CHECK(lines[0] == "omega_rad_s,gain_db_channel,gain_db_g1,gain_db_gff,gain_db_gd,"
                      "phase_deg_channel");
    CHECK(split_row(lines[1]).size() == 6);
    CHECK(split_row(lines[1])[0] == Approx(1e-4).epsilon(1e-9));
    CHECK(a.str().find('\r') == std::string::npos);
}

TEST_CASE("simulation series serialize with the documented header", "[io]") {
    const mcchan::DiffusionChannel chan(490.0, 100.0);
    const mcchan::PassiveMembrane mem(0.05, 9.9);
    const double dx = chan.L / 16;
    const mcchan::SimConfig cfg{chan, mem, 16,
                                mcchan::kStabilitySafety * dx * dx / (2.0 * chan.mu), 2.0,
                                mcchan::InputSignal::step(1.0)};
    const auto res = mcchan::simulate(cfg);

    std::ostringstream out;
    mcchan::write_sim_csv(out, res);
    const auto lines = split_lines(out.str());
    REQUIRE(lines.size() == res.times.size() + 1);
    CHECK(lines[0] == "t_s,v,u_L");
    const auto first = split_row(lines[1]);
    REQUIRE(first.size() == 3);
    CHECK(first[0] == 0.0);
    CHECK(first[1] == 0.0);
    CHECK(first[2] == 0.0);
}
