#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fbh/manifest.hpp"

namespace cli = fbh::cli;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}
}  // namespace

TEST_CASE("minimal manifest fills defaults") {
    const auto m = cli::parse_manifest(
        R"({"command":"solve","fractional":{"alpha":0.6,
            "nonlinearity":{"type":"cahn_hilliard"}},
            "grid":{"dim":1}})");
    CHECK(m.command == cli::Command::Solve);
    CHECK(m.alpha == 0.6);
    CHECK(m.grid.points_per_axis == 128);      // default filled
    CHECK(m.mesh_grading() == doctest::Approx(2.0 / 0.6));
}

TEST_CASE("validation errors name the violated invariant") {
    CHECK_THROWS_WITH_AS(
        cli::parse_manifest(
            R"({"command":"solve","fractional":{"alpha":0.6,
                "nonlinearity":{"type":"exp","m":1.5}}})"),
        doctest::Contains("m must satisfy m>2 or m=1"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        cli::parse_manifest(
            R"({"command":"solve","fractional":{"alpha":1.2}})"),
        doctest::Contains("alpha must lie in (0,1)"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        cli::parse_manifest(R"({"command":"solve","typo_key":1})"),
        doctest::Contains("unknown key 'typo_key'"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        cli::parse_manifest(R"({"command":"solve","grid":{"dim":1,"bad":2}})"),
        doctest::Contains("unknown key 'bad'"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_manifest("{not json"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_manifest(R"({"command":"fly"})"),
                    std::invalid_argument);
}

TEST_CASE("manifest round trip: parse(emit(m)) == m") {
    const auto m = cli::parse_manifest(
        R"({"command":"picard",
            "grid":{"dim":1,"points_per_axis":64,"half_length":12.0},
            "fractional":{"alpha":0.8,"nonlinearity":{"type":"cahn_hilliard"}},
            "time_mesh":{"T":1e-9,"steps":8},
            "picard":{"iterations":4,"E":0.05},
            "seed":7,"threads":2})");
    const auto m2 = cli::parse_manifest(cli::emit_manifest(m));
    CHECK(m == m2);
    CHECK(cli::emit_manifest(m) == cli::emit_manifest(m2));
}

TEST_CASE("exp nonlinearity round trip") {
    const auto m = cli::parse_manifest(
        R"({"command":"solve",
            "fractional":{"alpha":0.55,
              "nonlinearity":{"type":"exp","m":3.5,"kappa":0.7,"p":2.5,"L":0.4}}})");
    const auto m2 = cli::parse_manifest(cli::emit_manifest(m));
    CHECK(m == m2);
    const auto fp = m.fractional();
    const auto* e = std::get_if<fbh::solver::ExpType>(&fp.nonlinearity);
    REQUIRE(e != nullptr);
    CHECK(e->m == 3.5);
    CHECK(e->p_exp == 2.5);
}

TEST_CASE("solve run produces deterministic artifacts") {
    auto m = cli::parse_manifest(
        R"({"command":"solve",
            "grid":{"dim":1,"points_per_axis":64,"half_length":10.0},
            "fractional":{"alpha":0.6,"nonlinearity":{"type":"cahn_hilliard"}},
            "time_mesh":{"T":0.25,"steps":12},
            "initial":{"kind":"random","amplitude":0.05,"cutoff_frac":0.3},
            "seed":3})");
    const fs::path d1 = "/tmp/fbh_run_a", d2 = "/tmp/fbh_run_b";
    fs::remove_all(d1);
    fs::remove_all(d2);
    m.output_dir = d1.string();
    REQUIRE(cli::run(m) == cli::kExitOk);
    m.output_dir = d2.string();
    REQUIRE(cli::run(m) == cli::kExitOk);
    CHECK(slurp(d1 / "trace.csv") == slurp(d2 / "trace.csv"));
    CHECK(slurp(d1 / "state_final.fbh") == slurp(d2 / "state_final.fbh"));
    // resolved manifest differs only in output_dir
    CHECK(slurp(d1 / "trace.csv").size() > 0);
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("picard run writes the difference table with bound columns") {
    auto m = cli::parse_manifest(
        R"({"command":"picard",
            "grid":{"dim":1,"points_per_axis":64,"half_length":12.0},
            "fractional":{"alpha":0.8,"nonlinearity":{"type":"cahn_hilliard"}},
            "time_mesh":{"T":1e-9,"steps":8},
            "initial":{"kind":"gaussian","amplitude":0.05,"width":2.0},
            "picard":{"iterations":4,"E":0.05}})");
    const fs::path dir = "/tmp/fbh_picard_run";
    fs::remove_all(dir);
    m.output_dir = dir.string();
    REQUIRE(cli::run(m) == cli::kExitOk);
    const std::string csv = slurp(dir / "picard.csv");
    CHECK(csv.find("j,d_j,bound_j,envelope_j,iterate_sup") == 0);
    const std::string constants = slurp(dir / "constants.json");
    CHECK(constants.find("T0") != std::string::npos);
    CHECK(constants.find("C_alpha") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("blow-up exit code policy") {
    auto m = cli::parse_manifest(
        R"({"command":"solve",
            "grid":{"dim":1,"points_per_axis":64,"half_length":8.0},
            "fractional":{"alpha":0.6,
              "nonlinearity":{"type":"exp","m":3,"kappa":4.0,"p":2,"L":50.0}},
            "time_mesh":{"T":5.0,"steps":24},
            "initial":{"kind":"gaussian","amplitude":2.2,"width":1.5},
            "blow_up_threshold":1e4})");
    const fs::path dir = "/tmp/fbh_blowup_run";
    fs::remove_all(dir);
    m.output_dir = dir.string();
    CHECK(cli::run(m) == cli::kExitOk);  // blow-up is a reported outcome
    m.fail_on_blowup = true;
    CHECK(cli::run(m) == cli::kExitBlowUpForbidden);
    fs::remove_all(dir);
}
