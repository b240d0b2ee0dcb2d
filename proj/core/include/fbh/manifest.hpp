#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fbh/kernels.hpp"
#include "fbh/solver.hpp"

namespace fbh::cli {

enum class Command { Solve, Picard, Kernel, Orlicz, Specfun, Verify };

std::string command_name(Command c);
Command parse_command(const std::string& name);

struct GridSpec {
    int dim = 1;
    int points_per_axis = 128;
    double half_length = 12.0;
};

struct InitialSpec {
    std::string kind = "gaussian";  // gaussian|random|zero|indicator|snapshot
    double amplitude = 0.05;
    double width = 2.0;        // gaussian
    double cutoff_frac = 0.25; // random
    double extent = 1.0;       // indicator
    std::string path;          // snapshot
};

struct MeshSpec {
    double T = 1.0;
    int steps = 32;
    std::optional<double> grading;  // default max(1, 2/alpha)
};

struct PicardSpec {
    int iterations = 6;
    double E = 0.05;
};

struct KernelSpecCli {
    std::string which = "K1";
    int k = 0;
    double t = 0.5;
    double nyquist_tol = 1e-12;
};

struct OrliczSpec {
    double h = 2.0;
    std::vector<double> t_samples{0.05, 0.1, 0.5, 1.0};
};

struct SpecfunSpec {
    std::string op = "mittag_leffler_neg";
    double alpha = 0.5;
    double beta = 1.0;
    double x = 1.0;
    double zeta = 1.0;
    double theta = 0.5;
};

struct VerifySpec {
    std::string suite = "default";
    int orlicz_seeds = 100;
    std::vector<int> dims{1, 2};
    std::vector<double> alphas{0.4, 0.6, 0.8};
    int points_1d = 256;
    int points_2d = 128;
};

struct RunManifest {
    Command command = Command::Solve;
    GridSpec grid;
    double alpha = 0.6;
    std::string nonlinearity = "cahn_hilliard";  // or "exp"
    solver::ExpType exp_params;
    MeshSpec mesh;
    InitialSpec initial;
    std::string output_dir = "out";
    std::uint64_t seed = 1;
    int threads = 1;
    double blow_up_threshold = 1e6;
    bool fail_on_blowup = false;
    double trace_p = 4.0;
    double orlicz_p = 2.0;
    std::vector<int> snapshot_nodes;
    PicardSpec picard;
    KernelSpecCli kernel;
    OrliczSpec orlicz;
    SpecfunSpec specfun;
    VerifySpec verify;

    solver::FractionalParams fractional() const;
    double mesh_grading() const;
};

/// Parse and validate a manifest from JSON text. Unknown keys are rejected
/// with their path; invariant violations name the violated constraint.
RunManifest parse_manifest(const std::string& json_text);
RunManifest parse_manifest_file(const std::string& path);

/// Serialize with every default made explicit; parse(emit(m)) == m.
std::string emit_manifest(const RunManifest& m);

bool operator==(const RunManifest& a, const RunManifest& b);

// exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitVerifyFailed = 4;
inline constexpr int kExitBlowUpForbidden = 5;

/// Execute the manifest, writing artifacts into output_dir.
int run(const RunManifest& m);

}  // namespace fbh::cli
