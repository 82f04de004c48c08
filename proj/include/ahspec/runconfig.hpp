#pragma once

#include "ahspec/identities.hpp"
#include "ahspec/spectral.hpp"

namespace ahspec {

// Run parameters shared by all subcommands.  Loaded from a key=value file
// (one pair per line, '#' comments, comma-separated lists) and overridable
// key by key; a canonical snapshot is written next to every run's outputs.
struct RunConfig {
    std::string model = "disk"; // disk | perturbed
    double t_min = 0.5, t_max = 12.0;
    int n_t = 256, n_theta = 32;
    int m_max = 8;

    // conformal factor of the perturbed model
    double perturb_center = 4.0, perturb_width = 2.5, perturb_amplitude = 0.05;

    std::uint64_t seed = 1;
    std::string only; // restrict verify to one named check
    std::string out = "out";

    // identity suite
    std::vector<int> grid_ladder{128, 256, 512};
    bool perturbed_suite = true;
    double tol_scale = 1.0;

    // quasimode scan
    std::vector<double> lambdas{0.25, 0.5, 1.0};
    std::vector<double> radii{2.0, 4.0, 8.0, 16.0};

    // spectral picture
    int count = 10;
    int n_lo = 2, n_hi = 6;
    bool with_scan = true;
};

// parse one `key = value` assignment into the config
void set_config_key(RunConfig& c, const std::string& key, const std::string& value);

RunConfig load_run_config(const std::string& path);

void validate_run_config(const RunConfig& c);

// canonical serialization, keys in fixed order; parses back to the same config
std::string config_snapshot(const RunConfig& c);

SurfaceModel build_model(const RunConfig& c);
LadderSetup ladder_setup(const RunConfig& c);
SpectralConfig spectral_config(const RunConfig& c);

} // namespace ahspec
