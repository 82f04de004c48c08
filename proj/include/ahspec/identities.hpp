#pragma once

#include "ahspec/decompose.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ahspec {

struct LadderFit {
    std::vector<double> h;
    std::vector<double> residual;
    double order = 0.0; // observed order from the finest grid pair
};

struct IdentityReport {
    std::string name;
    bool pass = false;
    double order = 0.0;     // observed convergence order (0 when not applicable)
    double value = 0.0;     // headline number (finest residual or worst quotient)
    double threshold = 0.0; // pass bound on value
    LadderFit ladder;
    std::string detail;
};

// Grid ladder used by the identity checks.  `perturbed` switches on a radial
// conformal factor so curvature-gradient terms are active; checks that require
// constant curvature ignore it.
struct LadderSetup {
    double t_min = 0.5;
    double t_max = 8.0;
    int n_theta = 16;
    std::vector<int> rungs = {128, 256, 512};
    bool perturbed = true;
    double tol_scale = 1.0; // multiplies the residual thresholds
};

// Structural operator identities, each validated on a grid ladder with a
// deliberately broken variant available as negative control (sabotage=true
// must NOT pass).
IdentityReport check_div_lring(std::uint64_t seed, bool sabotage = false,
                               const LadderSetup& setup = {});
IdentityReport check_commutator_div(std::uint64_t seed, bool sabotage = false,
                                    const LadderSetup& setup = {});
IdentityReport check_commutator_killing(std::uint64_t seed, bool sabotage = false,
                                        const LadderSetup& setup = {});
IdentityReport check_weitzenbock(std::uint64_t seed, bool sabotage = false,
                                 const LadderSetup& setup = {});
IdentityReport check_norm_identity(std::uint64_t seed, bool sabotage = false,
                                   const LadderSetup& setup = {});
IdentityReport check_tt_characterization(std::uint64_t seed, bool sabotage = false,
                                         const LadderSetup& setup = {});
IdentityReport check_energy_inequalities(std::uint64_t seed, bool sabotage = false,
                                         const LadderSetup& setup = {});

std::vector<IdentityReport> run_identity_suite(std::uint64_t seed,
                                               const LadderSetup& setup = {});

void write_identity_reports_json(const std::string& path,
                                 const std::vector<IdentityReport>& reports);
void write_identity_reports_csv(const std::string& path,
                                const std::vector<IdentityReport>& reports);

} // namespace ahspec
