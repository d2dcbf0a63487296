#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "disslab/bounds.hpp"
#include "disslab/dissipation.hpp"
#include "disslab/mixing.hpp"
#include "disslab/toral.hpp"

namespace disslab {

// full command line; returns the process exit code (0, 1 on a failed verify, 2, 3)
int run_cli(int argc, const char* const* argv);

std::shared_ptr<const ToralAutomorphism> parse_automorphism(const std::string& spec);

// exponential rate fitted to the strong envelope on n = 1..n_max and
// shifted to dominate every sample
RateFunction fitted_strong_rate(const ToralAutomorphism& T, double alpha, double beta, int n_max,
                                const SpectralConvention& conv = {});

// truncation radius that keeps the one-step leak below leak_tol
int operator_radius(double nu, const SpectralConvention& conv, double leak_tol = 1e-8);

// tau_d at every nu, cells run on `jobs` threads, merged in grid order
DissipationReport dissipation_sweep(const ToralAutomorphism& T, const std::vector<double>& nus, TauMethod method,
                                    const SpectralConvention& conv, int jobs, std::uint64_t seed = 1);

// random-field battery for the energy identity and its relatives
struct IdentityBattery {
    long long checks = 0;
    double max_energy_residual = 0; // relative to ||theta_m||^2
    long long sandwich_failures = 0;
    long long gap_failures = 0;
    long long chain_failures = 0;
    std::string first_chain_failure;
};
IdentityBattery identity_battery(const ToralAutomorphism& T, int fields, int steps, const std::vector<double>& nus,
                                 std::uint64_t seed, const SpectralConvention& conv = {});

// every SL_2(Z) matrix with entries in [-r, r]
struct KroneckerScan {
    long long matrices = 0;
    long long in_disk = 0;       // all characteristic roots in the closed unit disk
    long long misclassified = 0;
};
KroneckerScan kronecker_scan_sl2(int r);

struct VerifyRow {
    std::string check;
    bool pass = false;
    std::string detail;
};
struct VerifyOptions {
    std::string matrix = "2,1,1,1";
    std::string report;  // bounds suite: check this report instead of a fresh one
    std::uint64_t seed = 1;
    int jobs = 1;
};
std::vector<VerifyRow> verify_suite(const std::string& suite, const VerifyOptions& opt);

} // namespace disslab
