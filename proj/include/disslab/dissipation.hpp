#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "disslab/fit.hpp"
#include "disslab/lattice.hpp"
#include "disslab/pulsed.hpp"

namespace disslab {

enum class TauMethod { exact_lattice, operator_norm, continuous };
std::string to_string(TauMethod m);

struct BoundCheck {
    std::string name;
    double nu = 0;
    bool satisfied = false;
    double margin = 0; // bound - measured, positive when satisfied
};

struct DissipationEntry {
    double nu = 0;
    double tau_d = 0;
    TauMethod method = TauMethod::exact_lattice;
};

struct DissipationReport {
    SpectralConvention conv;
    std::vector<DissipationEntry> entries;
    LinearFit fit; // tau_d against |ln nu|
    std::vector<BoundCheck> bound_checks;
};

// fills report.fit; needs two distinct nu
void fit_log_scaling(DissipationReport& report);
// tau_d <= 1/(nu lambda_1) + 1 at every entry
void add_trivial_checks(DissipationReport& report);
nlohmann::json report_to_json(const DissipationReport& report);
DissipationReport report_from_json(const nlohmann::json& j);

struct TauExact {
    int tau = 0;
    i128 min_sum = 0;    // min_k S_tau(k), lattice units
    Mode argmin;
    i128 prev_sum = 0;   // min_k S_{tau-1}(k), 0 when tau = 1
};

// smallest n with nu * lambda-weighted min_k S_n(k) > 1; strict, so a tie
// takes the next n.  reference = true uses the certified shell scan.
TauExact tau_d_exact(const ToralAutomorphism& T, double nu, const SpectralConvention& conv,
                     bool reference = false, bool parallel = false);

struct OperatorOptions {
    int restarts = 10;
    double tol = 1e-6;
    int max_iter = 4000;
    std::uint64_t seed = 1;
    double leak_tol = 1e-8;
    bool parallel = false;
};

struct TauOperator {
    int tau = 0;
    double norm_at_tau = 0;   // upper estimate of the tau-step norm
    double norm_before = 1;   // lower estimate of the (tau-1)-step norm
    double leak = 0;
    bool certified_by_schur = false;
    long long applications = 0;
};

TauOperator tau_d_operator(const TruncatedKoopman& U, double nu, const SpectralConvention& conv,
                           const OperatorOptions& opt = {});

// ln(||theta_n||^2 / ||theta_0||^2), n = 0..steps
std::vector<double> energy_log_ratio(const Trajectory& traj);
// worst case over theta_0: -2 nu lambda-factor min_k S_n(k), n = 0..steps
std::vector<double> worst_case_log_ratio(const ToralAutomorphism& T, double nu, const SpectralConvention& conv,
                                         int steps);

enum class DecayModel { double_exponential, single_exponential };
std::string to_string(DecayModel m);

struct DecayFit {
    double gamma_hat = 0;
    double c_hat = 0;  // ratio ~ exp(-(nu / c_hat) gamma_hat^n)
    int n_lo = 0, n_hi = 0;
    int points = 0;
    double residual = 0;
    double r2 = 0;
    double r2_single = 0; // ln(-ln ratio) against ln n
    DecayModel model = DecayModel::double_exponential;
};

struct DecayOptions {
    int n_lo = 2;
    int n_hi = -1; // -1: as far as the series goes
};

DecayFit fit_energy_decay(const std::vector<double>& log_ratio, double nu, const DecayOptions& opt = {});
DecayFit fit_energy_decay(const Trajectory& traj, const DecayOptions& opt = {});

struct ChainReport {
    bool ok = true;
    int violating_step = -1;
    std::string violated;  // "step-energy", "quotient-growth" or "summed"
    double worst_margin = 0;
    double gamma = 0;      // Lip^2
};

ChainReport check_lower_bound_chain(const Trajectory& traj, const ToralAutomorphism& T, double slack = 1e-9);

} // namespace disslab
