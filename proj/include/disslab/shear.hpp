#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "disslab/spectral.hpp"

namespace disslab {

/// Shear profile v(y) = mean + sum_j a_j cos(2 pi j y) + b_j sin(2 pi j y).
class ShearFlow {
public:
    ShearFlow() = default;
    ShearFlow(double mean, std::vector<double> a, std::vector<double> b);
    static ShearFlow sine();   // sin(2 pi y)
    static ShearFlow zero();
    // "sin", "zero" or "coeffs:mean,a1,b1,a2,b2,..."
    static ShearFlow parse(const std::string& spec);

    double v(double y) const;
    double dv(double y) const;
    double d2v(double y) const;
    int bandwidth() const { return static_cast<int>(a_.size()); }
    double grad_norm() const { return grad_; } // sup |v'|
    bool nondegenerate_critical_points() const { return nondeg_; }

private:
    void finish();

    double mean_ = 0;
    std::vector<double> a_, b_;
    double grad_ = 0;
    bool nondeg_ = true;
};

struct CtsGrid {
    int k1max = 16;
    int M = 64;
    bool include_zero_band = false; // only for trivial-bound tests
};

/// Band-major values theta_k1(y_j); band b has wavenumber wavenumbers()[b].
struct CtsState {
    std::vector<cplx> data;
    double t = 0;
};

class CtsSolver {
public:
    CtsSolver(const ShearFlow& flow, double nu, CtsGrid grid, SpectralConvention conv = {2, Scaling::geometric});

    int bands() const { return static_cast<int>(k1_.size()); }
    int M() const { return grid_.M; }
    double nu() const { return nu_; }
    const std::vector<int>& wavenumbers() const { return k1_; }
    const ShearFlow& flow() const { return flow_; }
    const SpectralConvention& convention() const { return conv_; }
    double lambda1() const; // smallest eigenvalue in the truncated space

    CtsState zero_state() const;
    // amp exp(2 pi i (k1 x + m y))
    CtsState band_state(int k1, int m, cplx amp = 1.0) const;
    CtsState random_state(std::uint64_t seed) const;

    // Strang steps up to time t with the largest step <= dt that divides t.
    // adjoint = true runs the same splitting with -v.
    void advance_serial(CtsState& s, double t, double dt, bool adjoint = false) const;
    void advance_omp(CtsState& s, double t, double dt, bool adjoint = false) const;

    // exact nu = 0 transport: theta_k1(y) exp(-2 pi i k1 v(y) t)
    CtsState transport(const CtsState& s, double t) const;

    double energy(const CtsState& s) const; // (1/M) sum |theta|^2
    double h1_sq(const CtsState& s) const;  // sum lambda |coefficient|^2

    // M x M propagator of band b over time t (same splitting)
    Eigen::MatrixXcd band_propagator(int b, double t, double dt, bool adjoint = false) const;

private:
    struct Plan;
    struct Tables;
    Tables tables(double h, bool adjoint) const;
    void band_run(const Tables& tb, int b, cplx* x, int n) const;

    ShearFlow flow_;
    double nu_;
    CtsGrid grid_;
    SpectralConvention conv_;
    std::vector<int> k1_;
    std::shared_ptr<Plan> plan_;
};

struct CtsOptions {
    double dt = 0.1;
    int restarts = 5;
    int min_iter = 8;
    int max_iter = 400;
    double tol = 1e-6;
    double rel_t = 0.01; // bisection stops at this relative bracket width
    double t0 = 0.5;
    std::uint64_t seed = 1;
    bool check_range = true; // nu in [1e-4, 1e-1], k1max <= 32, M <= 128
};

struct CtsTau {
    double tau = 0;      // upper end of the final bracket
    double t_below = 0;  // lower end, norm still >= 1/e there
    double norm_at_tau = 0;
    int evaluations = 0;
};

// power-iteration estimate of the time-t solution operator norm
double cts_norm(const CtsSolver& s, double t, const CtsOptions& opt);
// the same from singular values of every band propagator
double cts_norm_svd(const CtsSolver& s, double t, double dt);

CtsTau tau_d_cts(const ShearFlow& flow, double nu, const CtsGrid& grid, const CtsOptions& opt = {},
                 const SpectralConvention& conv = {2, Scaling::geometric});

struct TransportGap {
    double gap2 = 0;
    double bound = 0;
};
TransportGap transport_gap_cts(const CtsState& theta0, const CtsSolver& s, double t, double dt);

// max over steps of |dE/dt + nu (|theta_n|_1^2 + |theta_{n+1}|_1^2)| / (nu |theta_n|_1^2)
double energy_identity_residual(const CtsSolver& s, CtsState st, double dt, int steps);

// |int exp(-2 pi i v(y) t) dy|, the k1 = 1 self-correlation of the transport
double shear_correlation(const ShearFlow& flow, double t);
struct CorrelationFit {
    double exponent = 0; // envelope ~ t^-exponent
    double r2 = 0;
};
// running sup from the right of |correlation|, fitted on log-log over [t_lo, t_hi]
CorrelationFit shear_correlation_exponent(const ShearFlow& flow, double t_lo, double t_hi, int samples = 2000);

} // namespace disslab
