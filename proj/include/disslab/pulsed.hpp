#pragma once

#include <memory>
#include <vector>

#include "disslab/kernels.hpp"
#include "disslab/spectral.hpp"
#include "disslab/toral.hpp"

namespace disslab {

struct PulsedSystem {
    std::shared_ptr<const ToralAutomorphism> T;
    double nu = 0;
    SpectralConvention conv;
    bool allow_zero_nu = false; // nu = 0 gives the bare relabeling

    PulsedSystem(std::shared_ptr<const ToralAutomorphism> t, double nu, SpectralConvention c,
                 bool allow_zero = false);
};

/// All four scalar series are stored as logarithms; energy(m) etc. are
/// convenience exponentials and may underflow for long runs.
struct Trajectory {
    double nu = 0;
    SpectralConvention conv;
    std::vector<SpectralField> fields;  // empty unless kept
    std::vector<double> log_energy;     // ln ||theta_m||^2
    std::vector<double> log_h1;         // ln ||theta_m||_1^2
    std::vector<double> log_h1_pushed;  // ln ||U theta_m||_1^2
    std::vector<double> log_e_nu;       // ln E_nu theta_m
    // step-local versions, free of the cancellation in differences of the
    // absolute logs above (those reach 1e9 in long runs)
    std::vector<double> log_step;       // ln ||theta_{m+1}||^2 / ||theta_m||^2, m < steps
    std::vector<double> log_h1_rel;     // ln ||theta_m||_1^2 / ||theta_m||^2
    std::vector<double> log_pushed_rel; // ln ||U theta_m||_1^2 / ||theta_m||^2
    std::vector<double> log_e_nu_rel;   // ln E_nu theta_m / ||theta_m||^2

    int steps() const { return static_cast<int>(log_energy.size()) - 1; }
    double energy(int m) const;
    double h1(int m) const;
    double e_nu(int m) const;
};

SpectralField step(const SpectralField& theta, const PulsedSystem& sys);
Trajectory evolve(const SpectralField& theta0, const PulsedSystem& sys, int n, bool keep_fields = false);

struct GapResult {
    double gap = 0;
    double bound = 0;
};

GapResult inviscid_gap(const SpectralField& theta0, const PulsedSystem& sys, int n);

/// Koopman matrix restricted to the ball |k| <= K.  Columns are input
/// modes; a column whose image leaves the ball is zero (partial isometry).
class TruncatedKoopman {
public:
    struct Entry {
        Mode row, col;
        cplx value;
    };

    static TruncatedKoopman from_automorphism(const ToralAutomorphism& T, int K);
    static TruncatedKoopman identity(int d, int K);
    static TruncatedKoopman from_entries(int d, int K, const std::vector<Entry>& entries);
    static TruncatedKoopman from_json(const nlohmann::json& j);

    int dim() const { return d_; }
    int radius() const { return K_; }
    int size() const { return static_cast<int>(modes_.size()); }
    const std::vector<Mode>& modes() const { return modes_; }
    int index_of(const Mode& k) const; // -1 when outside the ball

    const CsrMatrix& forward() const { return fwd_; }  // rows = output modes
    const CsrMatrix& adjoint() const { return adj_; }

    // |U^*U - diag(column norms^2)| off-diagonal and max column norm^2 - 1
    double isometry_defect() const;
    // per input mode, squared norm that the truncation drops
    const std::vector<double>& column_deficit() const { return deficit_; }

    // largest mass that can leave the ball in one step, after damping
    double leak_bound(double nu, const SpectralConvention& conv) const;

    SpectralField step(const SpectralField& theta, double nu, const SpectralConvention& conv) const;

private:
    void build(const std::vector<Entry>& entries);

    int d_ = 2, K_ = 0;
    std::vector<Mode> modes_;
    CsrMatrix fwd_, adj_;
    std::vector<double> deficit_;
};

} // namespace disslab
