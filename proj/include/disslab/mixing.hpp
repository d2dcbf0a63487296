#pragma once

#include <string>
#include <vector>

#include "disslab/lattice.hpp"
#include "disslab/spectral.hpp"
#include "disslab/toral.hpp"

namespace disslab {

enum class MixMode { strong, weak };

/// Mixing rate h(t): c t^-p, c1 exp(-c2 t), or a decreasing table
/// (interpolated linearly in ln h).
struct RateFunction {
    enum class Kind { power, exponential, tabulated } kind = Kind::power;
    double c = 1, p = 1;    // power
    double c1 = 1, c2 = 1;  // exponential
    std::vector<double> t, h;
    double alpha = 1, beta = 1;
    MixMode mode = MixMode::strong;

    static RateFunction power(double c, double p, double alpha = 1, double beta = 1);
    static RateFunction exponential(double c1, double c2, double alpha = 1, double beta = 1);
    static RateFunction tabulated(std::vector<double> t, std::vector<double> h, double alpha = 1, double beta = 1);
    // "power:c,p", "exp:c1,c2" or "file:path" (two columns t h, '#' comments)
    static RateFunction parse(const std::string& spec, double alpha, double beta);

    double operator()(double t) const;
    // the t with h(t) = y (h is strictly decreasing)
    double inverse(double y) const;
    void validate() const; // throws ValidationError
    std::string str() const;
};

struct MixingEnvelope {
    double alpha = 0, beta = 0;
    std::vector<int> n;
    std::vector<double> value;
    std::vector<double> tail_cert;
    std::vector<Mode> argmin;
    RateFunction fitted;
    bool has_fit = false;
};

// e(n) = sup_k lambda(B^n k)^{-alpha/2} lambda(k)^{-beta/2}, n = 0..n_max.
// The minimum behind each sup is certified by lattice enumeration; eps is
// the relative accuracy asked for and must be at least 1e-9.
MixingEnvelope strong_envelope(const ToralAutomorphism& T, double alpha, double beta, int n_max,
                               double eps = 1e-6, const SpectralConvention& conv = {});

// same sup from the two-disk scan; min(|B^n k|, |k|)^2 <= product, so the
// radius sqrt(incumbent) is already a certificate
double strong_envelope_reference(const ToralAutomorphism& T, double alpha, double beta, int n, bool parallel,
                                 Mode* argmin = nullptr, const SpectralConvention& conv = {});

// <U^k f, g>, k = 0..n-1
std::vector<cplx> correlations(const ToralAutomorphism& T, const SpectralField& f, const SpectralField& g, int n);
// ((1/n) sum_{k<n} |<U^k f, g>|^2)^{1/2}
double weak_cesaro(const ToralAutomorphism& T, const SpectralField& f, const SpectralField& g, int n);
// the same for every prefix length 1..n
std::vector<double> weak_cesaro_series(const ToralAutomorphism& T, const SpectralField& f, const SpectralField& g,
                                       int n);

// alpha = 0 weak rate majorant for maps without periodic nonzero modes:
// h(n)^2 = 2 min_L [ (1/n) sum_{lambda_k <= L} lambda_k^-beta + L^-beta ]
double weak_majorant(double beta, long long n, const SpectralConvention& conv = {});
struct ExponentFit {
    double exponent = 0; // h ~ n^-exponent
    double r2 = 0;
};
ExponentFit weak_majorant_exponent(double beta, long long n_lo, long long n_hi, int points,
                                   const SpectralConvention& conv = {});

// power vs exponential by RMS residual of ln h.  dominate shifts the
// intercept so the fitted rate is >= every sample.
RateFunction fit_rate(const std::vector<double>& t, const std::vector<double>& h, bool dominate = false,
                      double alpha = 1, double beta = 1);

struct TransferExponents {
    double gamma = 0;
    double delta = 1;
};
TransferExponents transfer_exponents(double alpha, double beta, double alpha2, double beta2);
// strong (alpha, beta) rate h -> strong (alpha2, beta2) rate lambda1^-gamma h^delta
RateFunction transfer_rate(const RateFunction& h, double alpha2, double beta2, double lambda1);

} // namespace disslab
