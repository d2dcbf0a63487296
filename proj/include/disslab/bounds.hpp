#pragma once

#include <string>
#include <vector>

#include "disslab/dissipation.hpp"
#include "disslab/mixing.hpp"
#include "disslab/spectral.hpp"

namespace disslab {

enum class Which { H1, H2, H3, H4 };
std::string to_string(Which w);
Which which_from_string(const std::string& s);

// c~ with N(lambda) ~ c~ lambda^{d/2}; geometric is vol/((4 pi)^{d/2} Gamma(d/2+1)),
// lattice is the ball volume pi^{d/2}/Gamma(d/2+1); both times (1 + eps)
double weyl_constant(int d, double vol, double eps, Scaling s = Scaling::geometric);

struct BoundPoint {
    double nu = 0;
    double H = 0;
    double bound = 0; // C / (nu H)
    bool degenerate = false;
};

struct BoundProfile {
    Which which = Which::H1;
    RateFunction rate;
    double grad_u = 0; // H3/H4
    double weyl_c = 0; // H2/H4
    double universal_C = 34;
    SpectralConvention conv;
    std::vector<BoundPoint> points;

    // 34 for the discrete bounds, 18 for the continuous ones
    static BoundProfile make(Which w, const RateFunction& rate, const SpectralConvention& conv,
                             double grad_u = 0, double weyl_c = 0);
};

struct HValue {
    double H = 0;
    bool degenerate = false; // nothing feasible above lambda_1
};

HValue eval_H(const BoundProfile& profile, double nu);
// evaluates eval_H on every nu and stores the points
void evaluate(BoundProfile& profile, const std::vector<double>& nus);

// closed forms for power-law h = c t^-p
double h1_power_closed_form(double c, double p, double alpha, double beta, double nu);
double h2_power_closed_form(double c, double p, double alpha, double beta, int d, double weyl_c, double nu);

// exponential-law H1 brackets from iterating H = f(H),
// f(x) = c2^2/(4 nu) (ln 2 c1 + (alpha+beta)/2 ln x)^-2 starting at lambda_1
struct H1ExpIterates {
    double upper0 = 0, lower0 = 0, upper1 = 0, lower1 = 0;
};
H1ExpIterates h1_exponential_iterates(double c1, double c2, double alpha, double beta, double nu,
                                      double lambda1 = 1.0);

enum class Corollary {
    strong_power,      // pulsed, strong, h = c t^-p
    weak_power,        // pulsed, weak, p in (0, 1/2]
    cts_strong_power,  // continuous, strong, power law
    cts_strong_exp,    // continuous, strong, exponential
    cts_weak_power,    // continuous, weak, power law
    eigen_floor_exp    // principal eigenvalue floor, exponential rate
};

struct CorollaryParams {
    double alpha = 1, beta = 1, p = 1;
    int d = 2;
    double c2 = 1;
    double grad_u = 1;
};

double corollary_exponent(Corollary c, const CorollaryParams& q);

std::string bound_name(Which w);
// tau_d <= C / (nu H(nu)) at every report entry; appends to report.bound_checks
std::vector<BoundCheck> check_bound(DissipationReport& report, const BoundProfile& profile);

// 1 / tau_d
double eigenvalue_floor(double tau_d);

} // namespace disslab
