#include "disslab/bounds.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "disslab/error.hpp"

namespace disslab {

std::string to_string(Which w)
{
    switch (w) {
    case Which::H1: return "H1";
    case Which::H2: return "H2";
    case Which::H3: return "H3";
    case Which::H4: return "H4";
    }
    return "?";
}

Which which_from_string(const std::string& s)
{
    if (s == "H1") return Which::H1;
    if (s == "H2") return Which::H2;
    if (s == "H3") return Which::H3;
    if (s == "H4") return Which::H4;
    throw ValidationError("unknown bound '" + s + "' (H1, H2, H3 or H4)");
}

double weyl_constant(int d, double vol, double eps, Scaling s)
{
    if (d < 1) throw ValidationError("weyl constant needs d >= 1");
    if (!(vol > 0)) throw ValidationError("weyl constant needs vol > 0");
    if (!(eps >= 0) || eps > 1) throw ValidationError("weyl constant needs eps in [0, 1]");
    const double g = std::tgamma(d / 2.0 + 1.0);
    if (s == Scaling::lattice) return (1 + eps) * std::pow(M_PI, d / 2.0) / g;
    return (1 + eps) * vol / (std::pow(4 * M_PI, d / 2.0) * g);
}

BoundProfile BoundProfile::make(Which w, const RateFunction& rate, const SpectralConvention& conv, double grad_u,
                                double weyl_c)
{
    BoundProfile p;
    p.which = w;
    p.rate = rate;
    p.conv = conv;
    p.grad_u = grad_u;
    p.weyl_c = weyl_c;
    p.universal_C = (w == Which::H1 || w == Which::H2) ? 34 : 18;
    return p;
}

namespace {

// largest lambda in [lo, inf) with feasible(lambda); feasible is assumed to
// hold on an interval starting at lo (monotone case)
double monotone_sup(const std::function<bool(double)>& feasible, double lo)
{
    double a = std::log(lo), w = 1;
    while (feasible(std::exp(a + w))) {
        a += w;
        w *= 2;
        if (a + w > 700) throw NumericalError("bound function did not turn infeasible below 1e300");
    }
    double b = a + w;
    while (b - a > 1e-13 * std::max(1.0, std::fabs(b))) {
        const double m = 0.5 * (a + b);
        if (feasible(std::exp(m))) a = m;
        else b = m;
    }
    return std::exp(a);
}

// largest feasible lambda when feasibility is not monotone: geometric scan
// for the last feasible grid point, then bisection on the crossing above it
HValue scan_sup(const std::function<bool(double)>& feasible, double lo)
{
    const double step = std::log(2.0) / 4;
    double last = 0;
    bool any = false;
    for (double x = std::log(lo); x < 690; x += step)
        if (feasible(std::exp(x))) {
            last = x;
            any = true;
        }
    if (!any) return {lo, true};
    double a = last, b = last + step;
    while (b - a > 1e-13 * std::max(1.0, std::fabs(b))) {
        const double m = 0.5 * (a + b);
        if (feasible(std::exp(m))) a = m;
        else b = m;
    }
    return {std::exp(a), false};
}

} // namespace

HValue eval_H(const BoundProfile& prof, double nu)
{
    if (!(nu > 0) || !std::isfinite(nu)) throw ValidationError("nu must be positive");
    prof.rate.validate();
    const double a = prof.rate.alpha, b = prof.rate.beta;
    const double l1 = prof.conv.lambda1();
    const int d = prof.conv.dim;
    const auto& h = prof.rate;
    if ((prof.which == Which::H2 || prof.which == Which::H4) && !(prof.weyl_c > 0))
        throw ValidationError("H2/H4 need a positive Weyl constant");
    if ((prof.which == Which::H3 || prof.which == Which::H4) && !(prof.grad_u > 0))
        throw ValidationError("H3/H4 need a positive gradient norm");

    std::function<bool(double)> feasible;
    switch (prof.which) {
    case Which::H1:
        feasible = [&](double lam) {
            return std::log(h(1 / (2 * std::sqrt(lam * nu)))) <= -0.5 * (a + b) * std::log(lam) - std::log(2.0);
        };
        break;
    case Which::H2:
        feasible = [&](double lam) {
            return std::log(h(1 / (2 * std::sqrt(lam * nu)))) <=
                   -(2 * a + 2 * b + d) / 4.0 * std::log(lam) - std::log(2 * std::sqrt(prof.weyl_c));
        };
        break;
    case Which::H3:
    case Which::H4: {
        const double G = prof.grad_u;
        feasible = [&, G](double lam) {
            const double y = prof.which == Which::H3
                                 ? 0.5 * std::pow(lam, -(a + b) / 2)
                                 : std::pow(lam, -(d + 2 * a + 2 * b) / 4.0) / (2 * std::sqrt(prof.weyl_c));
            if (!(y > 0)) return false;
            if (h.kind == RateFunction::Kind::exponential && y >= h.c1) return false;
            const double t = h.inverse(y);
            if (!(t > 0) || !std::isfinite(t)) return false;
            return std::log(lam) + 4 * G * t - std::log(t) <= std::log(G * G / (2 * nu));
        };
        return scan_sup(feasible, l1);
    }
    }
    if (!feasible(l1)) return {l1, true};
    return {monotone_sup(feasible, l1), false};
}

void evaluate(BoundProfile& profile, const std::vector<double>& nus)
{
    profile.points.clear();
    for (double nu : nus) {
        HValue v = eval_H(profile, nu);
        profile.points.push_back({nu, v.H, profile.universal_C / (nu * v.H), v.degenerate});
    }
}

double h1_power_closed_form(double c, double p, double alpha, double beta, double nu)
{
    // c 2^p (lambda nu)^{p/2} = lambda^{-(a+b)/2} / 2
    return std::pow(std::pow(4.0, -(p + 1)) / (c * c * std::pow(nu, p)), 1.0 / (alpha + beta + p));
}

double h2_power_closed_form(double c, double p, double alpha, double beta, int d, double weyl_c, double nu)
{
    const double dp = 1.0 / (2 * alpha + 2 * beta + 2 * p + d);
    return std::pow(std::pow(2.0, p + 1) * c * std::sqrt(weyl_c), -4 * dp) * std::pow(nu, -2 * p * dp);
}

H1ExpIterates h1_exponential_iterates(double c1, double c2, double alpha, double beta, double nu, double lambda1)
{
    auto f = [&](double x) {
        const double L = std::log(2 * c1) + 0.5 * (alpha + beta) * std::log(x);
        if (!(L > 0)) throw NumericalError("exponential H1 iteration left its domain");
        return c2 * c2 / (4 * nu) / (L * L);
    };
    // f is decreasing with fixed point H1: f(below) >= H1 >= f(above)
    H1ExpIterates it;
    it.upper0 = f(lambda1);
    it.lower0 = f(it.upper0);
    it.upper1 = f(it.lower0);
    it.lower1 = f(it.upper1);
    return it;
}

double corollary_exponent(Corollary c, const CorollaryParams& q)
{
    const double s = q.alpha + q.beta;
    if (q.alpha < 0 || q.beta < 0) throw ValidationError("class exponents must be >= 0");
    switch (c) {
    case Corollary::strong_power:
        if (!(q.p > 0)) throw ValidationError("power rate needs p > 0");
        return s / (s + q.p);
    case Corollary::weak_power:
        if (!(q.p > 0) || q.p > 0.5)
            throw ValidationError("weak power rates need p in (0, 1/2]: a weak rate can never decay faster than 1/sqrt(n)");
        return (q.d + 2 * s) / (q.d + 2 * q.p + 2 * s);
    case Corollary::cts_strong_power:
        if (!(q.p > 0) || !(s > 0)) throw ValidationError("needs p > 0 and alpha + beta > 0");
        return 2 * q.p / s;
    case Corollary::cts_strong_exp:
        if (!(q.c2 > 0) || !(q.grad_u > 0)) throw ValidationError("needs c2 > 0 and grad_u > 0");
        return 2 * s * q.grad_u / (q.c2 + 2 * s * q.grad_u);
    case Corollary::cts_weak_power:
        if (!(q.p > 0)) throw ValidationError("power rate needs p > 0");
        return 4 * q.p / (q.d + 2 * s);
    case Corollary::eigen_floor_exp:
        if (!(q.c2 > 0) || !(q.grad_u > 0)) throw ValidationError("needs c2 > 0 and grad_u > 0");
        return q.c2 / (q.c2 + 2 * s * q.grad_u);
    }
    return 0;
}

std::string bound_name(Which w)
{
    switch (w) {
    case Which::H1: return "strong-mixing dissipation bound";
    case Which::H2: return "weak-mixing dissipation bound";
    case Which::H3: return "continuous strong-mixing dissipation bound";
    case Which::H4: return "continuous weak-mixing dissipation bound";
    }
    return "?";
}

std::vector<BoundCheck> check_bound(DissipationReport& report, const BoundProfile& profile)
{
    if (!(report.conv == profile.conv))
        throw ValidationError("report and bound profile use different spectral conventions");
    std::vector<BoundCheck> out;
    for (auto& e : report.entries) {
        const HValue v = eval_H(profile, e.nu);
        const double bound = profile.universal_C / (e.nu * v.H);
        out.push_back({bound_name(profile.which), e.nu, e.tau_d <= bound, bound - e.tau_d});
    }
    report.bound_checks.insert(report.bound_checks.end(), out.begin(), out.end());
    return out;
}

double eigenvalue_floor(double tau_d)
{
    if (!(tau_d > 0)) throw ValidationError("eigenvalue floor needs tau_d > 0");
    if (std::isinf(tau_d)) return 0.0;
    return 1.0 / tau_d;
}

} // namespace disslab
