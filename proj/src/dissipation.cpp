#include "disslab/dissipation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "disslab/error.hpp"

namespace disslab {

std::string to_string(TauMethod m)
{
    switch (m) {
    case TauMethod::exact_lattice: return "exact_lattice";
    case TauMethod::operator_norm: return "operator_norm";
    case TauMethod::continuous: return "continuous";
    }
    return "?";
}

std::string to_string(DecayModel m)
{
    return m == DecayModel::double_exponential ? "double_exponential" : "single_exponential";
}

void fit_log_scaling(DissipationReport& report)
{
    std::vector<double> x, y;
    for (auto& e : report.entries) {
        x.push_back(std::fabs(std::log(e.nu)));
        y.push_back(e.tau_d);
    }
    report.fit = linear_fit(x, y);
}

void add_trivial_checks(DissipationReport& report)
{
    const double l1 = report.conv.lambda1();
    for (auto& e : report.entries) {
        const double bound = 1.0 / (e.nu * l1) + 1.0;
        report.bound_checks.push_back({"trivial heat bound", e.nu, e.tau_d <= bound, bound - e.tau_d});
    }
}

nlohmann::json report_to_json(const DissipationReport& report)
{
    nlohmann::json j;
    j["format"] = "disslab-dissipation-v1";
    j["dim"] = report.conv.dim;
    j["scaling"] = to_string(report.conv.scaling);
    j["entries"] = nlohmann::json::array();
    for (auto& e : report.entries)
        j["entries"].push_back({{"nu", e.nu}, {"tau_d", e.tau_d}, {"method", to_string(e.method)}});
    j["fit"] = {{"model", "tau_d vs |ln nu|"},
                {"slope", report.fit.slope},
                {"intercept", report.fit.intercept},
                {"r2", report.fit.r2}};
    j["bound_checks"] = nlohmann::json::array();
    for (auto& b : report.bound_checks)
        j["bound_checks"].push_back(
            {{"name", b.name}, {"nu", b.nu}, {"satisfied", b.satisfied}, {"margin", b.margin}});
    return j;
}

DissipationReport report_from_json(const nlohmann::json& j)
{
    DissipationReport r;
    try {
        r.conv = SpectralConvention(j.value("dim", 2), scaling_from_string(j.value("scaling", "lattice")));
        for (auto& e : j.at("entries")) {
            DissipationEntry en;
            en.nu = e.at("nu").get<double>();
            en.tau_d = e.at("tau_d").get<double>();
            const std::string m = e.value("method", "exact_lattice");
            en.method = m == "operator_norm" ? TauMethod::operator_norm
                      : m == "continuous"    ? TauMethod::continuous
                                             : TauMethod::exact_lattice;
            if (!(en.nu > 0) || !(en.tau_d > 0)) throw ValidationError("report entry needs nu > 0 and tau_d > 0");
            r.entries.push_back(en);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed dissipation report: ") + e.what());
    }
    // the fit is recomputed rather than trusted
    if (r.entries.size() >= 2) fit_log_scaling(r);
    return r;
}

TauExact tau_d_exact(const ToralAutomorphism& T, double nu, const SpectralConvention& conv, bool reference,
                     bool parallel)
{
    if (!(nu > 0) || !std::isfinite(nu)) throw ValidationError("nu must be positive");
    if (T.dim() != conv.dim) throw ValidationError("automorphism and convention dimensions differ");
    if (!T.conditions().c1_no_root_of_unity)
        throw ValidationError("matrix has a root-of-unity eigenvalue; exact dissipation time not defined");
    // the norm after n steps is exp(-nu * factor * min S_n); compare in
    // lattice units against a threshold computed once
    const double thr = 1.0 / (nu * conv.factor());
    const int n_cap = static_cast<int>(std::ceil(thr)) + 2;
    TauExact out;
    for (int n = 1; n <= n_cap; ++n) {
        OrbitMin m;
        try {
            m = reference ? min_orbit_sum_shell(T, n, parallel) : min_orbit_sum(T, n);
        } catch (const NumericalError& e) {
            const double feasible = out.prev_sum > 0 ? 1.0 / (conv.factor() * static_cast<double>(to_ld(out.prev_sum)))
                                                     : 1.0;
            throw NumericalError("orbit sums overflow at n = " + std::to_string(n) +
                                 "; smallest feasible nu is about " + std::to_string(feasible) + " (" + e.what() + ")");
        }
        if (to_ld(m.value) > static_cast<long double>(thr)) {
            out.tau = n;
            out.min_sum = m.value;
            out.argmin = m.argmin;
            return out;
        }
        out.prev_sum = m.value;
    }
    throw NumericalError("dissipation time exceeded the heat bound; orbit minimum not growing");
}

namespace {

double vnorm(const std::vector<cplx>& x)
{
    double s = 0;
    for (auto& v : x) s += std::norm(v);
    return std::sqrt(s);
}

CsrMatrix abs_copy(const CsrMatrix& A)
{
    CsrMatrix B = A;
    for (auto& v : B.val) v = std::abs(v);
    return B;
}

} // namespace

TauOperator tau_d_operator(const TruncatedKoopman& U, double nu, const SpectralConvention& conv,
                           const OperatorOptions& opt)
{
    if (!(nu > 0) || !std::isfinite(nu)) throw ValidationError("nu must be positive");
    if (U.dim() != conv.dim) throw ValidationError("operator and convention dimensions differ");
    if (opt.restarts < 1 || !(opt.tol > 0)) throw ValidationError("power iteration needs restarts >= 1, tol > 0");
    if (U.isometry_defect() > 1e-8) throw ValidationError("truncated operator is not a partial isometry within 1e-8");
    TauOperator out;
    out.leak = U.leak_bound(nu, conv);
    if (out.leak >= opt.leak_tol)
        throw NumericalError("truncation leak " + std::to_string(out.leak) +
                             " exceeds tolerance; enlarge the ball radius (currently " +
                             std::to_string(U.radius()) + ")");

    const int N = U.size();
    std::vector<double> damp(N);
    for (int i = 0; i < N; ++i) damp[i] = std::exp(-nu * conv.eigenvalue(U.modes()[i]));
    auto apply = [&](const CsrMatrix& A, const std::vector<double>& pre, const std::vector<double>& post,
                     const std::vector<cplx>& x, std::vector<cplx>& y) {
        if (opt.parallel) csr_apply_omp(A, pre, post, x, y);
        else csr_apply_serial(A, pre, post, x, y);
        ++out.applications;
    };
    const std::vector<double> none;
    // M = D U and M^* = U^* D
    auto fwd = [&](int n, std::vector<cplx> x) {
        std::vector<cplx> y;
        for (int j = 0; j < n; ++j) {
            apply(U.forward(), none, damp, x, y);
            x.swap(y);
        }
        return x;
    };
    auto bwd = [&](int n, std::vector<cplx> x) {
        std::vector<cplx> y;
        for (int j = 0; j < n; ++j) {
            apply(U.adjoint(), damp, none, x, y);
            x.swap(y);
        }
        return x;
    };

    const CsrMatrix absF = abs_copy(U.forward()), absA = abs_copy(U.adjoint());
    std::vector<cplx> rows(N, 1.0), cols(N, 1.0), tmp;
    auto vmax = [](const std::vector<cplx>& v) {
        double m = 0;
        for (auto& x : v) m = std::max(m, x.real());
        return m;
    };

    const double target = std::exp(-1.0);
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss;
    std::vector<cplx> warm;
    const int n_cap = static_cast<int>(std::ceil(1.0 / (nu * conv.lambda1()))) + 2;
    for (int n = 1; n <= n_cap; ++n) {
        // entrywise |M^n| <= |M|^n, so sqrt(|M|^n_1 |M|^n_inf) bounds the norm
        apply(absF, none, damp, rows, tmp);
        rows.swap(tmp);
        apply(absA, damp, none, cols, tmp);
        cols.swap(tmp);
        const double schur = std::sqrt(vmax(rows) * vmax(cols)) * (1 + 1e-12);
        if (schur < target) {
            out.tau = n;
            out.norm_at_tau = schur;
            out.certified_by_schur = true;
            return out;
        }

        double lower = 0, upper_est = 0;
        bool above = false;
        std::vector<cplx> best_x;
        for (int r = 0; r < opt.restarts && !above; ++r) {
            std::vector<cplx> x(N);
            if (r == 0 && !warm.empty()) x = warm;
            else
                for (auto& v : x) v = {gauss(rng), gauss(rng)};
            double nx = vnorm(x);
            for (auto& v : x) v /= nx;
            double prev = 0;
            bool converged = false;
            for (int it = 1; it <= opt.max_iter; ++it) {
                auto y = fwd(n, x);
                const double s = vnorm(y); // ||M x|| with ||x|| = 1 is a lower bound
                if (s > lower) {
                    lower = s;
                    best_x = x;
                }
                if (lower >= target) {
                    above = true;
                    break;
                }
                auto z = bwd(n, y);
                const double nz = vnorm(z);
                if (nz == 0) {
                    converged = true;
                    break;
                }
                for (std::size_t i = 0; i < z.size(); ++i) x[i] = z[i] / nz;
                if (it >= 8 && std::fabs(s - prev) <= opt.tol * s) {
                    converged = true;
                    break;
                }
                prev = s;
            }
            if (!converged && !above)
                throw NumericalError("power iteration did not converge at n = " + std::to_string(n) +
                                     "; raise max_iter or restarts");
            upper_est = std::max(upper_est, lower * (1 + opt.tol));
        }
        if (!best_x.empty()) warm = best_x;
        if (!above && upper_est < target) {
            out.tau = n;
            out.norm_at_tau = upper_est;
            return out;
        }
        out.norm_before = lower;
    }
    throw NumericalError("operator norm did not fall below 1/e within the heat bound");
}

std::vector<double> energy_log_ratio(const Trajectory& traj)
{
    std::vector<double> r{0.0};
    for (double d : traj.log_step) r.push_back(r.back() + d);
    return r;
}

std::vector<double> worst_case_log_ratio(const ToralAutomorphism& T, double nu, const SpectralConvention& conv,
                                         int steps)
{
    if (steps < 1) throw ValidationError("worst-case series needs steps >= 1");
    std::vector<double> r{0.0};
    for (int n = 1; n <= steps; ++n)
        r.push_back(-2.0 * nu * conv.factor() * static_cast<double>(to_ld(min_orbit_sum(T, n).value)));
    return r;
}

DecayFit fit_energy_decay(const std::vector<double>& log_ratio, double nu, const DecayOptions& opt)
{
    if (!(nu > 0)) throw ValidationError("decay fit needs nu > 0");
    // -ln ratio in (1e-10, 690.77): ratio between 1e-300 and 1 - 1e-10
    const double lo = 1e-10, hi = 300.0 * std::log(10.0);
    const int last = opt.n_hi < 0 ? static_cast<int>(log_ratio.size()) - 1
                                   : std::min(opt.n_hi, static_cast<int>(log_ratio.size()) - 1);
    std::vector<double> n_v, ln_n, y;
    DecayFit f;
    f.n_lo = -1;
    for (int n = std::max(opt.n_lo, 1); n <= last; ++n) {
        const double x = -log_ratio[n];
        if (!(x > lo) || !(x < hi)) continue;
        if (f.n_lo < 0) f.n_lo = n;
        f.n_hi = n;
        n_v.push_back(n);
        ln_n.push_back(std::log(static_cast<double>(n)));
        y.push_back(std::log(x));
    }
    if (y.size() < 6)
        throw ValidationError("only " + std::to_string(y.size()) +
                              " usable steps for the decay fit (need 6); try a larger nu or fewer steps");
    const LinearFit d = linear_fit(n_v, y);
    const LinearFit s = linear_fit(ln_n, y);
    f.points = d.points;
    f.gamma_hat = std::exp(d.slope);
    f.c_hat = nu * std::exp(-d.intercept);
    f.residual = d.rms;
    f.r2 = d.r2;
    f.r2_single = s.r2;
    f.model = d.r2 >= s.r2 ? DecayModel::double_exponential : DecayModel::single_exponential;
    return f;
}

DecayFit fit_energy_decay(const Trajectory& traj, const DecayOptions& opt)
{
    return fit_energy_decay(energy_log_ratio(traj), traj.nu, opt);
}

ChainReport check_lower_bound_chain(const Trajectory& traj, const ToralAutomorphism& T, double slack)
{
    ChainReport rep;
    const double gamma = T.lipschitz() * T.lipschitz();
    rep.gamma = gamma;
    const int N = traj.steps();
    const double nu = traj.nu;
    auto r = [&](int n) { return std::exp(traj.log_h1_rel[n]); };
    const double r0 = r(0);
    auto fail = [&](int n, const char* what) {
        if (rep.ok) {
            rep.ok = false;
            rep.violating_step = n;
            rep.violated = what;
        }
    };
    rep.worst_margin = std::numeric_limits<double>::infinity();
    double geo = 0, gp = 1; // running sum of gamma^j, j >= 1, and gamma^n
    double lhs = 0;         // ln ||theta_{n+1}||^2 / ||theta_0||^2
    for (int n = 0; n < N; ++n) {
        const double rn = r(n);
        const double d = traj.log_step[n];
        const double rhs = -2.0 * nu * gamma * rn;
        const double m1 = d - rhs;
        rep.worst_margin = std::min(rep.worst_margin, m1);
        if (m1 < -slack * std::max(1.0, std::fabs(rhs))) fail(n, "step-energy");

        const double m2 = gamma * rn - r(n + 1);
        rep.worst_margin = std::min(rep.worst_margin, m2);
        if (m2 < -slack * std::max(1.0, gamma * rn)) fail(n, "quotient-growth");

        // step j costs at most 2 nu gamma^{j+1} r_0, so after n+1 steps the
        // exponent is 2 nu r_0 sum_{j=1}^{n+1} gamma^j
        gp *= gamma;
        geo += gp;
        const double bound = -2.0 * nu * r0 * geo;
        lhs += d;
        const double m3 = lhs - bound;
        rep.worst_margin = std::min(rep.worst_margin, m3);
        if (m3 < -slack * std::max(1.0, std::fabs(bound))) fail(n + 1, "summed");
    }
    return rep;
}

} // namespace disslab
