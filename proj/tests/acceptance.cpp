// One line per acceptance criterion; nonzero exit when any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "disslab/bounds.hpp"
#include "disslab/dissipation.hpp"
#include "disslab/error.hpp"
#include "disslab/fit.hpp"
#include "disslab/io.hpp"
#include "disslab/mixing.hpp"
#include "disslab/runner.hpp"
#include "disslab/shear.hpp"

using namespace disslab;

namespace {

const double lp = (3 + std::sqrt(5.0)) / 2;

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string g(double x)
{
    char b[64];
    std::snprintf(b, sizeof b, "%.6g", x);
    return b;
}

const ToralAutomorphism& cat()
{
    static const ToralAutomorphism T(IntMatrix::parse("2,1,1,1"));
    return T;
}

const std::vector<double> battery_nus{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};

const IdentityBattery& battery()
{
    static const IdentityBattery b = identity_battery(cat(), 100, 20, battery_nus, 20240601);
    return b;
}

// exact tau_d on 13 points over [1e-8, 1e-2]
const DissipationReport& sweep()
{
    static const DissipationReport r =
        dissipation_sweep(cat(), parse_nu_grid("1e-8:1e-2:13"), TauMethod::exact_lattice, {}, 1);
    return r;
}

Verdict c1()
{
    const auto& b = battery();
    return {b.max_energy_residual <= 1e-12,
            std::to_string(b.checks) + " steps, max relative residual " + g(b.max_energy_residual)};
}

Verdict c2()
{
    const auto& b = battery();
    return {b.sandwich_failures == 0, std::to_string(b.sandwich_failures) + " violations"};
}

Verdict c3()
{
    const auto& b = battery();
    return {b.gap_failures == 0, std::to_string(b.gap_failures) + " violations over 600 trajectories"};
}

Verdict c4()
{
    bool ok = true;
    std::string d;
    for (double nu : {1e-2, 1e-3, 1e-4}) {
        const int te = tau_d_exact(cat(), nu, {}).tau;
        const auto U = TruncatedKoopman::from_automorphism(cat(), operator_radius(nu, {}));
        const int to = tau_d_operator(U, nu, {}).tau;
        ok = ok && te == to;
        d += "nu=" + g(nu) + ": " + std::to_string(te) + "/" + std::to_string(to) + "  ";
    }
    const int t01 = tau_d_exact(cat(), 0.1, {}).tau, t01r = tau_d_exact(cat(), 0.1, {}, true).tau;
    ok = ok && t01 == 4 && t01r == 4;
    d += "nu=0.1: " + std::to_string(t01) + " (shell scan " + std::to_string(t01r) + ")";
    return {ok, d};
}

Verdict c5()
{
    const auto& f = sweep().fit;
    const double want = 1 / std::log(lp);
    return {std::fabs(f.slope / want - 1) <= 0.15 && f.r2 >= 0.99,
            "slope " + g(f.slope) + " (expected " + g(want) + "), r2 " + g(f.r2)};
}

Verdict c6()
{
    const double nu = 1e-6;
    DecayOptions w;
    w.n_lo = 4;
    w.n_hi = 14;
    const DecayFit worst = fit_energy_decay(worst_case_log_ratio(cat(), nu, {}, 14), nu, w);
    SpectralConvention lat;
    const Trajectory tr = evolve(single_mode(lat, Mode{1, 0}),
                                 PulsedSystem(std::make_shared<const ToralAutomorphism>(cat()), nu, lat), 14);
    const DecayFit single = fit_energy_decay(tr, w);
    const bool ok = std::fabs(worst.gamma_hat / lp - 1) <= 0.05 && std::fabs(single.gamma_hat / (lp * lp) - 1) <= 0.05;
    return {ok, "worst-case " + g(worst.gamma_hat) + " (" + std::to_string(worst.points) + " pts), single-mode " +
                    g(single.gamma_hat) + " (" + std::to_string(single.points) + " pts)"};
}

Verdict c7()
{
    const auto& b = battery();
    return {b.chain_failures == 0,
            b.chain_failures == 0 ? "all 600 trajectories" : std::to_string(b.chain_failures) + " failures, first " +
                                                                  b.first_chain_failure};
}

Verdict c8()
{
    bool ok = true;
    std::string d;
    for (double a : {1.0, 2.0}) {
        const auto env = strong_envelope(cat(), a, 1, 12);
        std::vector<double> n, l;
        for (int i = 2; i <= 12; ++i) {
            n.push_back(i);
            l.push_back(std::log(env.value[i]));
        }
        const double s = linear_fit(n, l).slope;
        ok = ok && std::fabs(s / -std::log(lp) - 1) <= 0.1;
        d += "(" + g(a) + ",1): " + g(s) + "  ";
    }
    return {ok, d + "expected " + g(-std::log(lp))};
}

Verdict c9()
{
    SpectralConvention lat;
    const auto f = single_mode(lat, Mode{1, 0});
    const auto s = weak_cesaro_series(cat(), f, f, 10000);
    double worst = 0;
    for (std::size_t n = 1; n <= s.size(); ++n)
        worst = std::max(worst, std::fabs(s[n - 1] * std::sqrt(static_cast<double>(n)) - 1));
    const double e2 = weak_majorant_exponent(2.0, 1000, 1000000, 12).exponent;
    const double e05 = weak_majorant_exponent(0.5, 1000, 1000000, 12).exponent;
    const bool ok = worst < 1e-12 && std::fabs(e2 / 0.5 - 1) <= 0.15 && std::fabs(e05 / 0.25 - 1) <= 0.15;
    return {ok, "Cesaro deviation " + g(worst) + ", exponents " + g(e2) + " (beta=2), " + g(e05) + " (beta=0.5)"};
}

Verdict c10()
{
    DissipationReport rep = sweep();
    const auto prof = BoundProfile::make(Which::H1, fitted_strong_rate(cat(), 1, 1, 12), {});
    const auto checks = check_bound(rep, prof);
    bool ok = true;
    double margin = INFINITY;
    for (const auto& c : checks) {
        ok = ok && c.satisfied;
        margin = std::min(margin, c.margin);
    }
    double worst = 0;
    for (double nu : parse_nu_grid("1e-10:1e-2:17")) {
        const double H = eval_H(BoundProfile::make(Which::H1, RateFunction::power(1, 1), {}), nu).H;
        worst = std::max(worst, std::fabs(H / h1_power_closed_form(1, 1, 1, 1, nu) - 1));
    }
    ok = ok && worst <= 1e-6;
    return {ok, "rate " + prof.rate.str() + ", smallest margin " + g(margin) + ", closed form gap " + g(worst)};
}

Verdict c11()
{
    const auto& r = sweep();
    bool ok = true;
    for (const auto& c : r.bound_checks)
        if (c.name == "trivial heat bound") ok = ok && c.satisfied;
    // entries run from small to large nu; nu tau_d must grow with nu
    for (std::size_t i = 1; i < r.entries.size(); ++i)
        ok = ok && r.entries[i].nu * r.entries[i].tau_d > r.entries[i - 1].nu * r.entries[i - 1].tau_d;
    const double tau6 = tau_d_exact(cat(), 1e-6, {}).tau;
    ok = ok && 1e-6 * tau6 < 0.05;
    return {ok, "nu tau_d at 1e-6 = " + g(1e-6 * tau6) + ", at 1e-2 = " + g(1e-2 * r.entries.back().tau_d)};
}

Verdict c12()
{
    const KroneckerScan k = kronecker_scan_sl2(3);
    const NormFormReport n = verify_norm_form(cat(), 200);
    const bool ok = k.misclassified == 0 && n.integer_form_ok && n.min_abs_norm >= 1 &&
                    std::fabs(n.min_product / 0.2 - 1) < 1e-10;
    return {ok, std::to_string(k.matrices) + " matrices, " + std::to_string(k.in_disk) + " in disk, " +
                    std::to_string(k.misclassified) + " misclassified; min product " + g(n.min_product) + " over " +
                    std::to_string(n.scanned) + " modes"};
}

Verdict c13()
{
    const SpectralConvention geo{2, Scaling::geometric};
    const CtsGrid grid{16, 64, false};
    const ShearFlow flow = ShearFlow::sine();
    CtsSolver s(flow, 1e-3, grid, geo);
    const CtsState th = s.random_state(7);
    const double r1 = energy_identity_residual(s, th, 0.02, 10);
    const double r2 = energy_identity_residual(s, th, 0.01, 20);
    const bool second_order = r1 < 0.2 && r2 / r1 < 0.35;
    const TransportGap gap = transport_gap_cts(th, s, 1.0, 0.01);

    const auto nus = parse_nu_grid("1e-4:1e-2:5");
    std::vector<double> x, y;
    bool mono = true;
    double prev = -1;
    for (double nu : nus) {
        const double tau = tau_d_cts(flow, nu, grid, {}, geo).tau;
        x.push_back(std::log(1 / nu));
        y.push_back(std::log(tau));
        if (prev >= 0) mono = mono && nu * tau > prev;
        prev = nu * tau;
    }
    const double e = linear_fit(x, y).slope;
    const bool ok = second_order && gap.gap2 <= gap.bound && e >= 0.45 && e <= 0.65 && mono;
    return {ok, "residual " + g(r1) + " -> " + g(r2) + ", gap " + g(gap.gap2) + " <= " + g(gap.bound) +
                    ", exponent " + g(e)};
}

Verdict c14()
{
    const auto h = RateFunction::exponential(1.3, 0.9, 1, 1);
    const auto same = transfer_rate(h, 1, 1, 4 * M_PI * M_PI);
    bool ok = same.c1 == h.c1 && same.c2 == h.c2;
    struct Hand {
        double a, b, a2, b2, gamma, delta;
    };
    for (const Hand& t : {Hand{1, 1, 0.5, 0.5, 0.25, 0.25}, Hand{1, 2, 2, 1, 0.75, 0.5}, Hand{2, 1, 1, 3, 1.25, 0.5}}) {
        const auto e = transfer_exponents(t.a, t.b, t.a2, t.b2);
        ok = ok && std::fabs(e.gamma - t.gamma) < 1e-15 && std::fabs(e.delta - t.delta) < 1e-15;
    }
    std::vector<double> tt, hh;
    for (int i = 0; i <= 30; ++i) {
        tt.push_back(0.5 * i);
        hh.push_back(h(0.5 * i));
    }
    const auto tr = transfer_rate(RateFunction::tabulated(tt, hh, 1, 1), 0.5, 2, 4 * M_PI * M_PI);
    std::vector<double> lh;
    for (double v : tr.h) lh.push_back(std::log(v));
    const double rate = -linear_fit(tr.t, lh).slope;
    const double want = transfer_exponents(1, 1, 0.5, 2).delta * 0.9;
    ok = ok && std::fabs(rate / want - 1) <= 0.01;
    return {ok, "tabulated decay " + g(rate) + " vs delta c2 = " + g(want)};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"energy identity", c1},        {"sandwich inequality", c2},   {"inviscid gap", c3},
        {"oracle equivalence", c4},     {"logarithmic scaling", c5},   {"double-exponential decay", c6},
        {"lower-bound chain", c7},      {"strong mixing rate", c8},    {"weak mixing rate", c9},
        {"bound consistency", c10},     {"trivial bound", c11},        {"number theory", c12},
        {"continuous time", c13},       {"rate transfer", c14},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %2zu %-26s %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    v.detail.c_str(), sec);
        std::fflush(stdout);
        if (!v.pass) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
