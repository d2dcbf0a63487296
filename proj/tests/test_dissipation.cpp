#include <doctest.h>

#include <cmath>
#include <random>

#include "disslab/dissipation.hpp"
#include "disslab/error.hpp"
#include "disslab/runner.hpp"

using namespace disslab;

namespace {
const double lp = (3 + std::sqrt(5.0)) / 2;
ToralAutomorphism cat() { return ToralAutomorphism(IntMatrix::parse("2,1,1,1")); }
}

TEST_CASE("exact dissipation time at nu = 0.1")
{
    auto T = cat();
    SpectralConvention lat;
    const TauExact t = tau_d_exact(T, 0.1, lat);
    CHECK(t.tau == 4);
    CHECK(t.min_sum == 21);
    CHECK(t.prev_sum == 8);
    CHECK(tau_d_exact(T, 0.1, lat, true).tau == 4);
    CHECK(tau_d_exact(T, 0.1, lat, true, true).tau == 4);
    // a tie is not enough: nu = 1/8 puts S_3 = 8 exactly on the threshold
    CHECK(tau_d_exact(T, 0.125, lat).tau == 4);
}

TEST_CASE("geometric convention rescales nu")
{
    auto T = cat();
    SpectralConvention geo{2, Scaling::geometric};
    CHECK(tau_d_exact(T, nu_to_geometric(1e-3), geo).tau == tau_d_exact(T, 1e-3, {}).tau);
}

TEST_CASE("exact and operator methods agree")
{
    auto T = cat();
    SpectralConvention lat;
    const auto U = TruncatedKoopman::from_automorphism(T, operator_radius(1e-2, lat));
    const TauOperator op = tau_d_operator(U, 1e-2, lat);
    CHECK(op.tau == tau_d_exact(T, 1e-2, lat).tau);
    CHECK(op.tau == 6);
    CHECK(op.leak < 1e-8);
    OperatorOptions par;
    par.parallel = true;
    CHECK(tau_d_operator(U, 1e-2, lat, par).tau == 6);
}

TEST_CASE("identity operator decays like the slowest mode")
{
    auto U = TruncatedKoopman::identity(2, 3);
    SpectralConvention lat;
    OperatorOptions opt;
    opt.leak_tol = 1.1; // identity never leaks
    // e^{-0.03 n} < 1/e first at n = 34
    CHECK(tau_d_operator(U, 0.03, lat, opt).tau == 34);
}

TEST_CASE("leak monitor")
{
    auto U = TruncatedKoopman::from_automorphism(cat(), 5);
    CHECK_THROWS_AS(tau_d_operator(U, 1e-3, {}), NumericalError);
}

TEST_CASE("rejected inputs")
{
    SpectralConvention lat;
    CHECK_THROWS_AS(tau_d_exact(cat(), 0.0, lat), ValidationError);
    CHECK_THROWS_AS(tau_d_exact(cat(), -1.0, lat), ValidationError);
    CHECK_THROWS_AS(tau_d_exact(ToralAutomorphism(IntMatrix::parse("0,-1,1,0")), 0.1, lat), ValidationError);
    CHECK_THROWS_AS(tau_d_exact(cat(), 1e-40, lat), NumericalError);
}

TEST_CASE("worst-case series is -2 nu F_2n")
{
    const double fib2n[] = {0, 1, 3, 8, 21, 55, 144};
    auto r = worst_case_log_ratio(cat(), 1e-3, {}, 6);
    REQUIRE(r.size() == 7);
    for (int n = 0; n <= 6; ++n) CHECK(r[n] == doctest::Approx(-2e-3 * fib2n[n]));
}

TEST_CASE("decay fit on a synthetic double exponential")
{
    const double nu = 1e-6, c = 0.3, g = 2.5;
    std::vector<double> r;
    for (int n = 0; n <= 16; ++n) r.push_back(-(nu / c) * std::pow(g, n));
    DecayOptions o;
    o.n_lo = 2;
    auto f = fit_energy_decay(r, nu, o);
    CHECK(f.gamma_hat == doctest::Approx(g).epsilon(1e-10));
    CHECK(f.c_hat == doctest::Approx(c).epsilon(1e-8));
    CHECK(f.model == DecayModel::double_exponential);
    std::vector<double> few{0, -1e-3, -1e-2};
    CHECK_THROWS_AS(fit_energy_decay(few, nu), ValidationError);
}

TEST_CASE("decay exponents of the cat map")
{
    auto T = cat();
    const double nu = 1e-6;
    DecayOptions w;
    w.n_lo = 4;
    w.n_hi = 14;
    auto worst = fit_energy_decay(worst_case_log_ratio(T, nu, {}, 14), nu, w);
    CHECK(worst.gamma_hat == doctest::Approx(lp).epsilon(0.05));
    SpectralConvention lat;
    auto tr = evolve(single_mode(lat, Mode{1, 0}),
                     PulsedSystem(std::make_shared<const ToralAutomorphism>(T), nu, lat), 14);
    auto single = fit_energy_decay(tr, w);
    CHECK(single.gamma_hat == doctest::Approx(lp * lp).epsilon(0.05));
}

TEST_CASE("lower-bound chain holds and catches a corrupted trajectory")
{
    auto T = cat();
    SpectralConvention lat;
    std::mt19937_64 rng(5);
    auto f = random_sparse_field(lat, rng, 8, 6);
    auto tr = evolve(f, PulsedSystem(std::make_shared<const ToralAutomorphism>(T), 1e-3, lat), 12);
    auto ok = check_lower_bound_chain(tr, T);
    CHECK(ok.ok);
    CHECK(ok.gamma == doctest::Approx(lp * lp));
    auto bad = tr;
    bad.log_step[5] = -1e6; // far faster than the chain allows
    auto r = check_lower_bound_chain(bad, T);
    CHECK_FALSE(r.ok);
    CHECK(r.violating_step >= 0);
    CHECK_FALSE(r.violated.empty());
}

TEST_CASE("report round trip and trivial checks")
{
    auto T = cat();
    auto rep = dissipation_sweep(T, {1e-2, 1e-3, 1e-4}, TauMethod::exact_lattice, {}, 1);
    REQUIRE(rep.entries.size() == 3);
    CHECK(rep.entries[0].tau_d == 6);
    CHECK(rep.entries[1].tau_d == 9);
    CHECK(rep.entries[2].tau_d == 11);
    CHECK(rep.fit.slope > 0);
    for (auto& c : rep.bound_checks) CHECK(c.satisfied);
    auto back = report_from_json(report_to_json(rep));
    CHECK(back.entries.size() == 3);
    CHECK(back.entries[2].tau_d == 11);
    CHECK(back.fit.slope == rep.fit.slope);
    CHECK(back.conv == rep.conv);
    CHECK_THROWS_AS(report_from_json(nlohmann::json{{"rows", 1}}), ValidationError);
}

TEST_CASE("one-step quotient and pure heat model selection")
{
    SpectralConvention lat;
    auto T = std::make_shared<const ToralAutomorphism>(cat());
    auto tr = evolve(single_mode(lat, Mode{1, 0}), PulsedSystem(T, 1e-4, lat), 3);
    CHECK(std::exp(tr.log_h1_rel[0]) == doctest::Approx(1.0));
    CHECK(std::exp(tr.log_h1_rel[1]) == doctest::Approx(5.0));

    // identity map: ln(-ln ratio) grows like ln n, not linearly
    auto I = std::make_shared<const ToralAutomorphism>(IntMatrix::parse("1,0,0,1"));
    auto heat = evolve(single_mode(lat, Mode{1, 0}), PulsedSystem(I, 1e-3, lat), 30);
    auto f = fit_energy_decay(heat);
    CHECK(f.model == DecayModel::single_exponential);
    auto ok = check_lower_bound_chain(heat, *I);
    CHECK(ok.ok);
}
