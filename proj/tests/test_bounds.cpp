#include <doctest.h>

#include <cmath>

#include "disslab/bounds.hpp"
#include "disslab/error.hpp"
#include "disslab/runner.hpp"

using namespace disslab;

TEST_CASE("H1 for a power rate")
{
    auto prof = BoundProfile::make(Which::H1, RateFunction::power(1, 1), {});
    const HValue v = eval_H(prof, 1e-3);
    CHECK_FALSE(v.degenerate);
    CHECK(v.H == doctest::Approx(3.96850263).epsilon(1e-8));
    CHECK(h1_power_closed_form(1, 1, 1, 1, 1e-3) == doctest::Approx(3.96850263).epsilon(1e-8));
    for (double nu : {1e-8, 1e-6, 1e-4}) {
        for (double p : {0.5, 1.0, 2.0}) {
            auto q = BoundProfile::make(Which::H1, RateFunction::power(1.5, p, 1, 2), {});
            CHECK(eval_H(q, nu).H == doctest::Approx(h1_power_closed_form(1.5, p, 1, 2, nu)).epsilon(1e-10));
        }
    }
}

TEST_CASE("H2 for a power rate")
{
    const double wc = weyl_constant(2, 1, 0.1, Scaling::geometric);
    CHECK(wc == doctest::Approx(1.1 / (4 * M_PI)).epsilon(1e-14));
    CHECK(weyl_constant(2, 1, 0, Scaling::lattice) == doctest::Approx(M_PI));
    SpectralConvention geo{2, Scaling::geometric}, lat;
    // geometric lambda_1 sits above the closed form here
    CHECK(eval_H(BoundProfile::make(Which::H2, RateFunction::power(1, 0.5), geo, 0, wc), 1e-10).degenerate);
    const double wl = weyl_constant(2, 1, 0.1, Scaling::lattice);
    auto prof = BoundProfile::make(Which::H2, RateFunction::power(1, 0.5), lat, 0, wl);
    for (double nu : {1e-10, 1e-8}) {
        const HValue v = eval_H(prof, nu);
        CHECK_FALSE(v.degenerate);
        CHECK(v.H == doctest::Approx(h2_power_closed_form(1, 0.5, 1, 1, 2, wl, nu)).epsilon(1e-10));
    }
    CHECK(prof.universal_C == 34);
    CHECK_THROWS_AS(eval_H(BoundProfile::make(Which::H2, RateFunction::power(1, 1), geo), 1e-3), ValidationError);
}

TEST_CASE("exponential H1 brackets")
{
    const double nu = 1e-6;
    auto it = h1_exponential_iterates(1, 1, 1, 1, nu);
    const double H = eval_H(BoundProfile::make(Which::H1, RateFunction::exponential(1, 1), {}), nu).H;
    CHECK(it.lower0 <= it.lower1);
    CHECK(it.lower1 <= H * (1 + 1e-9));
    CHECK(H <= it.upper1 * (1 + 1e-9));
    CHECK(it.upper1 <= it.upper0);
}

TEST_CASE("degenerate profiles")
{
    // geometric lambda_1 = 4 pi^2 is already above the power-law H1
    SpectralConvention geo{2, Scaling::geometric};
    const HValue v = eval_H(BoundProfile::make(Which::H1, RateFunction::power(1, 1), geo), 1e-3);
    CHECK(v.degenerate);
    CHECK(v.H == doctest::Approx(geo.lambda1()));
    CHECK_THROWS_AS(eval_H(BoundProfile::make(Which::H1, RateFunction::power(1, 1), {}), 0.0), ValidationError);
}

TEST_CASE("continuous bounds")
{
    SpectralConvention geo{2, Scaling::geometric}, lat;
    auto p3 = BoundProfile::make(Which::H3, RateFunction::power(1, 1), lat, 1.0);
    CHECK(p3.universal_C == 18);
    // only logarithmic growth in 1/nu
    const HValue a = eval_H(p3, 1e-8), b = eval_H(p3, 1e-12);
    CHECK_FALSE(a.degenerate);
    CHECK(b.H > a.H);
    CHECK_THROWS_AS(eval_H(BoundProfile::make(Which::H3, RateFunction::power(1, 1), geo), 1e-6), ValidationError);
    auto p4 = BoundProfile::make(Which::H4, RateFunction::power(1, 0.5), geo, 2 * M_PI, weyl_constant(2, 1, 0));
    CHECK(eval_H(p4, 1e-8).H >= geo.lambda1());
}

TEST_CASE("corollary exponents")
{
    CorollaryParams q;
    CHECK(corollary_exponent(Corollary::strong_power, q) == doctest::Approx(2.0 / 3));
    q.p = 0.5;
    CHECK(corollary_exponent(Corollary::weak_power, q) == doctest::Approx(6.0 / 7));
    q.p = 0.6;
    CHECK_THROWS_AS(corollary_exponent(Corollary::weak_power, q), ValidationError);
    q.p = 1;
    CHECK(corollary_exponent(Corollary::cts_strong_power, q) == doctest::Approx(1.0));
    CHECK(corollary_exponent(Corollary::cts_strong_exp, q) == doctest::Approx(4.0 / 5));
    CHECK(corollary_exponent(Corollary::cts_weak_power, q) == doctest::Approx(4.0 / 6));
    CHECK(corollary_exponent(Corollary::eigen_floor_exp, q) == doctest::Approx(1.0 / 5));
    CHECK(eigenvalue_floor(4.0) == 0.25);
    CHECK(eigenvalue_floor(INFINITY) == 0.0);
}

TEST_CASE("checking a report against H1")
{
    auto T = ToralAutomorphism(IntMatrix::parse("2,1,1,1"));
    auto rep = dissipation_sweep(T, {1e-6, 1e-4, 1e-2}, TauMethod::exact_lattice, {}, 1);
    auto prof = BoundProfile::make(Which::H1, fitted_strong_rate(T, 1, 1, 12), {});
    CHECK(prof.rate.kind == RateFunction::Kind::exponential);
    auto checks = check_bound(rep, prof);
    REQUIRE(checks.size() == 3);
    for (auto& c : checks) {
        CHECK(c.satisfied);
        CHECK(c.name == "strong-mixing dissipation bound");
    }
    auto bad = rep;
    bad.entries[1].tau_d = 1e12;
    auto fails = check_bound(bad, prof);
    CHECK_FALSE(fails[1].satisfied);
    SpectralConvention geo{2, Scaling::geometric};
    CHECK_THROWS_AS(check_bound(rep, BoundProfile::make(Which::H1, RateFunction::power(1, 1), geo)),
                    ValidationError);
}
