#include <doctest.h>

#include <cmath>
#include <random>

#include "disslab/error.hpp"
#include "disslab/spectral.hpp"
#include "disslab/toral.hpp"

using namespace disslab;

TEST_CASE("conventions")
{
    SpectralConvention lat{2, Scaling::lattice}, geo{2, Scaling::geometric};
    CHECK(lat.factor() == 1.0);
    CHECK(geo.factor() == doctest::Approx(4 * M_PI * M_PI).epsilon(1e-15));
    Mode k{2, 1};
    CHECK(lat.eigenvalue(k) == 5.0);
    CHECK(geo.eigenvalue(k) == doctest::Approx(20 * M_PI * M_PI).epsilon(1e-15));
    CHECK(nu_to_lattice(nu_to_geometric(0.3)) == doctest::Approx(0.3).epsilon(1e-15));
    // nu lambda is the same operator in both conventions
    CHECK(nu_to_geometric(0.01) * geo.eigenvalue(k) == doctest::Approx(0.01 * lat.eigenvalue(k)).epsilon(1e-14));
    CHECK(scaling_from_string("geometric") == Scaling::geometric);
    CHECK_THROWS_AS(scaling_from_string("weird"), ValidationError);
    CHECK(to_string(Mode{1, -2}, 2) == "(1,-2)");
}

TEST_CASE("sobolev norms of a single mode")
{
    SpectralConvention lat;
    auto f = single_mode(lat, Mode{2, 1}, {3.0, 4.0});
    CHECK(sobolev_norm(f, 0) == doctest::Approx(5.0));
    CHECK(sobolev_norm(f, 1) == doctest::Approx(5.0 * std::sqrt(5.0)));
    CHECK(sobolev_norm(f, -1) == doctest::Approx(5.0 / std::sqrt(5.0)));
    CHECK(std::exp(log_sobolev_sq(f, 1)) == doctest::Approx(125.0));
}

TEST_CASE("dissipation functional of the cat map")
{
    ToralAutomorphism T(IntMatrix::parse("2,1,1,1"));
    SpectralConvention lat;
    auto f = single_mode(lat, Mode{1, 0});
    // (1,0) moves to (2,1), lambda = 5: E = (1 - exp(-2 nu 5)) / nu
    const double nu = 0.01;
    CHECK(dissipation_functional(f, T.pushforward(), nu) ==
          doctest::Approx((1 - std::exp(-0.1)) / 0.01).epsilon(1e-14));
    // tiny nu tends to 2 |U theta|_1^2 = 10
    CHECK(dissipation_functional(f, T.pushforward(), 1e-12) == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("log scale is carried through normalization")
{
    SpectralConvention lat;
    SpectralField f(lat);
    f.set(Mode{1, 0}, 1e-200);
    f.set(Mode{0, 1}, 2e-200);
    f.set(Mode{3, 3}, 1e-260); // pruned relative to the max
    f.normalize();
    CHECK(f.size() == 2);
    CHECK(std::abs(f.scaled(Mode{0, 1})) == doctest::Approx(1.0));
    // |f|^2 = 5e-400 exactly in log form
    CHECK(log_sobolev_sq(f, 0) == doctest::Approx(std::log(5.0) - 400 * std::log(10.0)).epsilon(1e-13));
}

TEST_CASE("field json round trip and specs")
{
    SpectralConvention lat;
    std::mt19937_64 rng(7);
    auto f = random_sparse_field(lat, rng, 6, 4);
    auto g = field_from_json(field_to_json(f));
    CHECK(g.size() == f.size());
    for (auto& [k, a] : f.coeffs()) CHECK(std::abs(g.scaled(k) - a) == doctest::Approx(0.0));
    auto m = parse_field_spec("mode:1,0", lat);
    CHECK(m.size() == 1);
    CHECK_THROWS_AS(parse_field_spec("mode:1", lat), ValidationError);
    CHECK_THROWS_AS(parse_field_spec("mode:1,x", lat), ValidationError);
    CHECK_THROWS_AS(parse_field_spec("/nonexistent/field.json", lat), ValidationError);
    CHECK_THROWS_AS(random_sparse_field(lat, rng, 0, 3), ValidationError);
}

TEST_CASE("inner product")
{
    SpectralConvention lat;
    auto f = single_mode(lat, Mode{1, 0}, {0.0, 2.0});
    auto g = single_mode(lat, Mode{1, 0}, {1.0, 0.0});
    CHECK(std::abs(inner(f, g) - cplx(0.0, 2.0)) < 1e-15);
    auto h = single_mode(lat, Mode{0, 1});
    CHECK(std::abs(inner(f, h)) == 0.0);
}
