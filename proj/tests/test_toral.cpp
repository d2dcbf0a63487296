#include <doctest.h>

#include <cmath>

#include "disslab/error.hpp"
#include "disslab/intmat.hpp"
#include "disslab/runner.hpp"
#include "disslab/toral.hpp"

using namespace disslab;

namespace {
const double lp = (3 + std::sqrt(5.0)) / 2;
}

TEST_CASE("integer matrices")
{
    auto A = IntMatrix::parse("2,1,1,1");
    CHECK(A.d == 2);
    CHECK(A.det() == 1);
    auto Ai = A.unimodular_inverse();
    CHECK(A * Ai == IntMatrix::identity(2));
    CHECK(A.transpose()(0, 1) == 1);
    CHECK(A.power(3)(0, 0) == 13); // F_7
    CHECK_THROWS_AS(IntMatrix::parse("1,2,3"), ValidationError);
    CHECK_THROWS_AS(IntMatrix::parse("1,x,3,4"), ValidationError);
    CHECK_THROWS_AS(A.power(200), NumericalError);
    CHECK(char_poly(A) == IntPoly{{1, -3, 1}});
    CHECK(to_string(static_cast<i128>(-12345)) == "-12345");
}

TEST_CASE("cat map conditions and frame")
{
    ToralAutomorphism T(IntMatrix::parse("2,1,1,1"));
    CHECK(T.conditions().in_SL);
    CHECK(T.conditions().c1_no_root_of_unity);
    CHECK(T.conditions().c2_irreducible_char_poly);
    CHECK(T.has_frame());
    CHECK(T.lipschitz() == doctest::Approx(lp).epsilon(1e-14));
    CHECK(T.sigma_min_star() == doctest::Approx(1 / lp).epsilon(1e-14));
    CHECK(T.push(Mode{1, 0}) == Mode{2, 1});
    CHECK(T.pull(T.push(Mode{3, -7})) == Mode{3, -7});
    auto a = eigen_coordinates(T, Mode{1, 0});
    CHECK(std::abs(a(0)) == doctest::Approx(1 / std::sqrt(5.0)).epsilon(1e-14));
    CHECK(std::abs(a(1)) == doctest::Approx(1 / std::sqrt(5.0)).epsilon(1e-14));
    CHECK(std::abs(a(0) + a(1)) < 1e-14); // opposite signs
}

TEST_CASE("norm form values")
{
    ToralAutomorphism T(IntMatrix::parse("2,1,1,1"));
    CHECK(norm_form(T, Mode{2, 3}) == -11);
    CHECK(norm_form(T, Mode{1, -2}) == -1);
    CHECK(norm_form(T, Mode{1, 0}) == 1);
    // N(k) is invariant under the map up to sign (det = 1)
    for (Mode k : {Mode{2, 3}, Mode{5, -1}, Mode{-4, 7}}) {
        const i128 n0 = norm_form(T, k), n1 = norm_form(T, T.push(k));
        CHECK((n0 == n1 || n0 == -n1));
    }
    auto rep = verify_norm_form(T, 200);
    CHECK(rep.integer_form_ok);
    CHECK(rep.min_abs_norm == 1);
    CHECK(rep.min_product == doctest::Approx(0.2).epsilon(1e-10));
}

TEST_CASE("failing conditions")
{
    auto shear = check_conditions(IntMatrix::parse("1,1,0,1"));
    CHECK_FALSE(shear.c1_no_root_of_unity);
    CHECK(shear.cyclotomic_index == 1);
    auto rot = check_conditions(IntMatrix::parse("0,-1,1,0"));
    CHECK_FALSE(rot.c1_no_root_of_unity);
    CHECK(rot.cyclotomic_index == 4);
    auto notsl = check_conditions(IntMatrix::parse("2,0,0,1"));
    CHECK_FALSE(notsl.in_SL);
    // 4x4 with reducible characteristic polynomial: direct sum of two cat maps
    auto red = check_conditions(IntMatrix::parse("2,1,0,0,1,1,0,0,0,0,2,1,0,0,1,1"));
    CHECK(red.c1_no_root_of_unity);
    CHECK_FALSE(red.c2_irreducible_char_poly);
}

TEST_CASE("kronecker classification")
{
    auto k = kronecker_classify(IntPoly{{1, 1, 1}}); // Phi_3
    CHECK(k.kind == KroneckerResult::Kind::all_roots_of_unity);
    auto o = kronecker_classify(IntPoly{{1, -3, 1}});
    CHECK(o.kind == KroneckerResult::Kind::root_outside_disk);
    CHECK(std::abs(o.root) == doctest::Approx(lp).epsilon(1e-12));
    auto scan = kronecker_scan_sl2(2);
    CHECK(scan.misclassified == 0);
    CHECK(scan.in_disk > 0);
}

TEST_CASE("cyclotomic polynomials")
{
    CHECK(cyclotomic(1) == IntPoly{{-1, 1}});
    CHECK(cyclotomic(4) == IntPoly{{1, 0, 1}});
    CHECK(cyclotomic(6) == IntPoly{{1, -1, 1}});
    IntPoly q;
    CHECK(exact_divide(IntPoly{{-1, 0, 0, 1}}, cyclotomic(1), q)); // x^3 - 1
    CHECK(q == IntPoly{{1, 1, 1}});
}

TEST_CASE("ball enumeration counts")
{
    long long n = 0;
    for_each_in_ball(2, 5, [&](const Mode&) { ++n; });
    CHECK(n == 80); // 81 lattice points in the disk of radius 5, minus the origin
}
