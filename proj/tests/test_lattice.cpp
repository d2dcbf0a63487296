#include <doctest.h>

#include <cmath>

#include "disslab/error.hpp"
#include "disslab/kernels.hpp"
#include "disslab/lattice.hpp"

using namespace disslab;

namespace {

// independent brute force over a box, direct orbit iteration
i128 brute_min_orbit(const IntMatrix& As, int n, int box)
{
    i128 best = -1;
    for (int a = -box; a <= box; ++a)
        for (int b = -box; b <= box; ++b) {
            if (a == 0 && b == 0) continue;
            i128 x = a, y = b, s = 0;
            for (int j = 0; j < n; ++j) {
                const i128 nx = As(0, 0) * x + As(0, 1) * y, ny = As(1, 0) * x + As(1, 1) * y;
                x = nx;
                y = ny;
                s += x * x + y * y;
            }
            if (best < 0 || s < best) best = s;
        }
    return best;
}

} // namespace

TEST_CASE("cat map orbit minima are even Fibonacci numbers")
{
    ToralAutomorphism T(IntMatrix::parse("2,1,1,1"));
    const long long fib2n[] = {1, 3, 8, 21, 55, 144, 377, 987, 2584, 6765};
    for (int n = 1; n <= 10; ++n) {
        CAPTURE(n);
        const OrbitMin m = min_orbit_sum(T, n);
        CHECK(static_cast<long long>(m.value) == fib2n[n - 1]);
        CHECK(static_cast<long long>(min_orbit_sum_shell(T, n).value) == fib2n[n - 1]);
    }
}

TEST_CASE("orbit minima against brute force")
{
    for (const char* spec : {"2,1,1,1", "3,1,2,1", "1,1,1,2", "5,2,2,1"}) {
        ToralAutomorphism T(IntMatrix::parse(spec));
        for (int n = 1; n <= 4; ++n) {
            CAPTURE(spec);
            CAPTURE(n);
            CHECK(min_orbit_sum(T, n).value == brute_min_orbit(T.A_star(), n, 40));
        }
    }
}

TEST_CASE("orbit form matches direct sums")
{
    ToralAutomorphism T(IntMatrix::parse("2,1,1,1"));
    OrbitForm G(T.A_star(), 5);
    for (Mode k : {Mode{1, 0}, Mode{3, -2}, Mode{-7, 11}}) {
        i128 s = 0;
        Mode m = k;
        for (int j = 0; j < 5; ++j) {
            m = T.push(m);
            s += static_cast<i128>(m[0]) * m[0] + static_cast<i128>(m[1]) * m[1];
        }
        CHECK(G.value(k) == s);
    }
}

TEST_CASE("orbit sums overflow loudly")
{
    ToralAutomorphism T(IntMatrix::parse("2,1,1,1"));
    CHECK_THROWS_AS(min_orbit_sum(T, 60), NumericalError);
}

TEST_CASE("LLL and short vectors")
{
    InnerProduct euclid = [](const Mode& a, const Mode& b) {
        return static_cast<long double>(a[0] * b[0] + a[1] * b[1]);
    };
    auto basis = lll_reduce(2, euclid);
    CHECK(euclid(basis[0], basis[0]) == 1.0L);
    CHECK(euclid(basis[1], basis[1]) == 1.0L);
    long double bound = 2.0L;
    int count = 0;
    enumerate_short(2, basis, euclid, bound, [&](const Mode&, long double&) { ++count; });
    CHECK(count == 4); // (1,0) (0,1) (1,1) (1,-1), one sign each
    CHECK(canonical_sign(Mode{-1, 2}) == Mode{1, -2});
    CHECK(canonical_sign(Mode{0, -3}) == Mode{0, 3});
}

TEST_CASE("envelope minimum agrees with the disk scan")
{
    ToralAutomorphism T(IntMatrix::parse("2,1,1,1"));
    for (int n = 1; n <= 6; ++n) {
        const IntMatrix Bn = T.B().power(n), An = T.A_star().power(n);
        const EnvelopeMin e = min_envelope_product(T, n, 1, 1);
        // scan radius sqrt(P) + 1 covers every competitor
        const auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(e.product))) + 1;
        const DiskScanResult d = envelope_disk_scan_serial(Bn, An, 1, 1, r);
        CAPTURE(n);
        CHECK(static_cast<double>(e.product) == doctest::Approx(static_cast<double>(d.product)).epsilon(1e-12));
    }
}
