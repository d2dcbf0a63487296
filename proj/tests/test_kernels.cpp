#include <doctest.h>

#include <random>

#include "disslab/kernels.hpp"
#include "disslab/toral.hpp"

using namespace disslab;

TEST_CASE("orbit shell scan: serial and parallel agree")
{
    ToralAutomorphism T(IntMatrix::parse("2,1,1,1"));
    const i128 big = i128(1) << 60;
    for (int n = 1; n <= 8; ++n) {
        const auto a = orbit_shell_scan_serial(T.A_star(), n, 30, big);
        const auto b = orbit_shell_scan_omp(T.A_star(), n, 30, big);
        CAPTURE(n);
        CHECK(a.value == b.value);
        CHECK(a.argmin == b.argmin);
    }
    CHECK(orbit_shell_scan_serial(T.A_star(), 5, 30, big).value == 55);
}

TEST_CASE("disk scan: serial and parallel agree")
{
    ToralAutomorphism T(IntMatrix::parse("3,1,2,1"));
    for (int n = 1; n <= 5; ++n) {
        const IntMatrix Bn = T.B().power(n), An = T.A_star().power(n);
        const auto a = envelope_disk_scan_serial(Bn, An, 2, 1, 40);
        const auto b = envelope_disk_scan_omp(Bn, An, 2, 1, 40);
        CHECK(a.product == b.product);
        CHECK(a.argmin == b.argmin);
    }
}

TEST_CASE("csr apply: serial and parallel agree")
{
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    CsrMatrix A;
    A.n = 300;
    for (int i = 0; i < A.n; ++i) {
        for (int j = i % 3; j < A.n; j += 37) {
            A.idx.push_back(j);
            A.val.push_back({g(rng), g(rng)});
        }
        A.ptr.push_back(static_cast<int>(A.idx.size()));
    }
    std::vector<cplx> x(A.n);
    std::vector<double> pre(A.n), post(A.n);
    for (int i = 0; i < A.n; ++i) {
        x[i] = {g(rng), g(rng)};
        pre[i] = std::exp(-0.01 * i);
        post[i] = 1.0 / (1 + i);
    }
    std::vector<cplx> y1, y2;
    csr_apply_serial(A, pre, post, x, y1);
    csr_apply_omp(A, pre, post, x, y2);
    CHECK(y1 == y2);
    csr_apply_serial(A, {}, {}, x, y1);
    csr_apply_omp(A, {}, {}, x, y2);
    CHECK(y1 == y2);
    // dense check of one row
    cplx s = 0;
    for (int p = A.ptr[5]; p < A.ptr[6]; ++p) s += A.val[p] * x[A.idx[p]];
    CHECK(std::abs(y1[5] - s) < 1e-14);
}
