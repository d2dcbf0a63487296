#include <benchmark/benchmark.h>

#include <random>

#include "disslab/kernels.hpp"
#include "disslab/shear.hpp"
#include "disslab/toral.hpp"

using namespace disslab;

namespace {

const ToralAutomorphism& cat()
{
    static const ToralAutomorphism T(IntMatrix::parse("2,1,1,1"));
    return T;
}

void shell_scan(benchmark::State& st, bool omp)
{
    const i128 big = i128(1) << 60;
    for (auto _ : st) {
        auto r = omp ? orbit_shell_scan_omp(cat().A_star(), 8, st.range(0), big)
                     : orbit_shell_scan_serial(cat().A_star(), 8, st.range(0), big);
        benchmark::DoNotOptimize(r.value);
    }
}

void disk_scan(benchmark::State& st, bool omp)
{
    const IntMatrix Bn = cat().B().power(6), An = cat().A_star().power(6);
    for (auto _ : st) {
        auto r = omp ? envelope_disk_scan_omp(Bn, An, 1, 1, st.range(0))
                     : envelope_disk_scan_serial(Bn, An, 1, 1, st.range(0));
        benchmark::DoNotOptimize(r.product);
    }
}

CsrMatrix banded(int n)
{
    CsrMatrix A;
    A.n = n;
    for (int i = 0; i < n; ++i) {
        for (int j = std::max(0, i - 4); j <= std::min(n - 1, i + 4); ++j) {
            A.idx.push_back(j);
            A.val.push_back({1.0 / (1 + i + j), 0.5});
        }
        A.ptr.push_back(static_cast<int>(A.idx.size()));
    }
    return A;
}

void csr(benchmark::State& st, bool omp)
{
    const int n = static_cast<int>(st.range(0));
    const CsrMatrix A = banded(n);
    std::vector<cplx> x(n, 1.0), y;
    std::vector<double> d(n, 0.99);
    for (auto _ : st) {
        if (omp) csr_apply_omp(A, {}, d, x, y);
        else csr_apply_serial(A, {}, d, x, y);
        benchmark::DoNotOptimize(y.data());
    }
}

void cts(benchmark::State& st, bool omp)
{
    const CtsSolver s(ShearFlow::sine(), 1e-3, CtsGrid{16, 64, false}, {2, Scaling::geometric});
    const CtsState th = s.random_state(1);
    for (auto _ : st) {
        CtsState x = th;
        if (omp) s.advance_omp(x, 1.0, 0.1);
        else s.advance_serial(x, 1.0, 0.1);
        benchmark::DoNotOptimize(x.data.data());
    }
}

} // namespace

BENCHMARK_CAPTURE(shell_scan, serial, false)->Arg(200)->Arg(800);
BENCHMARK_CAPTURE(shell_scan, omp, true)->Arg(200)->Arg(800);
BENCHMARK_CAPTURE(disk_scan, serial, false)->Arg(100)->Arg(400);
BENCHMARK_CAPTURE(disk_scan, omp, true)->Arg(100)->Arg(400);
BENCHMARK_CAPTURE(csr, serial, false)->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK_CAPTURE(csr, omp, true)->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK_CAPTURE(cts, serial, false);
BENCHMARK_CAPTURE(cts, omp, true);

BENCHMARK_MAIN();
