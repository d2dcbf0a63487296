#include "disslab/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include <omp.h>

#include "disslab/error.hpp"
#include "disslab/lattice.hpp"
#include "disslab/toral.hpp"

namespace disslab {

namespace {

bool is_canonical(const Mode& k)
{
    for (int i = 0; i < 4; ++i) {
        if (k[i] > 0) return true;
        if (k[i] < 0) return false;
    }
    return false;
}

// orbit sum with early exit; returns -1 once the sum passes cap
std::int64_t orbit_sum_capped(const IntMatrix& As, int n, Mode k, std::int64_t cap)
{
    const int d = As.d;
    std::int64_t s = 0;
    for (int j = 0; j < n; ++j) {
        Mode m;
        std::int64_t q = 0;
        for (int r = 0; r < d; ++r) {
            std::int64_t v = 0;
            for (int c = 0; c < d; ++c) v += As(r, c) * k[c];
            m[r] = v;
            q += v * v;
        }
        s += q;
        if (s > cap) return -1;
        k = m;
    }
    return s;
}

void merge(ShellScanResult& into, const ShellScanResult& r)
{
    into.visited += r.visited;
    if (r.value < 0) return;
    if (into.value < 0 || r.value < into.value || (r.value == into.value && r.argmin < into.argmin)) {
        into.value = r.value;
        into.argmin = r.argmin;
    }
}

// best is shared between slices; it never drops below the true minimum,
// so every tie at the minimum still survives and the argmin stays deterministic
void scan_slice(const IntMatrix& As, int n, std::int64_t radius, std::int64_t a, ShellScanResult& local,
                std::atomic<std::int64_t>& best)
{
    for_each_in_ball_slice(As.d, radius, a, [&](const Mode& k) {
        if (!is_canonical(k)) return;
        ++local.visited;
        const auto mine = static_cast<std::int64_t>(local.value);
        const std::int64_t s = orbit_sum_capped(As, n, k, std::min(mine, best.load(std::memory_order_relaxed)));
        if (s < 0) return;
        if (s < mine || (s == mine && k < local.argmin)) {
            local.value = s;
            local.argmin = k;
            std::int64_t cur = best.load(std::memory_order_relaxed);
            while (s < cur && !best.compare_exchange_weak(cur, s, std::memory_order_relaxed)) {
            }
        }
    });
}

void check_scan_inputs(std::int64_t radius, i128 incumbent)
{
    if (radius < 1) throw ValidationError("shell scan radius must be >= 1");
    if (incumbent <= 0 || incumbent > (i128(1) << 60))
        throw NumericalError("shell scan incumbent outside the 60-bit window");
    if (radius > (std::int64_t(1) << 28)) throw NumericalError("shell scan radius too large");
}

} // namespace

ShellScanResult orbit_shell_scan_serial(const IntMatrix& As, int n, std::int64_t radius, i128 incumbent)
{
    check_scan_inputs(radius, incumbent);
    ShellScanResult out;
    std::atomic<std::int64_t> best{static_cast<std::int64_t>(incumbent)};
    for (std::int64_t a = 0; a <= radius; ++a) {
        ShellScanResult local;
        local.value = incumbent;
        local.argmin = Mode{std::numeric_limits<std::int64_t>::max()};
        scan_slice(As, n, radius, a, local, best);
        if (local.argmin[0] == std::numeric_limits<std::int64_t>::max()) local.value = -1;
        merge(out, local);
    }
    return out;
}

ShellScanResult orbit_shell_scan_omp(const IntMatrix& As, int n, std::int64_t radius, i128 incumbent)
{
    check_scan_inputs(radius, incumbent);
    const std::int64_t slices = radius + 1;
    std::vector<ShellScanResult> parts(slices);
    std::atomic<std::int64_t> best{static_cast<std::int64_t>(incumbent)};
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t a = 0; a < slices; ++a) {
        ShellScanResult local;
        local.value = incumbent;
        local.argmin = Mode{std::numeric_limits<std::int64_t>::max()};
        scan_slice(As, n, radius, a, local, best);
        if (local.argmin[0] == std::numeric_limits<std::int64_t>::max()) local.value = -1;
        parts[a] = local;
    }
    ShellScanResult out;
    for (auto& p : parts) merge(out, p);
    return out;
}

namespace {

struct DiskLocal {
    long double product = std::numeric_limits<long double>::infinity();
    Mode argmin;
};

void disk_offer(DiskLocal& b, const Mode& k0, const Mode& m, long double w1, long double w2)
{
    Mode k = canonical_sign(k0);
    long double p = std::exp(w1 * std::log(m.norm2()) + w2 * std::log(k.norm2()));
    if (p < b.product || (p == b.product && k < b.argmin)) {
        b.product = p;
        b.argmin = k;
    }
}

void disk_slice(const IntMatrix& Bn, const IntMatrix& An, long double w1, long double w2, std::int64_t r,
                std::int64_t a, DiskLocal& b)
{
    for_each_in_ball_slice(Bn.d, r, a, [&](const Mode& k) {
        if (!is_canonical(k)) return;
        disk_offer(b, k, Bn.apply(k), w1, w2);
    });
    for_each_in_ball_slice(Bn.d, r, a, [&](const Mode& m) {
        if (!is_canonical(m)) return;
        disk_offer(b, An.apply(m), m, w1, w2);
    });
}

DiskScanResult finish(const std::vector<DiskLocal>& parts)
{
    DiskLocal best;
    for (auto& p : parts)
        if (p.product < best.product || (p.product == best.product && p.argmin < best.argmin)) best = p;
    return {best.product, best.argmin};
}

} // namespace

DiskScanResult envelope_disk_scan_serial(const IntMatrix& Bn, const IntMatrix& An, double alpha,
                                         double beta, std::int64_t r)
{
    const long double w1 = alpha / (alpha + beta), w2 = beta / (alpha + beta);
    std::vector<DiskLocal> parts(r + 1);
    for (std::int64_t a = 0; a <= r; ++a) disk_slice(Bn, An, w1, w2, r, a, parts[a]);
    return finish(parts);
}

DiskScanResult envelope_disk_scan_omp(const IntMatrix& Bn, const IntMatrix& An, double alpha, double beta,
                                      std::int64_t r)
{
    const long double w1 = alpha / (alpha + beta), w2 = beta / (alpha + beta);
    std::vector<DiskLocal> parts(r + 1);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t a = 0; a <= r; ++a) disk_slice(Bn, An, w1, w2, r, a, parts[a]);
    return finish(parts);
}

void csr_apply_serial(const CsrMatrix& A, const std::vector<double>& pre, const std::vector<double>& post,
                      const std::vector<cplx>& x, std::vector<cplx>& y)
{
    y.assign(A.n, cplx(0.0));
    for (int i = 0; i < A.n; ++i) {
        cplx s = 0;
        for (int p = A.ptr[i]; p < A.ptr[i + 1]; ++p) {
            const int j = A.idx[p];
            s += A.val[p] * (pre.empty() ? x[j] : pre[j] * x[j]);
        }
        y[i] = post.empty() ? s : post[i] * s;
    }
}

void csr_apply_omp(const CsrMatrix& A, const std::vector<double>& pre, const std::vector<double>& post,
                   const std::vector<cplx>& x, std::vector<cplx>& y)
{
    y.assign(A.n, cplx(0.0));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < A.n; ++i) {
        cplx s = 0;
        for (int p = A.ptr[i]; p < A.ptr[i + 1]; ++p) {
            const int j = A.idx[p];
            s += A.val[p] * (pre.empty() ? x[j] : pre[j] * x[j]);
        }
        y[i] = post.empty() ? s : post[i] * s;
    }
}

} // namespace disslab
