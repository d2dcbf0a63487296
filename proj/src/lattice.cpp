#include "disslab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "disslab/error.hpp"
#include "disslab/kernels.hpp"

namespace disslab {

namespace {

Mode combine(int d, const std::vector<Mode>& basis, const std::array<std::int64_t, 4>& x)
{
    Mode k;
    for (int r = 0; r < d; ++r) {
        i128 s = 0;
        for (int i = 0; i < d; ++i) s = add_checked(s, mul_checked(basis[i][r], x[i]));
        if (s > std::numeric_limits<std::int64_t>::max() || s < std::numeric_limits<std::int64_t>::min())
            throw NumericalError("lattice vector exceeds 64-bit range");
        k[r] = static_cast<std::int64_t>(s);
    }
    return k;
}

bool lex_less(const Mode& a, const Mode& b) { return a < b; }

} // namespace

Mode canonical_sign(const Mode& k)
{
    for (int i = 0; i < 4; ++i) {
        if (k[i] > 0) return k;
        if (k[i] < 0) return -k;
    }
    return k;
}

std::vector<Mode> lll_reduce(int d, const InnerProduct& ip, long double delta)
{
    std::vector<Mode> b(d);
    for (int i = 0; i < d; ++i) b[i][i] = 1;
    std::vector<std::vector<long double>> mu(d, std::vector<long double>(d, 0));
    std::vector<long double> Bs(d, 0);
    auto gso = [&] {
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < i; ++j) {
                long double g = ip(b[i], b[j]);
                for (int l = 0; l < j; ++l) g -= mu[j][l] * mu[i][l] * Bs[l];
                mu[i][j] = g / Bs[j];
            }
            long double g = ip(b[i], b[i]);
            for (int l = 0; l < i; ++l) g -= mu[i][l] * mu[i][l] * Bs[l];
            Bs[i] = g;
        }
    };
    gso();
    int k = 1;
    long guard = 0;
    while (k < d) {
        if (++guard > 200000) throw NumericalError("LLL did not terminate");
        for (int j = k - 1; j >= 0; --j) {
            long double q = std::nearbyint(mu[k][j]);
            if (q == 0) continue;
            const auto qi = static_cast<std::int64_t>(q);
            for (int r = 0; r < d; ++r) b[k][r] = mul_add_checked(b[k][r], -qi, b[j][r]);
            gso();
        }
        if (Bs[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * Bs[k - 1]) {
            ++k;
        } else {
            std::swap(b[k], b[k - 1]);
            gso();
            k = std::max(k - 1, 1);
        }
    }
    return b;
}

void enumerate_short(int d, const std::vector<Mode>& basis, const InnerProduct& ip,
                     long double& bound, const std::function<void(const Mode&, long double&)>& visit)
{
    // G = R^T R, Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2
    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> G(d, d), R(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) G(i, j) = ip(basis[i], basis[j]);
    R.setZero();
    for (int j = 0; j < d; ++j) {
        long double s = G(j, j);
        for (int l = 0; l < j; ++l) s -= R(l, j) * R(l, j);
        if (!(s > 0)) throw NumericalError("enumeration: form is not positive definite");
        R(j, j) = std::sqrt(s);
        for (int i = j + 1; i < d; ++i) {
            long double t = G(j, i);
            for (int l = 0; l < j; ++l) t -= R(l, j) * R(l, i);
            R(j, i) = t / R(j, j);
        }
    }
    std::array<long double, 4> qd{};
    std::array<std::array<long double, 4>, 4> qo{};
    for (int i = 0; i < d; ++i) {
        qd[i] = R(i, i) * R(i, i);
        for (int j = i + 1; j < d; ++j) qo[i][j] = R(i, j) / R(i, i);
    }
    std::array<std::int64_t, 4> x{};
    // partial[i] = sum over levels > i
    std::function<void(int, long double, bool)> rec = [&](int i, long double partial, bool higher_zero) {
        long double c = 0;
        for (int j = i + 1; j < d; ++j) c -= qo[i][j] * static_cast<long double>(x[j]);
        long double rem = bound - partial;
        if (rem < 0) return;
        long double w = std::sqrt(rem / qd[i]);
        auto lo = static_cast<std::int64_t>(std::ceil(c - w));
        auto hi = static_cast<std::int64_t>(std::floor(c + w));
        if (higher_zero) lo = std::max<std::int64_t>(lo, 0);
        for (std::int64_t v = lo; v <= hi; ++v) {
            long double t = static_cast<long double>(v) - c;
            long double p = partial + qd[i] * t * t;
            if (p > bound) {
                if (v > c) break;
                continue;
            }
            x[i] = v;
            if (i == 0) {
                if (higher_zero && v == 0) continue;
                visit(combine(d, basis, x), bound);
            } else {
                rec(i - 1, p, higher_zero && v == 0);
            }
        }
        x[i] = 0;
    };
    rec(d - 1, 0.0L, true);
}

OrbitForm::OrbitForm(const IntMatrix& As, int n_) : d(As.d), n(n_)
{
    IntMatrix P = IntMatrix::identity(d);
    for (int j = 1; j <= n; ++j) {
        P = As * P;
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                i128 s = 0;
                for (int t = 0; t < d; ++t) s = add_checked(s, mul_checked(P(t, r), P(t, c)));
                G[r][c] = add_checked(G[r][c], s);
            }
    }
}

i128 OrbitForm::value(const Mode& k) const
{
    i128 s = 0;
    for (int r = 0; r < d; ++r) {
        i128 row = 0;
        for (int c = 0; c < d; ++c) row = add_checked(row, mul_checked(G[r][c], k[c]));
        s = add_checked(s, mul_checked(row, k[r]));
    }
    return s;
}

OrbitMin min_orbit_sum(const ToralAutomorphism& T, int n)
{
    if (n < 1) throw ValidationError("orbit sum needs n >= 1");
    const int d = T.dim();
    OrbitForm F(T.A_star(), n);
    InnerProduct ip = [&F](const Mode& u, const Mode& v) {
        i128 s = 0;
        for (int r = 0; r < F.d; ++r) {
            i128 row = 0;
            for (int c = 0; c < F.d; ++c) row = add_checked(row, mul_checked(F.G[r][c], v[c]));
            s = add_checked(s, mul_checked(row, u[r]));
        }
        return to_ld(s);
    };
    auto basis = lll_reduce(d, ip);
    OrbitMin best;
    best.n = n;
    best.value = -1;
    auto offer = [&](const Mode& k0) {
        Mode k = canonical_sign(k0);
        i128 v = F.value(k);
        if (best.value < 0 || v < best.value || (v == best.value && lex_less(k, best.argmin))) {
            best.value = v;
            best.argmin = k;
        }
    };
    for (auto& b : basis) offer(b);
    // integer values: anything with Q <= best lies below best*(1+eps)
    long double bound = to_ld(best.value) * (1.0L + 1e-12L) + 1e-6L;
    enumerate_short(d, basis, ip, bound, [&](const Mode& k, long double& bd) {
        offer(k);
        bd = std::min(bd, to_ld(best.value) * (1.0L + 1e-12L) + 1e-6L);
    });
    return best;
}

OrbitMin min_orbit_sum_shell(const ToralAutomorphism& T, int n, bool parallel)
{
    if (n < 1) throw ValidationError("orbit sum needs n >= 1");
    const int d = T.dim();
    OrbitForm F(T.A_star(), n);
    // incumbent from the unit vectors
    i128 inc = -1;
    for (int i = 0; i < d; ++i) {
        Mode e;
        e[i] = 1;
        i128 v = F.value(e);
        if (inc < 0 || v < inc) inc = v;
    }
    // S_n(k) >= |A_* k|^2 >= smin^2 |k|^2
    const double smin = T.sigma_min_star() * (1.0 - 1e-12);
    const auto radius = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(to_ld(inc))) / smin)) + 1;
    ShellScanResult r = parallel ? orbit_shell_scan_omp(T.A_star(), n, radius, inc)
                                 : orbit_shell_scan_serial(T.A_star(), n, radius, inc);
    OrbitMin out;
    out.n = n;
    out.value = r.value;
    out.argmin = r.argmin;
    return out;
}

EnvelopeMin min_envelope_product(const ToralAutomorphism& T, int n, double alpha, double beta)
{
    if (!(alpha > 0) || !(beta > 0)) throw ValidationError("envelope needs alpha, beta > 0");
    const int d = T.dim();
    const long double w1 = alpha / (alpha + beta), w2 = beta / (alpha + beta);
    EnvelopeMin best;
    if (n == 0) {
        best.product = 1;
        best.argmin[d - 1] = 1; // lexicographically smallest unit vector
        return best;
    }
    const IntMatrix Bn = T.B().power(n);       // k -> m = B^n k
    const IntMatrix An = T.A_star().power(n);  // m -> k
    auto prod_of = [&](const Mode& k) {
        Mode m = Bn.apply(k);
        long double x = m.norm2(), y = k.norm2();
        return std::exp(w1 * std::log(x) + w2 * std::log(y));
    };
    best.product = std::numeric_limits<long double>::infinity();
    auto offer = [&](const Mode& k0) {
        Mode k = canonical_sign(k0);
        ++best.candidates;
        long double p = prod_of(k);
        if (p < best.product * (1 - 1e-15L) ||
            (p <= best.product * (1 + 1e-15L) && lex_less(k, best.argmin))) {
            if (p < best.product) best.product = p;
            best.argmin = k;
        }
    };
    // incumbent: unit vectors on both sides
    for (int i = 0; i < d; ++i) {
        Mode e;
        e[i] = 1;
        offer(e);
        offer(An.apply(e));
    }

    // s(k) = |k|^2/|m|^2 lies in [smin(A^n)^2, smax(A^n)^2]
    Eigen::MatrixXd Ad(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) Ad(i, j) = static_cast<double>(An(i, j));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ad);
    const long double s_lo = std::pow(static_cast<long double>(svd.singularValues()(d - 1)), 2) / 1.01L;
    const long double s_hi = std::pow(static_cast<long double>(svd.singularValues()(0)), 2) * 1.01L;
    const long double rho = 2.0L;

    // x^w1 y^w2 = min_s [w1 s^w2 x + w2 s^-w1 y]; on [s, rho s] the form
    // w1 s^w2 |m|^2 + w2 (rho s)^-w1 |k|^2 is below the product, so every k
    // with product <= incumbent shows up in one of these enumerations
    std::vector<long double> grid;
    for (long double s = s_lo; s < s_hi * rho; s *= rho) grid.push_back(s);
    // middle first: that is where balanced minimizers live
    std::stable_sort(grid.begin(), grid.end(), [](long double a, long double b) {
        return std::fabs(std::log(a)) < std::fabs(std::log(b));
    });
    for (long double s : grid) {
        const long double ca = w1 * std::pow(s, w2);
        const long double cb = w2 * std::pow(s * rho, -w1);
        InnerProduct ip = [&](const Mode& u, const Mode& v) {
            Mode mu = Bn.apply(u), mv = Bn.apply(v);
            i128 a = 0, b = 0;
            for (int r = 0; r < d; ++r) {
                a = add_checked(a, mul_checked(mu[r], mv[r]));
                b = add_checked(b, mul_checked(u[r], v[r]));
            }
            return ca * to_ld(a) + cb * to_ld(b);
        };
        auto basis = lll_reduce(d, ip);
        long double bound = best.product * (1 + 1e-9L);
        enumerate_short(d, basis, ip, bound, [&](const Mode& k, long double& bd) {
            offer(k);
            bd = std::min(bd, best.product * (1 + 1e-9L));
        });
    }
    return best;
}

} // namespace disslab
