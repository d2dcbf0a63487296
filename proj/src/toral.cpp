#include "disslab/toral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "disslab/error.hpp"

namespace disslab {

namespace {

std::vector<std::int64_t> divisors_of(std::int64_t n)
{
    std::vector<std::int64_t> out;
    n = std::llabs(n);
    for (std::int64_t i = 1; i * i <= n; ++i)
        if (n % i == 0) {
            out.push_back(i);
            if (i != n / i) out.push_back(n / i);
        }
    std::vector<std::int64_t> all;
    for (auto v : out) {
        all.push_back(v);
        all.push_back(-v);
    }
    std::sort(all.begin(), all.end());
    return all;
}

// rational factor of degree 1 or 2 if there is one
std::optional<IntPoly> small_factor(const IntPoly& p)
{
    const int deg = p.degree();
    if (p.c[0] == 0) return IntPoly{{0, 1}};
    // Cauchy bound on root moduli
    double rho = 0;
    for (int i = 0; i < deg; ++i) rho = std::max(rho, std::fabs(static_cast<double>(p.c[i])));
    rho += 1.0;
    IntPoly q;
    for (auto r : divisors_of(p.c[0])) {
        IntPoly f{{-r, 1}};
        if (exact_divide(p, f, q)) return f;
    }
    if (deg < 4) return std::nullopt;
    const auto bmax = static_cast<std::int64_t>(std::ceil(2 * rho));
    const double cmax = rho * rho;
    for (auto c : divisors_of(p.c[0])) {
        if (std::fabs(static_cast<double>(c)) > cmax) continue;
        for (std::int64_t b = -bmax; b <= bmax; ++b) {
            IntPoly f{{c, b, 1}};
            if (exact_divide(p, f, q)) return f;
        }
    }
    return std::nullopt;
}

} // namespace

ConditionReport check_conditions(const IntMatrix& A)
{
    if (A.d < 2 || A.d > 4) throw ValidationError("matrix dimension must be 2, 3 or 4");
    ConditionReport r;
    r.in_SL = A.det() == 1;
    r.char_poly = char_poly(A);
    const int d = A.d;
    r.c1_no_root_of_unity = true;
    for (int m = 1; m <= 30; ++m) {
        if (euler_phi(m) > d) continue;
        IntPoly q;
        if (exact_divide(r.char_poly, cyclotomic(m), q)) {
            r.c1_no_root_of_unity = false;
            r.cyclotomic_index = m;
            r.witness = "Phi_" + std::to_string(m) + " = " + cyclotomic(m).str();
            break;
        }
    }
    auto f = small_factor(r.char_poly);
    r.c2_irreducible_char_poly = !f.has_value();
    if (f && !r.witness) r.witness = "rational factor " + f->str();
    return r;
}

std::vector<std::complex<double>> poly_roots(const IntPoly& p)
{
    const int n = p.degree();
    if (n < 1) return {};
    if (!p.monic()) throw ValidationError("polynomial must be monic");
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) C(i, n - 1) = -static_cast<double>(p.c[i]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    std::vector<std::complex<double>> r(n);
    for (int i = 0; i < n; ++i) r[i] = es.eigenvalues()(i);
    return r;
}

KroneckerResult kronecker_classify(const IntPoly& p0)
{
    IntPoly p = p0;
    p.trim();
    if (!p.monic()) throw ValidationError("kronecker_classify: polynomial must be monic");
    if (p.degree() < 1 || p.degree() > 8) throw ValidationError("kronecker_classify: degree must be 1..8");
    if (p.c[0] == 0) throw ValidationError("kronecker_classify: zero root (constant term 0)");
    KroneckerResult out{KroneckerResult::Kind::all_roots_of_unity, {0, 0}, {}};
    auto roots = poly_roots(p);
    auto big = std::max_element(roots.begin(), roots.end(),
                                [](auto a, auto b) { return std::abs(a) < std::abs(b); });
    if (std::abs(*big) > 1.0 + 1e-9) {
        out.kind = KroneckerResult::Kind::root_outside_disk;
        out.root = *big;
        return out;
    }
    // every root sits in the closed disk: peel off cyclotomic factors
    IntPoly rest = p;
    for (int m = 1; m <= 30 && rest.degree() > 0; ++m) {
        if (euler_phi(m) > rest.degree()) continue;
        IntPoly q;
        while (rest.degree() > 0 && exact_divide(rest, cyclotomic(m), q)) {
            out.cyclotomic_factors.push_back(m);
            rest = q;
        }
    }
    if (rest.degree() != 0)
        throw NumericalError("kronecker_classify: non-cyclotomic factor " + rest.str() +
                             " with all roots in the unit disk");
    return out;
}

ToralAutomorphism::ToralAutomorphism(const IntMatrix& A) : A_(A)
{
    if (A.d < 2 || A.d > 4) throw ValidationError("matrix dimension must be 2, 3 or 4");
    cond_ = check_conditions(A);
    if (!cond_.in_SL) throw ValidationError("matrix determinant is " + to_string(A.det()) + ", not 1");
    As_ = A.transpose();
    B_ = As_.unimodular_inverse();

    const int d = A.d;
    Eigen::MatrixXd Ad(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) Ad(i, j) = static_cast<double>(A(i, j));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ad);
    lip_ = svd.singularValues()(0);
    smin_ = svd.singularValues()(d - 1);

    Eigen::EigenSolver<Eigen::MatrixXd> es(Ad, false);
    lam_ = es.eigenvalues();
    double sep = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) sep = std::min(sep, std::abs(lam_(i) - lam_(j)));
    if (sep < 1e-7) return; // repeated eigenvalue: no frame

    // sort by modulus descending, then argument, so the frame is reproducible
    std::vector<int> idx(d);
    for (int i = 0; i < d; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        double ma = std::abs(lam_(a)), mb = std::abs(lam_(b));
        if (std::fabs(ma - mb) > 1e-12) return ma > mb;
        return std::arg(lam_(a)) > std::arg(lam_(b));
    });
    Eigen::VectorXcd sorted(d);
    for (int i = 0; i < d; ++i) sorted(i) = lam_(idx[i]);
    lam_ = sorted;

    // v_i = column of adj(lambda_i I - A): entries are integer polynomials in
    // lambda_i, so the frame is Galois-conjugate across i
    auto N = adjugate_coefficients(A);
    auto adj_at = [&](std::complex<double> x) {
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(d, d);
        std::complex<double> pw = 1.0;
        for (int j = d - 1; j >= 0; --j) {
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) M(r, c) += pw * static_cast<double>(N[j](r, c));
            pw *= x;
        }
        return M;
    };
    std::vector<Eigen::MatrixXcd> adjs;
    for (int i = 0; i < d; ++i) adjs.push_back(adj_at(lam_(i)));
    norm_col_ = -1;
    for (int c = 0; c < d && norm_col_ < 0; ++c) {
        bool ok = true;
        for (int i = 0; i < d; ++i)
            if (adjs[i].col(c).norm() < 1e-8) ok = false;
        if (ok) norm_col_ = c;
    }
    if (norm_col_ < 0) return;
    V_.resize(d, d);
    for (int i = 0; i < d; ++i) V_.col(i) = adjs[i].col(norm_col_);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(V_);
    if (!lu.isInvertible()) return;
    Vinv_ = lu.inverse();
    Eigen::JacobiSVD<Eigen::MatrixXcd> sv(V_), si(Vinv_);
    cstar_ = std::max({1.0, sv.singularValues()(0), si.singularValues()(0)});
    frame_ = true;
}

const Eigen::VectorXcd& ToralAutomorphism::eigenvalues() const
{
    return lam_;
}

const Eigen::MatrixXcd& ToralAutomorphism::eigenvectors() const
{
    if (!frame_) throw ValidationError("defective or repeated-eigenvalue matrix has no eigenframe");
    return V_;
}

const Eigen::MatrixXcd& ToralAutomorphism::inverse_frame() const
{
    if (!frame_) throw ValidationError("defective or repeated-eigenvalue matrix has no eigenframe");
    return Vinv_;
}

double ToralAutomorphism::c_star() const
{
    if (!frame_) throw ValidationError("defective or repeated-eigenvalue matrix has no eigenframe");
    return cstar_;
}

ModeMap ToralAutomorphism::pushforward() const
{
    IntMatrix m = As_;
    return [m](const Mode& k) { return m.apply(k); };
}

Eigen::VectorXcd eigen_coordinates(const ToralAutomorphism& T, const Mode& k)
{
    if (k.is_zero()) throw ValidationError("eigen_coordinates: k must be nonzero");
    const int d = T.dim();
    Eigen::VectorXcd kv(d);
    for (int i = 0; i < d; ++i) kv(i) = static_cast<double>(k[i]);
    return T.inverse_frame() * kv;
}

i128 norm_form(const ToralAutomorphism& T, const Mode& k)
{
    const IntMatrix& A = T.A();
    const int d = A.d;
    if (d == 2) {
        const i128 a = A(0, 0), b = A(0, 1), c = A(1, 0), e = A(1, 1);
        const i128 k1 = k[0], k2 = k[1];
        return c * k1 * k1 - (a - e) * k1 * k2 - b * k2 * k2;
    }
    const IntMatrix At = A.transpose();
    auto N = adjugate_coefficients(At);
    // P_k(x) = sum_j x^{d-1-j} (sum_m k_m N_j(m,0)); evaluate at A^T by Horner
    std::vector<std::vector<i128>> acc(d, std::vector<i128>(d, 0));
    for (int j = 0; j < d; ++j) {
        i128 coef = 0;
        for (int m = 0; m < d; ++m) coef = add_checked(coef, mul_checked(k[m], N[j](m, 0)));
        // acc = acc * At + coef I
        std::vector<std::vector<i128>> nxt(d, std::vector<i128>(d, 0));
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                i128 s = 0;
                for (int t = 0; t < d; ++t) s = add_checked(s, mul_checked(acc[r][t], At(t, c)));
                nxt[r][c] = s;
            }
        for (int r = 0; r < d; ++r) nxt[r][r] = add_checked(nxt[r][r], coef);
        acc = std::move(nxt);
    }
    return det_bareiss(acc);
}

NormFormReport verify_norm_form(const ToralAutomorphism& T, int radius)
{
    if (radius < 1) throw ValidationError("verify_norm_form: radius must be >= 1");
    const auto& c = T.conditions();
    if (!c.c1_no_root_of_unity || !c.c2_irreducible_char_poly)
        throw ValidationError("verify_norm_form: matrix violates C1/C2");
    NormFormReport rep;
    rep.min_product = std::numeric_limits<double>::infinity();
    rep.integer_form_ok = true;
    bool first = true;
    long double scale = 0; // N(k) / prod a_i(k), constant over k
    const int d = T.dim();
    for_each_in_ball(d, radius, [&](const Mode& k) {
        ++rep.scanned;
        auto a = eigen_coordinates(T, k);
        std::complex<long double> prod = 1;
        for (int i = 0; i < d; ++i) prod *= std::complex<long double>(a(i).real(), a(i).imag());
        const double ap = static_cast<double>(std::abs(prod));
        if (ap < rep.min_product) {
            rep.min_product = ap;
            rep.argmin = k;
        }
        i128 n = norm_form(T, k);
        if (n == 0) {
            rep.integer_form_ok = false;
            return;
        }
        i128 an = n < 0 ? -n : n;
        if (first || an < rep.min_abs_norm) rep.min_abs_norm = an;
        if (first) {
            scale = to_ld(n) / prod.real();
            first = false;
            return;
        }
        // the rescaled floating product must land on the exact integer
        long double re = prod.real() * scale, im = prod.imag() * scale;
        long double tol = 1e-6L * std::max<long double>(1.0L, std::fabs(to_ld(n)));
        if (std::fabs(re - to_ld(n)) > tol || std::fabs(im) > tol) rep.integer_form_ok = false;
    });
    return rep;
}

} // namespace disslab
