#include "disslab/intmat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "disslab/error.hpp"

namespace disslab {

std::string to_string(i128 v)
{
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    std::string s;
    while (u) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

long double to_ld(i128 v) { return static_cast<long double>(v); }

std::int64_t mul_add_checked(std::int64_t acc, std::int64_t a, std::int64_t b)
{
    std::int64_t p, r;
    if (__builtin_mul_overflow(a, b, &p) || __builtin_add_overflow(acc, p, &r))
        throw NumericalError("64-bit mode overflow");
    return r;
}

i128 mul_checked(i128 a, i128 b)
{
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw NumericalError("128-bit overflow");
    return r;
}

i128 add_checked(i128 a, i128 b)
{
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw NumericalError("128-bit overflow");
    return r;
}

IntMatrix::IntMatrix(int dim) : d(dim)
{
    if (dim < 1 || dim > 4) throw ValidationError("matrix dimension must be 1..4");
}

IntMatrix IntMatrix::identity(int dim)
{
    IntMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::parse(const std::string& s)
{
    std::vector<std::int64_t> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            long long x = std::stoll(tok, &pos);
            while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
            if (pos != tok.size()) throw ValidationError("");
            v.push_back(x);
        } catch (const std::exception&) {
            throw ValidationError("malformed matrix entry '" + tok + "'");
        }
    }
    int d = 0;
    for (int k = 2; k <= 4; ++k)
        if (static_cast<int>(v.size()) == k * k) d = k;
    if (d == 0) throw ValidationError("matrix must have 4, 9 or 16 entries (square, d = 2..4)");
    IntMatrix m(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = v[i * d + j];
    return m;
}

IntMatrix IntMatrix::transpose() const
{
    IntMatrix t(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) t(i, j) = (*this)(j, i);
    return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const
{
    IntMatrix r(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            std::int64_t s = 0;
            for (int k = 0; k < d; ++k) s = mul_add_checked(s, (*this)(i, k), o(k, j));
            r(i, j) = s;
        }
    return r;
}

bool IntMatrix::operator==(const IntMatrix& o) const
{
    if (d != o.d) return false;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if ((*this)(i, j) != o(i, j)) return false;
    return true;
}

i128 IntMatrix::det() const
{
    std::vector<std::vector<i128>> m(d, std::vector<i128>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m[i][j] = (*this)(i, j);
    return det_bareiss(m);
}

IntMatrix IntMatrix::unimodular_inverse() const
{
    i128 dt = det();
    if (dt != 1 && dt != -1) throw ValidationError("matrix is not unimodular");
    // adj(A) = (-1)^{d-1} N_{d-1} from the adjugate expansion at x = 0
    auto N = adjugate_coefficients(*this);
    IntMatrix adj = N[d - 1];
    const std::int64_t sgn = (d % 2 == 1) ? 1 : -1;
    IntMatrix inv(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) inv(i, j) = adj(i, j) * sgn * static_cast<std::int64_t>(dt);
    return inv;
}

IntMatrix IntMatrix::power(int n) const
{
    if (n < 0) return unimodular_inverse().power(-n);
    IntMatrix r = identity(d);
    for (int i = 0; i < n; ++i) r = *this * r;
    return r;
}

Mode IntMatrix::apply(const Mode& k) const
{
    Mode r;
    for (int i = 0; i < d; ++i) {
        std::int64_t s = 0;
        for (int j = 0; j < d; ++j) s = mul_add_checked(s, (*this)(i, j), k[j]);
        r[i] = s;
    }
    return r;
}

std::string IntMatrix::str() const
{
    std::string s = "[";
    for (int i = 0; i < d; ++i) {
        s += i ? ",[" : "[";
        for (int j = 0; j < d; ++j) s += (j ? "," : "") + std::to_string((*this)(i, j));
        s += "]";
    }
    return s + "]";
}

void IntPoly::trim()
{
    while (c.size() > 1 && c.back() == 0) c.pop_back();
}

std::string IntPoly::str() const
{
    std::string s;
    for (int i = degree(); i >= 0; --i) {
        std::int64_t v = c[i];
        if (v == 0 && degree() > 0) continue;
        std::string mag = std::to_string(v < 0 ? -v : v);
        if (s.empty()) s += v < 0 ? "-" : "";
        else s += v < 0 ? " - " : " + ";
        if (i == 0) s += mag;
        else {
            if (mag != "1") s += mag;
            s += i == 1 ? "x" : "x^" + std::to_string(i);
        }
    }
    return s.empty() ? "0" : s;
}

std::vector<IntMatrix> adjugate_coefficients(const IntMatrix& A)
{
    // Faddeev-LeVerrier: M_1 = I, M_k = A M_{k-1} + c_{d-k+1} I
    const int d = A.d;
    std::vector<IntMatrix> M;
    std::vector<i128> c(d + 1, 0);
    c[d] = 1;
    IntMatrix cur = IntMatrix::identity(d);
    for (int k = 1; k <= d; ++k) {
        if (k > 1) {
            cur = A * cur;
            for (int i = 0; i < d; ++i) cur(i, i) += static_cast<std::int64_t>(c[d - k + 1]);
        }
        M.push_back(cur);
        IntMatrix am = A * cur;
        i128 tr = 0;
        for (int i = 0; i < d; ++i) tr += am(i, i);
        c[d - k] = -tr / k;
    }
    return M;
}

IntPoly char_poly(const IntMatrix& A)
{
    const int d = A.d;
    std::vector<i128> c(d + 1, 0);
    c[d] = 1;
    IntMatrix cur = IntMatrix::identity(d);
    for (int k = 1; k <= d; ++k) {
        if (k > 1) {
            cur = A * cur;
            for (int i = 0; i < d; ++i) cur(i, i) += static_cast<std::int64_t>(c[d - k + 1]);
        }
        IntMatrix am = A * cur;
        i128 tr = 0;
        for (int i = 0; i < d; ++i) tr += am(i, i);
        c[d - k] = -tr / k;
    }
    IntPoly p;
    for (auto v : c) p.c.push_back(static_cast<std::int64_t>(v));
    return p;
}

bool exact_divide(const IntPoly& a, const IntPoly& b, IntPoly& q)
{
    if (!b.monic()) throw ValidationError("divisor must be monic");
    std::vector<i128> r(a.c.begin(), a.c.end());
    const int db = b.degree();
    const int da = a.degree();
    if (da < db) return false;
    std::vector<i128> qq(da - db + 1, 0);
    for (int i = da - db; i >= 0; --i) {
        i128 coef = r[i + db];
        qq[i] = coef;
        if (coef == 0) continue;
        for (int j = 0; j <= db; ++j) r[i + j] = add_checked(r[i + j], -mul_checked(coef, b.c[j]));
    }
    for (auto v : r)
        if (v != 0) return false;
    q.c.clear();
    for (auto v : qq) {
        if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
            throw NumericalError("polynomial coefficient overflow");
        q.c.push_back(static_cast<std::int64_t>(v));
    }
    q.trim();
    return true;
}

int euler_phi(int m)
{
    int r = m;
    for (int p = 2; p * p <= m; ++p)
        if (m % p == 0) {
            while (m % p == 0) m /= p;
            r -= r / p;
        }
    if (m > 1) r -= r / m;
    return r;
}

IntPoly cyclotomic(int m)
{
    if (m < 1) throw ValidationError("cyclotomic index must be >= 1");
    IntPoly p;
    p.c.assign(m + 1, 0);
    p.c[0] = -1;
    p.c[m] = 1;
    for (int e = 1; e < m; ++e) {
        if (m % e) continue;
        IntPoly q;
        exact_divide(p, cyclotomic(e), q);
        p = q;
    }
    return p;
}

i128 det_bareiss(std::vector<std::vector<i128>> m)
{
    const int n = static_cast<int>(m.size());
    if (n == 0) return 1;
    i128 sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m[k][k] == 0) {
            int sw = -1;
            for (int i = k + 1; i < n; ++i)
                if (m[i][k] != 0) {
                    sw = i;
                    break;
                }
            if (sw < 0) return 0;
            std::swap(m[k], m[sw]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                i128 v = add_checked(mul_checked(m[i][j], m[k][k]), -mul_checked(m[i][k], m[k][j]));
                m[i][j] = v / prev;
            }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

} // namespace disslab
