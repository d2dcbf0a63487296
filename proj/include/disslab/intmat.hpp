#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "disslab/spectral.hpp"

namespace disslab {

using i128 = __int128;

std::string to_string(i128 v);
long double to_ld(i128 v);

// checked arithmetic, throws NumericalError on overflow
std::int64_t mul_add_checked(std::int64_t acc, std::int64_t a, std::int64_t b);
i128 mul_checked(i128 a, i128 b);
i128 add_checked(i128 a, i128 b);

/// Small dense integer matrix, d <= 4, row-major.
struct IntMatrix {
    int d = 0;
    std::array<std::int64_t, 16> a{};

    IntMatrix() = default;
    explicit IntMatrix(int dim);
    static IntMatrix identity(int dim);
    // "2,1,1,1" -> 2x2; the count must be a perfect square in {4, 9, 16}
    static IntMatrix parse(const std::string& s);

    std::int64_t& operator()(int i, int j) { return a[i * 4 + j]; }
    std::int64_t operator()(int i, int j) const { return a[i * 4 + j]; }

    IntMatrix transpose() const;
    IntMatrix operator*(const IntMatrix& o) const; // overflow checked
    bool operator==(const IntMatrix& o) const;
    i128 det() const;
    // inverse of a unimodular matrix (det = +-1), exact
    IntMatrix unimodular_inverse() const;
    IntMatrix power(int n) const;

    Mode apply(const Mode& k) const; // overflow checked
    std::string str() const;
};

/// Integer polynomial, coefficients low to high.
struct IntPoly {
    std::vector<std::int64_t> c;

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool monic() const { return !c.empty() && c.back() == 1; }
    void trim();
    std::string str() const;
    bool operator==(const IntPoly&) const = default;
};

IntPoly char_poly(const IntMatrix& A); // det(xI - A)
// quotient when b divides a exactly (b monic), empty optional-like flag otherwise
bool exact_divide(const IntPoly& a, const IntPoly& b, IntPoly& quotient);
IntPoly cyclotomic(int m);
int euler_phi(int m);

// N_0..N_{d-1} with adj(xI - M) = sum_j x^{d-1-j} N_j
std::vector<IntMatrix> adjugate_coefficients(const IntMatrix& M);

// exact determinant of an integer matrix given as rows, Bareiss in 128 bits
i128 det_bareiss(std::vector<std::vector<i128>> m);

} // namespace disslab
