#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "disslab/intmat.hpp"

namespace disslab {

struct ConditionReport {
    bool in_SL = false;
    bool c1_no_root_of_unity = false;  // C1
    bool c2_irreducible_char_poly = false; // C2
    std::optional<std::string> witness;
    int cyclotomic_index = 0; // m of the Phi_m divisor when C1 fails
    IntPoly char_poly;
};

ConditionReport check_conditions(const IntMatrix& A);

struct KroneckerResult {
    enum class Kind { root_outside_disk, all_roots_of_unity } kind;
    std::complex<double> root;       // largest-modulus root when outside
    std::vector<int> cyclotomic_factors; // with multiplicity
};

KroneckerResult kronecker_classify(const IntPoly& p);

// all complex roots, companion-matrix eigenvalues
std::vector<std::complex<double>> poly_roots(const IntPoly& p);

/// Integer automorphism of T^d with its eigenframe.
/// Modes move under A_* = A^T; the Koopman pullback is B = (A^T)^{-1}.
class ToralAutomorphism {
public:
    explicit ToralAutomorphism(const IntMatrix& A);

    int dim() const { return A_.d; }
    const IntMatrix& A() const { return A_; }
    const IntMatrix& A_star() const { return As_; }
    const IntMatrix& B() const { return B_; }
    const ConditionReport& conditions() const { return cond_; }

    Mode push(const Mode& m) const { return As_.apply(m); } // input mode -> image mode
    Mode pull(const Mode& k) const { return B_.apply(k); }

    double lipschitz() const { return lip_; }
    double sigma_min_star() const { return smin_; } // smallest singular value of A_*

    bool has_frame() const { return frame_; }
    const Eigen::VectorXcd& eigenvalues() const;
    const Eigen::MatrixXcd& eigenvectors() const; // columns v_i
    const Eigen::MatrixXcd& inverse_frame() const;
    double c_star() const;
    int normalization_column() const { return norm_col_; }

    ModeMap pushforward() const;

private:
    IntMatrix A_, As_, B_;
    ConditionReport cond_;
    double lip_ = 0, smin_ = 0;
    bool frame_ = false;
    int norm_col_ = 0;
    Eigen::VectorXcd lam_;
    Eigen::MatrixXcd V_, Vinv_;
    double cstar_ = 0;
};

// a(k) with k = sum a_i v_i
Eigen::VectorXcd eigen_coordinates(const ToralAutomorphism& T, const Mode& k);

// exact integer norm form; d = 2 uses c k1^2 - (a-e) k1 k2 - b k2^2,
// d > 2 uses det P_k(A^T) with P_k the dual eigenvector numerator
i128 norm_form(const ToralAutomorphism& T, const Mode& k);

struct NormFormReport {
    double min_product = 0;
    Mode argmin;
    bool integer_form_ok = false;
    i128 min_abs_norm = 0;
    long long scanned = 0;
};

NormFormReport verify_norm_form(const ToralAutomorphism& T, int radius);

// all nonzero k with |k| <= radius and k[0] = a, lexicographic order
template <class F>
void for_each_in_ball_slice(int d, std::int64_t radius, std::int64_t a, F&& f)
{
    const long double r2 = static_cast<long double>(radius) * radius;
    auto isqrt = [](long double v) {
        if (v < 0) return std::int64_t(-1);
        auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
        while (static_cast<long double>(s + 1) * (s + 1) <= v) ++s;
        while (s > 0 && static_cast<long double>(s) * s > v) --s;
        return s;
    };
    Mode k;
    k[0] = a;
    const long double s0 = static_cast<long double>(a) * a;
    const std::int64_t r1 = isqrt(r2 - s0);
    for (std::int64_t b = -r1; b <= r1; ++b) {
        k[1] = b;
        const long double s1 = s0 + static_cast<long double>(b) * b;
        if (d == 2) {
            if (!k.is_zero()) f(k);
            continue;
        }
        const std::int64_t rc = isqrt(r2 - s1);
        for (std::int64_t c = -rc; c <= rc; ++c) {
            k[2] = c;
            const long double s2 = s1 + static_cast<long double>(c) * c;
            if (d == 3) {
                if (!k.is_zero()) f(k);
                continue;
            }
            const std::int64_t re = isqrt(r2 - s2);
            for (std::int64_t e = -re; e <= re; ++e) {
                k[3] = e;
                if (!k.is_zero()) f(k);
            }
            k[3] = 0;
        }
        k[2] = 0;
    }
}

// all nonzero k with |k| <= radius, lexicographic order
template <class F>
void for_each_in_ball(int d, std::int64_t radius, F&& f)
{
    for (std::int64_t a = -radius; a <= radius; ++a) for_each_in_ball_slice(d, radius, a, f);
}

} // namespace disslab
