#pragma once

#include <functional>
#include <vector>

#include "disslab/intmat.hpp"
#include "disslab/toral.hpp"

namespace disslab {

// positive definite inner product on Z^d, evaluated to long double accuracy
using InnerProduct = std::function<long double(const Mode&, const Mode&)>;

// LLL-reduced basis (columns returned as modes) of Z^d under ip
std::vector<Mode> lll_reduce(int d, const InnerProduct& ip, long double delta = 0.99L);

// Fincke-Pohst: visits every nonzero k (one of +-k) in the lattice spanned
// by basis with Q(k) <= bound.  visit(k) may lower bound through the
// reference it receives.
void enumerate_short(int d, const std::vector<Mode>& basis, const InnerProduct& ip,
                     long double& bound, const std::function<void(const Mode&, long double&)>& visit);

// sign convention: first nonzero coordinate positive
Mode canonical_sign(const Mode& k);

/// Exact orbit quadratic form S_n(k) = sum_{j=1}^n |A_*^j k|^2 = k^T G_n k.
struct OrbitForm {
    int d = 2;
    int n = 0;
    std::array<std::array<i128, 4>, 4> G{};

    OrbitForm(const IntMatrix& As, int n);
    i128 value(const Mode& k) const; // overflow checked
};

struct OrbitMin {
    i128 value = 0;
    Mode argmin; // canonical sign, lexicographically smallest among ties
    int n = 0;
};

// certified lattice minimum of S_n over k != 0 (LLL + enumeration, exact
// evaluation of every candidate)
OrbitMin min_orbit_sum(const ToralAutomorphism& T, int n);

// spec-style certified shell scan: radius sqrt(incumbent)/sigma_min with
// early termination of each orbit sum; used as the reference
OrbitMin min_orbit_sum_shell(const ToralAutomorphism& T, int n, bool parallel = false);

struct EnvelopeMin {
    long double product = 0; // min over k of |B^n k|^{2a/(a+b)} |k|^{2b/(a+b)}
    Mode argmin;
    long long candidates = 0;
};

// certified minimum via a finite cover of quadratic forms; see lattice.cpp
EnvelopeMin min_envelope_product(const ToralAutomorphism& T, int n, double alpha, double beta);

} // namespace disslab
