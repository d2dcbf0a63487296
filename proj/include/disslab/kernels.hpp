#pragma once

// Hot loops with a serial reference and an OpenMP variant each.  The
// serial versions are the test oracles for the parallel ones; bench/
// compares their speed.

#include <vector>

#include "disslab/intmat.hpp"

namespace disslab {

struct ShellScanResult {
    i128 value = -1;
    Mode argmin;
    long long visited = 0;
};

// min over 0 < |k| <= radius of S_n(k) = sum_{j=1}^n |As^j k|^2, each orbit sum
// abandoned once it exceeds the running incumbent
ShellScanResult orbit_shell_scan_serial(const IntMatrix& As, int n, std::int64_t radius, i128 incumbent);
ShellScanResult orbit_shell_scan_omp(const IntMatrix& As, int n, std::int64_t radius, i128 incumbent);

struct DiskScanResult {
    long double product = 0; // min |Bn k|^{2 w1} |k|^{2 w2}
    Mode argmin;
};

// two-disk scan: |k| <= r, and k = An m with |m| <= r
DiskScanResult envelope_disk_scan_serial(const IntMatrix& Bn, const IntMatrix& An, double alpha,
                                         double beta, std::int64_t r);
DiskScanResult envelope_disk_scan_omp(const IntMatrix& Bn, const IntMatrix& An, double alpha,
                                      double beta, std::int64_t r);

/// Compressed sparse rows, complex values.
struct CsrMatrix {
    int n = 0;
    std::vector<int> ptr{0}, idx;
    std::vector<cplx> val;
};

// y_i = post_i * sum_p val_p * pre_j * x_j   (pre/post may be empty)
void csr_apply_serial(const CsrMatrix& A, const std::vector<double>& pre, const std::vector<double>& post,
                      const std::vector<cplx>& x, std::vector<cplx>& y);
void csr_apply_omp(const CsrMatrix& A, const std::vector<double>& pre, const std::vector<double>& post,
                   const std::vector<cplx>& x, std::vector<cplx>& y);

} // namespace disslab
