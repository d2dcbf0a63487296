#include "disslab/shear.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <fftw3.h>

#include "disslab/error.hpp"
#include "disslab/fit.hpp"

namespace disslab {

ShearFlow::ShearFlow(double mean, std::vector<double> a, std::vector<double> b)
    : mean_(mean), a_(std::move(a)), b_(std::move(b))
{
    if (a_.size() != b_.size()) throw ValidationError("shear coefficients come in cos/sin pairs");
    for (double x : a_)
        if (!std::isfinite(x)) throw ValidationError("shear coefficients must be finite");
    for (double x : b_)
        if (!std::isfinite(x)) throw ValidationError("shear coefficients must be finite");
    finish();
}

ShearFlow ShearFlow::sine() { return ShearFlow(0.0, {0.0}, {1.0}); }
ShearFlow ShearFlow::zero() { return ShearFlow(0.0, {}, {}); }

ShearFlow ShearFlow::parse(const std::string& spec)
{
    if (spec == "sin") return sine();
    if (spec == "zero") return zero();
    if (spec.rfind("coeffs:", 0) != 0) throw ValidationError("shear spec must be sin, zero or coeffs:mean,a1,b1,...");
    std::vector<double> v;
    std::stringstream ss(spec.substr(7));
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            v.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ValidationError("bad shear coefficient '" + item + "'");
        }
    }
    if (v.empty() || v.size() % 2 == 0) throw ValidationError("coeffs needs mean followed by (a_j, b_j) pairs");
    std::vector<double> a, b;
    for (std::size_t i = 1; i < v.size(); i += 2) {
        a.push_back(v[i]);
        b.push_back(v[i + 1]);
    }
    return ShearFlow(v[0], a, b);
}

double ShearFlow::v(double y) const
{
    double s = mean_;
    for (std::size_t j = 0; j < a_.size(); ++j) {
        const double w = 2 * M_PI * (j + 1) * y;
        s += a_[j] * std::cos(w) + b_[j] * std::sin(w);
    }
    return s;
}

double ShearFlow::dv(double y) const
{
    double s = 0;
    for (std::size_t j = 0; j < a_.size(); ++j) {
        const double f = 2 * M_PI * (j + 1), w = f * y;
        s += f * (-a_[j] * std::sin(w) + b_[j] * std::cos(w));
    }
    return s;
}

double ShearFlow::d2v(double y) const
{
    double s = 0;
    for (std::size_t j = 0; j < a_.size(); ++j) {
        const double f = 2 * M_PI * (j + 1), w = f * y;
        s -= f * f * (a_[j] * std::cos(w) + b_[j] * std::sin(w));
    }
    return s;
}

void ShearFlow::finish()
{
    const int N = 4096;
    grad_ = 0;
    int arg = 0;
    for (int i = 0; i < N; ++i) {
        const double g = std::fabs(dv(double(i) / N));
        if (g > grad_) {
            grad_ = g;
            arg = i;
        }
    }
    // golden section around the grid maximum
    double lo = (arg - 1.0) / N, hi = (arg + 1.0) / N;
    const double r = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 80; ++it) {
        const double m1 = hi - r * (hi - lo), m2 = lo + r * (hi - lo);
        if (std::fabs(dv(m1)) < std::fabs(dv(m2))) lo = m1;
        else hi = m2;
    }
    grad_ = std::max(grad_, std::fabs(dv(0.5 * (lo + hi))));

    // critical points: sign changes of v' on the grid, refined by bisection
    nondeg_ = grad_ > 0;
    const double scale = 1 + grad_;
    for (int i = 0; i < N && nondeg_; ++i) {
        double a = double(i) / N, b = double(i + 1) / N;
        double fa = dv(a), fb = dv(b);
        if (fa == 0) {
            if (std::fabs(d2v(a)) < 1e-8 * scale) nondeg_ = false;
            continue;
        }
        if ((fa < 0) == (fb < 0) || fb == 0) continue;
        for (int it = 0; it < 60; ++it) {
            const double m = 0.5 * (a + b);
            if ((dv(m) < 0) == (fa < 0)) a = m;
            else b = m;
        }
        if (std::fabs(d2v(0.5 * (a + b))) < 1e-8 * scale) nondeg_ = false;
    }
}

struct CtsSolver::Plan {
    int M;
    fftw_plan fwd = nullptr, bwd = nullptr;

    explicit Plan(int m) : M(m)
    {
        std::vector<cplx> buf(M);
        auto* p = reinterpret_cast<fftw_complex*>(buf.data());
        fwd = fftw_plan_dft_1d(M, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        bwd = fftw_plan_dft_1d(M, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!fwd || !bwd) throw NumericalError("FFT plan creation failed");
    }
    ~Plan()
    {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    void forward(cplx* x) const
    {
        auto* p = reinterpret_cast<fftw_complex*>(x);
        fftw_execute_dft(fwd, p, p);
    }
    void backward(cplx* x) const
    {
        auto* p = reinterpret_cast<fftw_complex*>(x);
        fftw_execute_dft(bwd, p, p);
    }
};

struct CtsSolver::Tables {
    // per band, M entries each; diffusion multipliers include the 1/M of the round trip
    std::vector<double> half, full;
    std::vector<cplx> phase;
    bool diffuse = true;
};

CtsSolver::CtsSolver(const ShearFlow& flow, double nu, CtsGrid grid, SpectralConvention conv)
    : flow_(flow), nu_(nu), grid_(grid), conv_(conv)
{
    if (!(nu >= 0) || !std::isfinite(nu)) throw ValidationError("nu must be >= 0");
    if (conv.dim != 2) throw ValidationError("the shear solver lives on the 2-torus");
    if (grid.k1max < 1) throw ValidationError("k1max must be >= 1");
    if (grid.M < 4 || (grid.M & (grid.M - 1)) != 0) throw ValidationError("y grid size must be a power of two >= 4");
    if (grid.M < 4 * std::max(1, flow.bandwidth()))
        throw ValidationError("y grid of " + std::to_string(grid.M) + " points aliases a profile of bandwidth " +
                              std::to_string(flow.bandwidth()) + "; need at least 4 points per profile wavelength");
    for (int k = -grid.k1max; k <= grid.k1max; ++k)
        if (k != 0 || grid.include_zero_band) k1_.push_back(k);
    plan_ = std::make_shared<Plan>(grid.M);
}

double CtsSolver::lambda1() const
{
    // (k1, m) = (+-1, 0), or (0, +-1) when the zero band is kept
    return conv_.eigenvalue(Mode{1, 0});
}

CtsState CtsSolver::zero_state() const
{
    CtsState s;
    s.data.assign(static_cast<std::size_t>(bands()) * grid_.M, 0.0);
    return s;
}

CtsState CtsSolver::band_state(int k1, int m, cplx amp) const
{
    auto it = std::find(k1_.begin(), k1_.end(), k1);
    if (it == k1_.end()) throw ValidationError("wavenumber " + std::to_string(k1) + " is not in the truncation");
    if (2 * std::abs(m) >= grid_.M) throw ValidationError("y mode beyond the grid's Nyquist limit");
    CtsState s = zero_state();
    const int b = static_cast<int>(it - k1_.begin());
    for (int j = 0; j < grid_.M; ++j)
        s.data[b * grid_.M + j] = amp * std::polar(1.0, 2 * M_PI * m * double(j) / grid_.M);
    return s;
}

CtsState CtsSolver::random_state(std::uint64_t seed) const
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    CtsState s = zero_state();
    for (auto& x : s.data) x = {g(rng), g(rng)};
    return s;
}

CtsSolver::Tables CtsSolver::tables(double h, bool adjoint) const
{
    const int M = grid_.M, B = bands();
    Tables tb;
    tb.diffuse = nu_ > 0;
    tb.half.resize(static_cast<std::size_t>(B) * M);
    tb.full.resize(tb.half.size());
    tb.phase.resize(tb.half.size());
    const double sgn = adjoint ? 1.0 : -1.0;
    for (int b = 0; b < B; ++b) {
        const int k = k1_[b];
        for (int i = 0; i < M; ++i) {
            const int m = i <= M / 2 ? i : i - M;
            const double lam = conv_.eigenvalue(Mode{k, m});
            tb.half[b * M + i] = std::exp(-nu_ * lam * h / 2) / M;
            tb.full[b * M + i] = std::exp(-nu_ * lam * h) / M;
            tb.phase[b * M + i] = std::polar(1.0, sgn * 2 * M_PI * k * flow_.v(double(i) / M) * h);
        }
    }
    return tb;
}

void CtsSolver::band_run(const Tables& tb, int b, cplx* x, int n) const
{
    const int M = grid_.M;
    const double* half = tb.half.data() + b * M;
    const double* full = tb.full.data() + b * M;
    const cplx* ph = tb.phase.data() + b * M;
    auto diffuse = [&](const double* mult) {
        if (!tb.diffuse) return;
        plan_->forward(x);
        for (int i = 0; i < M; ++i) x[i] *= mult[i];
        plan_->backward(x);
    };
    // (D/2 A D/2)^n = D/2 A (D A)^{n-1} D/2
    diffuse(half);
    for (int s = 0; s < n; ++s) {
        for (int j = 0; j < M; ++j) x[j] *= ph[j];
        diffuse(s + 1 == n ? half : full);
    }
}

namespace {

int step_count(double t, double dt)
{
    if (!(t > 0) || !(dt > 0)) throw ValidationError("time and step must be positive");
    return std::max(1, static_cast<int>(std::ceil(t / dt - 1e-9)));
}

} // namespace

void CtsSolver::advance_serial(CtsState& s, double t, double dt, bool adjoint) const
{
    const int n = step_count(t, dt);
    const Tables tb = tables(t / n, adjoint);
    for (int b = 0; b < bands(); ++b) band_run(tb, b, s.data.data() + b * grid_.M, n);
    s.t += t;
}

void CtsSolver::advance_omp(CtsState& s, double t, double dt, bool adjoint) const
{
    const int n = step_count(t, dt);
    const Tables tb = tables(t / n, adjoint);
    const int B = bands();
#pragma omp parallel for schedule(static)
    for (int b = 0; b < B; ++b) band_run(tb, b, s.data.data() + b * grid_.M, n);
    s.t += t;
}

CtsState CtsSolver::transport(const CtsState& s, double t) const
{
    CtsState out = s;
    const int M = grid_.M;
    for (int b = 0; b < bands(); ++b)
        for (int j = 0; j < M; ++j)
            out.data[b * M + j] *= std::polar(1.0, -2 * M_PI * k1_[b] * flow_.v(double(j) / M) * t);
    out.t += t;
    return out;
}

double CtsSolver::energy(const CtsState& s) const
{
    double e = 0;
    for (auto& x : s.data) e += std::norm(x);
    return e / grid_.M;
}

double CtsSolver::h1_sq(const CtsState& s) const
{
    const int M = grid_.M;
    std::vector<cplx> buf(M);
    double h = 0;
    for (int b = 0; b < bands(); ++b) {
        std::copy(s.data.begin() + b * M, s.data.begin() + (b + 1) * M, buf.begin());
        plan_->forward(buf.data());
        for (int i = 0; i < M; ++i) {
            const int m = i <= M / 2 ? i : i - M;
            h += conv_.eigenvalue(Mode{k1_[b], m}) * std::norm(buf[i]) / (double(M) * M);
        }
    }
    return h;
}

Eigen::MatrixXcd CtsSolver::band_propagator(int b, double t, double dt, bool adjoint) const
{
    const int M = grid_.M;
    const int n = step_count(t, dt);
    const Tables tb = tables(t / n, adjoint);
    Eigen::MatrixXcd P(M, M);
    std::vector<cplx> x(M);
    for (int j = 0; j < M; ++j) {
        std::fill(x.begin(), x.end(), cplx(0.0));
        x[j] = 1.0;
        band_run(tb, b, x.data(), 1);
        for (int i = 0; i < M; ++i) P(i, j) = x[i];
    }
    // P^n by squaring
    Eigen::MatrixXcd R = Eigen::MatrixXcd::Identity(M, M);
    for (int e = n; e > 0; e >>= 1) {
        if (e & 1) R = R * P;
        if (e > 1) P = P * P;
    }
    return R;
}

namespace {

// band propagators, reusing the conjugate for -k1 (v is real)
std::vector<Eigen::MatrixXcd> all_propagators(const CtsSolver& s, double t, double dt)
{
    const auto& k = s.wavenumbers();
    std::vector<Eigen::MatrixXcd> P(k.size());
    for (std::size_t b = 0; b < k.size(); ++b) {
        if (k[b] < 0) continue;
        P[b] = s.band_propagator(static_cast<int>(b), t, dt);
    }
    for (std::size_t b = 0; b < k.size(); ++b) {
        if (k[b] >= 0) continue;
        auto it = std::find(k.begin(), k.end(), -k[b]);
        P[b] = it != k.end() ? Eigen::MatrixXcd(P[it - k.begin()].conjugate())
                             : s.band_propagator(static_cast<int>(b), t, dt);
    }
    return P;
}

double block_norm(const std::vector<Eigen::VectorXcd>& x)
{
    double s = 0;
    for (auto& v : x) s += v.squaredNorm();
    return std::sqrt(s);
}

} // namespace

double cts_norm_svd(const CtsSolver& s, double t, double dt)
{
    double best = 0;
    for (auto& P : all_propagators(s, t, dt)) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(P);
        best = std::max(best, svd.singularValues()(0));
    }
    return best;
}

namespace {

struct PowerState {
    std::vector<Eigen::VectorXcd> warm;
    std::mt19937_64 rng;
};

double power_norm(const std::vector<Eigen::MatrixXcd>& P, const CtsOptions& opt, PowerState& ps, double stop_above)
{
    std::normal_distribution<double> g;
    const std::size_t B = P.size();
    for (int widen = 0; widen < 2; ++widen) {
        const int restarts = opt.restarts << widen;
        double best = 0;
        bool all_converged = true;
        std::vector<Eigen::VectorXcd> best_x;
        for (int r = 0; r < restarts; ++r) {
            std::vector<Eigen::VectorXcd> x(B);
            if (r == 0 && !ps.warm.empty()) x = ps.warm;
            else
                for (std::size_t b = 0; b < B; ++b) {
                    x[b].resize(P[b].cols());
                    for (auto& v : x[b]) v = {g(ps.rng), g(ps.rng)};
                }
            double nx = block_norm(x);
            for (auto& v : x) v /= nx;
            double prev = 0, s = 0;
            bool conv = false;
            for (int it = 1; it <= opt.max_iter; ++it) {
                std::vector<Eigen::VectorXcd> y(B);
                for (std::size_t b = 0; b < B; ++b) y[b] = P[b] * x[b];
                s = block_norm(y);
                if (s > best) {
                    best = s;
                    best_x = x;
                }
                if (best >= stop_above) {
                    ps.warm = best_x;
                    return best;
                }
                for (std::size_t b = 0; b < B; ++b) x[b] = P[b].adjoint() * y[b];
                const double nz = block_norm(x);
                if (nz == 0) {
                    conv = true;
                    break;
                }
                for (auto& v : x) v /= nz;
                if (it >= opt.min_iter && std::fabs(s - prev) <= opt.tol * s) {
                    conv = true;
                    break;
                }
                prev = s;
            }
            all_converged = all_converged && conv;
        }
        if (all_converged) {
            ps.warm = best_x;
            return best;
        }
    }
    throw NumericalError("power iteration for the continuous solution operator did not converge");
}

} // namespace

double cts_norm(const CtsSolver& s, double t, const CtsOptions& opt)
{
    PowerState ps{{}, std::mt19937_64(opt.seed)};
    return power_norm(all_propagators(s, t, opt.dt), opt, ps, std::numeric_limits<double>::infinity());
}

CtsTau tau_d_cts(const ShearFlow& flow, double nu, const CtsGrid& grid, const CtsOptions& opt,
                 const SpectralConvention& conv)
{
    if (opt.check_range) {
        if (!(nu >= 1e-4 * (1 - 1e-12)) || nu > 1e-1 * (1 + 1e-12))
            throw ValidationError("continuous dissipation time supports nu in [1e-4, 1e-1]");
        if (grid.k1max > 32 || grid.M > 128) throw ValidationError("continuous truncation limited to k1max <= 32, M <= 128");
    }
    if (!(nu > 0)) throw ValidationError("nu must be positive");
    if (!(opt.rel_t > 0) || !(opt.t0 > 0)) throw ValidationError("bad bisection settings");
    CtsSolver s(flow, nu, grid, conv);
    const double target = std::exp(-1.0);
    PowerState ps{{}, std::mt19937_64(opt.seed)};
    CtsTau out;
    auto norm_at = [&](double t) {
        ++out.evaluations;
        return power_norm(all_propagators(s, t, opt.dt), opt, ps, target);
    };
    // the heat factor alone brings the norm below 1/e by 1/(nu lambda_1)
    const double t_cap = 4.0 / (nu * s.lambda1()) + 4 * opt.t0;
    double lo = 0, hi = opt.t0;
    double n_hi = norm_at(hi);
    while (n_hi >= target) {
        lo = hi;
        hi *= 2;
        if (hi > t_cap) throw NumericalError("solution operator norm did not drop below 1/e");
        n_hi = norm_at(hi);
    }
    while (hi - lo > opt.rel_t * hi) {
        const double mid = 0.5 * (lo + hi);
        const double nm = norm_at(mid);
        if (nm >= target) lo = mid;
        else {
            hi = mid;
            n_hi = nm;
        }
    }
    out.tau = hi;
    out.t_below = lo;
    out.norm_at_tau = n_hi;
    return out;
}

TransportGap transport_gap_cts(const CtsState& theta0, const CtsSolver& s, double t, double dt)
{
    const double G = s.flow().grad_norm();
    if (!(G > 0)) throw ValidationError("transport gap bound needs a nonconstant shear");
    CtsState th = theta0;
    s.advance_serial(th, t, dt);
    CtsState phi = s.transport(theta0, t);
    for (std::size_t i = 0; i < th.data.size(); ++i) th.data[i] -= phi.data[i];
    TransportGap g;
    g.gap2 = s.energy(th);
    g.bound = s.nu() / (2 * G) * std::exp(2 * G * t) * s.h1_sq(theta0);
    return g;
}

double energy_identity_residual(const CtsSolver& s, CtsState st, double dt, int steps)
{
    if (steps < 1) throw ValidationError("steps must be >= 1");
    double worst = 0;
    double e0 = s.energy(st), h0 = s.h1_sq(st);
    for (int i = 0; i < steps; ++i) {
        s.advance_serial(st, dt, dt);
        const double e1 = s.energy(st), h1 = s.h1_sq(st);
        const double r = (e1 - e0) / dt + s.nu() * (h0 + h1);
        worst = std::max(worst, std::fabs(r) / (2 * s.nu() * std::max(h0, h1)));
        e0 = e1;
        h0 = h1;
    }
    return worst;
}

double shear_correlation(const ShearFlow& flow, double t)
{
    // trapezoid on a periodic integrand: exact up to aliasing of exp(-2 pi i v t)
    double vmax = 0;
    for (int i = 0; i < 256; ++i) vmax = std::max(vmax, std::fabs(flow.v(i / 256.0)));
    int Q = 4096;
    while (Q < 8 * (2 * M_PI * vmax * std::fabs(t) * std::max(1, flow.bandwidth()) + 64)) Q *= 2;
    cplx s = 0;
    for (int j = 0; j < Q; ++j) s += std::polar(1.0, -2 * M_PI * flow.v(double(j) / Q) * t);
    return std::abs(s) / Q;
}

CorrelationFit shear_correlation_exponent(const ShearFlow& flow, double t_lo, double t_hi, int samples)
{
    if (!(t_lo > 0) || !(t_hi > t_lo) || samples < 10) throw ValidationError("bad correlation window");
    const double t_end = 1.5 * t_hi;
    std::vector<double> t(samples), c(samples);
    for (int i = 0; i < samples; ++i) {
        t[i] = t_lo + (t_end - t_lo) * i / (samples - 1);
        c[i] = shear_correlation(flow, t[i]);
    }
    for (int i = samples - 2; i >= 0; --i) c[i] = std::max(c[i], c[i + 1]);
    std::vector<double> x, y;
    for (int i = 0; i < samples; ++i)
        if (t[i] <= t_hi && c[i] > 0) {
            x.push_back(std::log(t[i]));
            y.push_back(std::log(c[i]));
        }
    const LinearFit f = linear_fit(x, y);
    return {-f.slope, f.r2};
}

} // namespace disslab
