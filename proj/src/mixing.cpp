#include "disslab/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "disslab/error.hpp"
#include "disslab/fit.hpp"
#include "disslab/kernels.hpp"

namespace disslab {

RateFunction RateFunction::power(double c, double p, double alpha, double beta)
{
    RateFunction r;
    r.kind = Kind::power;
    r.c = c;
    r.p = p;
    r.alpha = alpha;
    r.beta = beta;
    return r;
}

RateFunction RateFunction::exponential(double c1, double c2, double alpha, double beta)
{
    RateFunction r;
    r.kind = Kind::exponential;
    r.c1 = c1;
    r.c2 = c2;
    r.alpha = alpha;
    r.beta = beta;
    return r;
}

RateFunction RateFunction::tabulated(std::vector<double> t, std::vector<double> h, double alpha, double beta)
{
    RateFunction r;
    r.kind = Kind::tabulated;
    r.t = std::move(t);
    r.h = std::move(h);
    r.alpha = alpha;
    r.beta = beta;
    return r;
}

namespace {

std::vector<double> parse_numbers(const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError("bad number '" + item + "' in rate spec");
        }
    }
    return out;
}

} // namespace

RateFunction RateFunction::parse(const std::string& spec, double alpha, double beta)
{
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw ValidationError("rate spec needs kind:params, got '" + spec + "'");
    const std::string kind = spec.substr(0, colon), rest = spec.substr(colon + 1);
    RateFunction r;
    if (kind == "power" || kind == "exp") {
        auto v = parse_numbers(rest);
        if (v.size() != 2) throw ValidationError("rate spec '" + spec + "' needs two parameters");
        r = kind == "power" ? power(v[0], v[1], alpha, beta) : exponential(v[0], v[1], alpha, beta);
    } else if (kind == "file") {
        std::ifstream in(rest);
        if (!in) throw ValidationError("cannot open rate table " + rest);
        std::vector<double> t, h;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            double a, b;
            if (!(ls >> a >> b)) throw ValidationError("bad line in rate table: " + line);
            t.push_back(a);
            h.push_back(b);
        }
        r = tabulated(t, h, alpha, beta);
    } else {
        throw ValidationError("unknown rate kind '" + kind + "'");
    }
    r.validate();
    return r;
}

double RateFunction::operator()(double x) const
{
    switch (kind) {
    case Kind::power: return c * std::pow(x, -p);
    case Kind::exponential: return c1 * std::exp(-c2 * x);
    case Kind::tabulated: break;
    }
    // piecewise linear in ln h, end segments extended
    std::size_t i = std::upper_bound(t.begin(), t.end(), x) - t.begin();
    i = std::clamp<std::size_t>(i, 1, t.size() - 1);
    const double w = (x - t[i - 1]) / (t[i] - t[i - 1]);
    return std::exp(std::log(h[i - 1]) + w * (std::log(h[i]) - std::log(h[i - 1])));
}

double RateFunction::inverse(double y) const
{
    if (!(y > 0)) throw ValidationError("rate inverse needs a positive argument");
    switch (kind) {
    case Kind::power: return std::pow(c / y, 1.0 / p);
    case Kind::exponential: return std::log(c1 / y) / c2;
    case Kind::tabulated: break;
    }
    const double ly = std::log(y);
    std::size_t i = 1;
    while (i + 1 < h.size() && std::log(h[i]) > ly) ++i;
    const double a = std::log(h[i - 1]), b = std::log(h[i]);
    return t[i - 1] + (ly - a) / (b - a) * (t[i] - t[i - 1]);
}

void RateFunction::validate() const
{
    if (mode == MixMode::strong && !(alpha > 0 && beta > 0))
        throw ValidationError("strong mixing rates need alpha > 0 and beta > 0");
    if (alpha < 0 || beta < 0) throw ValidationError("mixing class exponents must be >= 0");
    switch (kind) {
    case Kind::power:
        if (!(c > 0) || !(p > 0)) throw ValidationError("power rate needs c > 0 and p > 0");
        return;
    case Kind::exponential:
        if (!(c1 > 0) || !(c2 > 0)) throw ValidationError("exponential rate needs c1 > 0 and c2 > 0");
        return;
    case Kind::tabulated: break;
    }
    if (t.size() != h.size() || t.size() < 2) throw ValidationError("rate table needs at least two (t, h) rows");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(h[i] > 0)) throw ValidationError("rate table values must be positive");
        if (i > 0 && !(t[i] > t[i - 1])) throw ValidationError("rate table times must increase");
        if (i > 0 && !(h[i] < h[i - 1])) throw ValidationError("rate table must be strictly decreasing");
        if (mode == MixMode::weak && t[i] > 0 && h[i] < (1 - 1e-12) / std::sqrt(t[i]))
            throw ValidationError("weak rate below the 1/sqrt(n) floor at t = " + std::to_string(t[i]));
    }
}

std::string RateFunction::str() const
{
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
    case Kind::power: os << "power:" << c << "," << p; break;
    case Kind::exponential: os << "exp:" << c1 << "," << c2; break;
    case Kind::tabulated: os << "table(" << t.size() << " rows)"; break;
    }
    return os.str();
}

namespace {

void check_mixing_map(const ToralAutomorphism& T)
{
    const auto& c = T.conditions();
    if (!c.c1_no_root_of_unity || !c.c2_irreducible_char_poly)
        throw ValidationError("strong envelope needs a matrix with conditions C1 and C2");
}

double envelope_value(long double product, double alpha, double beta, const SpectralConvention& conv)
{
    return static_cast<double>(std::pow(static_cast<long double>(conv.factor()) * product, -(alpha + beta) / 2.0L));
}

} // namespace

MixingEnvelope strong_envelope(const ToralAutomorphism& T, double alpha, double beta, int n_max, double eps,
                               const SpectralConvention& conv)
{
    if (!(alpha > 0) || !(beta > 0)) throw ValidationError("strong envelope needs alpha > 0 and beta > 0");
    if (n_max < 0) throw ValidationError("n_max must be >= 0");
    if (T.dim() != conv.dim) throw ValidationError("automorphism and convention dimensions differ");
    // every candidate is evaluated exactly; what is left is rounding in
    // the enumeration bound, kept below 1e-9 relative
    const double achieved = 1e-9;
    if (!(eps >= achieved))
        throw ValidationError("requested accuracy " + std::to_string(eps) + " is below the feasible 1e-9");
    check_mixing_map(T);
    MixingEnvelope env;
    env.alpha = alpha;
    env.beta = beta;
    for (int n = 0; n <= n_max; ++n) {
        EnvelopeMin m = min_envelope_product(T, n, alpha, beta);
        const double e = envelope_value(m.product, alpha, beta, conv);
        env.n.push_back(n);
        env.value.push_back(e);
        env.tail_cert.push_back(achieved * e);
        env.argmin.push_back(m.argmin);
    }
    return env;
}

double strong_envelope_reference(const ToralAutomorphism& T, double alpha, double beta, int n, bool parallel,
                                 Mode* argmin, const SpectralConvention& conv)
{
    if (!(alpha > 0) || !(beta > 0)) throw ValidationError("strong envelope needs alpha > 0 and beta > 0");
    if (n < 0) throw ValidationError("n must be >= 0");
    const int d = T.dim();
    const IntMatrix Bn = T.B().power(n), An = T.A_star().power(n);
    const long double w1 = alpha / (alpha + beta), w2 = beta / (alpha + beta);
    long double inc = std::numeric_limits<long double>::infinity();
    for (int i = 0; i < d; ++i) {
        Mode e;
        e[i] = 1;
        for (const Mode& k : {e, An.apply(e)}) {
            Mode m = Bn.apply(k);
            inc = std::min(inc, std::exp(w1 * std::log(m.norm2()) + w2 * std::log(k.norm2())));
        }
    }
    const auto r = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(inc)))) + 1;
    DiskScanResult res = parallel ? envelope_disk_scan_omp(Bn, An, alpha, beta, r)
                                  : envelope_disk_scan_serial(Bn, An, alpha, beta, r);
    if (argmin) *argmin = res.argmin;
    return envelope_value(res.product, alpha, beta, conv);
}

std::vector<cplx> correlations(const ToralAutomorphism& T, const SpectralField& f, const SpectralField& g, int n)
{
    if (f.empty() || g.empty()) throw ValidationError("correlations need nonempty fields");
    if (n < 1) throw ValidationError("correlations need n >= 1");
    // <U^k f, g> = sum_m f(B^k m) conj g(m); follow each m of g under B and
    // drop it once it provably never comes back to the support of f
    long double rf = 0;
    for (auto& [k, a] : f.coeffs()) rf = std::max(rf, std::sqrt(k.norm2()));
    const ToralAutomorphism Bmap(T.B());
    bool escape = false;
    int dom = 0;
    double mu = 0, cstar = 0;
    if (Bmap.has_frame()) {
        const auto& ev = Bmap.eigenvalues();
        for (int i = 0; i < ev.size(); ++i)
            if (std::abs(ev(i)) > mu) {
                mu = std::abs(ev(i));
                dom = i;
            }
        cstar = Bmap.c_star();
        escape = mu > 1 + 1e-9 && Bmap.conditions().c2_irreducible_char_poly;
    }
    const double scale = std::exp(f.log_scale() + g.log_scale());
    std::vector<cplx> c(n, 0.0);
    for (auto& [m0, gm] : g.coeffs()) {
        Mode m = m0;
        double grow = 0;
        if (escape) grow = std::abs(eigen_coordinates(Bmap, m0)(dom)) / cstar;
        for (int k = 0; k < n; ++k) {
            if (escape && grow > static_cast<double>(rf) * (1 + 1e-6) + 1e-6) break;
            auto it = f.coeffs().find(m);
            if (it != f.coeffs().end()) c[k] += it->second * std::conj(gm) * scale;
            m = Bmap.A().apply(m);
            grow *= mu;
        }
    }
    return c;
}

std::vector<double> weak_cesaro_series(const ToralAutomorphism& T, const SpectralField& f, const SpectralField& g,
                                       int n)
{
    auto c = correlations(T, f, g, n);
    std::vector<double> out(n);
    double s = 0;
    for (int k = 0; k < n; ++k) {
        s += std::norm(c[k]);
        out[k] = std::sqrt(s / (k + 1));
    }
    return out;
}

double weak_cesaro(const ToralAutomorphism& T, const SpectralField& f, const SpectralField& g, int n)
{
    return weak_cesaro_series(T, f, g, n).back();
}

namespace {

// r[L] = number of k in Z^d with |k|^2 = L, L <= lmax
std::vector<double> shell_counts(int d, long long lmax)
{
    std::vector<double> one(lmax + 1, 0.0);
    for (long long s = 0; s * s <= lmax; ++s) one[s * s] += s == 0 ? 1 : 2;
    std::vector<double> r = one;
    for (int j = 1; j < d; ++j) {
        std::vector<double> next(lmax + 1, 0.0);
        for (long long s = 0; s * s <= lmax; ++s) {
            const double w = s == 0 ? 1 : 2;
            for (long long l = s * s; l <= lmax; ++l) next[l] += w * r[l - s * s];
        }
        r.swap(next);
    }
    r[0] = 0;
    return r;
}

double majorant_from_counts(const std::vector<double>& r, double beta, long long n, double factor)
{
    const long long lmax = static_cast<long long>(r.size()) - 1;
    double sum = 0, best = std::numeric_limits<double>::infinity();
    for (long long L = 0; L < lmax; ++L) {
        if (L > 0) sum += r[L] * std::pow(factor * L, -beta);
        // modes above L have |k|^2 >= L + 1
        best = std::min(best, sum / n + std::pow(factor * (L + 1), -beta));
    }
    return std::sqrt(2.0 * best);
}

long long majorant_lmax(long long n)
{
    const auto R = static_cast<long long>(std::ceil(std::sqrt(static_cast<double>(n)))) + 1;
    return R * R;
}

} // namespace

double weak_majorant(double beta, long long n, const SpectralConvention& conv)
{
    if (!(beta > 0)) throw ValidationError("weak majorant needs beta > 0");
    if (n < 1) throw ValidationError("weak majorant needs n >= 1");
    return majorant_from_counts(shell_counts(conv.dim, majorant_lmax(n)), beta, n, conv.factor());
}

ExponentFit weak_majorant_exponent(double beta, long long n_lo, long long n_hi, int points,
                                   const SpectralConvention& conv)
{
    if (!(beta > 0)) throw ValidationError("weak majorant needs beta > 0");
    if (n_lo < 1 || n_hi <= n_lo || points < 2) throw ValidationError("bad majorant sweep");
    const auto r = shell_counts(conv.dim, majorant_lmax(n_hi));
    std::vector<double> x, y;
    for (int i = 0; i < points; ++i) {
        const double ln_n = std::log(static_cast<double>(n_lo)) +
                            i * (std::log(static_cast<double>(n_hi)) - std::log(static_cast<double>(n_lo))) / (points - 1);
        const auto n = static_cast<long long>(std::llround(std::exp(ln_n)));
        // truncate the count table to this n's own scan radius
        std::vector<double> rn(r.begin(), r.begin() + std::min<long long>(majorant_lmax(n), r.size() - 1) + 1);
        x.push_back(std::log(static_cast<double>(n)));
        y.push_back(std::log(majorant_from_counts(rn, beta, n, conv.factor())));
    }
    const LinearFit f = linear_fit(x, y);
    return {-f.slope, f.r2};
}

RateFunction fit_rate(const std::vector<double>& t, const std::vector<double>& h, bool dominate, double alpha,
                      double beta)
{
    if (t.size() != h.size()) throw ValidationError("fit_rate: t and h differ in length");
    if (t.size() < 5) throw ValidationError("fit_rate needs at least 5 samples");
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!(h[i] > 0)) throw ValidationError("fit_rate needs positive samples");
        if (i > 0 && h[i] > h[i - 1]) throw ValidationError("fit_rate: samples increase, not a decay");
    }
    if (h.back() >= h.front()) throw ValidationError("fit_rate: samples do not decay");
    std::vector<double> lh, lt, tt, lhp;
    for (std::size_t i = 0; i < t.size(); ++i) {
        lh.push_back(std::log(h[i]));
        tt.push_back(t[i]);
        if (t[i] > 0) {
            lt.push_back(std::log(t[i]));
            lhp.push_back(std::log(h[i]));
        }
    }
    const LinearFit fe = linear_fit(tt, lh);
    const bool power_ok = lt.size() >= 5;
    LinearFit fp;
    if (power_ok) fp = linear_fit(lt, lhp);
    const bool use_power = power_ok && fp.rms < fe.rms && fp.slope < 0;
    if (!use_power && !(fe.slope < 0)) throw ValidationError("fit_rate: no decaying model fits");

    auto shift = [&](const LinearFit& f, const std::vector<double>& x, const std::vector<double>& y) {
        double s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) s = std::max(s, y[i] - (f.slope * x[i] + f.intercept));
        return s;
    };
    RateFunction r;
    if (use_power) {
        const double up = dominate ? shift(fp, lt, lhp) : 0.0;
        r = RateFunction::power(std::exp(fp.intercept + up), -fp.slope, alpha, beta);
    } else {
        const double up = dominate ? shift(fe, tt, lh) : 0.0;
        r = RateFunction::exponential(std::exp(fe.intercept + up), -fe.slope, alpha, beta);
    }
    return r;
}

TransferExponents transfer_exponents(double a, double b, double a2, double b2)
{
    if (!(a > 0 && b > 0 && a2 > 0 && b2 > 0)) throw ValidationError("rate transfer needs positive class exponents");
    auto pos = [](double x) { return std::max(x, 0.0); };
    TransferExponents e;
    e.gamma = 0.5 * (pos(a2 - a) + pos(b2 - b) + std::min(b2, b) * pos(1 - a2 / a) + std::min(a2, a) * pos(1 - b2 / b));
    e.delta = std::min(a2, a) * std::min(b2, b) / (a * b);
    return e;
}

RateFunction transfer_rate(const RateFunction& h, double alpha2, double beta2, double lambda1)
{
    if (!(lambda1 > 0)) throw ValidationError("rate transfer needs lambda_1 > 0");
    h.validate();
    const auto e = transfer_exponents(h.alpha, h.beta, alpha2, beta2);
    const double pre = std::pow(lambda1, -e.gamma);
    RateFunction r = h;
    r.alpha = alpha2;
    r.beta = beta2;
    switch (h.kind) {
    case RateFunction::Kind::power:
        r.c = pre * std::pow(h.c, e.delta);
        r.p = e.delta * h.p;
        break;
    case RateFunction::Kind::exponential:
        r.c1 = pre * std::pow(h.c1, e.delta);
        r.c2 = e.delta * h.c2;
        break;
    case RateFunction::Kind::tabulated:
        for (auto& v : r.h) v = pre * std::pow(v, e.delta);
        break;
    }
    return r;
}

} // namespace disslab
