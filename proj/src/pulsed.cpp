#include "disslab/pulsed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "disslab/error.hpp"

namespace disslab {

PulsedSystem::PulsedSystem(std::shared_ptr<const ToralAutomorphism> t, double nu_, SpectralConvention c,
                           bool allow_zero)
    : T(std::move(t)), nu(nu_), conv(c), allow_zero_nu(allow_zero)
{
    if (!T) throw ValidationError("pulsed system needs an automorphism");
    if (T->dim() != conv.dim) throw ValidationError("automorphism and convention dimensions differ");
    if (nu < 0 || (nu == 0 && !allow_zero_nu) || !std::isfinite(nu))
        throw ValidationError("nu must be positive");
}

double Trajectory::energy(int m) const { return std::exp(log_energy.at(m)); }
double Trajectory::h1(int m) const { return std::exp(log_h1.at(m)); }
double Trajectory::e_nu(int m) const { return std::exp(log_e_nu.at(m)); }

namespace {

// one step; dlog gets ln of the scale change, computed without touching
// the absolute log scale
SpectralField step_impl(const SpectralField& theta, const PulsedSystem& sys, double& dlog)
{
    if (!(theta.convention() == sys.conv)) throw ValidationError("field convention differs from system");
    SpectralField out(sys.conv);
    // damping in log form: exp(-nu lambda) alone underflows after ~30 cat-map steps
    std::vector<std::pair<Mode, double>> img;
    double top = -std::numeric_limits<double>::infinity();
    for (auto& [m, a] : theta.coeffs()) {
        const Mode k = sys.T->push(m);
        const double l = -sys.nu * sys.conv.eigenvalue(k);
        img.push_back({k, l});
        top = std::max(top, l);
    }
    if (img.empty()) throw ValidationError("cannot step an empty field");
    auto it = theta.coeffs().begin();
    for (auto& [k, l] : img) out.set(k, (it++)->second * std::exp(l - top));
    double mx = 0;
    out.prune();
    for (auto& [k, a] : out.coeffs()) mx = std::max(mx, std::abs(a));
    for (auto& [k, a] : out.coeffs()) out.set(k, a / mx);
    dlog = top + std::log(mx);
    out.set_log_scale(theta.log_scale() + dlog);
    return out;
}

} // namespace

SpectralField step(const SpectralField& theta, const PulsedSystem& sys)
{
    double dlog = 0;
    return step_impl(theta, sys, dlog);
}

namespace {

void record(Trajectory& tr, const SpectralField& f, const PulsedSystem& sys)
{
    const double two_s = 2.0 * f.log_scale();
    const double le = std::log(scaled_sobolev_sq(f, 0.0)), lh = std::log(scaled_sobolev_sq(f, 1.0));
    double pushed = 0;
    for (auto& [m, a] : f.coeffs()) pushed += sys.conv.eigenvalue(sys.T->push(m)) * std::norm(a);
    const double lp = std::log(pushed);
    const double lnu = sys.nu == 0.0 ? std::log(2.0) + lp
                                     : std::log(scaled_dissipation(f, sys.T->pushforward(), sys.nu));
    tr.log_energy.push_back(two_s + le);
    tr.log_h1.push_back(two_s + lh);
    tr.log_h1_pushed.push_back(two_s + lp);
    tr.log_e_nu.push_back(two_s + lnu);
    tr.log_h1_rel.push_back(lh - le);
    tr.log_pushed_rel.push_back(lp - le);
    tr.log_e_nu_rel.push_back(lnu - le);
}

} // namespace

Trajectory evolve(const SpectralField& theta0, const PulsedSystem& sys, int n, bool keep_fields)
{
    if (n < 1) throw ValidationError("evolve needs n >= 1");
    if (theta0.empty()) throw ValidationError("initial field is empty");
    Trajectory tr;
    tr.nu = sys.nu;
    tr.conv = sys.conv;
    SpectralField cur = theta0;
    record(tr, cur, sys);
    if (keep_fields) tr.fields.push_back(cur);
    for (int m = 0; m < n; ++m) {
        const double e0 = scaled_sobolev_sq(cur, 0.0);
        double dlog = 0;
        cur = step_impl(cur, sys, dlog);
        tr.log_step.push_back(2.0 * dlog + std::log(scaled_sobolev_sq(cur, 0.0)) - std::log(e0));
        record(tr, cur, sys);
        if (keep_fields) tr.fields.push_back(cur);
    }
    return tr;
}

GapResult inviscid_gap(const SpectralField& theta0, const PulsedSystem& sys, int n)
{
    if (n < 1) throw ValidationError("inviscid_gap needs n >= 1");
    Trajectory tr = evolve(theta0, sys, n, true);
    GapResult r;
    for (int k = 0; k < n; ++k) r.bound += std::sqrt(sys.nu * tr.e_nu(k));
    // U^n theta0 by pure relabeling
    std::map<Mode, cplx> phi;
    for (auto& [m, a] : theta0.coeffs()) {
        Mode k = m;
        for (int j = 0; j < n; ++j) k = sys.T->push(k);
        phi[k] = a * std::exp(theta0.log_scale());
    }
    const SpectralField& th = tr.fields.back();
    const double scale = std::exp(th.log_scale());
    double g2 = 0;
    for (auto& [k, b] : phi) g2 += std::norm(th.scaled(k) * scale - b);
    for (auto& [k, a] : th.coeffs())
        if (!phi.count(k)) g2 += std::norm(a * scale);
    r.gap = std::sqrt(g2);
    return r;
}

TruncatedKoopman TruncatedKoopman::from_automorphism(const ToralAutomorphism& T, int K)
{
    if (K < 1) throw ValidationError("truncation radius must be >= 1");
    TruncatedKoopman U;
    U.d_ = T.dim();
    U.K_ = K;
    std::vector<Entry> entries;
    const long double K2 = static_cast<long double>(K) * K;
    for_each_in_ball(U.d_, K, [&](const Mode& m) {
        U.modes_.push_back(m);
        Mode k = T.push(m);
        if (k.norm2() <= K2) entries.push_back({k, m, 1.0});
    });
    U.build(entries);
    return U;
}

TruncatedKoopman TruncatedKoopman::identity(int d, int K)
{
    if (K < 1) throw ValidationError("truncation radius must be >= 1");
    TruncatedKoopman U;
    U.d_ = d;
    U.K_ = K;
    std::vector<Entry> entries;
    for_each_in_ball(d, K, [&](const Mode& m) {
        U.modes_.push_back(m);
        entries.push_back({m, m, 1.0});
    });
    U.build(entries);
    return U;
}

TruncatedKoopman TruncatedKoopman::from_entries(int d, int K, const std::vector<Entry>& entries)
{
    if (K < 1) throw ValidationError("truncation radius must be >= 1");
    TruncatedKoopman U;
    U.d_ = d;
    U.K_ = K;
    for_each_in_ball(d, K, [&](const Mode& m) { U.modes_.push_back(m); });
    U.build(entries);
    return U;
}

TruncatedKoopman TruncatedKoopman::from_json(const nlohmann::json& j)
{
    const int K = j.at("radius").get<int>();
    if (j.contains("automorphism")) {
        std::string s;
        for (auto& v : j.at("automorphism")) s += (s.empty() ? "" : ",") + std::to_string(v.get<long long>());
        return from_automorphism(ToralAutomorphism(IntMatrix::parse(s)), K);
    }
    const int d = j.at("dim").get<int>();
    std::vector<Entry> entries;
    for (auto& e : j.at("entries")) {
        Entry en;
        auto r = e.at("row").get<std::vector<std::int64_t>>();
        auto c = e.at("col").get<std::vector<std::int64_t>>();
        if (static_cast<int>(r.size()) != d || static_cast<int>(c.size()) != d)
            throw ValidationError("operator entry mode length differs from dim");
        for (int i = 0; i < d; ++i) {
            en.row[i] = r[i];
            en.col[i] = c[i];
        }
        en.value = {e.value("re", 0.0), e.value("im", 0.0)};
        entries.push_back(en);
    }
    return from_entries(d, K, entries);
}

int TruncatedKoopman::index_of(const Mode& k) const
{
    auto it = std::lower_bound(modes_.begin(), modes_.end(), k);
    if (it == modes_.end() || *it != k) return -1;
    return static_cast<int>(it - modes_.begin());
}

void TruncatedKoopman::build(const std::vector<Entry>& entries)
{
    const int n = size();
    std::vector<std::vector<std::pair<int, cplx>>> rows(n), cols(n);
    for (auto& e : entries) {
        int i = index_of(e.row), j = index_of(e.col);
        if (i < 0 || j < 0) throw ValidationError("operator entry outside the truncation ball");
        rows[i].push_back({j, e.value});
        cols[j].push_back({i, std::conj(e.value)});
    }
    auto pack = [n](std::vector<std::vector<std::pair<int, cplx>>>& v, CsrMatrix& M) {
        M = CsrMatrix{};
        M.n = n;
        for (auto& r : v) {
            std::sort(r.begin(), r.end(), [](auto& a, auto& b) { return a.first < b.first; });
            for (auto& [j, x] : r) {
                M.idx.push_back(j);
                M.val.push_back(x);
            }
            M.ptr.push_back(static_cast<int>(M.idx.size()));
        }
    };
    pack(rows, fwd_);
    pack(cols, adj_);
    deficit_.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int p = adj_.ptr[j]; p < adj_.ptr[j + 1]; ++p) s += std::norm(adj_.val[p]);
        deficit_[j] = std::max(0.0, 1.0 - s);
    }
}

double TruncatedKoopman::isometry_defect() const
{
    double defect = 0;
    for (int j = 0; j < size(); ++j) {
        double s = 0;
        for (int p = adj_.ptr[j]; p < adj_.ptr[j + 1]; ++p) s += std::norm(adj_.val[p]);
        defect = std::max(defect, s - 1.0);
    }
    std::map<std::pair<int, int>, cplx> off;
    for (int i = 0; i < size(); ++i)
        for (int p = fwd_.ptr[i]; p < fwd_.ptr[i + 1]; ++p)
            for (int q = p + 1; q < fwd_.ptr[i + 1]; ++q) {
                auto key = std::minmax(fwd_.idx[p], fwd_.idx[q]);
                off[{key.first, key.second}] += std::conj(fwd_.val[p]) * fwd_.val[q];
            }
    for (auto& [key, v] : off) defect = std::max(defect, std::abs(v));
    return defect;
}

double TruncatedKoopman::leak_bound(double nu, const SpectralConvention& conv) const
{
    // anything that leaves lands on |k|^2 >= K^2 + 1
    const double lam_out = conv.eigenvalue_norm2(static_cast<long double>(K_) * K_ + 1);
    const double worst = deficit_.empty() ? 0.0 : *std::max_element(deficit_.begin(), deficit_.end());
    return worst * std::exp(-2.0 * nu * lam_out);
}

SpectralField TruncatedKoopman::step(const SpectralField& theta, double nu, const SpectralConvention& conv) const
{
    std::vector<cplx> x(size(), 0.0), y;
    for (auto& [k, a] : theta.coeffs()) {
        int i = index_of(k);
        if (i < 0) throw ValidationError("field mode " + to_string(k, d_) + " lies outside the truncation");
        x[i] = a;
    }
    std::vector<double> damp(size());
    for (int i = 0; i < size(); ++i) damp[i] = std::exp(-nu * conv.eigenvalue(modes_[i]));
    csr_apply_serial(fwd_, {}, damp, x, y);
    SpectralField out(conv);
    out.set_log_scale(theta.log_scale());
    for (int i = 0; i < size(); ++i)
        if (y[i] != cplx(0.0)) out.set(modes_[i], y[i]);
    out.normalize();
    return out;
}

} // namespace disslab
