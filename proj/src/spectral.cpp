#include "disslab/spectral.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "disslab/error.hpp"

namespace disslab {

std::string to_string(Scaling s) { return s == Scaling::lattice ? "lattice" : "geometric"; }

Scaling scaling_from_string(const std::string& s)
{
    if (s == "lattice") return Scaling::lattice;
    if (s == "geometric") return Scaling::geometric;
    throw ValidationError("unknown convention '" + s + "' (lattice|geometric)");
}

Mode::Mode(std::initializer_list<std::int64_t> v)
{
    if (v.size() > 4) throw ValidationError("mode dimension > 4");
    int i = 0;
    for (auto x : v) c[i++] = x;
}

long double Mode::norm2() const
{
    long double s = 0;
    for (auto x : c) s += static_cast<long double>(x) * static_cast<long double>(x);
    return s;
}

Mode Mode::operator-() const
{
    Mode m;
    for (int i = 0; i < 4; ++i) m.c[i] = -c[i];
    return m;
}

std::string to_string(const Mode& m, int d)
{
    std::string s = "(";
    for (int i = 0; i < d; ++i) {
        if (i) s += ",";
        s += std::to_string(m[i]);
    }
    return s + ")";
}

SpectralConvention::SpectralConvention(int d, Scaling s) : dim(d), scaling(s)
{
    if (d < 2 || d > 4) throw ValidationError("dimension must be 2, 3 or 4");
}

double SpectralConvention::factor() const
{
    return scaling == Scaling::lattice ? 1.0 : 4.0 * std::numbers::pi * std::numbers::pi;
}

double SpectralConvention::eigenvalue(const Mode& k) const
{
    return factor() * static_cast<double>(k.norm2());
}

double nu_to_geometric(double nu) { return nu / (4.0 * std::numbers::pi * std::numbers::pi); }
double nu_to_lattice(double nu) { return nu * 4.0 * std::numbers::pi * std::numbers::pi; }

void SpectralField::set(const Mode& k, cplx a)
{
    if (k.is_zero()) throw ValidationError("mode 0 is not allowed in a mean-zero field");
    for (int i = conv_.dim; i < 4; ++i)
        if (k[i] != 0) throw ValidationError("mode has more components than the dimension");
    if (a == cplx(0.0)) {
        coef_.erase(k);
        return;
    }
    coef_[k] = a;
}

void SpectralField::add(const Mode& k, cplx a)
{
    auto it = coef_.find(k);
    if (it == coef_.end()) set(k, a);
    else it->second += a;
}

cplx SpectralField::scaled(const Mode& k) const
{
    auto it = coef_.find(k);
    return it == coef_.end() ? cplx(0.0) : it->second;
}

cplx SpectralField::at(const Mode& k) const { return scaled(k) * std::exp(log_scale_); }

void SpectralField::prune()
{
    double mx = 0;
    for (auto& [k, a] : coef_) mx = std::max(mx, std::abs(a));
    // relative cut: 1e-30 of the largest squared amplitude, compared on
    // magnitudes so tiny hand-built fields do not underflow
    const double cut = 1e-15 * mx;
    for (auto it = coef_.begin(); it != coef_.end();) {
        double n = std::abs(it->second);
        if (n == 0.0 || n < cut) it = coef_.erase(it);
        else ++it;
    }
}

void SpectralField::normalize()
{
    prune();
    double mx = 0;
    for (auto& [k, a] : coef_) mx = std::max(mx, std::abs(a));
    if (mx == 0.0 || !std::isfinite(mx)) return;
    for (auto& [k, a] : coef_) a /= mx;
    log_scale_ += std::log(mx);
}

bool SpectralField::reality_symmetric(double tol) const
{
    for (auto& [k, a] : coef_) {
        cplx b = scaled(-k);
        if (std::abs(b - std::conj(a)) > tol * std::max(1.0, std::abs(a))) return false;
    }
    return true;
}

ModeMap identity_map()
{
    return [](const Mode& k) { return k; };
}

SpectralField single_mode(const SpectralConvention& conv, const Mode& k, cplx amp)
{
    SpectralField f(conv);
    f.set(k, amp);
    return f;
}

double scaled_sobolev_sq(const SpectralField& f, double s)
{
    const auto& conv = f.convention();
    double sum = 0;
    for (auto& [k, a] : f.coeffs()) {
        double w = s == 0.0 ? 1.0 : std::pow(conv.eigenvalue(k), s);
        sum += w * std::norm(a);
    }
    return sum;
}

double log_sobolev_sq(const SpectralField& f, double s)
{
    return 2.0 * f.log_scale() + std::log(scaled_sobolev_sq(f, s));
}

double sobolev_norm(const SpectralField& f, double s)
{
    if (f.empty()) return 0.0;
    return std::exp(0.5 * log_sobolev_sq(f, s));
}

double scaled_dissipation(const SpectralField& f, const ModeMap& push, double nu)
{
    if (!(nu > 0)) throw ValidationError("nu must be positive");
    const auto& conv = f.convention();
    double sum = 0;
    for (auto& [m, a] : f.coeffs()) {
        const double lam = conv.eigenvalue(push(m));
        sum += -std::expm1(-2.0 * nu * lam) * std::norm(a);
    }
    return sum / nu;
}

double dissipation_functional(const SpectralField& f, const ModeMap& push, double nu)
{
    double e = scaled_dissipation(f, push, nu);
    return e * std::exp(2.0 * f.log_scale());
}

cplx inner(const SpectralField& f, const SpectralField& g)
{
    cplx s = 0;
    const auto& small = f.size() <= g.size() ? f : g;
    for (auto& [k, a] : small.coeffs()) {
        s += f.scaled(k) * std::conj(g.scaled(k));
    }
    return s * std::exp(f.log_scale() + g.log_scale());
}

SpectralField random_sparse_field(const SpectralConvention& conv, std::mt19937_64& rng,
                                  int n_modes, int radius)
{
    if (n_modes < 1 || radius < 1) throw ValidationError("random field needs modes and radius >= 1");
    std::uniform_int_distribution<int> coord(-radius, radius);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpectralField f(conv);
    long long box = 1;
    for (int i = 0; i < conv.dim; ++i) box *= 2 * radius + 1;
    n_modes = static_cast<int>(std::min<long long>(n_modes, box - 1));
    while (static_cast<int>(f.size()) < n_modes) {
        Mode k;
        for (int i = 0; i < conv.dim; ++i) k[i] = coord(rng);
        if (k.is_zero() || f.coeffs().count(k)) continue;
        double re = gauss(rng), im = gauss(rng);
        f.set(k, {re, im});
    }
    return f;
}

nlohmann::json field_to_json(const SpectralField& f)
{
    nlohmann::json j;
    j["header"] = {{"format", "disslab-field-v1"},
                   {"dim", f.convention().dim},
                   {"scaling", to_string(f.convention().scaling)},
                   {"log_scale", f.log_scale()}};
    auto modes = nlohmann::json::array();
    for (auto& [k, a] : f.coeffs()) {
        std::vector<std::int64_t> kv(k.c.begin(), k.c.begin() + f.convention().dim);
        modes.push_back({{"k", kv}, {"re", a.real()}, {"im", a.imag()}});
    }
    j["modes"] = modes;
    return j;
}

SpectralField field_from_json(const nlohmann::json& j)
{
    const nlohmann::json* modes = &j;
    SpectralConvention conv;
    double log_scale = 0.0;
    bool have_dim = false;
    if (j.is_object()) {
        if (!j.contains("modes")) throw ValidationError("field json: missing 'modes'");
        modes = &j.at("modes");
        if (j.contains("header")) {
            auto& h = j.at("header");
            if (h.contains("dim")) {
                conv = SpectralConvention(h.at("dim").get<int>(), conv.scaling);
                have_dim = true;
            }
            if (h.contains("scaling")) conv.scaling = scaling_from_string(h.at("scaling"));
            if (h.contains("log_scale")) log_scale = h.at("log_scale").get<double>();
        }
    }
    if (!modes->is_array()) throw ValidationError("field json: modes must be an array");
    if (!have_dim && !modes->empty())
        conv = SpectralConvention(static_cast<int>((*modes)[0].at("k").size()), conv.scaling);
    SpectralField f(conv);
    for (auto& r : *modes) {
        auto kv = r.at("k").get<std::vector<std::int64_t>>();
        if (static_cast<int>(kv.size()) != conv.dim) throw ValidationError("field json: inconsistent mode length");
        Mode k;
        for (int i = 0; i < conv.dim; ++i) k[i] = kv[i];
        double re = r.value("re", 0.0), im = r.value("im", 0.0);
        f.add(k, {re, im});
    }
    f.set_log_scale(log_scale);
    return f;
}

SpectralField parse_field_spec(const std::string& spec, const SpectralConvention& conv)
{
    if (spec.rfind("mode:", 0) == 0) {
        std::stringstream ss(spec.substr(5));
        std::string tok;
        Mode k;
        int i = 0;
        while (std::getline(ss, tok, ',')) {
            if (i >= conv.dim) throw ValidationError("mode spec longer than dimension");
            try {
                k[i++] = std::stoll(tok);
            } catch (const std::exception&) {
                throw ValidationError("bad mode spec '" + spec + "'");
            }
        }
        if (i != conv.dim) throw ValidationError("mode spec shorter than dimension");
        return single_mode(conv, k);
    }
    std::ifstream in(spec);
    if (!in) throw ValidationError("cannot open field file '" + spec + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("field json: ") + e.what());
    }
    auto f = field_from_json(j);
    if (f.convention().dim != conv.dim) throw ValidationError("field dimension does not match matrix");
    return f;
}

} // namespace disslab
