#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>

#include <json.hpp>

namespace disslab {

using cplx = std::complex<double>;

enum class Scaling { lattice, geometric };

std::string to_string(Scaling s);
Scaling scaling_from_string(const std::string& s);

/// Lattice mode k in Z^d, d <= 4; unused slots stay zero.
struct Mode {
    std::array<std::int64_t, 4> c{};

    Mode() = default;
    Mode(std::initializer_list<std::int64_t> v);

    std::int64_t& operator[](int i) { return c[i]; }
    std::int64_t operator[](int i) const { return c[i]; }
    bool is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0; }
    long double norm2() const;
    Mode operator-() const;

    auto operator<=>(const Mode&) const = default;
};

std::string to_string(const Mode& m, int d);

struct SpectralConvention {
    int dim = 2;
    Scaling scaling = Scaling::lattice;

    SpectralConvention() = default;
    SpectralConvention(int d, Scaling s);

    double factor() const;                  // 1 or 4 pi^2
    double eigenvalue(const Mode& k) const; // lambda_k
    double eigenvalue_norm2(long double k2) const { return factor() * static_cast<double>(k2); }
    double lambda1() const { return factor(); }

    bool operator==(const SpectralConvention&) const = default;
};

// nu_geom = nu_lat / (4 pi^2) describes the same operator
double nu_to_geometric(double nu_lattice);
double nu_to_lattice(double nu_geometric);

/// Sparse Fourier coefficients of a mean-zero field.  The stored amplitudes
/// carry a common factor exp(log_scale) so that long damped runs never
/// underflow; log_scale is 0 for fields built by hand.
class SpectralField {
public:
    using Map = std::map<Mode, cplx>;

    SpectralField() = default;
    explicit SpectralField(SpectralConvention conv) : conv_(conv) {}

    const SpectralConvention& convention() const { return conv_; }
    const Map& coeffs() const { return coef_; }
    double log_scale() const { return log_scale_; }
    std::size_t size() const { return coef_.size(); }
    bool empty() const { return coef_.empty(); }

    // amplitude in the scaled representation
    void set(const Mode& k, cplx a);
    void add(const Mode& k, cplx a);
    cplx scaled(const Mode& k) const;
    cplx at(const Mode& k) const; // true amplitude, may underflow

    void set_log_scale(double s) { log_scale_ = s; }
    // rescale so the largest |amplitude| is 1 and drop negligible modes
    void normalize();
    void prune();

    bool reality_symmetric(double tol = 1e-12) const;

private:
    SpectralConvention conv_;
    Map coef_;
    double log_scale_ = 0.0;
};

using ModeMap = std::function<Mode(const Mode&)>;
ModeMap identity_map();

SpectralField single_mode(const SpectralConvention& conv, const Mode& k, cplx amp = 1.0);

// sum lambda^s |a|^2 of the scaled amplitudes (no exp(2 log_scale) factor)
double scaled_sobolev_sq(const SpectralField& f, double s);
// ln ||f||_s^2, finite whenever f is nonempty
double log_sobolev_sq(const SpectralField& f, double s);
double sobolev_norm(const SpectralField& f, double s);

// E_nu = (1/nu) sum (1 - exp(-2 nu lambda_k)) |(U f)^(k)|^2
double scaled_dissipation(const SpectralField& f, const ModeMap& push, double nu);
double dissipation_functional(const SpectralField& f, const ModeMap& push, double nu);

// <f, g> with conjugate on g
cplx inner(const SpectralField& f, const SpectralField& g);

// random sparse field: n_modes distinct modes with |k_i| <= radius, complex
// gaussian amplitudes
SpectralField random_sparse_field(const SpectralConvention& conv, std::mt19937_64& rng,
                                  int n_modes, int radius);

nlohmann::json field_to_json(const SpectralField& f);
SpectralField field_from_json(const nlohmann::json& j);
// "mode:1,0" shorthand or a path to a field json
SpectralField parse_field_spec(const std::string& spec, const SpectralConvention& conv);

} // namespace disslab
