#include "disslab/runner.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "disslab/error.hpp"
#include "disslab/io.hpp"
#include "disslab/pulsed.hpp"
#include "disslab/shear.hpp"

namespace disslab {

std::shared_ptr<const ToralAutomorphism> parse_automorphism(const std::string& spec)
{
    return std::make_shared<const ToralAutomorphism>(IntMatrix::parse(spec));
}

RateFunction fitted_strong_rate(const ToralAutomorphism& T, double alpha, double beta, int n_max,
                                const SpectralConvention& conv)
{
    const MixingEnvelope env = strong_envelope(T, alpha, beta, n_max, 1e-6, conv);
    std::vector<double> t(env.n.begin(), env.n.end());
    return fit_rate(t, env.value, true, alpha, beta);
}

int operator_radius(double nu, const SpectralConvention& conv, double leak_tol)
{
    if (!(nu > 0)) throw ValidationError("operator method needs nu > 0");
    // deficit <= 1, so exp(-2 nu f (K^2 + 1)) < leak_tol is enough
    const double k2 = std::log(1 / leak_tol) / (2 * nu * conv.factor());
    const double K = std::ceil(std::sqrt(std::max(0.0, k2))) + 1;
    if (K > 2000) throw ValidationError("nu too small for the operator method (ball radius above 2000)");
    return std::max(60, static_cast<int>(K));
}

namespace {

// runs f(i) for every cell on `jobs` threads; the first failure in grid
// order is rethrown
void parallel_cells(int n, int jobs, const std::function<void(int)>& f)
{
    std::vector<std::exception_ptr> err(n);
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs))
    for (int i = 0; i < n; ++i) {
        try {
            f(i);
        } catch (...) {
            err[i] = std::current_exception();
        }
    }
    for (auto& e : err)
        if (e) std::rethrow_exception(e);
}

} // namespace

DissipationReport dissipation_sweep(const ToralAutomorphism& T, const std::vector<double>& nus, TauMethod method,
                                    const SpectralConvention& conv, int jobs, std::uint64_t seed)
{
    if (nus.empty()) throw ValidationError("empty nu grid");
    DissipationReport rep;
    rep.conv = conv;
    rep.entries.resize(nus.size());
    parallel_cells(static_cast<int>(nus.size()), jobs, [&](int i) {
        DissipationEntry e;
        e.nu = nus[i];
        e.method = method;
        if (method == TauMethod::exact_lattice) {
            e.tau_d = tau_d_exact(T, nus[i], conv).tau;
        } else if (method == TauMethod::operator_norm) {
            const auto U = TruncatedKoopman::from_automorphism(T, operator_radius(nus[i], conv));
            OperatorOptions o;
            o.seed = seed + static_cast<std::uint64_t>(i);
            e.tau_d = tau_d_operator(U, nus[i], conv, o).tau;
        } else {
            throw ValidationError("continuous method belongs to the cts subcommand");
        }
        rep.entries[i] = e;
    });
    if (nus.size() >= 2) fit_log_scaling(rep);
    add_trivial_checks(rep);
    return rep;
}

IdentityBattery identity_battery(const ToralAutomorphism& T, int fields, int steps, const std::vector<double>& nus,
                                 std::uint64_t seed, const SpectralConvention& conv)
{
    IdentityBattery out;
    auto Tp = std::make_shared<const ToralAutomorphism>(T);
    std::mt19937_64 rng(seed);
    for (int f = 0; f < fields; ++f) {
        const SpectralField theta0 = random_sparse_field(conv, rng, 8, 6);
        for (double nu : nus) {
            PulsedSystem sys(Tp, nu, conv);
            const Trajectory tr = evolve(theta0, sys, steps);
            for (int m = 0; m < steps; ++m) {
                ++out.checks;
                // everything relative to ||theta_m||^2
                const double step = tr.log_step[m];
                const double res =
                    std::fabs(std::exp(step) - 1.0 + std::exp(std::log(nu) + tr.log_e_nu_rel[m]));
                out.max_energy_residual = std::max(out.max_energy_residual, res);
                const double ln2 = std::log(2.0);
                const double lo = ln2 + tr.log_h1_rel[m + 1] + step;
                if (lo > tr.log_e_nu_rel[m] + 1e-12 * std::max(1.0, std::fabs(lo)) ||
                    tr.log_e_nu_rel[m] > ln2 + tr.log_pushed_rel[m] + 1e-12)
                    ++out.sandwich_failures;
            }
            const GapResult g = inviscid_gap(theta0, sys, steps);
            if (g.gap > g.bound * (1 + 1e-12)) ++out.gap_failures;
            const ChainReport c = check_lower_bound_chain(tr, T, 1e-9);
            if (!c.ok) {
                if (out.chain_failures == 0)
                    out.first_chain_failure = c.violated + " at step " + std::to_string(c.violating_step);
                ++out.chain_failures;
            }
        }
    }
    return out;
}

KroneckerScan kronecker_scan_sl2(int r)
{
    KroneckerScan s;
    for (int a = -r; a <= r; ++a)
        for (int b = -r; b <= r; ++b)
            for (int c = -r; c <= r; ++c)
                for (int d = -r; d <= r; ++d) {
                    if (a * d - b * c != 1) continue;
                    ++s.matrices;
                    IntMatrix A(2);
                    A(0, 0) = a;
                    A(0, 1) = b;
                    A(1, 0) = c;
                    A(1, 1) = d;
                    const IntPoly p = char_poly(A);
                    double rmax = 0;
                    for (auto z : poly_roots(p)) rmax = std::max(rmax, std::abs(z));
                    const bool disk = rmax <= 1 + 1e-9;
                    const auto k = kronecker_classify(p);
                    if (disk) ++s.in_disk;
                    const bool unity = k.kind == KroneckerResult::Kind::all_roots_of_unity;
                    if (disk != unity) ++s.misclassified;
                }
    return s;
}

namespace {

std::string g17(double x) { return fmt17(x); }

std::vector<VerifyRow> verify_identities(const VerifyOptions& o)
{
    const auto T = parse_automorphism(o.matrix);
    const std::vector<double> nus{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    const IdentityBattery b = identity_battery(*T, 10, 20, nus, o.seed);
    return {
        {"energy identity", b.max_energy_residual <= 1e-12, "max residual " + g17(b.max_energy_residual)},
        {"sandwich inequality", b.sandwich_failures == 0, std::to_string(b.sandwich_failures) + " of " +
                                                              std::to_string(b.checks) + " steps fail"},
        {"inviscid gap", b.gap_failures == 0, std::to_string(b.gap_failures) + " failures"},
        {"lower-bound chain", b.chain_failures == 0,
         b.chain_failures == 0 ? "all steps" : b.first_chain_failure},
    };
}

std::vector<VerifyRow> verify_lemmas(const VerifyOptions& o)
{
    const KroneckerScan k = kronecker_scan_sl2(3);
    const auto T = parse_automorphism(o.matrix);
    std::vector<VerifyRow> rows{
        {"kronecker classification", k.misclassified == 0,
         std::to_string(k.matrices) + " matrices, " + std::to_string(k.in_disk) + " in the disk"}};
    const auto c = T->conditions();
    rows.push_back({"no root of unity", c.c1_no_root_of_unity, c.char_poly.str()});
    rows.push_back({"irreducible characteristic polynomial", c.c2_irreducible_char_poly, c.char_poly.str()});
    if (T->dim() == 2 && T->has_frame()) {
        const NormFormReport n = verify_norm_form(*T, 200);
        rows.push_back({"integer norm form", n.integer_form_ok && n.min_abs_norm >= 1,
                        "min |N| " + to_string(n.min_abs_norm) + " over " + std::to_string(n.scanned) + " modes"});
        rows.push_back({"eigen-coordinate product floor", n.min_product > 0,
                        "min " + g17(n.min_product) + " at " + to_string(n.argmin, 2)});
    }
    return rows;
}

DissipationReport load_report(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open report '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("report json: ") + e.what());
    }
    return report_from_json(j);
}

std::vector<VerifyRow> verify_bounds(const VerifyOptions& o)
{
    std::vector<VerifyRow> rows;
    const auto T = parse_automorphism(o.matrix);
    DissipationReport rep;
    if (o.report.empty())
        rep = dissipation_sweep(*T, parse_nu_grid("1e-6:1e-2:9"), TauMethod::exact_lattice, {}, o.jobs, o.seed);
    else
        rep = load_report(o.report);
    rep.bound_checks.clear();
    add_trivial_checks(rep);
    const RateFunction h = fitted_strong_rate(*T, 1, 1, 12, rep.conv);
    check_bound(rep, BoundProfile::make(Which::H1, h, rep.conv));
    for (const auto& c : rep.bound_checks)
        rows.push_back({c.name + " at nu=" + g17(c.nu), c.satisfied, "margin " + g17(c.margin)});

    // closed form against bisection for a power rate
    double worst = 0;
    for (double nu : parse_nu_grid("1e-8:1e-2:20")) {
        const auto prof = BoundProfile::make(Which::H1, RateFunction::power(1, 1), {});
        const double H = eval_H(prof, nu).H;
        const double Hc = h1_power_closed_form(1, 1, 1, 1, nu);
        worst = std::max(worst, std::fabs(H - Hc) / Hc);
    }
    rows.push_back({"power-law closed form", worst <= 1e-6, "max relative gap " + g17(worst)});
    return rows;
}

std::vector<VerifyRow> verify_decay(const VerifyOptions& o)
{
    const auto T = parse_automorphism(o.matrix);
    const double nu = 1e-6;
    const SpectralConvention conv;
    const double lp = std::abs(T->eigenvalues()[0]) > 1 ? std::abs(T->eigenvalues()[0])
                                                          : std::abs(T->eigenvalues()[1]);
    DecayOptions w;
    w.n_lo = 4;
    w.n_hi = 14;
    const DecayFit worst = fit_energy_decay(worst_case_log_ratio(*T, nu, conv, 14), nu, w);
    auto Tp = std::make_shared<const ToralAutomorphism>(*T);
    Mode e1{1, 0};
    const Trajectory tr = evolve(single_mode(conv, e1), PulsedSystem(Tp, nu, conv), 14);
    const DecayFit single = fit_energy_decay(tr, w);
    const ChainReport chain = check_lower_bound_chain(tr, *T);
    return {
        {"worst-case double exponential", std::fabs(worst.gamma_hat / lp - 1) <= 0.05,
         "gamma " + g17(worst.gamma_hat) + " expected " + g17(lp)},
        {"single-mode double exponential", std::fabs(single.gamma_hat / (lp * lp) - 1) <= 0.05,
         "gamma " + g17(single.gamma_hat) + " expected " + g17(lp * lp)},
        {"lower-bound chain", chain.ok, chain.ok ? "all steps" : chain.violated},
    };
}

std::vector<VerifyRow> verify_cts(const VerifyOptions& o)
{
    std::vector<VerifyRow> rows;
    const SpectralConvention geo{2, Scaling::geometric};
    CtsGrid small{4, 32, false};
    CtsOptions opt;
    opt.seed = o.seed;
    // pure heat flow: the slowest band decays at rate nu lambda_1
    const double nu = 1e-2;
    const CtsTau heat = tau_d_cts(ShearFlow::zero(), nu, small, opt, geo);
    const double exact = 1 / (nu * geo.lambda1());
    rows.push_back({"heat-flow dissipation time", std::fabs(heat.tau / exact - 1) <= 0.02,
                    "tau " + g17(heat.tau) + " expected " + g17(exact)});
    const CtsSolver s(ShearFlow::sine(), 1e-3, CtsGrid{4, 64, false}, geo);
    const CtsState th = s.random_state(o.seed);
    const TransportGap g = transport_gap_cts(th, s, 1.0, 0.01);
    rows.push_back({"transport gap", g.gap2 <= g.bound, "gap " + g17(g.gap2) + " bound " + g17(g.bound)});
    // second order: halving dt cuts the residual by about 4
    const double r1 = energy_identity_residual(s, th, 0.02, 10);
    const double r2 = energy_identity_residual(s, th, 0.01, 20);
    rows.push_back({"energy identity", r1 < 0.2 && r2 < 0.35 * r1, "residual " + g17(r1) + " then " + g17(r2)});
    return rows;
}

} // namespace

std::vector<VerifyRow> verify_suite(const std::string& suite, const VerifyOptions& opt)
{
    if (suite == "identities") return verify_identities(opt);
    if (suite == "lemmas") return verify_lemmas(opt);
    if (suite == "bounds") return verify_bounds(opt);
    if (suite == "decay") return verify_decay(opt);
    if (suite == "cts") return verify_cts(opt);
    throw ValidationError("unknown suite '" + suite + "' (identities, lemmas, bounds, decay, cts)");
}

// ---------------------------------------------------------------- CLI

namespace {

struct Globals {
    std::string config;
    std::uint64_t seed = 1;
    int jobs = 1;
};

// output stream for path, or stdout
struct Sink {
    std::ofstream file;
    std::ostream* os = &std::cout;
    explicit Sink(const std::string& path)
    {
        if (path != "-") {
            file.open(path);
            if (!file) throw ValidationError("cannot write '" + path + "'");
            os = &file;
        }
    }
};

void apply_config(CLI::App& app, CLI::App* sub, const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config json: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config must be a json object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "subcommand") continue;
        std::string name = it.key();
        for (auto& ch : name)
            if (ch == '_') ch = '-';
        CLI::Option* opt = sub ? sub->get_option_no_throw("--" + name) : nullptr;
        if (!opt) opt = app.get_option_no_throw("--" + name);
        if (!opt && sub) opt = sub->get_option_no_throw(name); // positionals
        if (!opt) throw ValidationError("unknown config key '" + it.key() + "'");
        if (opt->count() > 0) continue; // the command line wins
        const auto& v = it.value();
        if (v.is_boolean()) {
            if (!v.get<bool>()) continue;
            opt->add_result(std::string("true"));
        } else if (v.is_string()) {
            opt->add_result(v.get<std::string>());
        } else if (v.is_number_integer()) {
            opt->add_result(std::to_string(v.get<long long>()));
        } else if (v.is_number()) {
            opt->add_result(fmt17(v.get<double>()));
        } else {
            throw ValidationError("config key '" + it.key() + "' must be a scalar");
        }
        opt->run_callback();
    }
}

// the subcommand named in a config file when the command line has none
std::vector<std::string> with_config_subcommand(std::vector<std::string> args, const std::vector<std::string>& subs)
{
    std::string cfg;
    for (std::size_t i = 1; i < args.size(); ++i) {
        for (const auto& s : subs)
            if (args[i] == s) return args;
        if (args[i] == "--config" && i + 1 < args.size()) cfg = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) cfg = args[i].substr(9);
    }
    if (cfg.empty()) return args;
    std::ifstream in(cfg);
    if (!in) return args;
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_object() && j.contains("subcommand") && j["subcommand"].is_string())
        args.insert(args.begin() + 1, j["subcommand"].get<std::string>());
    return args;
}

void print_table(std::ostream& os, const std::string& suite, const std::vector<VerifyRow>& rows)
{
    std::size_t w = 5;
    for (const auto& r : rows) w = std::max(w, r.check.size());
    os << suite << "\n";
    for (const auto& r : rows) {
        os << "  " << r.check << std::string(w - r.check.size() + 2, ' ') << (r.pass ? "PASS" : "FAIL") << "  "
           << r.detail << "\n";
    }
}

} // namespace

int run_cli(int argc, const char* const* argv)
{
    CLI::App app{"dissipation and mixing experiments on the torus"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config, "json file with option values; flags win");
    app.add_option("--seed", g.seed, "seed for every random restart")->capture_default_str();
    app.add_option("--jobs", g.jobs, "worker threads")->envname("DISSLAB_JOBS")->check(CLI::PositiveNumber);

    // simulate
    struct {
        std::string matrix = "2,1,1,1", initial = "mode:1,0", out = "-", scaling = "lattice";
        double nu = 0;
        int steps = 10;
        bool allow_zero = false;
    } sim;
    auto* s_sim = app.add_subcommand("simulate", "pulsed diffusion trajectory");
    s_sim->add_option("--matrix", sim.matrix);
    s_sim->add_option("--nu", sim.nu)->required();
    s_sim->add_option("--steps", sim.steps);
    s_sim->add_option("--initial", sim.initial, "mode:k1,k2 or a field json");
    s_sim->add_option("--scaling", sim.scaling);
    s_sim->add_flag("--allow-zero-nu", sim.allow_zero);
    s_sim->add_option("--out", sim.out);

    // dissipation-time
    struct {
        std::string matrix = "2,1,1,1", grid, method = "exact", out = "report.json", csv, scaling = "lattice";
    } dt;
    auto* s_dt = app.add_subcommand("dissipation-time", "tau_d over a nu grid");
    s_dt->add_option("--matrix", dt.matrix);
    s_dt->add_option("--nu-grid", dt.grid, "lo:hi:n")->required();
    s_dt->add_option("--method", dt.method)->check(CLI::IsMember({"exact", "operator"}));
    s_dt->add_option("--scaling", dt.scaling);
    s_dt->add_option("--out", dt.out, "report json");
    s_dt->add_option("--csv", dt.csv, "also write nu, tau_d, ln_inv_nu");

    // mixing-rate
    struct {
        std::string matrix = "2,1,1,1", mode = "strong", f = "mode:1,0", g = "mode:1,0", out = "-",
                    scaling = "lattice";
        double alpha = 1, beta = 1, eps = 1e-6;
        int n_max = 12;
    } mr;
    auto* s_mr = app.add_subcommand("mixing-rate", "strong envelope or weak Cesaro series");
    s_mr->add_option("--matrix", mr.matrix);
    s_mr->add_option("--mode", mr.mode)->check(CLI::IsMember({"strong", "weak"}));
    s_mr->add_option("--alpha", mr.alpha);
    s_mr->add_option("--beta", mr.beta);
    s_mr->add_option("--n-max", mr.n_max);
    s_mr->add_option("--eps", mr.eps);
    s_mr->add_option("--f", mr.f);
    s_mr->add_option("--g", mr.g);
    s_mr->add_option("--scaling", mr.scaling);
    s_mr->add_option("--out", mr.out);

    // bounds
    struct {
        std::string which = "H1", rate, grid, out = "-", scaling = "lattice";
        double alpha = 1, beta = 1, grad_u = 0, vol = 1, eps = 0;
        int dim = 2;
    } bd;
    auto* s_bd = app.add_subcommand("bounds", "H_i(nu) and C/(nu H) over a nu grid");
    s_bd->add_option("--which", bd.which)->check(CLI::IsMember({"H1", "H2", "H3", "H4"}));
    s_bd->add_option("--rate", bd.rate, "power:c,p | exp:c1,c2 | file:path")->required();
    s_bd->add_option("--alpha", bd.alpha);
    s_bd->add_option("--beta", bd.beta);
    s_bd->add_option("--nu-grid", bd.grid)->required();
    s_bd->add_option("--grad-u", bd.grad_u);
    s_bd->add_option("--dim", bd.dim);
    s_bd->add_option("--vol", bd.vol);
    s_bd->add_option("--eps", bd.eps);
    s_bd->add_option("--scaling", bd.scaling);
    s_bd->add_option("--out", bd.out);

    // cts
    struct {
        std::string shear = "sin", grid, out = "-";
        int k1max = 16, M = 64;
        double dt = 0.1;
    } ct;
    auto* s_ct = app.add_subcommand("cts", "continuous-time shear dissipation times");
    s_ct->add_option("--shear", ct.shear, "sin | zero | coeffs:mean,a1,b1,...");
    s_ct->add_option("--nu-grid", ct.grid)->required();
    s_ct->add_option("--k1max", ct.k1max);
    s_ct->add_option("--ygrid", ct.M);
    s_ct->add_option("--dt", ct.dt);
    s_ct->add_option("--out", ct.out);

    // verify
    std::string suite;
    VerifyOptions vo;
    auto* s_vf = app.add_subcommand("verify", "invariant batteries");
    s_vf->add_option("suite", suite)->required()->check(
        CLI::IsMember({"identities", "lemmas", "bounds", "decay", "cts"}));
    s_vf->add_option("--matrix", vo.matrix);
    s_vf->add_option("--report", vo.report, "bounds: check this report");

    // sweep
    struct {
        std::string matrix = "2,1,1,1", grid, out = "-";
    } sw;
    auto* s_sw = app.add_subcommand("sweep", "tau_d with its bounds over a nu grid");
    s_sw->add_option("--matrix", sw.matrix);
    s_sw->add_option("--nu-grid", sw.grid)->required();
    s_sw->add_option("--out", sw.out);

    std::vector<std::string> args(argv, argv + argc);
    std::vector<std::string> names;
    for (auto* sc : app.get_subcommands({})) names.push_back(sc->get_name());
    try {
        args = with_config_subcommand(args, names);
    } catch (const std::exception&) {
    }
    // CLI11 wants reversed args without the program name
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);

    try {
        // required options may come from the config, so check them afterwards
        std::vector<std::pair<CLI::App*, CLI::Option*>> req;
        for (auto* sc : app.get_subcommands({}))
            for (auto* o : sc->get_options())
                if (o->get_required()) {
                    req.push_back({sc, o});
                    o->required(false);
                }
        app.parse(rev);
        CLI::App* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front();
        if (!g.config.empty()) apply_config(app, sub, g.config);
        for (auto [sc, o] : req)
            if (sc == sub && o->count() == 0) throw ValidationError(o->get_name() + " is required");

        if (sub == s_sim) {
            const auto T = parse_automorphism(sim.matrix);
            const SpectralConvention conv(T->dim(), scaling_from_string(sim.scaling));
            PulsedSystem sys(T, sim.nu, conv, sim.allow_zero);
            if (sim.steps < 0) throw ValidationError("steps must be >= 0");
            const Trajectory tr = evolve(parse_field_spec(sim.initial, conv), sys, sim.steps);
            Sink out(sim.out);
            CsvWriter w(*out.os, {"n", "energy", "h1", "e_nu"});
            for (int n = 0; n <= sim.steps; ++n)
                w.row({double(n), tr.energy(n), tr.h1(n), tr.e_nu(n)});
        } else if (sub == s_dt) {
            const auto T = parse_automorphism(dt.matrix);
            const SpectralConvention conv(T->dim(), scaling_from_string(dt.scaling));
            const auto rep = dissipation_sweep(*T, parse_nu_grid(dt.grid),
                                               dt.method == "exact" ? TauMethod::exact_lattice
                                                                    : TauMethod::operator_norm,
                                               conv, g.jobs, g.seed);
            write_text(dt.out, report_to_json(rep).dump(2) + "\n");
            if (!dt.csv.empty()) {
                Sink out(dt.csv);
                CsvWriter w(*out.os, {"nu", "tau_d", "ln_inv_nu"});
                for (const auto& e : rep.entries) w.row({e.nu, e.tau_d, -std::log(e.nu)});
            }
        } else if (sub == s_mr) {
            const auto T = parse_automorphism(mr.matrix);
            const SpectralConvention conv(T->dim(), scaling_from_string(mr.scaling));
            if (mr.n_max < 1) throw ValidationError("n-max must be >= 1");
            Sink out(mr.out);
            CsvWriter w(*out.os, {"n", "value", "tail_cert"});
            if (mr.mode == "strong") {
                const auto env = strong_envelope(*T, mr.alpha, mr.beta, mr.n_max, mr.eps, conv);
                for (std::size_t i = 0; i < env.n.size(); ++i)
                    w.row({double(env.n[i]), env.value[i], env.tail_cert[i]});
            } else {
                const auto f = parse_field_spec(mr.f, conv), gg = parse_field_spec(mr.g, conv);
                const auto series = weak_cesaro_series(*T, f, gg, mr.n_max);
                for (std::size_t i = 0; i < series.size(); ++i) w.row({double(i + 1), series[i], 0.0});
            }
        } else if (sub == s_bd) {
            const SpectralConvention conv(bd.dim, scaling_from_string(bd.scaling));
            const Which wh = which_from_string(bd.which);
            const RateFunction rate = RateFunction::parse(bd.rate, bd.alpha, bd.beta);
            const double wc = (wh == Which::H2 || wh == Which::H4) ? weyl_constant(bd.dim, bd.vol, bd.eps, conv.scaling)
                                                                   : 0.0;
            auto prof = BoundProfile::make(wh, rate, conv, bd.grad_u, wc);
            evaluate(prof, parse_nu_grid(bd.grid));
            Sink out(bd.out);
            CsvWriter w(*out.os, {"nu", "H", "bound"});
            for (const auto& p : prof.points) w.row({p.nu, p.H, p.bound});
        } else if (sub == s_ct) {
            const ShearFlow flow = ShearFlow::parse(ct.shear);
            const auto nus = parse_nu_grid(ct.grid);
            CtsOptions opt;
            opt.dt = ct.dt;
            opt.seed = g.seed;
            std::vector<double> tau(nus.size());
            parallel_cells(static_cast<int>(nus.size()), g.jobs, [&](int i) {
                tau[i] = tau_d_cts(flow, nus[i], CtsGrid{ct.k1max, ct.M, false}, opt).tau;
            });
            Sink out(ct.out);
            CsvWriter w(*out.os, {"nu", "tau_d"});
            for (std::size_t i = 0; i < nus.size(); ++i) w.row({nus[i], tau[i]});
        } else if (sub == s_vf) {
            vo.seed = g.seed;
            vo.jobs = g.jobs;
            const auto rows = verify_suite(suite, vo);
            print_table(std::cout, suite, rows);
            for (const auto& r : rows)
                if (!r.pass) return 1;
        } else if (sub == s_sw) {
            const auto T = parse_automorphism(sw.matrix);
            const SpectralConvention conv(T->dim(), Scaling::lattice);
            const auto rep = dissipation_sweep(*T, parse_nu_grid(sw.grid), TauMethod::exact_lattice, conv,
                                               g.jobs, g.seed);
            const auto prof = BoundProfile::make(Which::H1, fitted_strong_rate(*T, 1, 1, 12, conv), conv);
            Sink out(sw.out);
            CsvWriter w(*out.os, {"nu", "tau_d", "nu_tau_d", "trivial_bound", "h1_bound"});
            for (const auto& e : rep.entries) {
                const double hb = prof.universal_C / (e.nu * eval_H(prof, e.nu).H);
                w.row({e.nu, e.tau_d, e.nu * e.tau_d, 1 / (e.nu * conv.lambda1()) + 1, hb});
            }
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace disslab
