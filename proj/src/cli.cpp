#include "decoh/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "decoh/born_markov.hpp"
#include "decoh/bound_states.hpp"
#include "decoh/core.hpp"
#include "decoh/errors.hpp"
#include "decoh/exact_rates.hpp"
#include "decoh/mfp.hpp"
#include "decoh/special.hpp"
#include "decoh/time_domain.hpp"

namespace decoh::cli {

using json = nlohmann::json;

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<double> Sweep::values() const {
    std::vector<double> v;
    for (int i = 0; i < points; ++i) {
        const double f = double(i) / double(points - 1);
        v.push_back(log ? min * std::pow(max / min, f) : min + (max - min) * f);
    }
    v.front() = min;
    v.back() = max;
    return v;
}

namespace {

Occupation to_occ(const std::vector<int>& v, const char* name) {
    if (v.size() != 2) throw InvalidInput(std::string(name) + " needs two integers n+,n-");
    return Occupation(v[0], v[1]);
}

std::vector<std::pair<Occupation, cplx>> parse_state(const std::string& s) {
    // "n+,n-:amp;n+,n-:amp"
    std::vector<std::pair<Occupation, cplx>> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) {
        int p = 0, m = 0;
        double amp = 0.0;
        char c1 = 0, c2 = 0;
        std::stringstream is(item);
        if (!(is >> p >> c1 >> m >> c2 >> amp) || c1 != ',' || c2 != ':')
            throw InvalidInput("state entry '" + item + "' is not of the form n+,n-:amplitude");
        out.emplace_back(Occupation(p, m), cplx(amp));
    }
    if (out.empty()) throw InvalidInput("state is empty");
    return out;
}

Params params_of(const RunConfig& c) { return Params::make(c.a_over_lambda, c.s_over_lambda, c.L_over_lambda); }

json config_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["a_over_lambda"] = c.a_over_lambda;
    j["s_over_lambda"] = c.s_over_lambda;
    if (c.L_over_lambda) j["L_over_lambda"] = *c.L_over_lambda;
    j["occ"] = c.occ;
    j["occ_prime"] = c.occ_prime;
    j["rel_tol"] = c.rel_tol;
    if (c.command == "bound") j["s_over_a"] = c.s_over_a;
    if (c.command == "evolve") {
        j["nmax"] = c.nmax;
        j["state"] = c.state;
        j["times"] = c.times;
        j["method"] = c.method;
        j["omega_mode"] = c.omega_mode;
    }
    if (c.command == "wave") {
        j["a_plus"] = c.a_plus;
        j["a_minus"] = c.a_minus;
        j["k0"] = c.k0;
        j["angle"] = c.angle;
        j["t"] = c.t;
        j["site"] = c.site;
    }
    if (c.sweep) {
        j["sweep"] = {{"axis", c.sweep->axis}, {"min", c.sweep->min}, {"max", c.sweep->max},
                      {"points", c.sweep->points}, {"log", c.sweep->log}};
    }
    if (c.physical) {
        j["physical"] = {{"mass", c.physical->mass},
                         {"lambda", c.physical->lambda},
                         {"buffer_density", c.physical->buffer_density},
                         {"scattering_length", c.physical->scattering_length},
                         {"buffer_cross_section", c.physical->buffer_cross_section}};
    }
    return j;
}

class Csv {
public:
    explicit Csv(std::ostream& os) : os_(os) {}
    void preamble(const json& cfg) {
        for (auto it = cfg.begin(); it != cfg.end(); ++it) {
            if (it->is_object()) {
                for (auto jt = it->begin(); jt != it->end(); ++jt) line(it.key() + "." + jt.key(), *jt);
            } else {
                line(it.key(), *it);
            }
        }
    }
    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) os_ << (i ? "," : "") << cols[i];
        os_ << '\n';
    }
    void row(const std::vector<double>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) os_ << (i ? "," : "") << fmt17(v[i]);
        os_ << '\n';
    }

private:
    void line(const std::string& k, const json& v) {
        os_ << "# " << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
    std::ostream& os_;
};

void emit_json(std::ostream& os, const RunConfig& c, const json& result, const json& diag) {
    json j;
    j["config"] = config_json(c);
    j["result"] = result;
    j["diagnostics"] = diag.is_null() ? json::object() : diag;
    os << j.dump(2) << '\n';
}

json cjson(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

void cmd_rate_bm(const RunConfig& c, std::ostream& os) {
    if (c.sweep) {
        if (c.sweep->axis != "s_over_lambda") throw InvalidInput("rate-bm sweeps only s_over_lambda");
        Csv csv(os);
        csv.preamble(config_json(c));
        csv.header({"x", "R", "asymptote", "gaussian"});
        for (double x : c.sweep->values()) csv.row({x, rate_R(x), 0.5 / (x * x), std::exp(-x * x)});
        return;
    }
    const Params p = params_of(c);
    const double x = p.s_over_lambda;
    const auto r = bm_rates(p);
    json res{{"R", rate_R(x)},
             {"total_rate", r.total_rate},
             {"relative_rate", r.relative_rate},
             {"exponent", bm_exponent(to_occ(c.occ, "occ"), to_occ(c.occ_prime, "occ-prime"), p)}};
    json diag{{"R_quadrature", rate_R_quadrature(x)}};
    diag["asymptote"] = x > 0.0 ? json(0.5 / (x * x)) : json(nullptr);
    emit_json(os, c, res, diag);
}

double gamma_si(const RunConfig& c) {
    PhysicalInputs ph;
    ph.mass = c.physical->mass;
    ph.lambda = c.physical->lambda;
    ph.buffer_density = c.physical->buffer_density;
    ph.scattering_length = c.physical->scattering_length;
    ph.buffer_cross_section = c.physical->buffer_cross_section;
    return gamma_scale(ph);
}

void cmd_gamma(const RunConfig& c, std::ostream& os) {
    const Params p = params_of(c);
    const Occupation n = to_occ(c.occ, "occ"), m = to_occ(c.occ_prime, "occ-prime");
    RateOptions ro;
    ro.rel_tol = c.rel_tol;
    const cplx g = gamma_exact(n, m, p, ro);
    const cplx D = decoherence_D(n, m, p, ro);
    json res{{"gamma", cjson(g)}, {"D", cjson(D)}};
    json diag;
    if (p.a_over_lambda != 0.0 || (n.empty() && m.empty())) {
        const double wn = frequency_shift_omega(n, p, ro), wm = frequency_shift_omega(m, p, ro);
        res["omega"] = wn;
        res["omega_prime"] = wm;
    } else {
        res["omega"] = nullptr;
        res["omega_prime"] = nullptr;
        diag["omega_note"] = "Omega/Gamma diverges like 1/a and is undefined at a = 0";
    }
    diag["weak_limit_gamma"] = bm_pair_rate(n, m, p);
    diag["weak_limit_D"] = bm_exponent(n, m, p);
    diag["R"] = rate_R(p.s_over_lambda);
    if (c.physical) {
        const double G = gamma_si(c);
        diag["Gamma_per_second"] = G;
        res["gamma_si"] = cjson(g * G);
        res["D_si"] = cjson(D * G);
    }
    for (auto& w : p.warnings()) diag["warnings"].push_back(w);
    emit_json(os, c, res, diag);
}

void cmd_sweep(const RunConfig& c, std::ostream& os) {
    if (!c.sweep) throw InvalidInput("sweep needs --sweep AXIS MIN MAX POINTS");
    const auto& sw = *c.sweep;
    if (sw.axis != "s_over_lambda" && sw.axis != "a_over_lambda") throw InvalidInput("sweep axis must be s_over_lambda or a_over_lambda");
    if (c.quantity != "D" && c.quantity != "gamma") throw InvalidInput("quantity must be D or gamma");
    const Occupation n = to_occ(c.occ, "occ"), m = to_occ(c.occ_prime, "occ-prime");
    RateOptions ro;
    ro.rel_tol = c.rel_tol;
    Csv csv(os);
    csv.preamble(config_json(c));
    csv.header({sw.axis, c.quantity + "_re", c.quantity + "_im", "weak_limit"});
    for (double v : sw.values()) {
        RunConfig cc = c;
        (sw.axis == "s_over_lambda" ? cc.s_over_lambda : cc.a_over_lambda) = v;
        const Params p = params_of(cc);
        const cplx q = c.quantity == "D" ? decoherence_D(n, m, p, ro) : gamma_exact(n, m, p, ro);
        const double wl = c.quantity == "D" ? bm_exponent(n, m, p) : bm_pair_rate(n, m, p);
        csv.row({v, q.real(), q.imag(), wl});
    }
}

void cmd_evolve(const RunConfig& c, std::ostream& os) {
    const Params p = params_of(c);
    const FockBasis basis(c.nmax);
    const auto rho0 = DensityMatrix::pure(basis, parse_state(c.state));
    const Occupation n = to_occ(c.occ, "occ"), m = to_occ(c.occ_prime, "occ-prime");
    if (c.method != "bm" && c.method != "exact") throw InvalidInput("method must be bm or exact");
    if (c.omega_mode != "include" && c.omega_mode != "exclude") throw InvalidInput("omega mode must be include or exclude");
    std::optional<RateTable> table;
    if (c.method == "exact") {
        RateOptions ro;
        ro.rel_tol = c.rel_tol;
        table.emplace(basis, p, c.omega_mode == "include" ? FrequencyShift::include : FrequencyShift::exclude, ro);
    }
    Csv csv(os);
    csv.preamble(config_json(c));
    csv.header({"t", "rho_re", "rho_im", "rho_abs", "trace_re"});
    for (double t : c.times) {
        const DensityMatrix r = table ? exact_evolve(rho0, t, *table) : bm_evolve(rho0, t, p);
        const cplx e = r(n, m);
        csv.row({t, e.real(), e.imag(), std::abs(e), r.trace().real()});
    }
}

Scatterers scatterers_from_s_over_a(const std::vector<double>& v) {
    if (v.size() != 2) throw InvalidInput("--s-over-a needs two values");
    if (v[0] == 0.0 || v[1] == 0.0 || !std::isfinite(v[0]) || !std::isfinite(v[1]))
        throw InvalidInput("s/a values must be finite and nonzero");
    return {1.0 / v[0], 1.0 / v[1], 1.0};
}

void cmd_bound(const RunConfig& c, std::ostream& os) {
    const Scatterers sc = scatterers_from_s_over_a(c.s_over_a);
    if (c.curve) {
        if (c.curve_points < 2 || !(c.u_max > 0.0)) throw InvalidInput("curve needs points >= 2 and u-max > 0");
        Csv csv(os);
        csv.preamble(config_json(c));
        csv.header({"u", "product", "exponential"});
        for (int i = 0; i < c.curve_points; ++i) {
            const double u = c.u_max * double(i) / double(c.curve_points - 1);
            csv.row({u, (u - c.s_over_a[1]) * (u - c.s_over_a[0]), std::exp(-2.0 * u)});
        }
        return;
    }
    const auto cnt = count_bound_states_detail(sc);
    json states = json::array();
    for (const auto& b : find_bound_states(sc)) {
        states.push_back({{"q_times_s", b.q * sc.s},
                          {"energy", b.energy()},
                          {"chi_sq", cjson(b.chi_sq)},
                          {"w_plus", cjson(b.w_plus)},
                          {"w_minus", cjson(b.w_minus)},
                          {"complex_coefficients", b.complex_coefficients},
                          {"root_residual", bound_root_function(b.q * sc.s, sc)},
                          {"norm", bound_state_norm(b, sc)}});
    }
    json res{{"count", cnt.count}, {"states", states}};
    json diag{{"tangency", cnt.tangency}, {"units", "lengths in units of s, hbar = m = 1"}};
    emit_json(os, c, res, diag);
}

void cmd_wave(const RunConfig& c, std::ostream& os) {
    if (c.site != "plus" && c.site != "minus") throw InvalidInput("site must be plus or minus");
    if (c.r_points < 2 || !(c.r_min > 0.0) || !(c.r_max > c.r_min)) throw InvalidInput("bad r range");
    const Scatterers sc{c.a_plus, c.a_minus, 1.0};
    const Site site = c.site == "plus" ? Site::plus : Site::minus;
    const double phi0 = 0.5 * c.k0 * sc.s * std::cos(c.angle);
    const auto bound = find_bound_states(sc);
    WaveOptions wo;
    wo.rel_tol = c.rel_tol;
    Csv csv(os);
    csv.preamble(config_json(c));
    csv.header({"r", "psi_scat_abs", "envelope_abs"});
    for (int i = 0; i < c.r_points; ++i) {
        const double r = c.r_min + (c.r_max - c.r_min) * double(i) / double(c.r_points - 1);
        const auto pw = scattered_partial_wave(site, r, c.t, c.k0, phi0, sc, bound, wo);
        csv.row({r, std::abs(pw.total()), std::abs(envelope_partial_wave(site, r, c.t, c.k0, phi0, sc))});
    }
}

void cmd_mfp(const RunConfig& c, std::ostream& os) {
    MfpOptions mo;
    mo.rel_tol = std::max(c.rel_tol, 1e-10);
    if (c.sweep) {
        if (c.sweep->axis != "L_over_lambda" && c.sweep->axis != "s_over_lambda")
            throw InvalidInput("mfp sweeps L_over_lambda or s_over_lambda");
        Csv csv(os);
        csv.preamble(config_json(c));
        csv.header({c.sweep->axis, "R_tilde", "R", "saturation"});
        for (double v : c.sweep->values()) {
            const double s = c.sweep->axis == "s_over_lambda" ? v : c.s_over_lambda;
            const double L = c.sweep->axis == "L_over_lambda" ? v : c.L_over_lambda.value_or(0.0);
            if (!(L > 0.0)) throw InvalidInput("mfp needs --L-over-lambda");
            csv.row({v, rate_R_tilde(s, L, mo), rate_R(s), 0.5 / (s * s) * std::exp(-s / L)});
        }
        return;
    }
    if (!c.L_over_lambda) throw InvalidInput("mfp needs --L-over-lambda");
    const double s = c.s_over_lambda, L = *c.L_over_lambda;
    json res{{"R_tilde", rate_R_tilde(s, L, mo)}};
    json diag{{"R", rate_R(s)}, {"saturation", 0.5 / (s * s) * std::exp(-s / L)}};
    for (auto& w : rate_R_tilde_warnings(s, L)) diag["warnings"].push_back(w);
    emit_json(os, c, res, diag);
}

}  // namespace

void RunConfig::validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) throw InvalidInput("tolerance must lie in (0, 1e-2]");
    if (!format.empty() && format != "csv" && format != "json") throw InvalidInput("format must be csv or json");
    if (sweep) {
        if (sweep->points < 2) throw InvalidInput("sweep needs at least 2 points");
        if (!(sweep->max > sweep->min)) throw InvalidInput("sweep needs max > min");
        if (sweep->log && !(sweep->min > 0.0)) throw InvalidInput("log sweep needs min > 0");
    }
    if (nmax < 0 || nmax > 40) throw InvalidInput("nmax must lie in [0, 40]");
    for (double t : times)
        if (!(t >= 0.0)) throw InvalidInput("times must be >= 0");
}

RunConfig parse_args(const std::vector<std::string>& args, std::ostream& help_out, bool& help_requested) {
    RunConfig c;
    help_requested = false;
    CLI::App app{"collisional decoherence of two trapped sites in a buffer gas", "decoh"};
    app.set_config("--config", "", "read options from a TOML/INI file");
    app.require_subcommand(1);
    app.fallthrough();  // common options may follow the subcommand name
    app.add_option("--format", c.format, "csv or json");
    app.add_option("-o,--output", c.output, "write to file instead of stdout");
    app.add_option("--rel-tol", c.rel_tol, "relative quadrature tolerance");

    std::vector<std::string> sweep_raw;
    bool sweep_log = false;
    double L = std::nan("");
    auto add_params = [&](CLI::App* s) {
        s->add_option("--a-over-lambda", c.a_over_lambda);
        s->add_option("--s-over-lambda", c.s_over_lambda);
        s->add_option("--L-over-lambda", L);
        s->add_option("--occ", c.occ)->expected(2)->delimiter(',');
        s->add_option("--occ-prime", c.occ_prime)->expected(2)->delimiter(',');
    };
    auto add_sweep = [&](CLI::App* s) {
        s->add_option("--sweep", sweep_raw, "AXIS MIN MAX POINTS")->expected(4);
        s->add_flag("--log", sweep_log, "log-spaced sweep");
    };

    auto* rb = app.add_subcommand("rate-bm", "Born-Markov rate function R and exponents");
    add_params(rb);
    add_sweep(rb);

    auto* ga = app.add_subcommand("gamma", "exact pair rate, D and Omega");
    add_params(ga);
    Physical ph;
    auto* grp = ga->add_option_group("--physical", "SI inputs for the rate scale");
    grp->add_option("--mass", ph.mass, "kg");
    grp->add_option("--lambda-m", ph.lambda, "thermal wavelength, m");
    grp->add_option("--buffer-density", ph.buffer_density, "1/m^3");
    grp->add_option("--scattering-length-m", ph.scattering_length, "m");
    grp->add_option("--buffer-cross-section", ph.buffer_cross_section, "m^2");

    auto* sw = app.add_subcommand("sweep", "D or gamma along a parameter axis");
    add_params(sw);
    add_sweep(sw);
    sw->add_option("--quantity", c.quantity, "D or gamma");

    auto* ev = app.add_subcommand("evolve", "density-matrix evolution of one entry");
    add_params(ev);
    ev->add_option("--nmax", c.nmax);
    ev->add_option("--state", c.state, "pure state as n+,n-:amp;...");
    ev->add_option("--times", c.times)->delimiter(',');
    ev->add_option("--method", c.method, "bm or exact");
    ev->add_option("--omega", c.omega_mode, "include or exclude the frequency shift");

    auto* bo = app.add_subcommand("bound", "bound states for given s/a+, s/a-");
    bo->add_option("--s-over-a", c.s_over_a)->expected(2)->delimiter(',');
    bo->add_flag("--curve", c.curve, "emit both sides of the root condition as CSV");
    bo->add_option("--u-max", c.u_max);
    bo->add_option("--points", c.curve_points);

    auto* wa = app.add_subcommand("wave", "scattered wave vs step envelope (hbar = m = s = 1)");
    wa->add_option("--a-plus", c.a_plus);
    wa->add_option("--a-minus", c.a_minus);
    wa->add_option("--k0", c.k0);
    wa->add_option("--angle", c.angle, "incidence angle to the separation axis, rad");
    wa->add_option("--t", c.t);
    wa->add_option("--r-min", c.r_min);
    wa->add_option("--r-max", c.r_max);
    wa->add_option("--points", c.r_points);
    wa->add_option("--site", c.site, "plus or minus");

    auto* mf = app.add_subcommand("mfp", "mean-free-path corrected rate function");
    add_params(mf);
    add_sweep(mf);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        help_requested = true;
        app.exit(e, help_out, help_out);
        return c;
    } catch (const CLI::CallForAllHelp& e) {
        help_requested = true;
        app.exit(e, help_out, help_out);
        return c;
    } catch (const CLI::ParseError& e) {
        throw InvalidInput(e.what());
    }
    for (auto* s : app.get_subcommands()) c.command = s->get_name();
    if (!std::isnan(L)) c.L_over_lambda = L;
    if (!sweep_raw.empty()) {
        Sweep s;
        s.axis = sweep_raw[0];
        try {
            s.min = std::stod(sweep_raw[1]);
            s.max = std::stod(sweep_raw[2]);
            s.points = std::stoi(sweep_raw[3]);
        } catch (const std::exception&) {
            throw InvalidInput("--sweep expects AXIS MIN MAX POINTS");
        }
        s.log = sweep_log;
        c.sweep = s;
    }
    if (c.command == "gamma" && grp->count_all() > 0) {
        c.physical = ph;
    }
    c.validate();
    return c;
}

void execute(const RunConfig& c, std::ostream& out) {
    std::ofstream file;
    std::ostream* os = &out;
    if (!c.output.empty()) {
        file.open(c.output, std::ios::binary);
        if (!file) throw InvalidInput("cannot open output file " + c.output);
        os = &file;
    }
    const bool tabular = c.sweep || c.command == "evolve" || c.command == "wave" ||
                         (c.command == "bound" && c.curve) || c.command == "sweep";
    if (!c.format.empty() && c.format != (tabular ? "csv" : "json"))
        throw InvalidInput("this invocation of " + c.command + " emits " + (tabular ? "csv" : "json"));
    std::ostringstream buf;  // nothing reaches the sink if the computation throws
    if (c.command == "rate-bm") cmd_rate_bm(c, buf);
    else if (c.command == "gamma") cmd_gamma(c, buf);
    else if (c.command == "sweep") cmd_sweep(c, buf);
    else if (c.command == "evolve") cmd_evolve(c, buf);
    else if (c.command == "bound") cmd_bound(c, buf);
    else if (c.command == "wave") cmd_wave(c, buf);
    else if (c.command == "mfp") cmd_mfp(c, buf);
    else throw InvalidInput("unknown command " + c.command);
    *os << buf.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto fail = [&](int code, const char* kind, const std::string& msg) {
        json j{{"error", {{"kind", kind}, {"message", msg}}}};
        err << j.dump() << '\n';
        return code;
    };
    try {
        bool help = false;
        const RunConfig c = parse_args(args, out, help);
        if (help) return 0;
        execute(c, out);
        return 0;
    } catch (const InvalidInput& e) {
        return fail(2, "config", e.what());
    } catch (const NumericError& e) {
        return fail(3, "numeric", e.what());
    } catch (const std::exception& e) {
        return fail(3, "numeric", e.what());
    }
}

}  // namespace decoh::cli
