// nmdicke - batch driver: scans, time-domain Green's functions, exponent fits, Langevin runs.
//
// Every CSV starts with a comment block; lines "#! key=value" hold the full parameter set,
// so `nmdicke <command> --config out.csv` re-runs the same computation.

#include "nmdicke/langevin.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

using namespace nmdicke;

namespace {

constexpr const char* kVersion = "1.0.0";

struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::string to_text(double x) { return fmt::format("{:.17g}", x); }
std::string to_text(long x) { return std::to_string(x); }
std::string to_text(int x) { return std::to_string(x); }
std::string to_text(std::uint64_t x) { return std::to_string(x); }
std::string to_text(const std::string& x) { return x; }

std::string num(double x) { return fmt::format("{:.16e}", x); }

// Options registered through here are recorded in the CSV header.
struct Recorder {
    CLI::App* app;
    std::vector<std::pair<std::string, std::function<std::string()>>> items;

    template <class T>
    CLI::Option* add(const std::string& key, T& var, const std::string& help) {
        auto* o = app->add_option("--" + key, var, help)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        o->capture_default_str();
        items.emplace_back(key, [&var] { return to_text(var); });
        return o;
    }
};

// ---- shared argument groups ----

struct ModelArgs {
    std::string scenario{"both"};
    double s{0.7};
    double delta{2.0}, kappa{0.5}, gamma{0.1}, omega_z{1.0}, omega_M{1e4};
    double T_b{0.0}, mu_b{0.0};
    std::string self_energy{"closed"};
    double rel_tol{1e-10}, omega_min{1e-16}, omega_max{1e3};

    void attach(Recorder& r) {
        r.add("scenario", scenario, "both | thermal | mb-only | nmb-only");
        r.add("s", s, "sub-ohmic exponent");
        r.add("delta", delta, "cavity detuning / omega_z");
        r.add("kappa", kappa, "cavity loss / omega_z");
        r.add("gamma", gamma, "bath coupling / omega_z");
        r.add("omega-z", omega_z, "atomic frequency");
        r.add("omega-m", omega_M, "bath UV cutoff / omega_z");
        r.add("t-b", T_b, "bath temperature / omega_z");
        r.add("mu-b", mu_b, "bath chemical potential / omega_z (<= 0)");
        r.add("self-energy", self_energy, "closed | pv");
        r.add("rel-tol", rel_tol, "quadrature relative tolerance");
        r.add("omega-min", omega_min, "quadrature IR floor");
        r.add("omega-max", omega_max, "start of the analytic UV tail");
    }

    ModelParams model(double dy_rel) const {
        ModelParams p;
        p.delta = delta;
        p.kappa = kappa;
        p.omega_z = omega_z;
        p.dy_rel = dy_rel;
        p.bath.gamma = gamma;
        p.bath.s = s;
        p.bath.omega_z = omega_z;
        p.bath.omega_M = omega_M;
        p.bath.T_b = T_b;
        p.bath.mu_b = mu_b;
        if (self_energy == "closed")
            p.self_energy = SelfEnergyMode::closed;
        else if (self_energy == "pv")
            p.self_energy = SelfEnergyMode::pv;
        else
            throw ValidationError("--self-energy must be closed or pv");
        p = apply_scenario(p, scenario_from_name(scenario));
        p.validate();
        return p;
    }

    QuadConfig quad() const {
        QuadConfig q;
        q.rel_tol = rel_tol;
        q.omega_min = omega_min;
        q.omega_max = omega_max;
        q.validate();
        return q;
    }
};

struct SimArgs {
    double dt{0.01};
    long steps{200000};
    long burn_in{-1};
    int ensemble{64};
    std::uint64_t seed{1};
    std::string g_kind{"ph"};
    std::string noise{"auto"};
    std::string r{"auto"}, v{"auto"}, kappa_eff{"auto"}, g{"auto"};

    void attach(Recorder& rec) {
        rec.add("dt", dt, "time step / omega_z^-1");
        rec.add("steps", steps, "steps per member");
        rec.add("burn-in", burn_in, "discarded steps (-1: first 20%)");
        rec.add("ensemble", ensemble, "ensemble members");
        rec.add("seed", seed, "base seed");
        rec.add("g-kind", g_kind, "cubic coefficient: ph | at");
        rec.add("noise", noise, "auto | white | colored");
        rec.add("r", r, "mass term (auto: from the model)");
        rec.add("v", v, "fractional-derivative coefficient (auto: from the model)");
        rec.add("kappa-eff", kappa_eff, "white-noise strength (auto: from the model)");
        rec.add("g", g, "cubic coefficient (auto: from the model)");
    }

    static double parse_or(const std::string& text, double fallback, const char* what) {
        if (text == "auto") return fallback;
        try {
            std::size_t pos = 0;
            double x = std::stod(text, &pos);
            if (pos != text.size()) throw std::invalid_argument(text);
            return x;
        } catch (const std::exception&) {
            throw ValidationError(fmt::format("--{} expects a number or 'auto', got '{}'", what, text));
        }
    }

    SimConfig config(const ModelParams& p, double n_atoms) const {
        SimConfig c = SimConfig::from_model(p);
        const auto lf = lowfreq_coefficients(p);
        if (g_kind == "at")
            c.g = lf.g_at;
        else if (g_kind != "ph")
            throw ValidationError("--g-kind must be ph or at");
        if (noise == "white")
            c.noise = NoiseKind::white;
        else if (noise == "colored") {
            c.noise = NoiseKind::colored;
            c.T_b = p.bath.T_b;
        } else if (noise != "auto")
            throw ValidationError("--noise must be auto, white or colored");
        c.r = parse_or(r, c.r, "r");
        c.v = parse_or(v, c.v, "v");
        c.kappa_eff = parse_or(kappa_eff, c.kappa_eff, "kappa-eff");
        c.g = parse_or(g, c.g, "g");
        c.n_atoms = n_atoms;
        c.dt = dt;
        c.steps = steps;
        c.burn_in = burn_in;
        c.ensemble = ensemble;
        c.seed = seed;
        c.validate();
        return c;
    }
};

Window parse_window(const std::string& text) {
    const auto k = text.find(':');
    if (k == std::string::npos) throw ValidationError("window must look like lo:hi, got '" + text + "'");
    Window w{};
    try {
        w.lo = std::stod(text.substr(0, k));
        w.hi = std::stod(text.substr(k + 1));
    } catch (const std::exception&) {
        throw ValidationError("cannot parse window '" + text + "'");
    }
    if (!(w.lo > 0.0) || !(w.hi > w.lo)) throw ValidationError("window needs 0 < lo < hi, got '" + text + "'");
    return w;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ValidationError("cannot parse list entry '" + item + "'");
        }
    }
    if (out.empty()) throw ValidationError("empty list");
    return out;
}

void require_range(double lo, double hi, const char* what) {
    if (!(lo > 0.0) || !(hi > lo)) throw ValidationError(fmt::format("{}: need 0 < min < max", what));
}

// Late (off-critical) window: two decades starting 100x past the crossover scale dy^-1/s,
// but ending no later than t = 1e16, where double-precision cancellation sets the floor.
Window auto_late_window(double s, double dy) {
    const double hi = std::min(1e4 * std::pow(dy, -1.0 / s), 1e16);
    return {hi / 100.0, hi};
}

// Power-law tails may carry either sign (the NMB-only off-critical tail is negative);
// fit the magnitude when the window has one sign throughout.
std::vector<double> tail_magnitude(std::vector<double> y) {
    const bool neg = std::all_of(y.begin(), y.end(), [](double v) { return v < 0.0; });
    if (neg)
        for (auto& v : y) v = -v;
    return y;
}

Correlator correlator_from_name(const std::string& n) {
    if (n == "photon") return Correlator::photon;
    if (n == "order-parameter") return Correlator::order_parameter;
    if (n == "order-parameter-lowfreq") return Correlator::order_parameter_lowfreq;
    throw ValidationError("--correlator must be photon, order-parameter or order-parameter-lowfreq");
}

// ---- output ----

class CsvOut {
public:
    CsvOut(const std::string& command, const Recorder& rec, std::uint64_t seed) {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char stamp[64];
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        body_ << "# nmdicke " << kVersion << " " << command << "\n";
        body_ << "# created: " << stamp << "\n";
        body_ << "# seed: " << seed << "\n";
        body_ << "#! command=" << command << "\n";
        for (const auto& [k, f] : rec.items) body_ << "#! " << k << "=" << f() << "\n";
    }
    void header(const std::vector<std::string>& cols) { row(cols); }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) body_ << (i ? "," : "") << cells[i];
        body_ << "\n";
    }
    void note(const std::string& line) { body_ << "# " << line << "\n"; }

    // temp file + rename, so readers never see a partial file
    void commit(const std::string& path) const {
        if (path.empty() || path == "-") {
            std::cout << body_.str() << std::flush;
            return;
        }
        const std::string tmp = fmt::format("{}.tmp.{}", path, static_cast<long>(::getpid()));
        {
            std::ofstream f(tmp, std::ios::trunc);
            if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
            f << body_.str();
            f.flush();
            if (!f) throw std::runtime_error("write to " + tmp + " failed");
        }
        std::error_code ec;
        std::filesystem::rename(tmp, path, ec);
        if (ec) {
            std::filesystem::remove(tmp);
            throw std::runtime_error("cannot rename " + tmp + " to " + path + ": " + ec.message());
        }
    }

private:
    std::ostringstream body_;
};

std::string status(const Exponent& pred, double measured, double tol) {
    if (!pred.is_value()) return "n/a";
    return std::abs(measured - pred.v) <= tol ? "pass" : "fail";
}

// ---- config files ----

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot read config file " + path);
    std::vector<std::string> lines;
    for (std::string l; std::getline(f, l);) {
        if (!l.empty() && l.back() == '\r') l.pop_back();
        lines.push_back(l);
    }
    // CSV artifacts: only the "#!" lines; plain config files: every key=value line
    bool replay = false;
    for (const auto& l : lines) replay |= l.rfind("#!", 0) == 0;
    auto trim = [](std::string x) {
        const auto a = x.find_first_not_of(" \t"), b = x.find_last_not_of(" \t");
        return a == std::string::npos ? std::string{} : x.substr(a, b - a + 1);
    };
    std::vector<std::pair<std::string, std::string>> kv;
    for (auto l : lines) {
        if (replay) {
            if (l.rfind("#!", 0) != 0) continue;
            l = l.substr(2);
        }
        l = trim(l);
        if (l.empty() || l[0] == '#') continue;
        const auto eq = l.find('=');
        if (eq == std::string::npos) throw ValidationError(fmt::format("{}: expected key=value, got '{}'", path, l));
        kv.emplace_back(trim(l.substr(0, eq)), trim(l.substr(eq + 1)));
    }
    return kv;
}

// Config values go in right after the subcommand token, so later command-line flags win.
std::vector<std::string> expand_config(std::vector<std::string> args, const std::vector<std::string>& commands) {
    std::string cfg;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            cfg = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            cfg = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (cfg.empty()) return args;
    auto kv = read_config(cfg);
    std::size_t at = 0;
    for (std::size_t i = 1; i < args.size() && !at; ++i)
        if (std::find(commands.begin(), commands.end(), args[i]) != commands.end()) at = i;
    std::string command;
    std::vector<std::string> extra;
    for (const auto& [k, v] : kv) {
        if (k == "command")
            command = v;
        else
            extra.push_back("--" + k + "=" + v);
    }
    if (!at) {
        if (command.empty()) throw ValidationError("no subcommand given and none recorded in " + cfg);
        args.insert(args.begin() + 1, command);
        at = 1;
    }
    args.insert(args.begin() + static_cast<long>(at) + 1, extra.begin(), extra.end());
    return args;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-Markovian Dicke model: criticality, exponents and Langevin simulations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("nmdicke ") + kVersion);

    ModelArgs model;
    SimArgs sim;
    std::string output{"-"};
    double dy{1e-4};
    double dy_min{1e-8}, dy_max{1e-6};
    int per_decade{12};
    double t_min{1.0}, t_max{1e16};
    std::string correlator{"photon"}, quantity{"correlation"}, fe_quantity{"photon-flux"}, window{"auto"}, early{"1e2:1e4"}, late{"1e14:1e16"};
    std::string method{"predicted"}, n_list{"1e2,1e3,1e4,1e5"};
    double tol{-1.0}, n_atoms{1.0};
    int simulate{0}, stride{1};

    std::map<std::string, Recorder> rec;
    auto sub = [&](const char* name, const char* help) {
        auto* a = app.add_subcommand(name, help);
        a->add_option("-o,--output", output, "output CSV ('-' for stdout)")->capture_default_str();
        rec[name] = Recorder{a, {}};
        return &rec[name];
    };

    auto* scan = sub("scan-photon-number", "photon number n(dy) on a log grid of dy/y_c");
    model.attach(*scan);
    scan->add("dy-min", dy_min, "smallest dy/y_c");
    scan->add("dy-max", dy_max, "largest dy/y_c");
    scan->add("per-decade", per_decade, "grid points per decade");

    auto* gt = sub("greens-time", "time-domain correlation, response or MSD");
    model.attach(*gt);
    gt->add("dy", dy, "dy/y_c (0: critical)");
    gt->add("correlator", correlator, "photon | order-parameter | order-parameter-lowfreq");
    gt->add("quantity", quantity, "correlation | response | msd");
    gt->add("t-min", t_min, "first time");
    gt->add("t-max", t_max, "last time");
    gt->add("per-decade", per_decade, "grid points per decade");

    auto* fe = sub("fit-exponent", "fit one exponent and compare with the prediction");
    model.attach(*fe);
    fe->add("quantity", fe_quantity, "photon-flux | corr-critical | corr-away | resp-critical | resp-away | msd");
    fe->add("window", window, "fit window lo:hi (auto: per quantity)");
    fe->add("dy", dy, "dy/y_c for the off-critical quantities");
    fe->add("correlator", correlator, "photon | order-parameter | order-parameter-lowfreq");
    fe->add("tol", tol, "pass tolerance (negative: 0.02 for photon-flux, 0.05 otherwise)");
    fe->add("per-decade", per_decade, "grid points per decade");

    auto* co = sub("crossover", "crossover time t_c(dy) and its exponent");
    model.attach(*co);
    co->add("dy-min", dy_min, "smallest dy/y_c");
    co->add("dy-max", dy_max, "largest dy/y_c");
    co->add("per-decade", per_decade, "dy points per decade");
    co->add("early", early, "critical-regime window lo:hi");
    co->add("late", late, "off-critical window lo:hi");
    co->add("method", method, "predicted | free (slopes of the intersected lines)");
    co->add("correlator", correlator, "photon | order-parameter");
    co->add("tol", tol, "pass tolerance on zeta_c (negative: 0.2)");

    auto* fs = sub("finite-size", "Langevin finite-size scan at criticality");
    model.attach(*fs);
    sim.attach(*fs);
    fs->add("n-list", n_list, "comma-separated atom numbers");
    fs->add("tol", tol, "pass tolerance on alpha (negative: 0.1)");

    auto* tb = sub("table", "measured vs predicted exponents for one scenario");
    model.attach(*tb);
    tb->add("dy", dy, "dy/y_c for the off-critical exponents");
    tb->add("simulate", simulate, "1: also run the finite-size Langevin scan");
    sim.attach(*tb);
    tb->add("n-list", n_list, "comma-separated atom numbers");

    auto* lg = sub("langevin", "fractional Langevin trajectories and stationary moments");
    model.attach(*lg);
    sim.attach(*lg);
    lg->add("dy", dy, "dy/y_c (sets r unless --r is given)");
    lg->add("n-atoms", n_atoms, "atom number N");
    lg->add("stride", stride, "write every stride-th sample of member 0");

    std::vector<std::string> commands;
    for (auto& [k, v] : rec) commands.push_back(k);
    std::vector<std::string> args(argv, argv + argc);
    try {
        args = expand_config(args, commands);
        std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
        app.parse(std::move(rev));
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        const QuadConfig q = model.quad();
        const Recorder& R = rec[cmd];

        if (cmd == "scan-photon-number") {
            require_range(dy_min, dy_max, "scan-photon-number");
            const ModelParams p = model.model(dy_min);
            CsvOut out(cmd, R, 0);
            out.header({"dy_rel", "photon_number"});
            for (double d : log_grid(dy_min, dy_max, per_decade))
                out.row({num(d), num(photon_number(p.with_dy_rel(d), q))});
            out.commit(output);

        } else if (cmd == "greens-time") {
            require_range(t_min, t_max, "greens-time");
            if (dy < 0.0) throw ValidationError("--dy must be >= 0");
            const ModelParams p = model.model(dy);
            const Correlator c = correlator_from_name(correlator);
            const auto t = log_grid(t_min, t_max, per_decade);
            std::vector<double> y;
            std::string col;
            if (quantity == "correlation") {
                y = correlation_time(t, p, q, c);
                col = "iGK_t";
            } else if (quantity == "response") {
                y = response_time(t, p, q, c);
                col = "GR_t";
            } else if (quantity == "msd") {
                y = mean_square_displacement(t, p, q, c);
                col = "msd";
            } else {
                throw ValidationError("--quantity must be correlation, response or msd");
            }
            CsvOut out(cmd, R, 0);
            out.header({"t", col});
            for (std::size_t i = 0; i < t.size(); ++i) out.row({num(t[i]), num(y[i])});
            out.commit(output);

        } else if (cmd == "fit-exponent") {
            const ModelParams p0 = model.model(dy > 0.0 ? dy : 1.0);
            const auto pred = predicted_exponents(scenario_of(p0), model.s);
            const Correlator c = correlator_from_name(correlator);
            Exponent target;
            Window w{};
            PowerLawFit f;
            const bool is_flux = fe_quantity == "photon-flux";
            if (is_flux) {
                w = window == "auto" ? Window{1e-8, 1e-6} : parse_window(window);
                f = photon_flux_fit(p0, w, per_decade, q);
                target = pred.photon_flux;
            } else {
                const bool critical = fe_quantity == "corr-critical" || fe_quantity == "resp-critical" || fe_quantity == "msd";
                if (!critical && !(dy > 0.0)) throw ValidationError("--dy must be > 0 off criticality");
                const ModelParams p = p0.with_dy_rel(critical ? 0.0 : dy);
                if (window != "auto")
                    w = parse_window(window);
                else if (fe_quantity == "msd")
                    w = {1e10, 1e12};
                else
                    w = critical ? Window{1e2, 1e4} : auto_late_window(model.s, dy);
                const auto t = log_grid(w.lo, w.hi, per_decade);
                std::vector<double> y;
                if (fe_quantity == "corr-critical" || fe_quantity == "corr-away") {
                    y = correlation_time(t, p, q, c);
                    target = critical ? pred.corr_critical : pred.corr_away;
                } else if (fe_quantity == "resp-critical" || fe_quantity == "resp-away") {
                    y = response_time(t, p, q, c);
                    target = critical ? pred.resp_critical : pred.resp_away;
                } else if (fe_quantity == "msd") {
                    y = mean_square_displacement(t, p, q, c);
                    // C(t) ~ t^-(1-2s) grows for s > 1/2, so 2(C(0)-C(t)) ~ t^(2s-1)
                    target = scenario_of(p) == Scenario::both && model.s > 0.5 ? Exponent::num(1.0 - 2.0 * model.s)
                                                                               : Exponent::ir();
                } else {
                    throw ValidationError("unknown --quantity " + fe_quantity);
                }
                f = fit_power_law(t, tail_magnitude(y), w);
                f.exponent = -f.exponent; // decay rate
            }
            const double tl = tol >= 0.0 ? tol : (is_flux ? 0.02 : 0.05);
            CsvOut out(cmd, R, 0);
            out.header({"quantity", "window_lo", "window_hi", "measured", "stderr", "r2", "predicted", "tolerance",
                        "status"});
            out.row({fe_quantity, num(w.lo), num(w.hi), num(f.exponent), num(f.stderr_exponent), num(f.r2),
                     target.str(), num(tl), status(target, f.exponent, tl)});
            if (fe_quantity != "photon-flux")
                out.note("exponents are decay rates: y ~ x^-measured (msd: negative means growth)");
            out.commit(output);

        } else if (cmd == "crossover") {
            require_range(dy_min, dy_max, "crossover");
            const Window we = parse_window(early), wl = parse_window(late);
            CrossoverMethod m;
            if (method == "predicted")
                m = CrossoverMethod::predicted_slopes;
            else if (method == "free")
                m = CrossoverMethod::free_slopes;
            else
                throw ValidationError("--method must be predicted or free");
            const Correlator c = correlator_from_name(correlator);
            const ModelParams p0 = model.model(dy_max);
            const auto pred = predicted_exponents(scenario_of(p0), model.s);
            std::optional<std::pair<double, double>> slopes;
            if (m == CrossoverMethod::predicted_slopes) {
                if (!pred.corr_critical.is_value() || !pred.corr_away.is_value())
                    throw ValidationError("no predicted power laws for this scenario and s; use --method free");
                slopes = std::make_pair(-pred.corr_critical.v, -pred.corr_away.v);
            }
            auto t = log_grid(we.lo, we.hi, 12);
            const auto tl = log_grid(wl.lo, wl.hi, 12);
            t.insert(t.end(), tl.begin(), tl.end());
            CsvOut out(cmd, R, 0);
            out.header({"dy_rel", "t_c", "early_slope_fit", "late_slope_fit"});
            std::vector<double> ds, tc;
            for (double d : log_grid(dy_min, dy_max, per_decade)) {
                const auto C = correlation_time(t, p0.with_dy_rel(d), q, c);
                const auto r = crossover_time(t, C, we, wl, slopes);
                ds.push_back(d);
                tc.push_back(r.t_c);
                out.row({num(d), num(r.t_c), num(r.early.exponent), num(r.late.exponent)});
            }
            const auto f = fit_power_law(ds, tc, {dy_min, dy_max}, 2);
            const double tl2 = tol >= 0.0 ? tol : 0.2;
            out.note(fmt::format("result: zeta_c={} stderr={} predicted={} tolerance={} status={}", num(-f.exponent),
                                 num(f.stderr_exponent), pred.crossover.str(), num(tl2),
                                 status(pred.crossover, -f.exponent, tl2)));
            out.commit(output);

        } else if (cmd == "finite-size" || cmd == "table") {
            const ModelParams pc = model.model(0.0);
            const auto pred = predicted_exponents(scenario_of(pc), model.s);
            CsvOut out(cmd, R, cmd == "table" && !simulate ? 0 : sim.seed);
            std::optional<FiniteSizeResult> fsr;
            if (cmd == "finite-size" || simulate) {
                if (scenario_of(pc) == Scenario::nmb_only)
                    throw ValidationError("the NMB-only scenario has no classical Langevin description");
                SimConfig c = sim.config(pc, 1.0);
                c.r = 0.0;
                fsr = finite_size_scan(c, parse_list(n_list));
            }
            if (cmd == "finite-size") {
                out.header({"N", "x2", "x2_stderr", "t_N"});
                for (const auto& pt : fsr->points) out.row({num(pt.N), num(pt.x2.value), num(pt.x2.stderr_), num(pt.t_N)});
                const double tl = tol >= 0.0 ? tol : 0.1;
                out.note(fmt::format("result: alpha={} stderr={} predicted={} tolerance={} status={}",
                                     num(fsr->alpha.exponent), num(fsr->alpha.stderr_exponent),
                                     pred.finite_size.str(), num(tl),
                                     status(pred.finite_size, fsr->alpha.exponent, tl)));
                if (fsr->zeta)
                    out.note(fmt::format("result: zeta={} predicted={} (1/e autocorrelation time; method-dependent)",
                                         num(fsr->zeta->exponent), pred.finite_size_time.str()));
                out.commit(output);
            } else {
                out.header({"quantity", "predicted", "measured", "stderr", "window_lo", "window_hi", "tolerance",
                            "status"});
                auto emit = [&](const std::string& name, const Exponent& e, std::optional<PowerLawFit> f, Window w,
                                double tl) {
                    if (!f) {
                        out.row({name, e.str(), "", "", "", "", num(tl), "not-measured"});
                        return;
                    }
                    out.row({name, e.str(), num(f->exponent), num(f->stderr_exponent), num(w.lo), num(w.hi), num(tl),
                             status(e, f->exponent, tl)});
                };
                const Window wf{1e-8, 1e-6};
                emit("nu", pred.photon_flux, photon_flux_fit(pc.with_dy_rel(1.0), wf, 12, q), wf, 0.02);
                auto slope = [&](bool response, double d, Window w) {
                    const auto t = log_grid(w.lo, w.hi, 12);
                    const ModelParams p = pc.with_dy_rel(d);
                    auto f = fit_power_law(t, tail_magnitude(response ? response_time(t, p, q) : correlation_time(t, p, q)), w);
                    f.exponent = -f.exponent;
                    return f;
                };
                const Window wc{1e2, 1e4}, wa = auto_late_window(model.s, dy);
                std::vector<std::string> details;
                auto time_entry = [&](const std::string& name, const Exponent& e, bool response, double d, Window w) {
                    if (e.is_value()) {
                        try {
                            emit(name, e, slope(response, d, w), w, 0.05);
                        } catch (const std::exception& ex) {
                            // e.g. the window reaches the precision floor; report, keep going
                            out.row({name, e.str(), "error", "", num(w.lo), num(w.hi), num(0.05), "fail"});
                            details.push_back(name + ": " + ex.what());
                        }
                        return;
                    }
                    const ModelParams p = pc.with_dy_rel(d);
                    const auto chk = e.kind == Exponent::ir_divergent ? verify_ir_divergence(p, response, q)
                                                                      : verify_exp_decay(p, response, q);
                    out.row({name, e.str(), chk.confirmed ? e.str() : "not-confirmed", "", "", "", "",
                             chk.confirmed ? "pass" : "fail"});
                    details.push_back(name + ": " + chk.detail);
                };
                time_entry("nu_t_critical", pred.corr_critical, false, 0.0, wc);
                time_entry("nu_t_away", pred.corr_away, false, dy, wa);
                time_entry("nu_r_critical", pred.resp_critical, true, 0.0, wc);
                time_entry("nu_r_away", pred.resp_away, true, dy, wa);
                const Window wn = fsr ? Window{fsr->points.front().N, fsr->points.back().N} : Window{0, 0};
                emit("alpha", pred.finite_size, fsr ? std::optional(fsr->alpha) : std::nullopt, wn, 0.1);
                emit("zeta_c", pred.crossover, std::nullopt, {}, 0.2);
                emit("zeta", pred.finite_size_time, fsr ? fsr->zeta : std::nullopt, wn, 0.2);
                for (const auto& d : details) out.note(d);
                out.note("exponents are decay rates (n ~ dy^-nu, C ~ t^-nu_t, R ~ t^-nu_r); "
                         "zeta_c: see the crossover command");
                out.commit(output);
            }

        } else if (cmd == "langevin") {
            if (dy < 0.0) throw ValidationError("--dy must be >= 0");
            if (stride < 1) throw ValidationError("--stride must be >= 1");
            const ModelParams p = model.model(dy);
            if (scenario_of(p) == Scenario::nmb_only)
                throw ValidationError("the NMB-only scenario has no classical Langevin description");
            const SimConfig c = sim.config(p, n_atoms);
            const auto ens = simulate_ensemble(c);
            CsvOut out(cmd, R, c.seed);
            out.note(fmt::format("coefficients: s={} v={} r={} kappa_eff={} g={} N={} noise={}", num(c.s), num(c.v),
                                 num(c.r), num(c.kappa_eff), num(c.g), num(c.n_atoms),
                                 c.noise == NoiseKind::white ? "white" : "colored"));
            out.header({"t", "x"});
            const auto& x = ens.front().samples;
            const long b = c.burn();
            for (std::size_t i = 0; i < x.size(); i += static_cast<std::size_t>(stride))
                out.row({num(static_cast<double>(b + static_cast<long>(i)) * c.dt), num(x[i])});
            std::string drift = "ok";
            MomentEstimate m;
            try {
                m = stationary_second_moment(ens, true);
            } catch (const std::runtime_error& e) {
                m = stationary_second_moment(ens, false);
                drift = e.what();
            }
            out.note(fmt::format("result: x2={} stderr={} stationarity={}", num(m.value), num(m.stderr_), drift));
            if (c.g == 0.0)
                out.note(fmt::format("result: x2_linear_continuous={} x2_linear_discrete={}", num(linear_variance(c)),
                                     num(linear_variance(c, true))));
            out.commit(output);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure in " << cmd << ": " << e.what() << "\n";
        return 2;
    }
    return 0;
}
