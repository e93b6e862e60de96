#include "bogent/cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "bogent/bogoliubov.hpp"
#include "bogent/cavity.hpp"
#include "bogent/coeff_io.hpp"
#include "bogent/errors.hpp"
#include "bogent/frw.hpp"
#include "bogent/gaussian.hpp"

namespace bogent::cli {

namespace {

using json = nlohmann::json;

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Options {
    std::string command;
    std::string config_path;
    std::string out_path;
    std::string coeff_path;
    std::optional<int> cutoff;
    std::optional<int> threads;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Strict view of a JSON object: every key must be consumed.
class Fields {
public:
    Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw ConfigError(where_ + ": expected a JSON object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& get(const std::string& key) {
        if (!j_.contains(key)) throw ConfigError(where_ + ": missing key '" + key + "'");
        used_.insert(key);
        return j_.at(key);
    }

    double number(const std::string& key) {
        const json& v = get(key);
        if (!v.is_number()) throw ConfigError(path(key) + ": expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(path(key) + ": must be finite");
        return d;
    }
    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    int integer(const std::string& key) {
        const json& v = get(key);
        if (!v.is_number_integer()) throw ConfigError(path(key) + ": expected an integer");
        return v.get<int>();
    }
    int integer(const std::string& key, int fallback) { return has(key) ? integer(key) : fallback; }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = get(key);
        if (!v.is_boolean()) throw ConfigError(path(key) + ": expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key) {
        const json& v = get(key);
        if (!v.is_string()) throw ConfigError(path(key) + ": expected a string");
        return v.get<std::string>();
    }

    std::string path(const std::string& key) const { return where_ + "." + key; }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!used_.count(it.key())) throw ConfigError(where_ + ": unknown key '" + it.key() + "'");
        }
    }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> used_;
};

// Either an explicit array or {"start", "stop", "step"}; nonempty and
// strictly increasing.
std::vector<double> read_grid(const json& j, const std::string& where) {
    std::vector<double> grid;
    if (j.is_array()) {
        for (const json& v : j) {
            if (!v.is_number()) throw ConfigError(where + ": grid entries must be numbers");
            grid.push_back(v.get<double>());
        }
    } else if (j.is_object()) {
        Fields f(j, where);
        const double start = f.number("start");
        const double stop = f.number("stop");
        const double step = f.number("step");
        f.finish();
        if (!(step > 0.0)) throw ConfigError(where + ": step must be positive");
        const double span = (stop - start) / step;
        const long long count = std::llround(span);
        if (count < 0 || std::abs(span - static_cast<double>(count)) > 1e-9 * std::max(1.0, span)) {
            throw ConfigError(where + ": (stop - start) must be a nonnegative multiple of step");
        }
        for (long long i = 0; i <= count; ++i) grid.push_back(start + static_cast<double>(i) * step);
        grid.back() = stop;
    } else {
        throw ConfigError(where + ": expected an array or {start, stop, step}");
    }
    if (grid.empty()) throw ConfigError(where + ": grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) throw ConfigError(where + ": grid entries must be finite");
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw ConfigError(where + ": grid must be strictly increasing");
        }
    }
    return grid;
}

json load_config(const Options& o) {
    if (o.config_path.empty()) return json::object();
    std::ifstream in(o.config_path);
    if (!in) throw ConfigError("cannot open config file '" + o.config_path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
}

std::string metadata(const std::string& command, const json& effective) {
    std::ostringstream os;
    os << "# bogent " << kVersion << "\n";
    os << "# command " << command << "\n";
    os << "# config_hash fnv1a64:" << fnv1a_hex(effective.dump()) << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------

std::string cmd_cavity(const json& config, const Options& o) {
    Fields f(config, "config");
    cavity::CavityConfig cc;
    cc.delta = f.number("delta", 1.0);
    cc.h = f.number("h");
    cc.cutoff = f.integer("cutoff", 30);
    if (o.cutoff) cc.cutoff = *o.cutoff;

    const json& modes = f.get("modes");
    if (!modes.is_array() || modes.size() != 2 || !modes[0].is_number_integer() ||
        !modes[1].is_number_integer()) {
        throw ConfigError("config.modes: expected two integer mode labels");
    }
    const int k = modes[0].get<int>(), kp = modes[1].get<int>();
    const std::vector<double> squeezings = read_grid(f.get("squeezings"), "config.squeezings");
    const std::vector<double> u_grid = read_grid(f.get("u_grid"), "config.u_grid");

    cavity::SweepOptions so;
    if (f.has("linear_source")) {
        const std::string src = f.string("linear_source");
        if (src == "quadrature") so.linear_source = cavity::LinearSource::quadrature;
        else if (src == "closed_form") so.linear_source = cavity::LinearSource::closed_form;
        else throw ConfigError("config.linear_source: expected 'quadrature' or 'closed_form'");
    }
    so.include_full = f.boolean("full", true);
    so.check_cutoff = f.boolean("check_cutoff", true);
    so.threads = f.integer("threads", 1);
    if (o.threads) so.threads = *o.threads;
    f.finish();

    for (double s : squeezings) {
        if (s < 0.0) throw ConfigError("config.squeezings: squeezing must be >= 0");
    }
    if (so.threads < 1) throw ConfigError("threads must be >= 1");
    try {
        cc.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    json effective = config;
    effective["cutoff"] = cc.cutoff;
    effective.erase("threads");

    const cavity::SweepTable table = cavity::figure1_sweep(cc, k, kp, squeezings, u_grid, so);

    std::ostringstream os;
    os << metadata("cavity", effective);
    os << "u";
    for (double s : squeezings) os << ",N_over_h_leading[s=" << fmt(s) << "]";
    if (so.include_full) {
        for (double s : squeezings) os << ",N_over_h_full[s=" << fmt(s) << "]";
    }
    os << ",F_over_h2";
    for (double s : squeezings) os << ",det_sigma[s=" << fmt(s) << "]";
    os << "\n";
    for (const cavity::SweepRow& r : table.rows) {
        for (double d : r.det_sigma) {
            if (d < 1.0 - 1e-10) {
                throw NumericalError("leading-order determinant below 1 at u = " + fmt(r.u) +
                                     "; outside the perturbative regime");
            }
        }
        os << fmt(r.u);
        for (double v : r.n_over_h_leading) os << "," << fmt(v);
        for (double v : r.n_over_h_full) os << "," << fmt(v);
        os << "," << fmt(r.f_over_h2);
        for (double v : r.det_sigma) os << "," << fmt(v);
        os << "\n";
    }
    return os.str();
}

std::string cmd_frw(const json& config, const Options& o) {
    if (o.cutoff) throw ConfigError("--cutoff does not apply to the frw command");
    Fields f(config, "config");
    frw::FRWConfig base;
    base.epsilon = f.number("epsilon");
    base.rho = f.number("rho");
    base.mass = f.number("mass");
    const std::vector<double> ks = read_grid(f.get("k_grid"), "config.k_grid");
    f.finish();

    std::ostringstream os;
    os << metadata("frw", config);
    os << "k,beta_sq,nu_minus,negativity\n";
    for (double k : ks) {
        frw::FRWConfig c = base;
        c.k = k;
        try {
            c.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        const frw::FRWCoefficients coeffs = frw::frw_coefficients(c);
        const EntanglementReport r = frw::frw_negativity(c);
        os << fmt(k) << "," << fmt(coeffs.beta_sq) << "," << fmt(r.nu_minus) << ","
           << fmt(r.negativity) << "\n";
    }
    return os.str();
}

// Coefficient path from the positional argument or the config, relative
// paths in the config being resolved against the config's directory.
std::string coefficient_path(Fields& f, const Options& o) {
    if (f.has("coefficients")) {
        if (!o.coeff_path.empty()) {
            throw ConfigError("coefficient file given both in the config and on the command line");
        }
        std::filesystem::path p = f.string("coefficients");
        if (p.is_relative() && !o.config_path.empty()) {
            p = std::filesystem::path(o.config_path).parent_path() / p;
        }
        return p.string();
    }
    if (o.coeff_path.empty()) throw ConfigError("no coefficient file given");
    return o.coeff_path;
}

BogoCoeffs load_coeffs(const std::string& path) {
    try {
        return read_coeffs(path);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::string cmd_apply(const json& config, const Options& o) {
    if (o.cutoff) throw ConfigError("--cutoff does not apply to the apply command");
    Fields f(config, "config");
    const std::string path = coefficient_path(f, o);

    std::map<ModeLabel, double> squeeze;
    if (f.has("squeezings")) {
        const json& list = f.get("squeezings");
        if (!list.is_array()) throw ConfigError("config.squeezings: expected an array");
        for (const json& item : list) {
            Fields e(item, "config.squeezings[]");
            const int mode = e.integer("mode");
            const double s = e.number("s");
            e.finish();
            if (!squeeze.emplace(mode, s).second) {
                throw ConfigError("config.squeezings: mode listed twice");
            }
        }
    }
    const json& pair = f.get("pair");
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
        !pair[1].is_number_integer()) {
        throw ConfigError("config.pair: expected two integer mode labels");
    }
    const ModeLabel k = pair[0].get<int>(), kp = pair[1].get<int>();
    f.finish();
    if (k == kp) throw ConfigError("config.pair: modes must differ");

    const BogoCoeffs coeffs = load_coeffs(path);
    if (!coeffs.is_exact()) throw ConfigError("apply needs exact coefficients, not a series term");
    for (ModeLabel m : {k, kp}) {
        try {
            coeffs.index_of(m);
        } catch (const std::invalid_argument&) {
            throw ConfigError("config.pair: mode " + std::to_string(m) + " not in the coefficient file");
        }
    }
    std::vector<double> s(coeffs.size(), 0.0);
    for (const auto& [mode, value] : squeeze) {
        int idx = -1;
        try {
            idx = coeffs.index_of(mode);
        } catch (const std::invalid_argument&) {
            throw ConfigError("config.squeezings: mode " + std::to_string(mode) +
                              " not in the coefficient file");
        }
        s[idx] = value;
    }

    SymplecticMatrix sym = SymplecticMatrix::identity(coeffs.size());
    try {
        sym = to_symplectic(coeffs);
    } catch (const std::invalid_argument& e) {
        throw NumericalError(std::string("coefficients are not symplectic: ") + e.what());
    }
    const GaussianState initial(coeffs.modes(), single_mode_squeezed_state(s).cov());
    const GaussianState out = apply_symplectic(sym, initial);
    const ModeLabel keep[] = {k, kp};
    const EntanglementReport r = negativity(partial_trace(out, keep));

    json effective = config;
    effective["coefficients_hash"] = [&] {
        std::ifstream in(path);
        std::stringstream buf;
        buf << in.rdbuf();
        return fnv1a_hex(buf.str());
    }();
    effective.erase("coefficients");

    std::ostringstream os;
    os << metadata("apply", effective);
    os << "k,k_prime,nu_minus,negativity,log_negativity,det_cov\n";
    os << k << "," << kp << "," << fmt(r.nu_minus) << "," << fmt(r.negativity) << ","
       << fmt(r.log_negativity) << "," << fmt(r.det_cov) << "\n";
    return os.str();
}

std::string cmd_check(const json& config, const Options& o, bool& passed) {
    if (o.cutoff) throw ConfigError("--cutoff does not apply to the check command");
    Fields f(config, "config");
    const std::string path = coefficient_path(f, o);
    const std::optional<double> tol =
        f.has("tolerance") ? std::optional<double>(f.number("tolerance")) : std::nullopt;
    f.finish();
    if (tol && !(*tol > 0.0)) throw ConfigError("config.tolerance must be positive");

    const BogoCoeffs coeffs = load_coeffs(path);
    if (!coeffs.is_exact()) throw ConfigError("check needs exact coefficients, not a series term");
    const IdentityReport r = verify_identities(coeffs, tol.value_or(coeffs.identity_tolerance()));
    passed = r.passed;

    std::ostringstream os;
    os << "# bogent " << kVersion << "\n# command check\n";
    os << "unitarity_residual,symmetry_residual,tolerance,passed\n";
    os << fmt(r.unitarity_residual) << "," << fmt(r.symmetry_residual) << "," << fmt(r.tolerance)
       << "," << (r.passed ? 1 : 0) << "\n";
    return os.str();
}

void emit(const std::string& text, const Options& o, std::ostream& out) {
    if (o.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(o.out_path, std::ios::binary);
    if (!file) throw ConfigError("cannot open output file '" + o.out_path + "'");
    file << text;
    if (!file) throw ConfigError("write to '" + o.out_path + "' failed");
}

}  // namespace

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bogoliubov transformations and entanglement of Gaussian states", "bogent"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Options o;
    int cutoff = 0, threads = 0;
    app.add_option("--config", o.config_path, "JSON configuration file")->option_text("PATH");
    app.add_option("--out", o.out_path, "CSV output path (default: standard output)")
        ->option_text("PATH");
    auto* cutoff_opt = app.add_option("--cutoff", cutoff, "Mode cutoff M (overrides the config)");
    auto* threads_opt = app.add_option("--threads", threads, "Worker threads for grid sweeps");

    app.add_subcommand("cavity", "Sweep the pair entanglement of a moving cavity over u")->fallthrough();
    app.add_subcommand("frw", "Pair entanglement in the tanh-expanding universe")->fallthrough();
    auto* apply = app.add_subcommand("apply", "Transform a squeezed product state and report the negativity");
    apply->add_option("coefficients", o.coeff_path, "Coefficient file");
    apply->fallthrough();
    auto* check = app.add_subcommand("check", "Verify the Bogoliubov identities of a coefficient file");
    check->add_option("coefficients", o.coeff_path, "Coefficient file");
    check->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }
    o.command = app.get_subcommands().front()->get_name();
    if (*cutoff_opt) o.cutoff = cutoff;
    if (*threads_opt) o.threads = threads;

    try {
        if (o.threads && *o.threads < 1) throw ConfigError("--threads must be >= 1");
        if (o.cutoff && o.command == "cavity" && *o.cutoff < 2) {
            throw ConfigError("--cutoff must be >= 2");
        }
        const json config = load_config(o);
        if (o.command == "check") {
            bool passed = false;
            emit(cmd_check(config, o, passed), o, out);
            if (!passed) {
                err << "bogent: Bogoliubov identities violated beyond tolerance\n";
                return kNumericalError;
            }
            return kOk;
        }
        if ((o.command == "cavity" || o.command == "frw") && o.config_path.empty()) {
            throw ConfigError("the " + o.command + " command needs --config");
        }
        std::string text;
        if (o.command == "cavity") text = cmd_cavity(config, o);
        else if (o.command == "frw") text = cmd_frw(config, o);
        else text = cmd_apply(config, o);
        emit(text, o, out);
        return kOk;
    } catch (const NumericalError& e) {
        err << "bogent: numerical failure: " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::invalid_argument& e) {
        err << "bogent: configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const nlohmann::json::exception& e) {
        err << "bogent: configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "bogent: error: " << e.what() << "\n";
        return kNumericalError;
    }
}

}  // namespace bogent::cli
