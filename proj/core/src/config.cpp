#include "llgmid/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace llgmid {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line, const std::string& key) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        fail(line, "cannot parse value '" + v + "' for key '" + key + "'");
    }
}

long parse_long(const std::string& v, int line, const std::string& key) {
    try {
        std::size_t used = 0;
        const long x = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        fail(line, "cannot parse value '" + v + "' for key '" + key + "'");
    }
}

std::vector<double> parse_doubles(const std::string& v, int line, const std::string& key) {
    std::istringstream ss(v);
    std::vector<double> out;
    std::string tok;
    while (ss >> tok) out.push_back(parse_double(tok, line, key));
    if (out.empty()) fail(line, "empty value for key '" + key + "'");
    return out;
}

Mat3 parse_mat3(const std::string& v, int line, const std::string& key) {
    const auto nums = parse_doubles(v, line, key);
    if (nums.size() != 9) fail(line, "key '" + key + "' needs 9 numbers (row-major 3x3)");
    Mat3 m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = nums[3 * r + c];
    return m;
}

void require_positive(double x, int line, const std::string& key) {
    if (!(x > 0.0)) fail(line, "key '" + key + "' must be positive");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::array<std::optional<Mat3>, 3> Ag, Jg;

    std::istringstream stream(text);
    std::string raw;
    int line = 0;
    while (std::getline(stream, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty()) fail(line, "missing key");
        if (val.empty()) fail(line, "missing value for key '" + key + "'");

        if (key == "N") {
            const long n = parse_long(val, line, key);
            if (n < 1) fail(line, "key 'N' must be a positive integer");
            cfg.N = static_cast<int>(n);
        } else if (key == "k") {
            cfg.k = parse_double(val, line, key);
            require_positive(cfg.k, line, key);
        } else if (key == "T") {
            cfg.T = parse_double(val, line, key);
            if (cfg.T < 0.0) fail(line, "key 'T' must be non-negative");
        } else if (key == "alpha") {
            cfg.alpha = parse_double(val, line, key);
            require_positive(cfg.alpha, line, key);
        } else if (key == "eps") {
            cfg.eps = parse_double(val, line, key);
            require_positive(cfg.eps, line, key);
        } else if (key == "mode") {
            if (val != "fixedpoint" && val != "newton" && val != "ideal")
                fail(line, "mode must be one of fixedpoint, newton, ideal");
            cfg.mode = val;
        } else if (key == "preset") {
            if (val != "exchange" && val != "exchange_dmi" && val != "general")
                fail(line, "preset must be one of exchange, exchange_dmi, general");
            cfg.preset = val;
        } else if (key == "lex") {
            cfg.lex = parse_double(val, line, key);
            require_positive(cfg.lex, line, key);
        } else if (key == "ldm") {
            cfg.ldm = parse_double(val, line, key);
        } else if (key == "pi") {
            if (val != "zero" && val != "scaling" && val != "uniaxial")
                fail(line, "pi must be one of zero, scaling, uniaxial");
            cfg.pi_kind = val;
        } else if (key == "pi_scale") {
            cfg.pi_scale = parse_double(val, line, key);
        } else if (key == "pi_axis") {
            const auto nums = parse_doubles(val, line, key);
            if (nums.size() != 3) fail(line, "pi_axis needs 3 numbers");
            cfg.pi_axis = Vec3(nums[0], nums[1], nums[2]);
            if (cfg.pi_axis.norm() == 0.0) fail(line, "pi_axis must be non-zero");
        } else if (key == "f") {
            if (val == "zero" || val == "0") {
                cfg.f_constant = false;
            } else {
                std::istringstream fs(val);
                std::string kind;
                fs >> kind;
                if (kind != "constant") fail(line, "f must be 'zero' or 'constant fx fy fz'");
                std::string rest;
                std::getline(fs, rest);
                const auto nums = parse_doubles(trim(rest), line, key);
                if (nums.size() != 3) fail(line, "f = constant needs 3 numbers");
                cfg.f_constant = true;
                cfg.f_value = Vec3(nums[0], nums[1], nums[2]);
            }
        } else if (key == "seed") {
            const long s64 = parse_long(val, line, key);
            if (s64 < 0) fail(line, "seed must be non-negative");
            cfg.seed = static_cast<unsigned long>(s64);
        } else if (key == "output") {
            cfg.output = val;
        } else if (key == "iteration_cap") {
            const long c = parse_long(val, line, key);
            if (c < 1) fail(line, "iteration_cap must be >= 1");
            cfg.iteration_cap = static_cast<int>(c);
        } else if (key == "linear_tol") {
            cfg.linear_tol = parse_double(val, line, key);
            require_positive(cfg.linear_tol, line, key);
        } else if (key == "vtk_every") {
            const long c = parse_long(val, line, key);
            if (c < 0) fail(line, "vtk_every must be >= 0");
            cfg.vtk_every = static_cast<int>(c);
        } else if (key == "N_list") {
            cfg.N_list.clear();
            for (double x : parse_doubles(val, line, key)) {
                if (x < 1 || x != static_cast<long>(x))
                    fail(line, "N_list entries must be positive integers");
                cfg.N_list.push_back(static_cast<int>(x));
            }
        } else if (key == "k_list") {
            cfg.k_list = parse_doubles(val, line, key);
            for (double x : cfg.k_list) require_positive(x, line, key);
        } else if (key == "sweep_c") {
            cfg.sweep_c = parse_double(val, line, key);
            require_positive(cfg.sweep_c, line, key);
        } else if (key == "sweep_q") {
            cfg.sweep_q = parse_double(val, line, key);
            if (!(cfg.sweep_q > 1.0)) fail(line, "sweep_q must be > 1");
        } else if (key == "sweep_jmax") {
            const long c = parse_long(val, line, key);
            if (c < 0) fail(line, "sweep_jmax must be >= 0");
            cfg.sweep_jmax = static_cast<int>(c);
        } else if (key == "eps_jmax") {
            const long c = parse_long(val, line, key);
            if (c < 0) fail(line, "eps_jmax must be >= 0");
            cfg.eps_jmax = static_cast<int>(c);
        } else if (key == "A1" || key == "A2" || key == "A3") {
            Ag[key[1] - '1'] = parse_mat3(val, line, key);
        } else if (key == "J1" || key == "J2" || key == "J3") {
            Jg[key[1] - '1'] = parse_mat3(val, line, key);
        } else {
            fail(line, "unknown key '" + key + "'");
        }
    }

    if (Ag[0] || Ag[1] || Ag[2]) {
        if (!(Ag[0] && Ag[1] && Ag[2]))
            throw ConfigError("config: A1, A2, A3 must be given together");
        cfg.A_general = std::array<Mat3, 3>{*Ag[0], *Ag[1], *Ag[2]};
    }
    if (Jg[0] || Jg[1] || Jg[2]) {
        if (!(Jg[0] && Jg[1] && Jg[2]))
            throw ConfigError("config: J1, J2, J3 must be given together");
        cfg.J_general = std::array<Mat3, 3>{*Jg[0], *Jg[1], *Jg[2]};
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

SchemeMode scheme_mode(const RunConfig& cfg) {
    if (cfg.mode == "fixedpoint") return SchemeMode::fixed_point(cfg.eps);
    if (cfg.mode == "ideal") return SchemeMode::ideal();
    return SchemeMode::newton(cfg.eps);
}

MaterialModel make_model(const RunConfig& cfg, const Mesh& mesh) {
    MaterialModel model;
    if (cfg.preset == "exchange") {
        model = exchange_only(cfg.lex);
    } else if (cfg.preset == "exchange_dmi") {
        model = exchange_dmi(cfg.lex, cfg.ldm, cfg.paper_literal_pi);
    } else {
        model = MaterialModel{};
        for (int d = 0; d < 3; ++d) model.A[d] = cfg.lex * cfg.lex * Mat3::Identity();
        if (cfg.A_general) model.A = *cfg.A_general;
        if (cfg.J_general) model.J = *cfg.J_general;
        model.lex = cfg.lex;
    }
    if (cfg.pi_kind) {
        if (*cfg.pi_kind == "zero") model.pi = PiSpec::zero();
        else if (*cfg.pi_kind == "scaling") model.pi = PiSpec::scaling(cfg.pi_scale);
        else model.pi = PiSpec::uniaxial(cfg.pi_scale, cfg.pi_axis);
    }
    if (cfg.f_constant) {
        const Vec3 value = cfg.f_value;
        model.f = nodal_interpolate(mesh, [value](const Vec3&) { return value; });
    }
    model.alpha = cfg.alpha;
    validate_model(model);
    return model;
}

SolverOptions solver_options(const RunConfig& cfg) {
    SolverOptions o;
    o.iteration_cap = cfg.iteration_cap;
    o.linear_tol = cfg.linear_tol;
    return o;
}

}  // namespace llgmid
