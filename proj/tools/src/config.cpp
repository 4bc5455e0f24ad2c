#include "plap/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "plap/expr.hpp"
#include "plap/jet.hpp"

namespace plap::cli {

std::string ConfigError::format(const std::string& what, const std::string& key, int line) {
    std::string out;
    if (line > 0) {
        out += "line " + std::to_string(line) + ": ";
    }
    if (!key.empty()) {
        out += key + ": ";
    }
    return out + what;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

using jets::Expr;
using jets::eval_point;
using jets::parse_expr;
using jets::variable_count;

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) {
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != ',') {
            ++j;
        }
        if (j > i) {
            out.push_back(s.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

// Value errors carry only a message; the caller attaches key and line.
struct ValueError {
    std::string what;
};

double to_double(std::string_view s) {
    double v = 0.0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ValueError{"expected a number, got '" + std::string(s) + "'"};
    }
    return v;
}

template <class Int>
Int to_integer(std::string_view s) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ValueError{"expected an integer, got '" + std::string(s) + "'"};
    }
    return v;
}

std::vector<double> to_doubles(std::string_view s) {
    std::vector<double> out;
    for (auto item : split_list(s)) {
        out.push_back(to_double(item));
    }
    if (out.empty()) {
        throw ValueError{"expected a list of numbers"};
    }
    return out;
}

std::vector<int> to_ints(std::string_view s) {
    std::vector<int> out;
    for (auto item : split_list(s)) {
        out.push_back(to_integer<int>(item));
    }
    if (out.empty()) {
        throw ValueError{"expected a list of integers"};
    }
    return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k > 0) {
            out += ' ';
        }
        if constexpr (std::is_floating_point_v<T>) {
            out += format_double(v[k]);
        } else {
            out += std::to_string(v[k]);
        }
    }
    return out;
}

struct KeyDef {
    std::string path;
    std::function<void(ExperimentConfig&, std::string_view)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

template <class M>
KeyDef real_key(std::string path, M ExperimentConfig::*m) {
    return {std::move(path), [m](ExperimentConfig& c, std::string_view v) { c.*m = to_double(v); },
            [m](const ExperimentConfig& c) { return format_double(c.*m); }};
}

KeyDef int_key(std::string path, int ExperimentConfig::*m) {
    return {std::move(path), [m](ExperimentConfig& c, std::string_view v) { c.*m = to_integer<int>(v); },
            [m](const ExperimentConfig& c) { return std::to_string(c.*m); }};
}

KeyDef text_key(std::string path, std::string ExperimentConfig::*m) {
    return {std::move(path), [m](ExperimentConfig& c, std::string_view v) { c.*m = std::string(v); },
            [m](const ExperimentConfig& c) { return c.*m; }};
}

KeyDef reals_key(std::string path, std::vector<double> ExperimentConfig::*m) {
    return {std::move(path), [m](ExperimentConfig& c, std::string_view v) { c.*m = to_doubles(v); },
            [m](const ExperimentConfig& c) { return join(c.*m); }};
}

const std::vector<KeyDef>& key_table() {
    static const std::vector<KeyDef> table = [] {
        std::vector<KeyDef> t;
        t.push_back(text_key("run.subcommand", &ExperimentConfig::subcommand));
        t.push_back({"run.seed",
                     [](ExperimentConfig& c, std::string_view v) { c.seed = to_integer<std::uint64_t>(v); },
                     [](const ExperimentConfig& c) { return std::to_string(c.seed); }});
        t.push_back(reals_key("domain.extents", &ExperimentConfig::extents));
        t.push_back({"domain.resolution",
                     [](ExperimentConfig& c, std::string_view v) { c.resolution = to_ints(v); },
                     [](const ExperimentConfig& c) { return join(c.resolution); }});
        t.push_back(reals_key("domain.origin", &ExperimentConfig::origin));
        t.push_back(real_key("problem.p", &ExperimentConfig::p));
        t.push_back(text_key("problem.gamma", &ExperimentConfig::gamma));
        t.push_back(text_key("problem.boundary", &ExperimentConfig::boundary));
        t.push_back(reals_key("problem.zeta", &ExperimentConfig::zeta));
        t.push_back(real_key("solver.tol", &ExperimentConfig::tol));
        t.push_back(real_key("solver.eps_reg", &ExperimentConfig::eps_reg));
        t.push_back(int_key("solver.max_newton", &ExperimentConfig::max_newton));
        t.push_back(text_key("linearize.direction", &ExperimentConfig::direction));
        t.push_back(reals_key("linearize.eps", &ExperimentConfig::eps));
        t.push_back(real_key("fixedpoint.tol", &ExperimentConfig::fp_tol));
        t.push_back(int_key("fixedpoint.max_iter", &ExperimentConfig::fp_max_iter));
        t.push_back(text_key("recover.profile", &ExperimentConfig::profile));
        t.push_back(real_key("recover.c", &ExperimentConfig::c));
        t.push_back(reals_key("recover.zeta", &ExperimentConfig::recover_zeta));
        t.push_back(reals_key("recover.z", &ExperimentConfig::recover_z));
        t.push_back(int_key("recover.order", &ExperimentConfig::order));
        t.push_back(reals_key("recover.depths", &ExperimentConfig::depths));
        t.push_back(text_key("recover.mode", &ExperimentConfig::mode));
        t.push_back(real_key("recover.condition_bound", &ExperimentConfig::condition_bound));
        t.push_back(int_key("checks.samples", &ExperimentConfig::samples));
        t.push_back(real_key("checks.energy_gap_tol", &ExperimentConfig::energy_gap_tol));
        t.push_back(real_key("rescale.tol", &ExperimentConfig::rescale_tol));
        return t;
    }();
    return table;
}

const KeyDef* find_key(std::string_view path) {
    for (const auto& k : key_table()) {
        if (k.path == path) {
            return &k;
        }
    }
    return nullptr;
}

std::string section_of(const std::string& path) { return path.substr(0, path.find('.')); }

bool valid_name(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
    });
}

void apply(ExperimentConfig& cfg, const KeyDef& key, std::string_view value, int line) {
    try {
        key.set(cfg, value);
    } catch (const ValueError& e) {
        throw ConfigError(e.what, key.path, line);
    }
}

using LineMap = std::map<std::string, int>;

int line_of(const LineMap& lines, const std::string& key) {
    const auto it = lines.find(key);
    return it == lines.end() ? 0 : it->second;
}

Expr parse_checked(const std::string& text, const std::string& key, int line, int max_vars) {
    Expr e;
    try {
        e = parse_expr(text);
    } catch (const ParseError& pe) {
        std::string where = key;
        if (line > 0) {
            where += " (line " + std::to_string(line) + ")";
        }
        throw ParseError(where + ": " + pe.what(), pe.offset(), pe.expected());
    }
    if (variable_count(e) > max_vars) {
        throw ConfigError("expression uses x" + std::to_string(variable_count(e)) + " but only " +
                              std::to_string(max_vars) + " variables are available",
                          key, line);
    }
    return e;
}

bool is_unit(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::abs(std::sqrt(s) - 1.0) <= 1e-12;
}

void validate_lines(const ExperimentConfig& c, const LineMap& lines) {
    auto fail = [&](const std::string& key, const std::string& what) {
        throw ConfigError(what, key, line_of(lines, key));
    };
    const auto& names = subcommands();
    if (std::find(names.begin(), names.end(), c.subcommand) == names.end()) {
        fail("run.subcommand", "unknown subcommand '" + c.subcommand + "'");
    }
    const int n = static_cast<int>(c.extents.size());
    if (n != 2 && n != 3) {
        fail("domain.extents", "dimension must be 2 or 3");
    }
    if (static_cast<int>(c.resolution.size()) != n) {
        fail("domain.resolution", "needs one entry per axis");
    }
    if (static_cast<int>(c.origin.size()) != n) {
        fail("domain.origin", "needs one entry per axis");
    }
    for (int k = 0; k < n; ++k) {
        if (!(c.extents[k] > 0.0) || !std::isfinite(c.extents[k])) {
            fail("domain.extents", "extents must be positive");
        }
        if (c.resolution[k] < 3) {
            fail("domain.resolution", "at least 3 nodes per axis");
        }
    }
    if (!(c.p > 1.0) || !std::isfinite(c.p)) {
        fail("problem.p", "p must exceed 1");
    }
    if (c.p == 2.0) {
        fail("problem.p", "p must avoid 2");
    }
    if (static_cast<int>(c.zeta.size()) != n) {
        fail("problem.zeta", "needs one entry per axis");
    }
    if (!is_unit(c.zeta)) {
        fail("problem.zeta", "must be a unit vector");
    }
    const Expr g = parse_checked(c.gamma, "problem.gamma", line_of(lines, "problem.gamma"), n);
    if (c.boundary == "pseudo-1d") {
        if (variable_count(g) > 1) {
            fail("problem.boundary", "pseudo-1d needs gamma depending on x1 only");
        }
    } else if (c.boundary != "linear") {
        parse_checked(c.boundary, "problem.boundary", line_of(lines, "problem.boundary"), n);
    }
    if (!(c.tol > 0.0)) {
        fail("solver.tol", "must be positive");
    }
    if (!(c.eps_reg >= 0.0)) {
        fail("solver.eps_reg", "must be non-negative");
    }
    if (c.max_newton < 1) {
        fail("solver.max_newton", "must be at least 1");
    }
    parse_checked(c.direction, "linearize.direction", line_of(lines, "linearize.direction"), n);
    for (std::size_t k = 0; k < c.eps.size(); ++k) {
        if (!(c.eps[k] > 0.0) || (k > 0 && !(c.eps[k] < c.eps[k - 1]))) {
            fail("linearize.eps", "must be positive and strictly decreasing");
        }
    }
    if (!(c.fp_tol > 0.0)) {
        fail("fixedpoint.tol", "must be positive");
    }
    if (c.fp_max_iter < 1) {
        fail("fixedpoint.max_iter", "must be at least 1");
    }
    parse_checked(c.profile, "recover.profile", line_of(lines, "recover.profile"), 1);
    if (!(c.c > 0.0)) {
        fail("recover.c", "must be positive");
    }
    const auto rn = c.recover_zeta.size();
    if (rn != 2 && rn != 3) {
        fail("recover.zeta", "dimension must be 2 or 3");
    }
    if (!is_unit(c.recover_zeta)) {
        fail("recover.zeta", "must be a unit vector");
    }
    if (c.recover_z.size() != rn) {
        fail("recover.z", "needs as many entries as recover.zeta");
    }
    // u0 jets carry one order more than gamma; jets stop at order 40.
    if (c.order < 0 || c.order > 39) {
        fail("recover.order", "must lie in [0, 39]");
    }
    if (rn == 2 && c.order > 0 && c.subcommand == "recover") {
        fail("recover.order", "orders above 0 need three dimensions");
    }
    if (c.mode != "A" && c.mode != "B") {
        fail("recover.mode", "must be A or B");
    }
    if (!(c.condition_bound > 0.0)) {
        fail("recover.condition_bound", "must be positive");
    }
    if (c.samples < 1) {
        fail("checks.samples", "must be at least 1");
    }
    if (!(c.energy_gap_tol > 0.0)) {
        fail("checks.energy_gap_tol", "must be positive");
    }
    if (!(c.rescale_tol > 0.0)) {
        fail("rescale.tol", "must be positive");
    }
}

ExperimentConfig resolve_lines(const ExperimentConfig& base, const ScenarioSpec& sc, LineMap lines) {
    ExperimentConfig out = base;
    out.scenarios.clear();
    for (const auto& o : sc.overrides) {
        const KeyDef* key = find_key(o.key);
        if (key == nullptr || o.key == "run.subcommand") {
            throw ConfigError("unknown key in scenario '" + sc.name + "'", o.key, o.line);
        }
        apply(out, *key, o.value, o.line);
        lines[o.key] = o.line;
    }
    validate_lines(out, lines);
    return out;
}

}  // namespace

std::vector<std::string> known_keys() {
    std::vector<std::string> out;
    for (const auto& k : key_table()) {
        out.push_back(k.path);
    }
    return out;
}

void validate(const ExperimentConfig& cfg) { validate_lines(cfg, {}); }

ExperimentConfig resolve(const ExperimentConfig& base, const ScenarioSpec& scenario) {
    return resolve_lines(base, scenario, {});
}

ExperimentConfig parse_config(std::string_view text) {
    static const std::set<std::string> sections{"run",        "domain",  "problem", "solver",
                                                "linearize",  "fixedpoint", "recover", "checks",
                                                "rescale"};
    ExperimentConfig cfg;
    LineMap lines;
    std::string section;
    ScenarioSpec* scenario = nullptr;
    std::set<std::string> scenario_keys;

    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("unterminated section header", "", line_no);
            }
            const std::string name(trim(line.substr(1, line.size() - 2)));
            if (name.rfind("scenario.", 0) == 0) {
                const std::string sname = name.substr(9);
                if (!valid_name(sname)) {
                    throw ConfigError("bad scenario name '" + sname + "'", "", line_no);
                }
                for (const auto& s : cfg.scenarios) {
                    if (s.name == sname) {
                        throw ConfigError("duplicate scenario '" + sname + "'", "", line_no);
                    }
                }
                cfg.scenarios.push_back({sname, {}});
                scenario = &cfg.scenarios.back();
                scenario_keys.clear();
                section = name;
            } else if (sections.count(name) != 0) {
                section = name;
                scenario = nullptr;
            } else {
                throw ConfigError("unknown section [" + name + "]", "", line_no);
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("expected 'key = value'", "", line_no);
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("empty key", "", line_no);
        }
        if (section.empty()) {
            throw ConfigError("key outside any section", key, line_no);
        }
        if (value.empty()) {
            throw ConfigError("empty value", scenario ? key : section + "." + key, line_no);
        }
        if (scenario != nullptr) {
            if (find_key(key) == nullptr || key == "run.subcommand") {
                throw ConfigError("unknown key", section + "." + key, line_no);
            }
            if (!scenario_keys.insert(key).second) {
                throw ConfigError("duplicate key", section + "." + key, line_no);
            }
            scenario->overrides.push_back({key, std::string(value), line_no});
            continue;
        }
        const std::string path = section + "." + key;
        const KeyDef* def = find_key(path);
        if (def == nullptr) {
            throw ConfigError("unknown key", path, line_no);
        }
        if (!lines.emplace(path, line_no).second) {
            throw ConfigError("duplicate key (first set on line " + std::to_string(lines[path]) + ")",
                              path, line_no);
        }
        apply(cfg, *def, value, line_no);
    }

    validate_lines(cfg, lines);
    for (const auto& s : cfg.scenarios) {
        resolve_lines(cfg, s, lines);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'", "", 0);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string to_text(const ExperimentConfig& cfg) {
    std::string out;
    std::string current;
    for (const auto& k : key_table()) {
        const std::string sec = section_of(k.path);
        if (sec != current) {
            if (!current.empty()) {
                out += '\n';
            }
            out += "[" + sec + "]\n";
            current = sec;
        }
        out += k.path.substr(sec.size() + 1) + " = " + k.get(cfg) + "\n";
    }
    for (const auto& s : cfg.scenarios) {
        out += "\n[scenario." + s.name + "]\n";
        for (const auto& o : s.overrides) {
            out += o.key + " = " + o.value + "\n";
        }
    }
    return out;
}

}  // namespace plap::cli
