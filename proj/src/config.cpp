#include "gaugeforge/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

#include "gaugeforge/errors.hpp"

namespace gaugeforge {

namespace {

struct RawValue {
    std::string text;
    bool quoted = false;
    int line = 0;
};

using Section = std::vector<std::pair<std::string, RawValue>>;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

// Drops a trailing comment introduced by '#' or ';' outside quotes.
std::string_view strip_comment(std::string_view s) {
    bool in_quotes = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_quotes = !in_quotes;
        else if (!in_quotes && (s[i] == '#' || s[i] == ';'))
            return s.substr(0, i);
    }
    return s;
}

bool valid_identifier(std::string_view s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
        return false;
    for (char ch : s)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
            return false;
    return true;
}

struct RawConfig {
    std::map<std::string, Section> sections;
};

RawConfig scan(std::string_view text) {
    static const std::set<std::string> known_sections = {
        "system", "gauge", "constants", "output", "tolerances", "helmholtz"};

    RawConfig raw;
    std::string current;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, eol == std::string_view::npos ? eol : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        line = trim(strip_comment(line));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("unterminated section header at line " +
                                      std::to_string(line_no),
                                  std::string(line));
            std::string name(trim(line.substr(1, line.size() - 2)));
            if (!known_sections.count(name))
                throw ConfigError("unknown section [" + name + "] at line " +
                                      std::to_string(line_no),
                                  name);
            current = name;
            raw.sections[current];  // remember even if empty
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("expected key = value at line " +
                                  std::to_string(line_no),
                              std::string(line));
        if (current.empty())
            throw ConfigError("key outside any [section] at line " +
                                  std::to_string(line_no),
                              std::string(trim(line.substr(0, eq))));

        std::string key(trim(line.substr(0, eq)));
        std::string_view value = trim(line.substr(eq + 1));
        if (!valid_identifier(key))
            throw ConfigError("malformed key at line " +
                                  std::to_string(line_no),
                              current + "." + key);

        RawValue rv;
        rv.line = line_no;
        if (!value.empty() && value.front() == '"') {
            if (value.size() < 2 || value.back() != '"')
                throw ConfigError("unterminated quoted value at line " +
                                      std::to_string(line_no),
                                  current + "." + key);
            rv.text = std::string(value.substr(1, value.size() - 2));
            rv.quoted = true;
        } else {
            rv.text = std::string(value);
        }

        Section& section = raw.sections[current];
        for (const auto& [existing, unused] : section)
            if (existing == key)
                throw ConfigError("duplicate key at line " +
                                      std::to_string(line_no),
                                  current + "." + key);
        section.emplace_back(std::move(key), std::move(rv));
    }
    return raw;
}

double parse_number(const RawValue& rv, const std::string& qualified) {
    if (rv.quoted)
        throw ConfigError("expected an unquoted number at line " +
                              std::to_string(rv.line),
                          qualified);
    const char* begin = rv.text.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || rv.text.empty())
        throw ConfigError("cannot parse number '" + rv.text + "' at line " +
                              std::to_string(rv.line),
                          qualified);
    return value;
}

std::string parse_word(const RawValue& rv) { return rv.text; }

Expr parse_expression(const RawValue& rv, const std::string& qualified,
                      const std::set<std::string>& declared) {
    if (!rv.quoted)
        throw ConfigError(
            "expression values must be double-quoted strings at line " +
                std::to_string(rv.line),
            qualified);
    try {
        return parse(rv.text, declared);
    } catch (const UnknownIdentifier& e) {
        throw ConfigError("expression uses undeclared constant '" + e.name() +
                              "' at line " + std::to_string(rv.line) +
                              " (declare it in [constants])",
                          qualified);
    } catch (const SyntaxError& e) {
        throw ConfigError("expression does not parse at line " +
                              std::to_string(rv.line) + ": " + e.what(),
                          qualified);
    }
}

const RawValue* find(const Section& section, const std::string& key) {
    for (const auto& [k, v] : section)
        if (k == key) return &v;
    return nullptr;
}

void reject_unknown_keys(const Section& section, const std::string& name,
                         const std::set<std::string>& known) {
    for (const auto& [key, value] : section)
        if (!known.count(key))
            throw ConfigError("unknown key at line " +
                                  std::to_string(value.line),
                              name + "." + key);
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    RawConfig raw = scan(text);
    RunConfig cfg;

    std::set<std::string> declared;
    if (auto it = raw.sections.find("constants"); it != raw.sections.end()) {
        static const std::set<std::string> reserved = {
            "t", "x", "v", "a", "pi", "sin", "cos", "exp"};
        for (const auto& [name, value] : it->second) {
            if (reserved.count(name))
                throw ConfigError("constant name '" + name +
                                      "' is reserved at line " +
                                      std::to_string(value.line),
                                  "constants." + name);
            cfg.constants[name] = parse_number(value, "constants." + name);
            declared.insert(name);
        }
    }

    if (auto it = raw.sections.find("system"); it != raw.sections.end()) {
        const Section& sec = it->second;
        reject_unknown_keys(sec, "system",
                            {"mode", "omega0", "k", "m", "g", "L_pend", "c",
                             "x0", "v0", "t0", "t_end", "dt", "force",
                             "shift"});
        cfg.has_system = true;

        if (const RawValue* rv = find(sec, "mode")) {
            const std::string word = parse_word(*rv);
            if (word == "oscillator")
                cfg.system.mode = OscillatorConfig::Mode::Oscillator;
            else if (word == "pendulum")
                cfg.system.mode = OscillatorConfig::Mode::Pendulum;
            else
                throw ConfigError("mode must be oscillator or pendulum, got '" +
                                      word + "' at line " +
                                      std::to_string(rv->line),
                                  "system.mode");
        }

        auto opt_number = [&](const char* key, std::optional<double>& slot) {
            if (const RawValue* rv = find(sec, key))
                slot = parse_number(*rv, std::string("system.") + key);
        };
        opt_number("omega0", cfg.system.omega0);
        opt_number("k", cfg.system.k);
        opt_number("m", cfg.system.m);
        opt_number("g", cfg.system.g);
        opt_number("L_pend", cfg.system.L_pend);
        opt_number("c", cfg.system.c);

        auto plain_number = [&](const char* key, double& slot) {
            if (const RawValue* rv = find(sec, key))
                slot = parse_number(*rv, std::string("system.") + key);
        };
        plain_number("x0", cfg.system.x0);
        plain_number("v0", cfg.system.v0);
        plain_number("t0", cfg.system.t0);
        plain_number("t_end", cfg.system.t_end);
        plain_number("dt", cfg.system.dt);

        if (const RawValue* rv = find(sec, "force"))
            cfg.force = parse_expression(*rv, "system.force", declared);
        if (const RawValue* rv = find(sec, "shift"))
            cfg.shift = parse_expression(*rv, "system.shift", declared);
    }

    if (auto it = raw.sections.find("gauge"); it != raw.sections.end()) {
        const Section& sec = it->second;
        reject_unknown_keys(sec, "gauge", {"f1", "f2", "f4", "f6"});
        Expr f[4];
        const char* names[4] = {"f1", "f2", "f4", "f6"};
        for (int i = 0; i < 4; ++i) {
            const RawValue* rv = find(sec, names[i]);
            if (!rv)
                throw ConfigError(
                    std::string("gauge block requires f1, f2, f4 and f6; "
                                "missing ") +
                        names[i],
                    std::string("gauge.") + names[i]);
            f[i] = parse_expression(*rv, std::string("gauge.") + names[i],
                                    declared);
        }
        try {
            cfg.gauge = make_gauge(f[0], f[1], f[2], f[3]);
        } catch (const InvalidGauge& e) {
            throw ConfigError(std::string("invalid gauge entry: ") + e.what(),
                              "gauge");
        }
    }

    if (auto it = raw.sections.find("output"); it != raw.sections.end()) {
        const Section& sec = it->second;
        reject_unknown_keys(sec, "output", {"dir", "format", "trajectory"});
        if (const RawValue* rv = find(sec, "dir")) cfg.out_dir = rv->text;
        if (const RawValue* rv = find(sec, "trajectory")) {
            if (rv->text.empty())
                throw ConfigError("trajectory file stem must be nonempty",
                                  "output.trajectory");
            cfg.trajectory_stem = rv->text;
        }
        if (const RawValue* rv = find(sec, "format")) {
            const std::string word = parse_word(*rv);
            if (word != "csv" && word != "json")
                throw ConfigError("format must be csv or json, got '" + word +
                                      "' at line " + std::to_string(rv->line),
                                  "output.format");
            cfg.format = word;
        }
    }

    if (auto it = raw.sections.find("tolerances"); it != raw.sections.end()) {
        const Section& sec = it->second;
        reject_unknown_keys(sec, "tolerances",
                            {"null_tol", "balance_tol", "samples"});
        if (const RawValue* rv = find(sec, "null_tol"))
            cfg.null_tol = parse_number(*rv, "tolerances.null_tol");
        if (const RawValue* rv = find(sec, "balance_tol"))
            cfg.balance_tol = parse_number(*rv, "tolerances.balance_tol");
        if (const RawValue* rv = find(sec, "samples")) {
            double value = parse_number(*rv, "tolerances.samples");
            if (value != static_cast<int>(value))
                throw ConfigError("samples must be an integer at line " +
                                      std::to_string(rv->line),
                                  "tolerances.samples");
            cfg.samples = static_cast<int>(value);
        }
        if (!(cfg.null_tol > 0.0))
            throw ConfigError("null_tol must be positive",
                              "tolerances.null_tol");
        if (!(cfg.balance_tol > 0.0))
            throw ConfigError("balance_tol must be positive",
                              "tolerances.balance_tol");
        if (cfg.samples <= 0)
            throw ConfigError("samples must be positive",
                              "tolerances.samples");
    }

    if (auto it = raw.sections.find("helmholtz"); it != raw.sections.end()) {
        const Section& sec = it->second;
        reject_unknown_keys(sec, "helmholtz", {"ode"});
        if (const RawValue* rv = find(sec, "ode"))
            cfg.ode = parse_expression(*rv, "helmholtz.ode", declared);
    }

    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'", path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace gaugeforge
