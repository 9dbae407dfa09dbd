#ifndef PENCIL_CLI_CONFIG_HPP
#define PENCIL_CLI_CONFIG_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <pencil/error.hpp>

namespace pencil::cli
{

// Run configuration file format, one setting per line:
//
//   # comment
//   key = value
//
// Keys are drawn from a fixed table (see known_keys); values run to the end
// of the line with surrounding blanks removed. Lists use ',' for numbers and
// ';' for expressions. Blank lines and lines starting with '#' are ignored;
// a repeated key is an error.
enum class value_kind { text, integer, real, real_list, expr_list, choice };

struct key_spec {
    std::string_view name;
    value_kind kind;
    double min = 0;
    double max = 0;
    std::string_view choices = {};
};

inline const std::vector<key_spec> &known_keys()
{
    static const std::vector<key_spec> keys{
        {"command", value_kind::choice, 0, 0, "invariance|classify-pair|tangents|qshort|relations|integrate"},
        {"example", value_kind::text},
        {"description", value_kind::text},
        {"field.x", value_kind::text},
        {"field.y", value_kind::text},
        {"field.z", value_kind::text},
        {"system.f1", value_kind::text},
        {"system.f2", value_kind::text},
        {"curve", value_kind::text},
        {"branch", value_kind::choice, 0, 0, "+|-"},
        {"mode", value_kind::choice, 0, 0, "exact|float"},
        {"precision", value_kind::integer, 64, 8192},
        {"order", value_kind::integer, 0, 2000},
        {"tolerance", value_kind::real, 0, 1},
        {"steps", value_kind::integer, 0, 200},
        {"poly", value_kind::text},
        {"sat.H", value_kind::expr_list},
        {"sat.P", value_kind::expr_list},
        {"sat.k", value_kind::integer, 0, 100},
        {"q", value_kind::integer, 1, 1000},
        {"degree", value_kind::integer, 0, 12},
        {"jet_order", value_kind::integer, 0, 2000},
        {"x_start", value_kind::real, 1e-300, 1e6},
        {"x_end", value_kind::real, 1e-300, 1e6},
        {"y0", value_kind::real_list, -1e300, 1e300},
        {"eps0", value_kind::real_list, -1e300, 1e300},
        {"rtol", value_kind::real, 1e-15, 1},
        {"atol", value_kind::real, 1e-300, 1},
        {"max_steps", value_kind::integer, 1, 1e9},
        {"log_substitution", value_kind::choice, 0, 0, "auto|on|off"},
        {"probes", value_kind::real_list, 1e-300, 1},
        {"census", value_kind::expr_list},
        {"turn_threshold", value_kind::real, 0, 1e9},
        {"bounded_turns", value_kind::real, 0, 1e9},
        {"decade_factor", value_kind::real, 1, 1e6},
        {"contact_bound", value_kind::real, 0, 1e9},
        {"theta", value_kind::text},
        {"jet", value_kind::integer, 0, 200},
        {"ramification", value_kind::integer, 1, 100},
        {"out", value_kind::text},
    };
    return keys;
}

inline const key_spec *find_key(std::string_view name)
{
    for (const auto &k : known_keys()) {
        if (k.name == name) {
            return &k;
        }
    }
    return nullptr;
}

inline std::string trim(std::string_view s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) {
        ++a;
    }
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) {
        --b;
    }
    return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

inline double parse_double(const std::string &key, std::string_view text)
{
    const std::string t = trim(text);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw config_error("'" + key + "': not a number: '" + t + "'");
    }
    return v;
}

inline long long parse_integer(const std::string &key, std::string_view text)
{
    const std::string t = trim(text);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw config_error("'" + key + "': not an integer: '" + t + "'");
    }
    return v;
}

class run_config
{
public:
    run_config() = default;

    static run_config parse(std::string_view text)
    {
        run_config c;
        std::size_t line_no = 0;
        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string t = trim(line);
            if (t.empty() || t[0] == '#') {
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos) {
                throw config_error("line " + std::to_string(line_no) + ": expected 'key = value'");
            }
            const std::string key = trim(std::string_view(t).substr(0, eq));
            const std::string value = trim(std::string_view(t).substr(eq + 1));
            if (c.m_values.contains(key)) {
                throw config_error("line " + std::to_string(line_no) + ": repeated key '" + key + "'");
            }
            try {
                c.set(key, value);
            } catch (const config_error &e) {
                throw config_error("line " + std::to_string(line_no) + ": " + e.what());
            }
        }
        return c;
    }

    static run_config load(const std::string &path)
    {
        std::ifstream in(path);
        if (!in) {
            throw config_error("cannot read config file '" + path + "'");
        }
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    // Keys in table order, so output is stable.
    std::string serialize() const
    {
        std::string out;
        for (const auto &k : known_keys()) {
            auto it = m_values.find(std::string(k.name));
            if (it != m_values.end()) {
                out += std::string(k.name) + " = " + it->second + "\n";
            }
        }
        return out;
    }

    void set(const std::string &key, const std::string &value)
    {
        const auto *spec = find_key(key);
        if (!spec) {
            throw config_error("unknown key '" + key + "'");
        }
        if (value.find('\n') != std::string::npos) {
            throw config_error("'" + key + "': values must fit on one line");
        }
        validate(*spec, value);
        m_values[key] = value;
    }

    bool has(const std::string &key) const
    {
        return m_values.contains(key);
    }

    std::optional<std::string> get(const std::string &key) const
    {
        auto it = m_values.find(key);
        if (it == m_values.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    std::string text(const std::string &key, const std::string &fallback = {}) const
    {
        return get(key).value_or(fallback);
    }

    std::string require(const std::string &key) const
    {
        auto v = get(key);
        if (!v) {
            throw config_error("missing required key '" + key + "'");
        }
        return *v;
    }

    long long integer(const std::string &key, long long fallback) const
    {
        auto v = get(key);
        return v ? parse_integer(key, *v) : fallback;
    }

    double real(const std::string &key, double fallback) const
    {
        auto v = get(key);
        return v ? parse_double(key, *v) : fallback;
    }

    std::vector<double> reals(const std::string &key, std::vector<double> fallback = {}) const
    {
        auto v = get(key);
        if (!v) {
            return fallback;
        }
        std::vector<double> out;
        for (const auto &p : split(*v, ',')) {
            out.push_back(parse_double(key, p));
        }
        return out;
    }

    std::vector<std::string> list(const std::string &key) const
    {
        auto v = get(key);
        if (!v) {
            return {};
        }
        return split(*v, ';');
    }

    const std::map<std::string, std::string> &values() const noexcept
    {
        return m_values;
    }

    friend bool operator==(const run_config &, const run_config &) = default;

private:
    static void validate(const key_spec &spec, const std::string &value)
    {
        const std::string key(spec.name);
        auto in_range = [&](double v) {
            if (v < spec.min || v > spec.max) {
                throw config_error("'" + key + "' = " + value + " outside [" + std::to_string(spec.min) + ", "
                                   + std::to_string(spec.max) + "]");
            }
        };
        switch (spec.kind) {
            case value_kind::text:
                if (value.empty()) {
                    throw config_error("'" + key + "' is empty");
                }
                break;
            case value_kind::integer:
                in_range(static_cast<double>(parse_integer(key, value)));
                break;
            case value_kind::real:
                in_range(parse_double(key, value));
                break;
            case value_kind::real_list:
                for (const auto &p : split(value, ',')) {
                    in_range(parse_double(key, p));
                }
                break;
            case value_kind::expr_list:
                for (const auto &p : split(value, ';')) {
                    if (p.empty()) {
                        throw config_error("'" + key + "' has an empty entry");
                    }
                }
                break;
            case value_kind::choice: {
                const auto options = split(spec.choices, '|');
                if (std::find(options.begin(), options.end(), value) == options.end()) {
                    throw config_error("'" + key + "' must be one of " + std::string(spec.choices) + ", got '" + value
                                       + "'");
                }
                break;
            }
        }
    }

    std::map<std::string, std::string> m_values;
};

} // namespace pencil::cli

#endif
