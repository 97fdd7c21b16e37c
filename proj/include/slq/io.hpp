// io.hpp — unit conversions at the file boundary, deterministic CSV
// read/write (RFC-4180 quoting), and a small sectioned key=value config
// reader.  Internally every frequency is angular (rad/ns) and every time is
// in ns; files carry ordinary frequencies in MHz/GHz and times in ns.
#pragma once

#include "linalg.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace slq::io {

// ---------- units ----------

constexpr double ghz_to_rad_ns(double f_ghz) { return 2.0 * pi * f_ghz; }
constexpr double mhz_to_rad_ns(double f_mhz) { return 2.0 * pi * 1e-3 * f_mhz; }
constexpr double rad_ns_to_ghz(double w) { return w / (2.0 * pi); }
constexpr double rad_ns_to_mhz(double w) { return 1e3 * w / (2.0 * pi); }
constexpr double us_to_ns(double t_us) { return 1e3 * t_us; }

// ---------- deterministic number formatting ----------

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& s, const std::string& context) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw parse_error(context + ": trailing characters in '" + s + "'");
        return v;
    } catch (const std::invalid_argument&) {
        throw parse_error(context + ": not a number: '" + s + "'");
    } catch (const std::out_of_range&) {
        throw parse_error(context + ": out of range: '" + s + "'");
    }
}

// ---------- CSV ----------

using Row = std::vector<std::string>;

struct Csv {
    Row header;
    std::vector<Row> rows;
};

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

inline void write_csv(const std::string& path, const Row& header, const std::vector<Row>& rows) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw parse_error("write_csv: cannot open " + path);
    auto emit = [&](const Row& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) f << ',';
            f << csv_escape(r[i]);
        }
        f << '\n';
    };
    emit(header);
    for (const auto& r : rows) emit(r);
}

inline Csv read_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw parse_error("read_csv: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    std::vector<Row> records;
    Row current;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    auto end_field = [&]() {
        current.push_back(field);
        field.clear();
        field_started = false;
    };
    auto end_record = [&]() {
        if (field_started || !current.empty() || !field.empty()) {
            end_field();
            records.push_back(current);
            current.clear();
        }
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
            field_started = true;  // a comma opens the next (possibly empty) field
        } else if (c == '\n') {
            end_record();
        } else if (c == '\r') {
            // swallow; \r\n and bare \r both terminate via the \n or next char
            if (i + 1 >= text.size() || text[i + 1] != '\n') end_record();
        } else {
            field += c;
            field_started = true;
        }
    }
    end_record();
    if (quoted) throw parse_error("read_csv: unterminated quote in " + path);
    if (records.empty()) throw parse_error("read_csv: empty file " + path);

    Csv out;
    out.header = records.front();
    out.rows.assign(records.begin() + 1, records.end());
    return out;
}

// ---------- sectioned key=value config ----------

struct Config {
    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has(const std::string& section, const std::string& key) const {
        auto s = sections.find(section);
        return s != sections.end() && s->second.count(key) > 0;
    }
    std::string get(const std::string& section, const std::string& key) const {
        auto s = sections.find(section);
        if (s == sections.end() || !s->second.count(key))
            throw parse_error("config: missing [" + section + "] " + key);
        return s->second.at(key);
    }
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& dflt) const {
        return has(section, key) ? get(section, key) : dflt;
    }
    double get_double(const std::string& section, const std::string& key) const {
        return parse_double(get(section, key), "config [" + section + "] " + key);
    }
    double get_double_or(const std::string& section, const std::string& key, double dflt) const {
        return has(section, key) ? get_double(section, key) : dflt;
    }
    long get_int_or(const std::string& section, const std::string& key, long dflt) const {
        if (!has(section, key)) return dflt;
        return static_cast<long>(get_double(section, key));
    }
    void set(const std::string& section, const std::string& key, const std::string& value) {
        sections[section][key] = value;
    }
};

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline Config read_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw parse_error("read_config: cannot open " + path);
    Config cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        // strip an inline comment: '#' or ';' preceded by whitespace
        for (std::size_t k = 1; k < t.size(); ++k) {
            if ((t[k] == '#' || t[k] == ';') && (t[k - 1] == ' ' || t[k - 1] == '\t')) {
                t = trim(t.substr(0, k));
                break;
            }
        }
        if (t.front() == '[') {
            if (t.back() != ']')
                throw parse_error("read_config: bad section header at line " + std::to_string(lineno));
            section = trim(t.substr(1, t.size() - 2));
            cfg.sections[section];  // ensure section exists even if empty
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw parse_error("read_config: expected key=value at line " + std::to_string(lineno));
        cfg.sections[section][trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return cfg;
}

// Apply a "section.key=value" command-line override.
inline void apply_override(Config& cfg, const std::string& spec) {
    auto eq = spec.find('=');
    auto dot = spec.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
        throw parse_error("override must look like section.key=value: " + spec);
    cfg.set(trim(spec.substr(0, dot)), trim(spec.substr(dot + 1, eq - dot - 1)),
            trim(spec.substr(eq + 1)));
}

}  // namespace slq::io
