#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"
#include "mesh.hpp"

namespace llfv {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key = value configuration with # comments.
class Config {
public:
    struct Entry {
        std::string value;
        int line = 0;
    };

    static Config parse_string(const std::string& text, const std::string& name) {
        Config cfg;
        cfg.name_ = name;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty())
                continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw ConfigError(name + ":" + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty())
                throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
            cfg.entries_[key] = Entry{value, lineno};
        }
        return cfg;
    }

    static Config parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file: " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_string(buf.str(), path);
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string get(const std::string& key, const std::string& fallback) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? fallback : it->second.value;
    }

    double get_double(const std::string& key, double fallback) const {
        const auto it = entries_.find(key);
        if (it == entries_.end())
            return fallback;
        return parse_double(it->second, key);
    }

    int get_int(const std::string& key, int fallback) const {
        const auto it = entries_.find(key);
        if (it == entries_.end())
            return fallback;
        try {
            size_t pos = 0;
            const int v = std::stoi(it->second.value, &pos);
            if (pos != it->second.value.size())
                throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(where(key) + ": not an integer: '" + it->second.value + "'");
        }
    }

    std::vector<double> get_double_list(const std::string& key, std::vector<double> fallback) const {
        const auto it = entries_.find(key);
        if (it == entries_.end())
            return fallback;
        std::vector<double> out;
        for (const std::string& item : split(it->second.value, ','))
            out.push_back(parse_double(Entry{trim(item), it->second.line}, key));
        return out;
    }

    std::vector<int> get_int_list(const std::string& key, std::vector<int> fallback) const {
        const auto it = entries_.find(key);
        if (it == entries_.end())
            return fallback;
        std::vector<int> out;
        for (const std::string& item : split(it->second.value, ',')) {
            try {
                out.push_back(std::stoi(trim(item)));
            } catch (const std::exception&) {
                throw ConfigError(where(key) + ": not an integer list: '" + it->second.value + "'");
            }
        }
        return out;
    }

    /// Reject keys outside the allowed set, pointing at the offending line.
    void restrict_keys(const std::vector<std::string>& allowed) const {
        for (const auto& [key, entry] : entries_) {
            bool ok = false;
            for (const auto& a : allowed)
                if (key == a) {
                    ok = true;
                    break;
                }
            if (!ok)
                throw ConfigError(name_ + ":" + std::to_string(entry.line) + ": unknown key '" + key + "'");
        }
    }

private:
    static std::string trim(const std::string& s) {
        const auto begin = s.find_first_not_of(" \t\r\n");
        if (begin == std::string::npos)
            return {};
        const auto end = s.find_last_not_of(" \t\r\n");
        return s.substr(begin, end - begin + 1);
    }

    static std::vector<std::string> split(const std::string& s, char sep) {
        std::vector<std::string> out;
        std::string item;
        std::istringstream in(s);
        while (std::getline(in, item, sep))
            out.push_back(item);
        return out;
    }

    double parse_double(const Entry& entry, const std::string& key) const {
        try {
            size_t pos = 0;
            const double v = std::stod(entry.value, &pos);
            if (pos != entry.value.size())
                throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(name_ + ":" + std::to_string(entry.line) + ": key '" + key +
                              "' is not a number: '" + entry.value + "'");
        }
    }

    std::string where(const std::string& key) const {
        const auto it = entries_.find(key);
        return name_ + ":" + (it == entries_.end() ? "?" : std::to_string(it->second.line));
    }

    std::string name_;
    std::map<std::string, Entry> entries_;
};

namespace detail {

inline std::string fmt(const char* spec, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

} // namespace detail

/// Legacy-VTK text snapshot: unstructured grid of triangles (cell type 5)
/// with z = 0, plus a 3-component point vector array named "magnetization".
/// Output bytes are deterministic.
inline void write_vtk_snapshot(const TriMesh& mesh, const VectorField3& m, const std::string& path) {
    if (m.size() != mesh.node_count())
        throw std::invalid_argument("write_vtk_snapshot: field size mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_vtk_snapshot: cannot open " + path);
    out << "# vtk DataFile Version 3.0\n";
    out << "magnetization snapshot\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.node_count() << " double\n";
    for (const Vec2& p : mesh.nodes)
        out << detail::fmt("%.17g", p.x()) << ' ' << detail::fmt("%.17g", p.y()) << " 0\n";
    out << "CELLS " << mesh.tri_count() << ' ' << 4 * mesh.tri_count() << '\n';
    for (const auto& tri : mesh.tris)
        out << "3 " << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
    out << "CELL_TYPES " << mesh.tri_count() << '\n';
    for (int t = 0; t < mesh.tri_count(); ++t)
        out << "5\n";
    out << "POINT_DATA " << mesh.node_count() << '\n';
    out << "VECTORS magnetization double\n";
    for (int i = 0; i < m.size(); ++i) {
        const Vec3 v = m.node(i);
        out << detail::fmt("%.17g", v.x()) << ' ' << detail::fmt("%.17g", v.y()) << ' '
            << detail::fmt("%.17g", v.z()) << '\n';
    }
    if (!out)
        throw std::runtime_error("write_vtk_snapshot: write failed for " + path);
}

/// Plain CSV with a header row; all cells pre-formatted by the caller.
inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_csv: cannot open " + path);
    for (size_t c = 0; c < header.size(); ++c)
        out << header[c] << (c + 1 < header.size() ? "," : "");
    out << '\n';
    for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c)
            out << row[c] << (c + 1 < row.size() ? "," : "");
        out << '\n';
    }
    if (!out)
        throw std::runtime_error("write_csv: write failed for " + path);
}

} // namespace llfv
