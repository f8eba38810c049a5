#pragma once

#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "graph.hpp"

namespace topoctl {

// Point-set files are CSV, one node per line: id,x,y. Ids are either decimal
// integers or double-quoted byte strings (embedded quotes doubled). Edge-list
// files are id_a,id_b with id_a < id_b, one edge per line, sorted.

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_id_csv(const NodeId& id) {
    if (id.is_number()) return std::to_string(id.num());
    std::string out = "\"";
    for (char c : id.str()) {
        out.push_back(c);
        if (c == '"') out.push_back('"');
    }
    out.push_back('"');
    return out;
}

struct CsvField {
    std::string text;
    bool quoted = false;
};

inline std::vector<CsvField> split_csv(const std::string& line, std::size_t lineno) {
    std::vector<CsvField> fields;
    CsvField cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.text.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur.text.push_back(c);
            }
        } else if (c == '"' && cur.text.empty() && !cur.quoted) {
            in_quotes = true;
            cur.quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur = {};
        } else {
            cur.text.push_back(c);
        }
    }
    if (in_quotes)
        throw std::invalid_argument("line " + std::to_string(lineno) + ": unterminated quote");
    fields.push_back(std::move(cur));
    return fields;
}

// Unquoted fields must be decimal integers; quoted fields are byte ids even
// when they look numeric.
inline NodeId parse_id(const CsvField& f, const std::string& what, std::size_t lineno) {
    if (f.quoted) return NodeId::bytes(f.text);
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(f.text.data(), f.text.data() + f.text.size(), v);
    if (f.text.empty() || ec != std::errc() || p != f.text.data() + f.text.size())
        throw std::invalid_argument("line " + std::to_string(lineno) + ": bad " + what + " '" +
                                    f.text + "' (byte ids must be quoted)");
    return NodeId::number(v);
}

inline double parse_double(const CsvField& f, const std::string& what, std::size_t lineno) {
    try {
        std::size_t used = 0;
        const double v = std::stod(f.text, &used);
        if (used != f.text.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("line " + std::to_string(lineno) + ": bad " + what + " '" +
                                    f.text + "'");
    }
}

} // namespace detail

inline void write_points_csv(std::ostream& out, const PointSet& points) {
    for (std::uint32_t v = 0; v < points.size(); ++v)
        out << detail::format_id_csv(points.id(v)) << ',' << detail::format_double(points.x(v))
            << ',' << detail::format_double(points.y(v)) << '\n';
}

inline void write_points_csv(const std::filesystem::path& path, const PointSet& points) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_points_csv(out, points);
    out.flush();
    if (!out.good()) throw std::runtime_error("write failed on " + path.string());
}

inline PointSet read_points_csv(std::istream& in) {
    std::vector<PointSet::Entry> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv(line, lineno);
        if (fields.size() != 3)
            throw std::invalid_argument("line " + std::to_string(lineno) +
                                        ": expected id,x,y but got " +
                                        std::to_string(fields.size()) + " fields");
        entries.push_back({detail::parse_id(fields[0], "id", lineno),
                           detail::parse_double(fields[1], "x", lineno),
                           detail::parse_double(fields[2], "y", lineno)});
    }
    return PointSet(std::move(entries));
}

inline PointSet read_points_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return read_points_csv(in);
}

inline void write_edges_csv(std::ostream& out, const Topology& topo) {
    for (const Edge& e : topo.edges())
        out << detail::format_id_csv(topo.ids()[e.a]) << ','
            << detail::format_id_csv(topo.ids()[e.b]) << '\n';
}

inline void write_edges_csv(const std::filesystem::path& path, const Topology& topo) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_edges_csv(out, topo);
    out.flush();
    if (!out.good()) throw std::runtime_error("write failed on " + path.string());
}

inline Topology read_edges_csv(std::istream& in, IdTablePtr ids) {
    std::vector<Edge> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv(line, lineno);
        if (fields.size() != 2)
            throw std::invalid_argument("line " + std::to_string(lineno) +
                                        ": expected id_a,id_b but got " +
                                        std::to_string(fields.size()) + " fields");
        const NodeId a = detail::parse_id(fields[0], "id_a", lineno);
        const NodeId b = detail::parse_id(fields[1], "id_b", lineno);
        edges.push_back(make_edge(ids->require_rank(a), ids->require_rank(b)));
    }
    return Topology(std::move(ids), std::move(edges));
}

inline Topology read_edges_csv(const std::filesystem::path& path, IdTablePtr ids) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return read_edges_csv(in, std::move(ids));
}

} // namespace topoctl
