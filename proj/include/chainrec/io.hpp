#pragma once

#include <map>
#include <memory>
#include <sstream>
#include <variant>

#include <json.hpp>

#include "attractor.hpp"
#include "chainrel.hpp"
#include "models.hpp"

namespace chainrec {

struct Model {
    SpaceModel space;
    Relation relation;
};

/// Parse the canonical interchange document:
/// {"points": [...], "metric": [[...]], "relation": [[i,j], ...]}.
inline Model load_space(const std::string& document) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("points") || !doc.contains("metric") ||
        !doc.contains("relation"))
        throw SchemaError("model document needs points, metric and relation");
    if (!doc["points"].is_array() || doc["points"].empty())
        throw SchemaError("points must be a nonempty array of strings");
    std::vector<std::string> points;
    for (const auto& p : doc["points"]) {
        if (!p.is_string()) throw SchemaError("points must be strings");
        points.push_back(p.get<std::string>());
    }
    const Index n = points.size();
    if (!doc["metric"].is_array() || doc["metric"].size() != n)
        throw SchemaError("metric must be an n x n matrix");
    Matrix dist(n);
    for (Index i = 0; i < n; ++i) {
        const auto& row = doc["metric"][i];
        if (!row.is_array() || row.size() != n) throw SchemaError("metric must be an n x n matrix");
        for (Index j = 0; j < n; ++j) {
            if (!row[j].is_number()) throw SchemaError("metric entries must be numbers");
            dist.at(i, j) = row[j].get<double>();
        }
    }
    if (!doc["relation"].is_array()) throw SchemaError("relation must be an array of pairs");
    std::vector<IndexPair> pairs;
    for (const auto& pr : doc["relation"]) {
        if (!pr.is_array() || pr.size() != 2 || !pr[0].is_number_integer() ||
            !pr[1].is_number_integer())
            throw SchemaError("relation entries must be [int, int]");
        const auto a = pr[0].get<long long>();
        const auto b = pr[1].get<long long>();
        if (a < 0 || b < 0 || a >= static_cast<long long>(n) || b >= static_cast<long long>(n))
            throw IndexError("relation pair out of range");
        pairs.emplace_back(static_cast<Index>(a), static_cast<Index>(b));
    }
    SpaceModel space(std::move(points), std::move(dist)); // validates the metric
    return Model{std::move(space), Relation(n, std::move(pairs))};
}

// ---------------------------------------------------------------------------
// Deterministic JSON output: sorted keys, doubles rendered with %.12g.

class Json {
  public:
    using Object = std::map<std::string, Json>;
    using Array = std::vector<Json>;

    Json() : v_(nullptr) {}
    Json(bool b) : v_(b) {}
    Json(double d) : v_(d) {}
    Json(long long i) : v_(i) {}
    Json(Index i) : v_(static_cast<long long>(i)) {}
    Json(int i) : v_(static_cast<long long>(i)) {}
    Json(const char* s) : v_(std::string(s)) {}
    Json(std::string s) : v_(std::move(s)) {}
    Json(Array a) : v_(std::move(a)) {}
    Json(Object o) : v_(std::move(o)) {}

    static Json array() { return Json(Array{}); }
    static Json object() { return Json(Object{}); }

    Json& operator[](const std::string& key) { return std::get<Object>(v_)[key]; }
    void push_back(Json j) { std::get<Array>(v_).push_back(std::move(j)); }

    static Json index_set(const IndexSet& s) {
        Array a;
        for (Index i : s) a.emplace_back(i);
        return Json(std::move(a));
    }

    static Json matrix(const Matrix& m) {
        Array rows;
        for (Index i = 0; i < m.size(); ++i) {
            Array row;
            for (Index j = 0; j < m.size(); ++j) row.emplace_back(m.at(i, j));
            rows.emplace_back(std::move(row));
        }
        return Json(std::move(rows));
    }

    void write(std::ostream& os) const {
        if (std::holds_alternative<std::nullptr_t>(v_)) { os << "null"; return; }
        if (const bool* b = std::get_if<bool>(&v_)) { os << (*b ? "true" : "false"); return; }
        if (const long long* i = std::get_if<long long>(&v_)) { os << *i; return; }
        if (const double* d = std::get_if<double>(&v_)) { os << fmt_g12(*d); return; }
        if (const std::string* s = std::get_if<std::string>(&v_)) { write_string(os, *s); return; }
        if (const Array* a = std::get_if<Array>(&v_)) {
            os << '[';
            for (Index k = 0; k < a->size(); ++k) {
                if (k) os << ',';
                (*a)[k].write(os);
            }
            os << ']';
            return;
        }
        const Object& o = std::get<Object>(v_);
        os << '{';
        bool first = true;
        for (const auto& [key, value] : o) { // std::map iterates keys sorted
            if (!first) os << ',';
            first = false;
            write_string(os, key);
            os << ':';
            value.write(os);
        }
        os << '}';
    }

    std::string dump() const {
        std::ostringstream os;
        write(os);
        return os.str();
    }

  private:
    static void write_string(std::ostream& os, const std::string& s) {
        os << '"';
        for (char c : s) {
            switch (c) {
                case '"': os << "\\\""; break;
                case '\\': os << "\\\\"; break;
                case '\n': os << "\\n"; break;
                case '\t': os << "\\t"; break;
                case '\r': os << "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x", c);
                        os << buf;
                    } else {
                        os << c;
                    }
            }
        }
        os << '"';
    }

    std::variant<std::nullptr_t, bool, long long, double, std::string, Array, Object> v_;
};

inline Json model_json(const SpaceModel& space, const Relation& rel) {
    Json::Array pts;
    for (const auto& p : space.points()) pts.emplace_back(p);
    Json::Array metric;
    for (Index i = 0; i < space.size(); ++i) {
        Json::Array row;
        for (Index j = 0; j < space.size(); ++j) row.emplace_back(space.d(i, j));
        metric.emplace_back(std::move(row));
    }
    Json::Array pairs;
    for (const auto& [a, b] : rel.pairs) {
        Json::Array pr;
        pr.emplace_back(a);
        pr.emplace_back(b);
        pairs.emplace_back(std::move(pr));
    }
    Json::Object o;
    o["points"] = Json(std::move(pts));
    o["metric"] = Json(std::move(metric));
    o["relation"] = Json(std::move(pairs));
    return Json(std::move(o));
}

// ---------------------------------------------------------------------------
// CSV / DOT

inline std::string matrix_csv(const SpaceModel& space, const Matrix& m) {
    std::ostringstream os;
    for (Index j = 0; j < space.size(); ++j) {
        if (j) os << ',';
        os << space.label(j);
    }
    os << '\n';
    for (Index i = 0; i < m.size(); ++i) {
        for (Index j = 0; j < m.size(); ++j) {
            if (j) os << ',';
            os << fmt_g12(m.at(i, j));
        }
        os << '\n';
    }
    return os.str();
}

inline std::string values_csv(const SpaceModel& space, const std::vector<double>& values) {
    std::ostringstream os;
    os << "point,value\n";
    for (Index i = 0; i < values.size(); ++i)
        os << space.label(i) << ',' << fmt_g12(values[i]) << '\n';
    return os.str();
}

/// DOT rendering of the condensation: component nodes carry size and a
/// representative label; edges follow step reachability between nodes.
inline std::string condensation_dot(const SpaceModel& space, const ChainStructure& cs) {
    std::ostringstream os;
    os << "digraph condensation {\n";
    for (Index k = 0; k < cs.condensation.size(); ++k) {
        const auto& node = cs.condensation[k];
        os << "  n" << k << " [label=\"" << (node.recurrent ? "comp " : "pt ")
           << space.label(node.members.front()) << " (" << node.members.size() << ")\""
           << (node.recurrent ? ", shape=doublecircle" : ", shape=circle") << "];\n";
    }
    for (const auto& [a, b] : cs.condensation_edges)
        os << "  n" << a << " -> n" << b << ";\n";
    os << "}\n";
    return os.str();
}

/// DOT rendering of the attractor lattice ordered by trace inclusion
/// (immediate covers only).
inline std::string lattice_dot(const std::vector<AttractorRecord>& lattice) {
    std::ostringstream os;
    os << "digraph attractors {\n";
    for (Index i = 0; i < lattice.size(); ++i) {
        os << "  a" << i << " [label=\"|A|=" << lattice[i].attractor.size()
           << " trace=" << lattice[i].trace.size() << "\"];\n";
    }
    for (Index i = 0; i < lattice.size(); ++i)
        for (Index j = 0; j < lattice.size(); ++j) {
            if (i == j || !set_subset(lattice[i].trace, lattice[j].trace) ||
                lattice[i].trace == lattice[j].trace)
                continue;
            bool immediate = true;
            for (Index k = 0; k < lattice.size() && immediate; ++k) {
                if (k == i || k == j) continue;
                if (set_subset(lattice[i].trace, lattice[k].trace) &&
                    set_subset(lattice[k].trace, lattice[j].trace) &&
                    lattice[k].trace != lattice[i].trace && lattice[k].trace != lattice[j].trace)
                    immediate = false;
            }
            if (immediate) os << "  a" << i << " -> a" << j << ";\n";
        }
    os << "}\n";
    return os.str();
}

inline Json partition_json(const std::vector<IndexSet>& classes) {
    Json out = Json::array();
    for (const auto& cls : classes) out.push_back(Json::index_set(cls));
    return out;
}

} // namespace chainrec
