#pragma once

#include <cmath>
#include <functional>
#include <map>

#include "space.hpp"

namespace chainrec {

/// One-dimensional grid: evenly spaced cell centers on an interval
/// (endpoints included) or a circle (wraparound arc metric).
struct Grid1D {
    bool circular = false;
    double lo = 0.0;
    double span = 1.0; // interval length or circle circumference
    Index cells = 0;
    double resolution = 0.0;
    std::vector<double> coord;

    static Grid1D interval(double lo, double hi, Index cells) {
        if (cells < 2) throw GeometryError("interval grid needs at least 2 cells");
        if (!(hi > lo)) throw GeometryError("interval needs hi > lo");
        Grid1D g;
        g.circular = false;
        g.lo = lo;
        g.span = hi - lo;
        g.cells = cells;
        g.resolution = (hi - lo) / static_cast<double>(cells - 1);
        g.coord.resize(cells);
        for (Index i = 0; i < cells; ++i) g.coord[i] = lo + g.resolution * static_cast<double>(i);
        return g;
    }

    static Grid1D circle(double circumference, Index cells) {
        if (cells < 1) throw GeometryError("circle grid needs at least 1 cell");
        if (!(circumference > 0)) throw GeometryError("circumference must be positive");
        Grid1D g;
        g.circular = true;
        g.lo = 0.0;
        g.span = circumference;
        g.cells = cells;
        g.resolution = circumference / static_cast<double>(cells);
        g.coord.resize(cells);
        for (Index i = 0; i < cells; ++i) g.coord[i] = g.resolution * static_cast<double>(i);
        return g;
    }

    double wrap(double y) const {
        if (!circular) return y;
        y = std::fmod(y - lo, span);
        if (y < 0) y += span;
        return y + lo;
    }

    double dist(double a, double b) const {
        if (!circular) return std::abs(a - b);
        double d = std::abs(wrap(a) - wrap(b));
        return std::min(d, span - d);
    }

    // Cell-to-cell distance from the index delta: one product per entry, so
    // one-cell gaps compare exactly equal to the resolution.
    double cell_dist(Index i, Index j) const {
        const Index k = i > j ? i - j : j - i;
        if (!circular) return resolution * static_cast<double>(k);
        return resolution * static_cast<double>(std::min(k, cells - k));
    }

    Index nearest(double y) const {
        if (circular) {
            const double t = wrap(y) / resolution;
            Index j = static_cast<Index>(std::floor(t + 0.5));
            return j % cells;
        }
        double t = (y - lo) / resolution;
        if (t < 0) t = 0;
        if (t > static_cast<double>(cells - 1)) t = static_cast<double>(cells - 1);
        return static_cast<Index>(std::floor(t + 0.5));
    }

    IndexSet within(double y, double rho) const {
        IndexSet out;
        for (Index i = 0; i < cells; ++i)
            if (dist(coord[i], y) <= rho) out.push_back(i);
        return out;
    }

    SpaceModel space(const std::string& label_prefix = "") const {
        std::vector<std::string> labels(cells);
        for (Index i = 0; i < cells; ++i) labels[i] = label_prefix + fmt_g12(coord[i]);
        Matrix d(cells);
        for (Index i = 0; i < cells; ++i)
            for (Index j = 0; j < cells; ++j) d.at(i, j) = cell_dist(i, j);
        return SpaceModel(std::move(labels), std::move(d));
    }
};

struct GridModel {
    std::string id;
    std::map<std::string, double> params;
    std::string geometry;
    Index cells = 0;
    std::string mode; // "nearest" or "outer"
    double resolution = 0.0;
    SpaceModel space;
    Relation relation;
    std::map<std::string, IndexSet> parts; // named index sets of composite models
};

namespace detail {

using Map1D = std::function<double(double)>;

inline Map1D make_map(const std::string& name, const std::map<std::string, double>& params,
                      const Grid1D& grid) {
    auto param = [&](const std::string& key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    if (name == "identity") return [](double x) { return x; };
    if (name == "rotation") {
        const double alpha = param("alpha", 0.0);
        if (!grid.circular) throw GeometryError("rotation is a circle map");
        return [alpha](double x) { return x + alpha; };
    }
    if (name == "doubling") {
        if (!grid.circular) throw GeometryError("doubling is a circle map");
        return [](double x) { return 2.0 * x; };
    }
    if (name == "times") {
        const double k = param("k", 2.0);
        if (!grid.circular) throw GeometryError("times-k is a circle map");
        return [k](double x) { return k * x; };
    }
    if (name == "north-south") {
        if (!grid.circular) throw GeometryError("north-south is a circle map");
        const double a = param("a", 0.9);
        const double scale = grid.span / (2.0 * std::acos(-1.0));
        return [a, scale](double x) { return x - a * scale * std::sin(x / scale); };
    }
    if (name == "logistic") {
        const double r = param("r", 4.0);
        if (grid.circular) throw GeometryError("logistic is an interval map");
        return [r](double x) { return r * x * (1.0 - x); };
    }
    if (name == "square") {
        if (grid.circular) throw GeometryError("square is an interval map");
        return [](double x) { return x * x; };
    }
    if (name == "square-conj") {
        // conjugate of u -> u^2 moved onto [-1,1]
        if (grid.circular) throw GeometryError("square-conj is an interval map");
        return [](double x) { return 0.5 * (x * x + 2.0 * x - 1.0); };
    }
    throw ParamError("unknown map: " + name);
}

inline Grid1D parse_geometry(const std::string& text, Index cells) {
    // "interval:lo:hi" or "circle:circumference"
    const auto split = [&] {
        std::vector<std::string> out;
        std::string cur;
        for (char c : text) {
            if (c == ':') { out.push_back(cur); cur.clear(); }
            else cur.push_back(c);
        }
        out.push_back(cur);
        return out;
    }();
    try {
        if (split.size() == 3 && split[0] == "interval")
            return Grid1D::interval(std::stod(split[1]), std::stod(split[2]), cells);
        if (split.size() == 2 && split[0] == "circle")
            return Grid1D::circle(std::stod(split[1]), cells);
    } catch (const std::invalid_argument&) {
        throw GeometryError("malformed geometry parameter in: " + text);
    }
    throw GeometryError("unknown geometry: " + text + " (use interval:lo:hi or circle:c)");
}

} // namespace detail

/// Discretize a named 1-D map over a grid. Nearest mode picks the closest
/// cell center per cell (a total map); outer mode connects each cell to all
/// cells within rho of the image point (rho defaults to one cell).
inline GridModel discretize(const std::string& map_name,
                            const std::map<std::string, double>& params,
                            const std::string& geometry, Index cells, const std::string& mode,
                            double rho = -1.0) {
    Grid1D grid = detail::parse_geometry(geometry, cells);
    auto fmap = detail::make_map(map_name, params, grid);
    if (rho < 0) rho = grid.resolution;
    std::vector<IndexPair> pairs;
    for (Index i = 0; i < grid.cells; ++i) {
        const double y = fmap(grid.coord[i]);
        if (!grid.circular && (y < grid.lo - 1e-9 || y > grid.lo + grid.span + 1e-9))
            throw GeometryError("map leaves the interval");
        if (mode == "nearest") {
            pairs.emplace_back(i, grid.nearest(y));
        } else if (mode == "outer") {
            for (Index j : grid.within(y, rho)) pairs.emplace_back(i, j);
        } else {
            throw ParamError("mode must be nearest or outer");
        }
    }
    GridModel model{map_name, params, geometry, cells, mode, grid.resolution,
                    grid.space(), Relation(grid.cells, std::move(pairs)), {}};
    return model;
}

/// Product of two grid models over the max metric; two circles make a torus.
inline GridModel product_grid(const GridModel& a, const GridModel& b) {
    ProductModel p = product(a.space, a.relation, b.space, b.relation);
    GridModel out{a.id + "x" + b.id,
                  {},
                  a.geometry + " x " + b.geometry,
                  a.cells * b.cells,
                  a.mode == b.mode ? a.mode : "mixed",
                  std::max(a.resolution, b.resolution),
                  std::move(p.space),
                  std::move(p.relation),
                  {}};
    return out;
}

struct CatalogEntry {
    std::string name;
    std::string summary;
};

inline std::vector<CatalogEntry> catalog() {
    return {
        {"k-cycle", "pure k-periodic cycle on k unit-spaced points (param k or --cells)"},
        {"north-south", "circle map contracting to one fixed cell, expanding at the antipode; "
                        "pairs that would collapse onto a fixed cell are dropped so the fixed "
                        "set keeps its exact preimage (param a, default 0.9)"},
        {"doubling", "angle doubling, outer approximation one cell wide (surjective)"},
        {"doubling-nearest", "angle doubling, nearest-cell map (bijective for odd cell counts)"},
        {"rotation", "rigid rotation by an exact number of cells (param shift)"},
        {"rotation-angle", "rigid rotation by a real angle, nearest mode (param alpha)"},
        {"logistic", "logistic family on [0,1], nearest mode (param r, default 4)"},
        {"square", "x -> x^2 on [0,1], nearest mode"},
        {"example88", "circle-with-interval tower: rotating circle levels over a contracting "
                      "interval (params: interval cells via --cells, circle cells fixed at "
                      "param circle_cells, levels param levels as count)"},
    };
}

inline GridModel build_catalog_model(const std::string& name, Index cells,
                                     std::map<std::string, double> params = {});

namespace detail {

inline GridModel build_example88(Index interval_cells, Index circle_cells,
                                 std::vector<double> levels) {
    // Points in R^3: interval [-1,1] on the x-axis, unit circles at the
    // requested heights plus height 0; Euclidean distances. The interval
    // endpoints coincide with two circle points at height 0 (distance 0).
    struct P3 { double x, y, z; };
    std::vector<P3> pts;
    std::vector<std::string> labels;
    std::map<std::string, IndexSet> parts;
    const double pi = std::acos(-1.0);

    Grid1D igrid = Grid1D::interval(-1.0, 1.0, interval_cells);
    IndexSet ipart;
    for (Index i = 0; i < interval_cells; ++i) {
        ipart.push_back(pts.size());
        pts.push_back({igrid.coord[i], 0.0, 0.0});
        labels.push_back("I" + fmt_g12(igrid.coord[i]));
    }
    parts["interval"] = ipart;

    std::vector<double> all_levels = {0.0};
    all_levels.insert(all_levels.end(), levels.begin(), levels.end());
    std::vector<IndexSet> circle_parts;
    // snap trig residue so the circle points at angles 0 and pi coincide
    // exactly with the interval endpoints
    auto snap = [](double v) {
        if (std::abs(v) < 1e-12) return 0.0;
        if (std::abs(v - 1.0) < 1e-12) return 1.0;
        if (std::abs(v + 1.0) < 1e-12) return -1.0;
        return v;
    };
    for (double t : all_levels) {
        IndexSet cpart;
        for (Index i = 0; i < circle_cells; ++i) {
            const double th = 2.0 * pi * static_cast<double>(i) / static_cast<double>(circle_cells);
            cpart.push_back(pts.size());
            pts.push_back({snap(std::cos(th)), snap(std::sin(th)), t});
            labels.push_back("S" + fmt_g12(t) + "#" + std::to_string(i));
        }
        parts["circle@" + fmt_g12(t)] = cpart;
        circle_parts.push_back(std::move(cpart));
    }

    const Index n = pts.size();
    Matrix dist(n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            const double dx = pts[i].x - pts[j].x;
            const double dy = pts[i].y - pts[j].y;
            const double dz = pts[i].z - pts[j].z;
            dist.at(i, j) = std::sqrt(dx * dx + dy * dy + dz * dz);
        }

    std::vector<IndexPair> pairs;
    // interval factor: conjugate square map, nearest interval cell
    for (Index i = 0; i < interval_cells; ++i) {
        const double x = igrid.coord[i];
        const double y = 0.5 * (x * x + 2.0 * x - 1.0);
        pairs.emplace_back(ipart[i], ipart[igrid.nearest(y)]);
    }
    // circle levels rotate by angle 2*pi*t: exact cell shift when t*cells is integral
    for (Index li = 0; li < all_levels.size(); ++li) {
        const double t = all_levels[li];
        const double shift_real = t * static_cast<double>(circle_cells);
        const Index shift = static_cast<Index>(std::llround(shift_real)) % circle_cells;
        for (Index i = 0; i < circle_cells; ++i)
            pairs.emplace_back(circle_parts[li][i], circle_parts[li][(i + shift) % circle_cells]);
    }

    GridModel model{"example88",
                    {{"circle_cells", static_cast<double>(circle_cells)}},
                    "tower",
                    interval_cells,
                    "nearest",
                    igrid.resolution,
                    SpaceModel(std::move(labels), std::move(dist)),
                    Relation(n, std::move(pairs)),
                    std::move(parts)};
    return model;
}

} // namespace detail

inline GridModel build_catalog_model(const std::string& name, Index cells,
                                     std::map<std::string, double> params) {
    auto param = [&](const std::string& key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    if (name == "k-cycle") {
        const Index k = cells ? cells : static_cast<Index>(param("k", 5));
        if (k < 2) throw ParamError("k-cycle needs k >= 2");
        Grid1D grid = Grid1D::circle(static_cast<double>(k), k);
        std::vector<IndexPair> pairs;
        for (Index i = 0; i < k; ++i) pairs.emplace_back(i, (i + 1) % k);
        return GridModel{name, params, "circle:" + std::to_string(k), k, "nearest",
                         grid.resolution, grid.space(), Relation(k, std::move(pairs)), {}};
    }
    if (name == "north-south") {
        if (cells < 8) throw ParamError("north-south needs at least 8 cells");
        if (cells % 2 != 0) throw ParamError("north-south needs an even cell count");
        GridModel m = discretize("north-south", {{"a", param("a", 0.9)}}, "circle:6.28318530717958647692",
                                 cells, "nearest");
        m.id = name;
        // keep the exact-preimage property of the underlying homeomorphism:
        // drop pairs that would collapse a non-fixed cell onto a fixed cell
        const IndexSet fixed = cyclic_set(m.relation);
        std::vector<IndexPair> kept;
        for (const auto& [a, b] : m.relation.pairs)
            if (a == b || !set_contains(fixed, b)) kept.emplace_back(a, b);
        m.relation = Relation(cells, std::move(kept));
        return m;
    }
    if (name == "doubling") {
        GridModel m = discretize("doubling", {}, "circle:1", cells, "outer");
        m.id = name;
        return m;
    }
    if (name == "doubling-nearest") {
        GridModel m = discretize("doubling", {}, "circle:1", cells, "nearest");
        m.id = name;
        return m;
    }
    if (name == "rotation") {
        const Index shift = static_cast<Index>(param("shift", 1));
        Grid1D grid = Grid1D::circle(1.0, cells);
        std::vector<IndexPair> pairs;
        for (Index i = 0; i < cells; ++i) pairs.emplace_back(i, (i + shift) % cells);
        return GridModel{name, params, "circle:1", cells, "nearest", grid.resolution,
                         grid.space(), Relation(cells, std::move(pairs)), {}};
    }
    if (name == "rotation-angle")
        return discretize("rotation", {{"alpha", param("alpha", 0.0)}}, "circle:1", cells,
                          "nearest");
    if (name == "logistic")
        return discretize("logistic", {{"r", param("r", 4.0)}}, "interval:0:1", cells, "nearest");
    if (name == "square")
        return discretize("square", {}, "interval:0:1", cells, "nearest");
    if (name == "example88") {
        const Index interval_cells = cells ? cells : 201;
        const Index circle_cells = static_cast<Index>(param("circle_cells", 128));
        std::vector<double> levels;
        const Index level_count = static_cast<Index>(param("levels", 2));
        for (Index i = 1; i <= level_count; ++i) levels.push_back(1.0 / static_cast<double>(i));
        return detail::build_example88(interval_cells, circle_cells, levels);
    }
    throw ParamError("unknown catalog model: " + name);
}

} // namespace chainrec
