#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <istream>
#include <unordered_map>
#include <vector>

#include "wcp/errors.hpp"

namespace wcp {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::hypot(x, y); }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }

// An ordered piecewise-linear curve.
struct Polyline {
    std::vector<Point2> points;

    std::size_t size() const { return points.size(); }
};

// Arc length of the first `upto+1` points by the staggered trapezoidal
// combination: the mean of the chord sum and the companion sum whose i-th
// segment pairs the x-difference with the previous segment's y-difference
// (the first y-difference is taken as zero). `upto` = size()-1 gives the
// total length. The plain chord sum sits behind `plain`; it is the more
// accurate estimate on smooth curves and is kept for comparison.
inline double trapezoid_arc_length(const Polyline& line, std::size_t upto,
                                   bool plain = false) {
    if (line.size() < 2 || upto == 0) return 0.0;
    upto = std::min(upto, line.size() - 1);
    double chords = 0.0, staggered = 0.0;
    double prev_dy = 0.0;
    for (std::size_t i = 0; i + 1 <= upto; ++i) {
        Point2 d = line.points[i + 1] - line.points[i];
        chords += d.norm();
        staggered += std::hypot(d.x, prev_dy);
        prev_dy = d.y;
    }
    return plain ? chords : 0.5 * (chords + staggered);
}

inline double total_arc_length(const Polyline& line, bool plain = false) {
    if (line.size() < 2) return 0.0;
    return trapezoid_arc_length(line, line.size() - 1, plain);
}

// A region bounded by a closed polygon, with optional holes. Contains-tests
// use the even-odd crossing rule.
struct PolygonalRegion {
    std::vector<Point2> boundary;              // closed loop, not repeated
    std::vector<std::vector<Point2>> holes;

    bool contains(Point2 p) const {
        if (!in_loop(boundary, p)) return false;
        for (const auto& h : holes)
            if (in_loop(h, p)) return false;
        return true;
    }

    double signed_area() const {
        double a = 0.0;
        for (std::size_t i = 0; i < boundary.size(); ++i) {
            Point2 u = boundary[i];
            Point2 v = boundary[(i + 1) % boundary.size()];
            a += cross(u, v);
        }
        return 0.5 * a;
    }

    static bool in_loop(const std::vector<Point2>& loop, Point2 p) {
        bool inside = false;
        std::size_t n = loop.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            Point2 a = loop[j], b = loop[i];
            if ((b.y > p.y) != (a.y > p.y)) {
                double t = (p.y - b.y) / (a.y - b.y);
                if (p.x < b.x + t * (a.x - b.x)) inside = !inside;
            }
        }
        return inside;
    }
};

// Translate every vertex by t (cos phi, sin phi).
inline PolygonalRegion shift_region(const PolygonalRegion& region, double t, double phi) {
    if (t < 0.0) throw domain_error("shift_region: t must be nonnegative");
    Point2 d{t * std::cos(phi), t * std::sin(phi)};
    PolygonalRegion out = region;
    for (auto& p : out.boundary) p = p + d;
    for (auto& h : out.holes)
        for (auto& p : h) p = p + d;
    return out;
}

// Structured triangular mesh: a regular grid of pitch h split into two
// triangles per cell, clipped to a region predicate, with near-boundary
// nodes snapped onto the boundary.
struct TriMesh {
    std::vector<Point2> nodes;
    std::vector<std::array<std::size_t, 3>> triangles;
    double target_width = 0.0;
    double min_edge_constant = 0.0;  // min edge / target width, recorded at build

    // grid anchor used for O(1) point location
    double anchor_x = 0.0, anchor_y = 0.0;
    std::unordered_map<long long, std::vector<std::size_t>> cell_index;

    std::size_t node_count() const { return nodes.size(); }
    std::size_t triangle_count() const { return triangles.size(); }

    double triangle_area(std::size_t t) const {
        const auto& tri = triangles[t];
        Point2 a = nodes[tri[0]], b = nodes[tri[1]], c = nodes[tri[2]];
        return 0.5 * cross(b - a, c - a);
    }

    double total_area() const {
        double a = 0.0;
        for (std::size_t t = 0; t < triangles.size(); ++t) a += triangle_area(t);
        return a;
    }

    // barycentric coordinates of p in triangle t; valid when all >= -tol
    std::array<double, 3> barycentric(std::size_t t, Point2 p) const {
        const auto& tri = triangles[t];
        Point2 a = nodes[tri[0]], b = nodes[tri[1]], c = nodes[tri[2]];
        double det = cross(b - a, c - a);
        double l1 = cross(b - p, c - p) / det;
        double l2 = cross(c - p, a - p) / det;
        return {l1, l2, 1.0 - l1 - l2};
    }

    std::optional<std::size_t> locate(Point2 p) const {
        long long ci = static_cast<long long>(std::floor((p.x - anchor_x) / target_width));
        long long cj = static_cast<long long>(std::floor((p.y - anchor_y) / target_width));
        const double tol = 1e-12;
        for (long long dj = 0; dj <= 2; ++dj) {
            for (long long di = 0; di <= 2; ++di) {
                long long key = cell_key(ci + (di == 2 ? -1 : di), cj + (dj == 2 ? -1 : dj));
                auto it = cell_index.find(key);
                if (it == cell_index.end()) continue;
                for (std::size_t t : it->second) {
                    auto l = barycentric(t, p);
                    if (l[0] >= -tol && l[1] >= -tol && l[2] >= -tol) return t;
                }
            }
        }
        return std::nullopt;
    }

    static long long cell_key(long long i, long long j) {
        return (i << 24) ^ (j & 0xffffff);
    }
};

namespace detail {

// Pulls an outside point onto the region boundary by bisecting the segment
// toward an inside anchor.
template <typename Contains>
inline Point2 project_to_boundary(Contains&& inside, Point2 outside, Point2 anchor) {
    Point2 lo = anchor, hi = outside;
    for (int i = 0; i < 60; ++i) {
        Point2 mid = (lo + hi) * 0.5;
        if (inside(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace detail

// Structured grid-split-clip triangulation of an arbitrary contains-test:
// cells of pitch h anchored at the origin, each split into two triangles;
// triangles with all three nodes inside are kept; triangles with exactly
// one outside node have that node snapped onto the boundary when the snap
// stays within h/4 of its grid position.
template <typename Contains>
TriMesh triangulate_predicate(Contains&& inside, double min_x, double min_y, double max_x,
                              double max_y, double h) {
    if (h <= 0.0) throw domain_error("triangulate: width must be positive");
    TriMesh mesh;
    mesh.target_width = h;
    mesh.anchor_x = 0.0;
    mesh.anchor_y = 0.0;

    long long i0 = static_cast<long long>(std::floor(min_x / h)) - 1;
    long long i1 = static_cast<long long>(std::ceil(max_x / h)) + 1;
    long long j0 = static_cast<long long>(std::floor(min_y / h)) - 1;
    long long j1 = static_cast<long long>(std::ceil(max_y / h)) + 1;
    if ((i1 - i0) * (j1 - j0) > 40'000'000)
        throw numerical_error("triangulate: grid too large");

    std::unordered_map<long long, std::size_t> node_of_grid;
    std::unordered_map<long long, bool> inside_cache;
    auto grid_key = [](long long i, long long j) { return (i << 26) ^ (j & 0x3ffffff); };
    auto grid_point = [&](long long i, long long j) { return Point2{i * h, j * h}; };
    auto grid_inside = [&](long long i, long long j) {
        long long k = grid_key(i, j);
        auto it = inside_cache.find(k);
        if (it != inside_cache.end()) return it->second;
        bool v = inside(grid_point(i, j));
        inside_cache.emplace(k, v);
        return v;
    };

    std::unordered_map<std::size_t, Point2> snap_anchor;

    auto get_node = [&](long long i, long long j) {
        long long k = grid_key(i, j);
        auto it = node_of_grid.find(k);
        if (it != node_of_grid.end()) return it->second;
        mesh.nodes.push_back(grid_point(i, j));
        node_of_grid.emplace(k, mesh.nodes.size() - 1);
        return mesh.nodes.size() - 1;
    };

    auto try_triangle = [&](std::array<std::pair<long long, long long>, 3> vs) {
        int out_count = 0, out_idx = -1;
        for (int v = 0; v < 3; ++v) {
            if (!grid_inside(vs[v].first, vs[v].second)) {
                ++out_count;
                out_idx = v;
            }
        }
        if (out_count > 1) return;
        std::array<std::size_t, 3> tri{};
        for (int v = 0; v < 3; ++v) tri[v] = get_node(vs[v].first, vs[v].second);
        if (out_count == 1) {
            // snap the outside node toward the centroid of its inside mates
            Point2 a = mesh.nodes[tri[(out_idx + 1) % 3]];
            Point2 b = mesh.nodes[tri[(out_idx + 2) % 3]];
            Point2 anchor = (a + b) * 0.5;
            std::size_t node = tri[out_idx];
            auto it = snap_anchor.find(node);
            if (it == snap_anchor.end()) snap_anchor.emplace(node, anchor);
        }
        mesh.triangles.push_back(tri);
    };

    for (long long j = j0; j < j1; ++j) {
        for (long long i = i0; i < i1; ++i) {
            try_triangle({std::pair{i, j}, {i + 1, j}, {i + 1, j + 1}});
            try_triangle({std::pair{i, j}, {i + 1, j + 1}, {i, j + 1}});
        }
    }

    // apply snaps; a node farther than h/4 from the boundary is not snapped
    // and its triangles are dropped (sliver protection)
    std::vector<bool> snap_failed(mesh.nodes.size(), false);
    for (auto& [node, anchor] : snap_anchor) {
        if (!inside(anchor)) {
            snap_failed[node] = true;
            continue;
        }
        Point2 snapped = detail::project_to_boundary(inside, mesh.nodes[node], anchor);
        if ((snapped - mesh.nodes[node]).norm() > 0.25 * h) {
            snap_failed[node] = true;
            continue;
        }
        mesh.nodes[node] = snapped;
    }
    std::vector<std::array<std::size_t, 3>> kept;
    for (auto& tri : mesh.triangles) {
        if (snap_failed[tri[0]] || snap_failed[tri[1]] || snap_failed[tri[2]]) continue;
        Point2 a = mesh.nodes[tri[0]], b = mesh.nodes[tri[1]], c = mesh.nodes[tri[2]];
        double area = 0.5 * cross(b - a, c - a);
        if (std::fabs(area) < 1e-14) continue;
        if (area < 0.0) std::swap(tri[1], tri[2]);
        kept.push_back(tri);
    }
    mesh.triangles = std::move(kept);

    if (mesh.triangles.empty())
        throw numerical_error("triangulate: region thinner than the mesh width (no triangles)");

    // compact unused nodes
    const std::size_t unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> remap(mesh.nodes.size(), unset);
    std::vector<Point2> used_nodes;
    for (auto& tri : mesh.triangles) {
        for (auto& v : tri) {
            if (remap[v] == unset) {
                remap[v] = used_nodes.size();
                used_nodes.push_back(mesh.nodes[v]);
            }
            v = remap[v];
        }
    }
    mesh.nodes = std::move(used_nodes);

    double min_edge = inf;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int e = 0; e < 3; ++e) {
            double len = (mesh.nodes[tri[e]] - mesh.nodes[tri[(e + 1) % 3]]).norm();
            min_edge = std::min(min_edge, len);
        }
        Point2 centroid = (mesh.nodes[tri[0]] + mesh.nodes[tri[1]] + mesh.nodes[tri[2]]) *
                          (1.0 / 3.0);
        long long ci = static_cast<long long>(std::floor(centroid.x / h));
        long long cj = static_cast<long long>(std::floor(centroid.y / h));
        mesh.cell_index[TriMesh::cell_key(ci, cj)].push_back(t);
    }
    mesh.min_edge_constant = min_edge / h;
    return mesh;
}

inline TriMesh triangulate(const PolygonalRegion& region, double h) {
    double min_x = inf, min_y = inf, max_x = -inf, max_y = -inf;
    for (const auto& p : region.boundary) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    if (region.boundary.size() < 3) throw domain_error("triangulate: empty region");
    // grid nodes landing exactly on a polygon edge count as inside
    double eps = 1e-9 * h;
    auto inside = [&, eps](Point2 p) {
        if (region.contains(p)) return true;
        for (Point2 d : {Point2{eps, eps}, {eps, -eps}, {-eps, eps}, {-eps, -eps}})
            if (region.contains(p + d)) return true;
        return false;
    };
    return triangulate_predicate(inside, min_x, min_y, max_x, max_y, h);
}

// Node values interpolated linearly inside each triangle (the hat-function
// basis). Queries outside the mesh return the outside marker.
struct PiecewiseLinearField {
    const TriMesh* mesh = nullptr;
    std::vector<double> node_values;

    static constexpr double outside_marker = std::numeric_limits<double>::quiet_NaN();

    double value_in_triangle(std::size_t t, Point2 p) const {
        auto l = mesh->barycentric(t, p);
        const auto& tri = mesh->triangles[t];
        return l[0] * node_values[tri[0]] + l[1] * node_values[tri[1]] +
               l[2] * node_values[tri[2]];
    }

    // outside-marker (NaN) when p is outside the mesh
    double operator()(Point2 p) const {
        auto t = mesh->locate(p);
        if (!t) return outside_marker;
        return value_in_triangle(*t, p);
    }

    double value_or_zero(Point2 p) const {
        double v = (*this)(p);
        return std::isnan(v) ? 0.0 : v;
    }

    // exact gradient of the linear interpolant on triangle t
    Point2 triangle_gradient(std::size_t t) const {
        const auto& tri = mesh->triangles[t];
        Point2 a = mesh->nodes[tri[0]], b = mesh->nodes[tri[1]], c = mesh->nodes[tri[2]];
        double det = cross(b - a, c - a);
        if (std::fabs(det) < 1e-14)
            throw numerical_error("field_gradient: degenerate triangle");
        double va = node_values[tri[0]], vb = node_values[tri[1]], vc = node_values[tri[2]];
        // grad = sum_v value_v * grad(hat_v)
        Point2 ga{(b.y - c.y) / det, (c.x - b.x) / det};
        Point2 gb{(c.y - a.y) / det, (a.x - c.x) / det};
        Point2 gc{(a.y - b.y) / det, (b.x - a.x) / det};
        return ga * va + gb * vb + gc * vc;
    }

    // area-weighted average of the incident triangle gradients at a node
    Point2 node_gradient(std::size_t node, const std::vector<std::vector<std::size_t>>& incident) const {
        double wsum = 0.0;
        Point2 g{0.0, 0.0};
        for (std::size_t t : incident[node]) {
            double a = std::fabs(mesh->triangle_area(t));
            g = g + triangle_gradient(t) * a;
            wsum += a;
        }
        if (wsum <= 0.0) throw numerical_error("field_gradient: isolated node");
        return g * (1.0 / wsum);
    }
};

inline std::vector<Point2> field_gradient(const PiecewiseLinearField& field) {
    std::vector<Point2> out(field.mesh->triangle_count());
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = field.triangle_gradient(t);
    return out;
}

inline std::vector<std::vector<std::size_t>> node_incidence(const TriMesh& mesh) {
    std::vector<std::vector<std::size_t>> incident(mesh.node_count());
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t)
        for (std::size_t v : mesh.triangles[t]) incident[v].push_back(t);
    return incident;
}

inline double locate_and_interpolate(const PiecewiseLinearField& field, Point2 p) {
    return field(p);
}

// Plain-text mesh serialization: node count, coordinate lines, triangle
// count, index triples.
inline void write_mesh(std::ostream& os, const TriMesh& mesh) {
    os << mesh.node_count() << "\n";
    os.precision(17);
    for (const auto& p : mesh.nodes) os << p.x << " " << p.y << "\n";
    os << mesh.triangle_count() << "\n";
    for (const auto& t : mesh.triangles) os << t[0] << " " << t[1] << " " << t[2] << "\n";
}

inline TriMesh read_mesh(std::istream& is) {
    TriMesh mesh;
    std::size_t n = 0;
    is >> n;
    mesh.nodes.resize(n);
    for (auto& p : mesh.nodes) is >> p.x >> p.y;
    std::size_t m = 0;
    is >> m;
    mesh.triangles.resize(m);
    for (auto& t : mesh.triangles) is >> t[0] >> t[1] >> t[2];
    if (!is) throw config_error("read_mesh: malformed mesh text");
    return mesh;
}

}  // namespace wcp
