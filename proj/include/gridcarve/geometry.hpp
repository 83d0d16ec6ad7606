#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gridcarve/errors.hpp"
#include "gridcarve/expr.hpp"

namespace gridcarve {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    bool contains(const Rect& o, double eps = 0.0) const {
        return o.x0 >= x0 - eps && o.y0 >= y0 - eps && o.x1 <= x1 + eps && o.y1 <= y1 + eps;
    }
};

enum class PointClass { Inside, OnBoundary, Outside };

// Irregular planar domain. One of:
//   polygon       — simple closed vertex loop, even-odd membership
//   implicit      — phi(x,y) with phi<0 inside, phi=0 on the boundary
//   curve_bounded — intersection of constraints g_i(x,y) <= 0
//   difference    — outer domain minus an inner hole
//
// Implicit and curve-bounded specs carry a search window used by
// bounding_box() when no exact box was declared. Immutable after
// construction; classification is pure and thread-safe.
class DomainSpec {
public:
    static DomainSpec polygon(std::vector<Point> vertices) {
        validate_polygon(vertices);
        DomainSpec d;
        d.data_ = PolygonData{std::move(vertices)};
        return d;
    }

    static DomainSpec implicit(Expr phi, std::optional<Rect> window = std::nullopt) {
        DomainSpec d;
        d.data_ = ImplicitData{std::move(phi), window};
        return d;
    }

    static DomainSpec curve_bounded(std::vector<Expr> constraints,
                                    std::optional<Rect> window = std::nullopt) {
        if (constraints.empty())
            throw GeometryError("curve-bounded domain needs at least one constraint");
        DomainSpec d;
        d.data_ = CurveData{std::move(constraints), window};
        return d;
    }

    static DomainSpec difference(DomainSpec outer, DomainSpec inner) {
        check_inner_inside_outer(outer, inner);
        DomainSpec d;
        d.data_ = DiffData{std::make_shared<const DomainSpec>(std::move(outer)),
                           std::make_shared<const DomainSpec>(std::move(inner))};
        return d;
    }

    // Declares the exact bounding box, bypassing the sampled estimate. Grid
    // construction relies on exact boxes to keep lattice nodes on round
    // coordinates.
    DomainSpec& with_bbox(Rect r) {
        declared_bbox_ = r;
        return *this;
    }

    PointClass classify(double x, double y, double eps) const {
        if (eps < 0.0)
            throw GeometryError("classification tolerance must be >= 0");
        return std::visit([&](const auto& d) { return classify_impl(d, x, y, eps); }, data_);
    }

    // Tolerance scaled to the domain extent: 1e-9 * max(|xmax|, |ymax|, 1).
    double default_eps() const {
        double sx = 1.0, sy = 1.0;
        if (declared_bbox_) {
            sx = std::abs(declared_bbox_->x1);
            sy = std::abs(declared_bbox_->y1);
        } else if (const auto* p = std::get_if<PolygonData>(&data_)) {
            Rect b = polygon_bbox(p->vertices);
            sx = std::abs(b.x1);
            sy = std::abs(b.y1);
        } else if (const auto* i = std::get_if<ImplicitData>(&data_)) {
            if (i->window) { sx = std::abs(i->window->x1); sy = std::abs(i->window->y1); }
        } else if (const auto* c = std::get_if<CurveData>(&data_)) {
            if (c->window) { sx = std::abs(c->window->x1); sy = std::abs(c->window->y1); }
        } else if (const auto* f = std::get_if<DiffData>(&data_)) {
            return f->outer->default_eps();
        }
        return 1e-9 * std::max({sx, sy, 1.0});
    }

    // Polygon boxes are exact vertex extrema. Implicit/curve-bounded boxes
    // are estimated over `resolution`^2 samples of the search window and
    // padded outward by one sample spacing, unless an exact box was declared.
    Rect bounding_box(int resolution = 2048) const {
        if (declared_bbox_)
            return *declared_bbox_;
        if (const auto* p = std::get_if<PolygonData>(&data_))
            return polygon_bbox(p->vertices);
        if (const auto* f = std::get_if<DiffData>(&data_))
            return f->outer->bounding_box(resolution);

        const std::optional<Rect>* window = nullptr;
        if (const auto* i = std::get_if<ImplicitData>(&data_))
            window = &i->window;
        else
            window = &std::get<CurveData>(data_).window;
        if (!*window)
            throw GeometryError("bounding box of an implicit domain needs a search window "
                                "or a declared box");
        return sampled_bbox(**window, resolution);
    }

private:
    struct PolygonData {
        std::vector<Point> vertices;
    };
    struct ImplicitData {
        Expr phi;
        std::optional<Rect> window;
    };
    struct CurveData {
        std::vector<Expr> constraints; // inside iff all g_i < 0
        std::optional<Rect> window;
    };
    struct DiffData {
        std::shared_ptr<const DomainSpec> outer;
        std::shared_ptr<const DomainSpec> inner;
    };

    std::variant<PolygonData, ImplicitData, CurveData, DiffData> data_;
    std::optional<Rect> declared_bbox_;

    static Rect polygon_bbox(const std::vector<Point>& v) {
        Rect r{v[0].x, v[0].y, v[0].x, v[0].y};
        for (const Point& p : v) {
            r.x0 = std::min(r.x0, p.x);
            r.y0 = std::min(r.y0, p.y);
            r.x1 = std::max(r.x1, p.x);
            r.y1 = std::max(r.y1, p.y);
        }
        return r;
    }

    static void validate_polygon(const std::vector<Point>& v) {
        if (v.size() < 3)
            throw GeometryError("polygon needs at least 3 vertices");
        std::size_t n = v.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point& a = v[i];
            const Point& b = v[(i + 1) % n];
            if (a.x == b.x && a.y == b.y)
                throw GeometryError("polygon has duplicate consecutive vertices at index " +
                                    std::to_string(i));
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                // skip edges sharing a vertex
                if (j == i || (j + 1) % n == i || (i + 1) % n == j)
                    continue;
                if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
                    throw GeometryError("polygon edges " + std::to_string(i) + " and " +
                                        std::to_string(j) + " intersect");
            }
        }
    }

    static double cross(const Point& o, const Point& a, const Point& b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    }

    static bool segments_intersect(const Point& a, const Point& b, const Point& c,
                                   const Point& d) {
        double d1 = cross(c, d, a);
        double d2 = cross(c, d, b);
        double d3 = cross(a, b, c);
        double d4 = cross(a, b, d);
        if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
            ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
            return true;
        auto on = [](const Point& p, const Point& q, const Point& r) {
            return cross(p, q, r) == 0.0 && std::min(p.x, q.x) <= r.x &&
                   r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
                   r.y <= std::max(p.y, q.y);
        };
        return on(a, b, c) || on(a, b, d) || on(c, d, a) || on(c, d, b);
    }

    static double point_segment_distance(double px, double py, const Point& a, const Point& b) {
        double vx = b.x - a.x, vy = b.y - a.y;
        double wx = px - a.x, wy = py - a.y;
        double c1 = vx * wx + vy * wy;
        double c2 = vx * vx + vy * vy;
        double s = c2 > 0.0 ? std::clamp(c1 / c2, 0.0, 1.0) : 0.0;
        double dx = px - (a.x + s * vx), dy = py - (a.y + s * vy);
        return std::hypot(dx, dy);
    }

    PointClass classify_impl(const PolygonData& d, double px, double py, double eps) const {
        for (std::size_t i = 0; i < d.vertices.size(); ++i) {
            const Point& a = d.vertices[i];
            const Point& b = d.vertices[(i + 1) % d.vertices.size()];
            if (point_segment_distance(px, py, a, b) <= eps)
                return PointClass::OnBoundary;
        }
        return ray_cast_inside(d.vertices, px, py) ? PointClass::Inside : PointClass::Outside;
    }

    // Even-odd rule. The ray direction is rotated away from any vertex it
    // would pass through.
    static bool ray_cast_inside(const std::vector<Point>& v, double px, double py) {
        double scale = 1.0;
        for (const Point& p : v)
            scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
        double theta = 0.0;
        for (int attempt = 0; attempt < 32; ++attempt) {
            double dx = std::cos(theta), dy = std::sin(theta);
            bool degenerate = false;
            int crossings = 0;
            for (std::size_t i = 0; i < v.size() && !degenerate; ++i) {
                const Point& a = v[i];
                const Point& b = v[(i + 1) % v.size()];
                // solve p + s*(dx,dy) = a + u*(b-a)
                double ex = b.x - a.x, ey = b.y - a.y;
                double det = dx * ey - dy * ex;
                if (std::abs(det) <= 1e-14 * scale) {
                    // ray parallel to edge; if collinear and overlapping the
                    // point would have classified OnBoundary already, so a
                    // parallel miss is safe unless an endpoint sits on the ray
                    double se = ((a.x - px) * dy - (a.y - py) * dx);
                    if (std::abs(se) <= 1e-12 * scale)
                        degenerate = true;
                    continue;
                }
                double s = ((a.x - px) * ey - (a.y - py) * ex) / det;
                double u = ((a.x - px) * dy - (a.y - py) * dx) / det;
                if (s <= 0.0)
                    continue;
                if (u <= 1e-12 || u >= 1.0 - 1e-12) {
                    if (u > -1e-12 && u < 1.0 + 1e-12)
                        degenerate = true; // ray grazes a vertex: rotate and retry
                    continue;
                }
                ++crossings;
            }
            if (!degenerate)
                return (crossings % 2) == 1;
            theta += 1e-4 * (attempt + 1);
        }
        throw GeometryError("ray casting failed to find a non-degenerate direction");
    }

    PointClass classify_impl(const ImplicitData& d, double x, double y, double eps) const {
        double phi = d.phi.eval(x, y);
        if (std::abs(phi) <= eps)
            return PointClass::OnBoundary;
        return phi < 0.0 ? PointClass::Inside : PointClass::Outside;
    }

    PointClass classify_impl(const CurveData& d, double x, double y, double eps) const {
        bool boundary = false;
        for (const Expr& g : d.constraints) {
            double v = g.eval(x, y);
            if (v > eps)
                return PointClass::Outside;
            if (v >= -eps)
                boundary = true;
        }
        return boundary ? PointClass::OnBoundary : PointClass::Inside;
    }

    PointClass classify_impl(const DiffData& d, double x, double y, double eps) const {
        PointClass outer = d.outer->classify(x, y, eps);
        if (outer == PointClass::Outside)
            return PointClass::Outside;
        PointClass inner = d.inner->classify(x, y, eps);
        if (outer == PointClass::OnBoundary)
            return PointClass::OnBoundary;
        // strictly inside the outer domain
        if (inner == PointClass::Inside)
            return PointClass::Outside;
        if (inner == PointClass::OnBoundary)
            return PointClass::OnBoundary;
        return PointClass::Inside;
    }

    Rect sampled_bbox(const Rect& window, int resolution) const {
        if (resolution < 2)
            throw GeometryError("bounding-box sample resolution must be >= 2");
        double hx = window.width() / (resolution - 1);
        double hy = window.height() / (resolution - 1);
        double eps = default_eps();
        bool any = false;
        Rect r{};
        for (int k = 0; k < resolution; ++k) {
            double y = window.y0 + k * hy;
            for (int j = 0; j < resolution; ++j) {
                double x = window.x0 + j * hx;
                if (classify(x, y, eps) == PointClass::Outside)
                    continue;
                if (!any) {
                    r = Rect{x, y, x, y};
                    any = true;
                } else {
                    r.x0 = std::min(r.x0, x);
                    r.y0 = std::min(r.y0, y);
                    r.x1 = std::max(r.x1, x);
                    r.y1 = std::max(r.y1, y);
                }
            }
        }
        if (!any)
            throw GeometryError("search window contains no point of the domain");
        return Rect{r.x0 - hx, r.y0 - hy, r.x1 + hx, r.y1 + hy};
    }

    // Construction-time check that the hole is strictly inside the outer
    // domain, sampled over 1000 points of the inner region.
    static void check_inner_inside_outer(const DomainSpec& outer, const DomainSpec& inner) {
        Rect b = inner.bounding_box(256);
        double eps = inner.default_eps();
        int found = 0;
        const int grid = 64; // 64^2 candidates, keep the first 1000 hits
        for (int k = 0; k < grid && found < 1000; ++k) {
            double y = b.y0 + (k + 0.5) * b.height() / grid;
            for (int j = 0; j < grid && found < 1000; ++j) {
                double x = b.x0 + (j + 0.5) * b.width() / grid;
                if (inner.classify(x, y, eps) != PointClass::Inside)
                    continue;
                ++found;
                if (outer.classify(x, y, eps) != PointClass::Inside)
                    throw GeometryError("difference domain: inner region is not strictly "
                                        "inside the outer region");
            }
        }
        if (found == 0)
            throw GeometryError("difference domain: inner region has no sampled interior");
    }
};

inline PointClass classify_point(const DomainSpec& d, double x, double y, double eps) {
    return d.classify(x, y, eps);
}

inline Rect bounding_box(const DomainSpec& d, int resolution = 2048) {
    return d.bounding_box(resolution);
}

} // namespace gridcarve
