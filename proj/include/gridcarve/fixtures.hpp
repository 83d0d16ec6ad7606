#pragma once

#include <string>
#include <vector>

#include "gridcarve/geometry.hpp"

namespace gridcarve {

inline std::vector<Point> star_vertices() {
    return {{1.1, 8},  {5.6, 8},  {7, 12.25}, {8.4, 8}, {12.8, 8},
            {9.2, 5.4}, {10.5, 1}, {7, 3.6},   {3.5, 1}, {4.8, 5.4}};
}

// Named domains used by the shipped configs and the test suites.
//
//   parabola     — region bounded by y = x^2, the line x = 1 and the x-axis
//   dome         — region bounded by y = x - x^2 and the x-axis
//   unit_square  — [0,1]^2
//   triangle, pentagon, star — vertex lists from the survey geometry set
//   rect_annulus — rectangle with a rectangular hole
//   star_annulus — star with a half-scale star hole
//   flower       — smoothed four-petal implicit curve (synthetic, no exact
//                  reference values)
inline DomainSpec make_fixture(const std::string& name) {
    if (name == "parabola") {
        std::vector<Expr> g;
        g.push_back(Expr::parse("y - x^2"));
        g.push_back(Expr::parse("-y"));
        g.push_back(Expr::parse("x - 1"));
        g.push_back(Expr::parse("-x"));
        return DomainSpec::curve_bounded(std::move(g), Rect{-0.5, -0.5, 1.5, 1.5})
            .with_bbox(Rect{0.0, 0.0, 1.0, 1.0});
    }
    if (name == "dome") {
        std::vector<Expr> g;
        g.push_back(Expr::parse("y - (x - x^2)"));
        g.push_back(Expr::parse("-y"));
        return DomainSpec::curve_bounded(std::move(g), Rect{-0.2, -0.2, 1.2, 0.5})
            .with_bbox(Rect{0.0, 0.0, 1.0, 0.25});
    }
    if (name == "unit_square")
        return DomainSpec::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    if (name == "triangle")
        return DomainSpec::polygon({{1, 1}, {13, 1}, {7, 12.25}});
    if (name == "pentagon")
        return DomainSpec::polygon({{1.1, 8}, {7, 12.25}, {12.8, 8}, {10.5, 1}, {3.5, 1}});
    if (name == "star")
        return DomainSpec::polygon(star_vertices());
    if (name == "rect_annulus")
        return DomainSpec::difference(
            DomainSpec::polygon({{1, 1}, {12, 1}, {12, 9}, {1, 9}}),
            DomainSpec::polygon({{4, 3}, {9, 3}, {9, 7}, {4, 7}}));
    if (name == "star_annulus") {
        std::vector<Point> outer = star_vertices();
        double cx = 0.0, cy = 0.0;
        for (const Point& p : outer) {
            cx += p.x / outer.size();
            cy += p.y / outer.size();
        }
        std::vector<Point> inner;
        for (const Point& p : outer)
            inner.push_back({cx + 0.5 * (p.x - cx), cy + 0.5 * (p.y - cy)});
        return DomainSpec::difference(DomainSpec::polygon(std::move(outer)),
                                      DomainSpec::polygon(std::move(inner)));
    }
    if (name == "flower")
        return DomainSpec::implicit(Expr::parse("(x^2+y^2)^1.5 - (x^2-y^2) - 0.05"),
                                    Rect{-1.3, -1.3, 1.3, 1.3});
    throw GeometryError("unknown fixture '" + name + "'");
}

inline const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names = {
        "parabola", "dome", "unit_square", "triangle", "pentagon",
        "star",     "rect_annulus", "star_annulus", "flower"};
    return names;
}

} // namespace gridcarve
