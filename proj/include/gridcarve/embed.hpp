#pragma once

#include <cmath>
#include <cstdlib>
#include <queue>
#include <string>
#include <thread>
#include <vector>

#include "gridcarve/errors.hpp"
#include "gridcarve/geometry.hpp"

namespace gridcarve {

// Uniform grid over the rectangle R. Nodes sit at (x0 + j*dx, y0 + k*dy) for
// j = 0..mx, k = 0..my; the global node order is k-major (k outer, j inner).
struct GridSpec {
    Rect box;
    double dx = 0.0, dy = 0.0;
    int mx = 0, my = 0;

    double x(int j) const { return box.x0 + j * dx; }
    double y(int k) const { return box.y0 + k * dy; }
    int nx() const { return mx + 1; }
    int ny() const { return my + 1; }
    std::size_t node_count() const { return std::size_t(nx()) * std::size_t(ny()); }
    std::size_t node_index(int j, int k) const {
        return std::size_t(k) * std::size_t(nx()) + std::size_t(j);
    }
};

enum class NodeClass : unsigned char { Interior, Boundary, Exterior };
enum class MeshVariant { OverBar, UnderBar };

// Node classification of G_R against the domain.
//
// OverBar: interior nodes are the grid nodes strictly inside the domain;
// boundary nodes are the remaining nodes 4-adjacent to an interior node
// (they may lie outside the domain and carry Dirichlet data there).
//
// UnderBar: starting from the nodes inside the domain, those with a
// non-inside 4-neighbor are demoted to boundary carriers; the rest stay
// interior. Every UnderBar node lies inside the domain.
//
// Diagonal neighbors contribute nothing to the 5-point stencil, so grid
// nodes touching the interior only diagonally stay Exterior.
struct EmbeddedMesh {
    GridSpec grid;
    MeshVariant variant = MeshVariant::OverBar;
    std::vector<NodeClass> node_class; // k-major, size grid.node_count()
    int interior_count = 0;
    int boundary_count = 0;

    NodeClass cls(int j, int k) const { return node_class[grid.node_index(j, k)]; }
    bool in_grid(int j, int k) const {
        return j >= 0 && j <= grid.mx && k >= 0 && k <= grid.my;
    }
};

// R = bbox padded outward by exactly one spacing per side.
inline GridSpec build_rectangle(const DomainSpec& d, double dx, double dy) {
    if (dx <= 0.0 || dy <= 0.0)
        throw MeshError("grid spacings must be positive");
    Rect b = d.bounding_box();
    Rect r{b.x0 - dx, b.y0 - dy, b.x1 + dx, b.y1 + dy};
    GridSpec g{r, dx, dy, 0, 0};
    g.mx = int(std::ceil(r.width() / dx - 1e-9));
    g.my = int(std::ceil(r.height() / dy - 1e-9));
    if (g.mx < 2 || g.my < 2)
        throw MeshError("grid is degenerate: fewer than 3 nodes per axis");
    return g;
}

// Fixed rectangle; must contain the domain.
inline GridSpec build_rectangle(const DomainSpec& d, const Rect& fixed, double dx, double dy) {
    if (dx <= 0.0 || dy <= 0.0)
        throw MeshError("grid spacings must be positive");
    Rect b = d.bounding_box();
    if (!fixed.contains(b, 1e-12 * std::max(std::abs(b.x1), 1.0)))
        throw MeshError("fixed rectangle does not contain the domain");
    GridSpec g{fixed, dx, dy, 0, 0};
    g.mx = int(std::ceil(fixed.width() / dx - 1e-9));
    g.my = int(std::ceil(fixed.height() / dy - 1e-9));
    if (g.mx < 2 || g.my < 2)
        throw MeshError("grid is degenerate: fewer than 3 nodes per axis");
    return g;
}

inline EmbeddedMesh build_mesh(const DomainSpec& d, const GridSpec& g, MeshVariant variant,
                               double eps = -1.0) {
    if (eps < 0.0)
        eps = d.default_eps();

    EmbeddedMesh m;
    m.grid = g;
    m.variant = variant;
    m.node_class.assign(g.node_count(), NodeClass::Exterior);

    std::vector<char> inside(g.node_count(), 0);
    for (int k = 0; k <= g.my; ++k)
        for (int j = 0; j <= g.mx; ++j)
            inside[g.node_index(j, k)] =
                d.classify(g.x(j), g.y(k), eps) == PointClass::Inside ? 1 : 0;

    auto inside_at = [&](int j, int k) {
        return j >= 0 && j <= g.mx && k >= 0 && k <= g.my && inside[g.node_index(j, k)];
    };

    static constexpr int off[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    if (variant == MeshVariant::OverBar) {
        for (int k = 0; k <= g.my; ++k) {
            for (int j = 0; j <= g.mx; ++j) {
                std::size_t idx = g.node_index(j, k);
                if (inside[idx]) {
                    m.node_class[idx] = NodeClass::Interior;
                    continue;
                }
                for (auto& o : off) {
                    if (inside_at(j + o[0], k + o[1])) {
                        m.node_class[idx] = NodeClass::Boundary;
                        break;
                    }
                }
            }
        }
    } else {
        for (int k = 0; k <= g.my; ++k) {
            for (int j = 0; j <= g.mx; ++j) {
                std::size_t idx = g.node_index(j, k);
                if (!inside[idx])
                    continue;
                bool all_in = true;
                for (auto& o : off)
                    all_in = all_in && inside_at(j + o[0], k + o[1]);
                m.node_class[idx] = all_in ? NodeClass::Interior : NodeClass::Boundary;
            }
        }
    }

    for (std::size_t i = 0; i < m.node_class.size(); ++i) {
        if (m.node_class[i] == NodeClass::Interior)
            ++m.interior_count;
        else if (m.node_class[i] == NodeClass::Boundary)
            ++m.boundary_count;
    }
    if (m.interior_count == 0)
        throw MeshError("empty interior: no grid node falls inside the domain "
                        "(spacing too coarse)");

    // every unknown needs all four axis neighbors present in the grid
    for (int k = 0; k <= g.my; ++k)
        for (int j = 0; j <= g.mx; ++j)
            if (m.cls(j, k) == NodeClass::Interior && (j == 0 || j == g.mx || k == 0 || k == g.my))
                throw MeshError("interior node on the grid edge: rectangle does not cover "
                                "the domain with margin");
    return m;
}

// True iff every interior node of the mesh has its four axis neighbors
// classified Interior or Boundary.
inline bool stencil_complete(const EmbeddedMesh& m) {
    static constexpr int off[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (int k = 0; k <= m.grid.my; ++k) {
        for (int j = 0; j <= m.grid.mx; ++j) {
            if (m.cls(j, k) != NodeClass::Interior)
                continue;
            for (auto& o : off) {
                int jj = j + o[0], kk = k + o[1];
                if (!m.in_grid(jj, kk) || m.cls(jj, kk) == NodeClass::Exterior)
                    return false;
            }
        }
    }
    return true;
}

// True iff the interior nodes form a single 4-connected component.
inline bool check_connectivity(const EmbeddedMesh& m) {
    if (m.interior_count < 1)
        throw MeshError("connectivity check needs at least one interior node");
    std::vector<char> seen(m.grid.node_count(), 0);
    std::queue<std::pair<int, int>> q;
    for (int k = 0; k <= m.grid.my && q.empty(); ++k)
        for (int j = 0; j <= m.grid.mx && q.empty(); ++j)
            if (m.cls(j, k) == NodeClass::Interior) {
                q.push({j, k});
                seen[m.grid.node_index(j, k)] = 1;
            }
    int reached = 0;
    static constexpr int off[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    while (!q.empty()) {
        auto [j, k] = q.front();
        q.pop();
        ++reached;
        for (auto& o : off) {
            int jj = j + o[0], kk = k + o[1];
            if (!m.in_grid(jj, kk) || m.cls(jj, kk) != NodeClass::Interior)
                continue;
            std::size_t idx = m.grid.node_index(jj, kk);
            if (!seen[idx]) {
                seen[idx] = 1;
                q.push({jj, kk});
            }
        }
    }
    return reached == m.interior_count;
}

inline int thread_budget() {
    const char* env = std::getenv("GRIDCARVE_THREADS");
    if (!env)
        return 1;
    int n = std::atoi(env);
    if (n == 0)
        n = int(std::thread::hardware_concurrency());
    return n > 0 ? n : 1;
}

// Area of the symmetric difference between the region induced by the mesh
// and the domain, estimated with samples_per_cell^2 stratified points per
// grid cell.
//
// A cell belongs to the induced region when all four of its corners belong
// to the mesh. For the OverBar variant the membership additionally counts
// nodes that touch an interior node diagonally: they carry no stencil data
// but close the induced boundary, so a grid-aligned rectangle induces
// exactly its own area.
//
// Per-cell mismatch counts are integers and are reduced in cell order, so
// the result is identical for any thread count.
inline double induced_region_area_error(const EmbeddedMesh& m, const DomainSpec& d,
                                        int samples_per_cell) {
    if (samples_per_cell < 1)
        throw MeshError("samples_per_cell must be >= 1");
    const GridSpec& g = m.grid;
    double eps = d.default_eps();

    std::vector<char> member(g.node_count(), 0);
    for (int k = 0; k <= g.my; ++k) {
        for (int j = 0; j <= g.mx; ++j) {
            if (m.cls(j, k) != NodeClass::Exterior) {
                member[g.node_index(j, k)] = 1;
                continue;
            }
            if (m.variant != MeshVariant::OverBar)
                continue;
            for (int dk = -1; dk <= 1 && !member[g.node_index(j, k)]; ++dk)
                for (int dj = -1; dj <= 1; ++dj)
                    if (m.in_grid(j + dj, k + dk) &&
                        m.cls(j + dj, k + dk) == NodeClass::Interior) {
                        member[g.node_index(j, k)] = 1;
                        break;
                    }
        }
    }

    const int cx = g.mx, cy = g.my; // cells per axis
    const std::size_t ncells = std::size_t(cx) * std::size_t(cy);
    std::vector<int> mismatch(ncells, 0);

    auto work = [&](std::size_t c0, std::size_t c1) {
        for (std::size_t c = c0; c < c1; ++c) {
            int j = int(c % std::size_t(cx));
            int k = int(c / std::size_t(cx));
            bool induced = member[g.node_index(j, k)] && member[g.node_index(j + 1, k)] &&
                           member[g.node_index(j, k + 1)] && member[g.node_index(j + 1, k + 1)];
            int count = 0;
            for (int sy = 0; sy < samples_per_cell; ++sy) {
                double y = g.y(k) + (sy + 0.5) * g.dy / samples_per_cell;
                for (int sx = 0; sx < samples_per_cell; ++sx) {
                    double x = g.x(j) + (sx + 0.5) * g.dx / samples_per_cell;
                    bool in_domain = d.classify(x, y, eps) == PointClass::Inside;
                    if (induced != in_domain)
                        ++count;
                }
            }
            mismatch[c] = count;
        }
    };

    int nthreads = std::min<int>(thread_budget(), int(ncells));
    if (nthreads <= 1) {
        work(0, ncells);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (ncells + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            std::size_t lo = t * chunk;
            std::size_t hi = std::min(ncells, lo + chunk);
            if (lo < hi)
                pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool)
            th.join();
    }

    double cell_area = g.dx * g.dy / (double(samples_per_cell) * double(samples_per_cell));
    double total = 0.0;
    for (std::size_t c = 0; c < ncells; ++c)
        total += mismatch[c] * cell_area;
    return total;
}

} // namespace gridcarve
