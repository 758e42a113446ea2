#pragma once

#include <coam/amoeba.hpp>
#include <coam/regions.hpp>
#include <coam/shell.hpp>

#include <fstream>
#include <queue>

namespace coam {

/// Hit-count raster over the angle torus [0, 2pi)^2, pixel (ix, iy) covering
/// the square with corner (ix, iy) * 2pi/G; ix follows theta_1.
struct TorusRaster {
    int G = 512;
    std::vector<std::uint32_t> counts;  // iy * G + ix
    long long samples = 0;              // fibers attempted
    long long failures = 0;             // degenerate slices skipped
    std::uint64_t seed = 42;
    std::vector<long long> colFibers, colRoots;  // per theta_1 column
    std::vector<double> xLo, xHi;                // sampled log-modulus window

    std::uint32_t& at(int ix, int iy) { return counts[(std::size_t)iy * G + ix]; }
    std::uint32_t at(int ix, int iy) const { return counts[(std::size_t)iy * G + ix]; }
    double pixel() const { return kTwoPi / G; }
};

struct SampleOptions {
    long long samples = 200000;
    std::uint64_t seed = 42;
    int grid = 512;
    std::vector<double> xLo, xHi;  // defaults to the padded spine box
};

/// Monte Carlo image of Arg(V_f) for n = 2: draw one variable with
/// log-uniform modulus over the window and a column-stratified angle, solve
/// the slice in the other, and splat one hit per root. Fibers alternate
/// between the two axes when both degrees allow it; column statistics (mean
/// root count per theta_1 fiber, for the multiplicity-weighted area) come
/// from the theta_1-fixed fibers alone.
inline TorusRaster sample_coamoeba(const LaurentPolynomial& p, const SampleOptions& opts = {}) {
    if (p.n != 2) throw error("sample_coamoeba: n = 2 only");
    TorusRaster r;
    r.G = opts.grid;
    r.counts.assign((std::size_t)r.G * r.G, 0);
    r.colFibers.assign(r.G, 0);
    r.colRoots.assign(r.G, 0);
    r.samples = opts.samples;
    r.seed = opts.seed;
    r.xLo = opts.xLo;
    r.xHi = opts.xHi;
    if (r.xLo.size() != 2 || r.xHi.size() != 2) {
        default_search_box(p, r.xLo, r.xHi, 5.0);
    }
    bool dual = false;  // solve along both axes when each carries a variable
    {
        bool v0 = false, v1 = false;
        for (const auto& t : p.terms) {
            v0 |= t.exp[0] != 0;
            v1 |= t.exp[1] != 0;
        }
        dual = v0 && v1;
    }
    Rng rng{opts.seed};
    for (long long s = 0; s < opts.samples; ++s) {
        int axis = dual ? (int)(s & 1) : 1;  // axis = solved variable
        int fixed = 1 - axis;
        long long idx = dual ? s / 2 : s;
        double u1 = rng.uniform(1 + (std::uint64_t)axis * 7, (std::uint64_t)idx);
        double u2 = rng.uniform(3 + (std::uint64_t)axis * 7, (std::uint64_t)idx);
        double tF = kTwoPi * (((double)(idx % r.G)) + u1) / r.G;  // stratified angle
        double xF = r.xLo[fixed] + (r.xHi[fixed] - r.xLo[fixed]) * u2;
        std::vector<Cplx> at(2, Cplx(0, 0));
        at[fixed] = std::polar(std::exp(xF), tF);
        std::vector<Cplx> roots;
        try {
            roots = solve_slice(p, axis, at);
        } catch (const degenerate_error&) {
            ++r.failures;
            continue;
        }
        int iF = std::min(r.G - 1, (int)(tF / kTwoPi * r.G));
        if (axis == 1) {
            ++r.colFibers[iF];
            r.colRoots[iF] += (long long)roots.size();
        }
        for (const auto& w : roots) {
            double tS = wrap_angle(std::arg(w));
            int iS = std::min(r.G - 1, (int)(tS / kTwoPi * r.G));
            if (axis == 1)
                ++r.at(iF, iS);
            else
                ++r.at(iS, iF);
        }
    }
    return r;
}

/// Rasterize exact regions onto the same grid: polygon interiors are filled
/// at pixel centers with their multiplicities; isolated points splat single
/// pixels.
inline TorusRaster rasterize_regions(const TorusRegionSet& rs, int G = 512) {
    TorusRaster r;
    r.G = G;
    r.counts.assign((std::size_t)G * G, 0);
    r.colFibers.assign(G, 0);
    r.colRoots.assign(G, 0);
    double px = r.pixel();
    for (const auto& poly : rs.polygons) {
        double lo0 = poly.verts[0][0], hi0 = lo0, lo1 = poly.verts[0][1], hi1 = lo1;
        for (const auto& v : poly.verts) {
            lo0 = std::min(lo0, v[0]);
            hi0 = std::max(hi0, v[0]);
            lo1 = std::min(lo1, v[1]);
            hi1 = std::max(hi1, v[1]);
        }
        for (int ix = (int)std::floor(lo0 / px) - 1; ix <= (int)std::ceil(hi0 / px); ++ix)
            for (int iy = (int)std::floor(lo1 / px) - 1; iy <= (int)std::ceil(hi1 / px); ++iy) {
                double cx = (ix + 0.5) * px, cy = (iy + 0.5) * px;
                bool inside = true;
                for (std::size_t i = 0; i < poly.verts.size() && inside; ++i) {
                    const auto& a = poly.verts[i];
                    const auto& b = poly.verts[(i + 1) % poly.verts.size()];
                    double cr = (b[0] - a[0]) * (cy - a[1]) - (b[1] - a[1]) * (cx - a[0]);
                    inside = cr > 1e-12;  // open region, ccw polygon
                }
                if (!inside) continue;
                int wx = ((ix % G) + G) % G, wy = ((iy % G) + G) % G;
                r.at(wx, wy) += (std::uint32_t)poly.multiplicity;
            }
    }
    for (const auto& [th, m] : rs.points) {
        int ix = std::min(G - 1, (int)(wrap_angle(th) / kTwoPi * G));
        r.at(ix, 0) += (std::uint32_t)m;  // 1-D sets live on the theta axis
    }
    return r;
}

namespace detail {

/// Torus-wrapped morphological closing (dilation then erosion by a Chebyshev
/// square of the given radius) of a binary mask.
inline std::vector<char> closing(const std::vector<char>& mask, int G, int radius) {
    if (radius <= 0) return mask;
    auto pass = [&](const std::vector<char>& in, bool dilate) {
        std::vector<char> out((std::size_t)G * G);
        for (int y = 0; y < G; ++y)
            for (int x = 0; x < G; ++x) {
                char v = dilate ? 0 : 1;
                for (int dy = -radius; dy <= radius && (dilate ? !v : v); ++dy)
                    for (int dx = -radius; dx <= radius; ++dx) {
                        char m = in[(std::size_t)((y + dy + G) % G) * G + ((x + dx + G) % G)];
                        if (dilate && m) {
                            v = 1;
                            break;
                        }
                        if (!dilate && !m) {
                            v = 0;
                            break;
                        }
                    }
                out[(std::size_t)y * G + x] = v;
            }
        return out;
    };
    return pass(pass(mask, true), false);
}

/// 4-connected components with torus wrap; returns per-pixel labels (-1 off
/// the mask) and the component sizes.
inline std::pair<std::vector<int>, std::vector<long long>> components4(
    const std::vector<char>& mask, int G) {
    std::vector<int> label((std::size_t)G * G, -1);
    std::vector<long long> sizes;
    for (int y = 0; y < G; ++y)
        for (int x = 0; x < G; ++x) {
            std::size_t i = (std::size_t)y * G + x;
            if (!mask[i] || label[i] >= 0) continue;
            int id = (int)sizes.size();
            sizes.push_back(0);
            std::queue<std::pair<int, int>> q;
            q.push({x, y});
            label[i] = id;
            while (!q.empty()) {
                auto [cx, cy] = q.front();
                q.pop();
                ++sizes[id];
                const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    int nx = (cx + dx[d] + G) % G, ny = (cy + dy[d] + G) % G;
                    std::size_t ni = (std::size_t)ny * G + nx;
                    if (mask[ni] && label[ni] < 0) {
                        label[ni] = id;
                        q.push({nx, ny});
                    }
                }
            }
        }
    return {std::move(label), std::move(sizes)};
}

/// Multi-source BFS distance (4-neighbor, torus wrap) from all set pixels.
inline std::vector<int> bfs_distance(const std::vector<char>& sources, int G) {
    std::vector<int> dist((std::size_t)G * G, -1);
    std::queue<std::pair<int, int>> q;
    for (int y = 0; y < G; ++y)
        for (int x = 0; x < G; ++x)
            if (sources[(std::size_t)y * G + x]) {
                dist[(std::size_t)y * G + x] = 0;
                q.push({x, y});
            }
    while (!q.empty()) {
        auto [cx, cy] = q.front();
        q.pop();
        int d = dist[(std::size_t)cy * G + cx];
        const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            int nx = (cx + dx[k] + G) % G, ny = (cy + dy[k] + G) % G;
            std::size_t ni = (std::size_t)ny * G + nx;
            if (dist[ni] < 0) {
                dist[ni] = d + 1;
                q.push({nx, ny});
            }
        }
    }
    return dist;
}

/// Andrew monotone chain; returns hull area (points need not be sorted).
inline double hull_area(std::vector<std::array<double, 2>> pts) {
    if (pts.size() < 3) return 0;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return 0;
    auto cross = [](const std::array<double, 2>& o, const std::array<double, 2>& a,
                    const std::array<double, 2>& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<std::array<double, 2>> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k > 1 ? k - 1 : 0);
    double area = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const auto& a = h[i];
        const auto& b = h[(i + 1) % h.size()];
        area += a[0] * b[1] - b[0] * a[1];
    }
    return area / 2;
}

}  // namespace detail

/// Sum-pool the hit counts by an integer factor (column statistics follow).
inline TorusRaster downsample(const TorusRaster& r, int factor) {
    if (factor <= 1) return r;
    if (r.G % factor != 0) throw error("downsample: factor must divide the grid");
    TorusRaster out;
    out.G = r.G / factor;
    out.counts.assign((std::size_t)out.G * out.G, 0);
    out.samples = r.samples;
    out.failures = r.failures;
    out.seed = r.seed;
    out.xLo = r.xLo;
    out.xHi = r.xHi;
    out.colFibers.assign(out.G, 0);
    out.colRoots.assign(out.G, 0);
    for (int y = 0; y < r.G; ++y)
        for (int x = 0; x < r.G; ++x) out.at(x / factor, y / factor) += r.at(x, y);
    for (int x = 0; x < r.G && !r.colFibers.empty(); ++x) {
        out.colFibers[x / factor] += r.colFibers[x];
        out.colRoots[x / factor] += r.colRoots[x];
    }
    return out;
}

/// Halve the grid until covered pixels see at least `target` hits on
/// average, so binarizing yields saturated coverage instead of Poisson dust.
inline TorusRaster pool_to_density(const TorusRaster& r, double target = 6.0, int minG = 64) {
    TorusRaster cur = r;
    for (;;) {
        long long hits = 0, covered = 0;
        for (long long c : cur.counts) {
            hits += c;
            covered += c > 0;
        }
        if (covered == 0) return cur;
        if ((double)hits / (double)covered >= target) return cur;
        if (cur.G % 2 != 0 || cur.G / 2 < minG) return cur;
        cur = downsample(cur, 2);
    }
}

struct ComponentInfo {
    long long pixels = 0;
    std::array<double, 2> representative{};  // deepest point, in angles
    double convexityDefect = 0;              // 1 when the component wraps the torus
    bool wraps = false;
};

struct ComponentReport {
    long long componentCount = 0;
    std::vector<ComponentInfo> components;
    long long bound = 0;  // n! Vol(Delta)
    bool withinBound = false;
    int dilationPixels = 0;
    double noiseFloorFrac = 0;
    int confidentHits = 1;  // binarization threshold of the confident mask
    int grid = 0;           // grid the analysis ran on, after density pooling
};

struct ComponentOptions {
    int dilationPixels = -1;  // -1: 2 at G = 512, scaled proportionally
    double noiseFloorFrac = 5e-4;
    int confidentHits = -1;  // -1: adaptive, mean covered hits / 3 in [1,3]
};

/// Complement components of the sampled coamoeba: pool to a grid the sample
/// density saturates, binarize, close small sampling gaps morphologically,
/// flood-fill the complement, drop specks below the noise floor. Each
/// surviving component reports its deepest pixel and a convexity defect
/// (hull area deficit in the universal cover; wrapping components are
/// maximally defective by convention).
///
/// Components separated only by coverage below the confident threshold are
/// counted once: near a pinch of the variety the sample density can drop a
/// hundredfold below the mean, and the scattered hits that do land there cut
/// the starved zone into slivers that are sampling noise, not topology. The
/// reported geometry is the largest resolved member of each such group. On
/// rasters with unit counts (exact rasterizations) the threshold is 1 and
/// the grouping is the identity.
inline ComponentReport complement_components(const TorusRaster& rIn, long long bound,
                                             const ComponentOptions& opts = {}) {
    TorusRaster r = pool_to_density(rIn);
    int G = r.G;
    ComponentReport rep;
    rep.grid = G;
    rep.bound = bound;
    rep.dilationPixels =
        opts.dilationPixels >= 0 ? opts.dilationPixels : std::max(1, (int)std::lround(2.0 * G / 512));
    rep.noiseFloorFrac = opts.noiseFloorFrac;

    std::vector<char> mask((std::size_t)G * G);
    long long hits = 0, covered = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        mask[i] = r.counts[i] > 0;
        hits += r.counts[i];
        covered += mask[i];
    }
    double meanCov = covered ? (double)hits / (double)covered : 0.0;
    rep.confidentHits = opts.confidentHits >= 0 ? opts.confidentHits
                                                : std::min(3, std::max(1, (int)(meanCov / 3.0)));
    std::vector<char> closed = detail::closing(mask, G, rep.dilationPixels);
    std::vector<char> comp((std::size_t)G * G);
    for (std::size_t i = 0; i < comp.size(); ++i) comp[i] = !closed[i];

    // complement of the confident coverage: a superset of `comp`, so each
    // strict component lies inside exactly one confident component
    std::vector<int> clabel;
    if (rep.confidentHits > 1) {
        std::vector<char> conf((std::size_t)G * G);
        for (std::size_t i = 0; i < conf.size(); ++i)
            conf[i] = r.counts[i] >= (std::uint32_t)rep.confidentHits;
        std::vector<char> confClosed = detail::closing(conf, G, rep.dilationPixels);
        for (auto& c : confClosed) c = !c;
        clabel = detail::components4(confClosed, G).first;
    }

    auto [label, sizes] = detail::components4(comp, G);
    double floorPx = opts.noiseFloorFrac * (double)G * G;
    std::vector<int> dist = detail::bfs_distance(closed, G);

    std::map<int, ComponentInfo> groups;  // keyed by confident component
    int nextKey = -1;
    for (int id = 0; id < (int)sizes.size(); ++id) {
        if ((double)sizes[id] < floorPx) continue;
        ComponentInfo info;
        info.pixels = sizes[id];
        // deepest pixel
        int best = -1, bx = 0, by = 0;
        for (int y = 0; y < G; ++y)
            for (int x = 0; x < G; ++x) {
                std::size_t i = (std::size_t)y * G + x;
                if (label[i] == id && dist[i] > best) {
                    best = dist[i];
                    bx = x;
                    by = y;
                }
            }
        info.representative = {(bx + 0.5) * r.pixel(), (by + 0.5) * r.pixel()};
        // universal-cover lift by BFS from the deepest pixel
        std::map<std::pair<int, int>, std::pair<long long, long long>> lift;
        std::queue<std::pair<int, int>> q;
        lift[{bx, by}] = {bx, by};
        q.push({bx, by});
        bool wraps = false;
        std::vector<std::array<double, 2>> pts;
        while (!q.empty() && !wraps) {
            auto [cx, cy] = q.front();
            q.pop();
            auto [ux, uy] = lift[{cx, cy}];
            pts.push_back({(double)ux + 0.5, (double)uy + 0.5});
            const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                int nx = (cx + dx[k] + G) % G, ny = (cy + dy[k] + G) % G;
                if (label[(std::size_t)ny * G + nx] != id) continue;
                long long vx = ux + dx[k], vy = uy + dy[k];
                auto it = lift.find({nx, ny});
                if (it == lift.end()) {
                    lift[{nx, ny}] = {vx, vy};
                    q.push({nx, ny});
                } else if (it->second != std::make_pair(vx, vy)) {
                    wraps = true;
                    break;
                }
            }
        }
        info.wraps = wraps;
        if (wraps) {
            info.convexityDefect = 1.0;
        } else {
            double ha = detail::hull_area(pts);
            info.convexityDefect = ha > 0 ? std::max(0.0, (ha - (double)info.pixels) / ha) : 0.0;
        }
        if (clabel.empty()) {
            rep.components.push_back(info);
        } else {
            int key = clabel[(std::size_t)by * G + bx];
            if (key < 0) key = nextKey--;  // unreachable: strict implies confident complement
            auto it = groups.find(key);
            if (it == groups.end() || it->second.pixels < info.pixels) groups.insert_or_assign(key, info);
        }
    }
    for (auto& [key, info] : groups) rep.components.push_back(info);
    rep.componentCount = (long long)rep.components.size();
    rep.withinBound = rep.componentCount <= bound;
    return rep;
}

struct AreaEstimate {
    double plainArea = 0;               // covered fraction times (2pi)^2
    double areaWithMultiplicity = 0;    // column-wise mean root count weighting
    double coveredFraction = 0;
    long long coveredPixels = 0;
};

/// Area of the sampled coamoeba. The multiplicity-weighted variant scales
/// each column's covered area by the mean number of slice roots per fiber in
/// that column, so k-sheeted stretches count k times.
inline AreaEstimate coamoeba_area(const TorusRaster& r) {
    AreaEstimate a;
    int G = r.G;
    double px2 = r.pixel() * r.pixel();
    for (int x = 0; x < G; ++x) {
        long long cov = 0;
        for (int y = 0; y < G; ++y) cov += r.at(x, y) > 0;
        a.coveredPixels += cov;
        if (r.colFibers.empty() || r.colFibers[x] == 0) continue;
        double meanRoots = (double)r.colRoots[x] / (double)r.colFibers[x];
        a.areaWithMultiplicity += meanRoots * (double)cov * px2;
    }
    a.coveredFraction = (double)a.coveredPixels / ((double)G * G);
    a.plainArea = a.coveredFraction * kTwoPi * kTwoPi;
    return a;
}

struct ExtraPiece {
    long long pixels = 0;
    std::array<double, 2> representative{};
    double boundaryBandRatio = 0;
};

struct ExtraPieceReport {
    bool present = false;
    double extraArea = 0;
    std::vector<ExtraPiece> pieces;
    int bandPixels = 0;
    int grid = 0;  // grid the analysis ran on, after density pooling
};

struct ExtraPieceOptions {
    int bandPixels = 6;
    double noiseFloorFrac = 5e-4;
    double adjacencyThreshold = 0.9;
    int dilationPixels = -1;  // -1: 2 at G = 512, scaled
};

/// Coamoeba mass away from the shell: subtract a band around every shell
/// line from the covered set and flood what survives. A surviving piece
/// whose boundary is mostly band-adjacent is shell skin; anything else is a
/// genuine extra piece. Rasters are density-pooled first so sampling holes
/// do not read as spurious boundary.
inline ExtraPieceReport extra_pieces(const TorusRaster& rIn, const ShellArrangement& sh,
                                     const ExtraPieceOptions& opts = {}) {
    if (sh.n != 2) throw error("extra_pieces: n = 2 only");
    TorusRaster r = rIn.G > 256 && rIn.G % 256 == 0 ? downsample(rIn, rIn.G / 256) : rIn;
    r = pool_to_density(r);
    int G = r.G;
    ExtraPieceReport rep;
    rep.bandPixels = opts.bandPixels;
    rep.grid = G;
    auto lines = detail::torus_lines(sh);
    double h = opts.bandPixels * r.pixel();

    std::vector<char> band((std::size_t)G * G, 0);
    for (int y = 0; y < G; ++y)
        for (int x = 0; x < G; ++x) {
            double tx = (x + 0.5) * r.pixel(), ty = (y + 0.5) * r.pixel();
            for (const auto& L : lines) {
                double nrm = std::sqrt((double)(L.dir0[0] * L.dir0[0] + L.dir0[1] * L.dir0[1]));
                double d = std::abs(wrap_signed(L.dir0[0] * tx + L.dir0[1] * ty - L.c)) / nrm;
                if (d <= h) {
                    band[(std::size_t)y * G + x] = 1;
                    break;
                }
            }
        }

    std::vector<char> mask((std::size_t)G * G);
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = r.counts[i] > 0;
    int rad = opts.dilationPixels >= 0 ? opts.dilationPixels
                                       : std::max(1, (int)std::lround(2.0 * G / 512));
    mask = detail::closing(mask, G, rad);
    std::vector<char> work((std::size_t)G * G);
    for (std::size_t i = 0; i < work.size(); ++i) work[i] = mask[i] && !band[i];
    auto [label, sizes] = detail::components4(work, G);
    double floorPx = opts.noiseFloorFrac * (double)G * G;

    for (int id = 0; id < (int)sizes.size(); ++id) {
        if ((double)sizes[id] < floorPx) continue;
        long long boundary = 0, nearBand = 0;
        int bx = 0, by = 0;
        for (int y = 0; y < G; ++y)
            for (int x = 0; x < G; ++x) {
                std::size_t i = (std::size_t)y * G + x;
                if (label[i] != id) continue;
                bool isBoundary = false, touchesBand = false;
                const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    std::size_t ni =
                        (std::size_t)((y + dy[k] + G) % G) * G + ((x + dx[k] + G) % G);
                    if (!work[ni]) isBoundary = true;
                    if (band[ni]) touchesBand = true;
                }
                if (isBoundary) {
                    ++boundary;
                    nearBand += touchesBand;
                    bx = x;
                    by = y;
                }
            }
        double ratio = boundary ? (double)nearBand / (double)boundary : 1.0;
        if (ratio < opts.adjacencyThreshold) {
            ExtraPiece piece;
            piece.pixels = sizes[id];
            piece.boundaryBandRatio = ratio;
            piece.representative = {(bx + 0.5) * r.pixel(), (by + 0.5) * r.pixel()};
            rep.extraArea += (double)sizes[id] * r.pixel() * r.pixel();
            rep.pieces.push_back(piece);
        }
    }
    rep.present = !rep.pieces.empty();
    return rep;
}

struct HyperplanePosition {
    std::size_t hyperplane = 0;
    double margin = 0;     // sum |m+ - m-| / sum (m+ + m-) over bins
    int side = 0;          // +1 / -1 when every occupied bin agrees, else 0
    bool ambiguous = true;
    std::vector<int> binSides;  // concatenated over the hyperplane's lines
};

struct ShellPositionReport {
    std::vector<HyperplanePosition> entries;
};

struct ShellPositionOptions {
    int slabPixels = 6;
    int bins = 32;
};

/// Which side of each shell hyperplane the sampled coamoeba mass sits on,
/// probed locally: walk each primitive line in bins, sum hits a few pixels
/// off to either side, and compare. The side convention follows the
/// primitive normal g0 (positive = increasing <g0, theta>).
inline ShellPositionReport shell_position(const ShellArrangement& sh, const TorusRaster& r,
                                          const ShellPositionOptions& opts = {}) {
    if (sh.n != 2) throw error("shell_position: n = 2 only");
    ShellPositionReport rep;
    auto lines = detail::torus_lines(sh);
    int G = r.G;
    for (std::size_t hi = 0; hi < sh.hyperplanes.size(); ++hi) {
        HyperplanePosition hp;
        hp.hyperplane = hi;
        double num = 0, den = 0;
        bool sawPlus = false, sawMinus = false;
        for (const auto& L : lines) {
            if (L.hyperplane != hi) continue;
            double nrm = std::sqrt((double)(L.dir0[0] * L.dir0[0] + L.dir0[1] * L.dir0[1]));
            double n0 = L.dir0[0] / nrm, n1 = L.dir0[1] / nrm;
            for (int b = 0; b < opts.bins; ++b) {
                double mPlus = 0, mMinus = 0;
                for (int sub = 0; sub < 8; ++sub) {
                    double s = kTwoPi * (b + (sub + 0.5) / 8.0) / opts.bins;
                    double ox = L.x0[0] + s * L.tangent[0], oy = L.x0[1] + s * L.tangent[1];
                    for (int k = 1; k <= opts.slabPixels; ++k) {
                        for (double sg : {1.0, -1.0}) {
                            double tx = wrap_angle(ox + sg * k * r.pixel() * n0);
                            double ty = wrap_angle(oy + sg * k * r.pixel() * n1);
                            int ix = std::min(G - 1, (int)(tx / kTwoPi * G));
                            int iy = std::min(G - 1, (int)(ty / kTwoPi * G));
                            (sg > 0 ? mPlus : mMinus) += r.at(ix, iy);
                        }
                    }
                }
                num += std::abs(mPlus - mMinus);
                den += mPlus + mMinus;
                int side = 0;
                if (mPlus > 2 * mMinus && mPlus > 0) side = 1;
                if (mMinus > 2 * mPlus && mMinus > 0) side = -1;
                hp.binSides.push_back(side);
                sawPlus |= side > 0;
                sawMinus |= side < 0;
            }
        }
        hp.margin = den > 0 ? num / den : 0;
        if (sawPlus && !sawMinus)
            hp.side = 1;
        else if (sawMinus && !sawPlus)
            hp.side = -1;
        hp.ambiguous = hp.side == 0 || hp.margin < 0.2;
        rep.entries.push_back(hp);
    }
    return rep;
}

/// Binary PGM dump of the raster (gamma 0.5 against the max count).
inline void write_pgm(const TorusRaster& r, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw error("write_pgm: cannot open output file");
    std::uint32_t mx = 1;
    for (auto c : r.counts) mx = std::max(mx, c);
    f << "P5\n" << r.G << " " << r.G << "\n255\n";
    for (int y = r.G - 1; y >= 0; --y)  // top row = largest theta_2
        for (int x = 0; x < r.G; ++x) {
            double v = std::sqrt((double)r.at(x, y) / (double)mx);
            f.put((char)(unsigned char)std::lround(255 * v));
        }
}

}  // namespace coam
