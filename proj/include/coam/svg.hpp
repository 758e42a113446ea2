#pragma once

#include <coam/report.hpp>

namespace coam {

namespace detail {

inline std::string fmt6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

/// Clip p + s d to an axis box; returns the s interval or nothing.
inline std::optional<std::pair<double, double>> clip_segment(const std::array<double, 2>& p,
                                                             const std::array<double, 2>& d,
                                                             double lo0, double hi0, double lo1,
                                                             double hi1) {
    double s0 = -1e18, s1 = 1e18;
    double lo[2] = {lo0, lo1}, hi[2] = {hi0, hi1};
    for (int j = 0; j < 2; ++j) {
        if (d[j] == 0) {
            if (p[j] < lo[j] || p[j] > hi[j]) return std::nullopt;
            continue;
        }
        double a = (lo[j] - p[j]) / d[j], b = (hi[j] - p[j]) / d[j];
        if (a > b) std::swap(a, b);
        s0 = std::max(s0, a);
        s1 = std::min(s1, b);
    }
    if (s0 >= s1) return std::nullopt;
    return std::make_pair(s0, s1);
}

inline const char* palette(std::size_t i) {
    static const char* colors[] = {"#e63946", "#457b9d", "#2a9d8f", "#f4a261",
                                   "#6d597a", "#118ab2", "#9c6644", "#ef476f"};
    return colors[i % 8];
}

}  // namespace detail

/// Deterministic SVG: a k x k tiling of the fundamental domain carrying the
/// sampled coamoeba heatmap and the shell lines (stroke width grows with
/// weight, virtual hyperplanes dashed), and a second panel with the spine
/// over the log search box.
inline std::string render_svg(const AnalysisReport& rep, int domains = 2) {
    using detail::fmt6;
    int k = std::max(1, domains);
    const double T = 280;             // pixels per fundamental domain
    const double M = 24;              // outer margin
    const double torusW = k * T;
    const double spineW = 340;
    const double W = M + torusW + M + spineW + M;
    const double H = M + std::max(torusW, spineW) + M;

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt6(W) << "\" height=\""
      << fmt6(H) << "\" viewBox=\"0 0 " << fmt6(W) << " " << fmt6(H) << "\">\n";
    s << "<rect width=\"" << fmt6(W) << "\" height=\"" << fmt6(H) << "\" fill=\"#ffffff\"/>\n";

    auto px = [&](double th) { return M + th / kTwoPi * T; };
    auto py = [&](double th) { return M + (k * kTwoPi - th) / kTwoPi * T; };

    // heatmap tiles
    if (rep.coamoeba.sampled && rep.raster.G > 0) {
        const TorusRaster& r = rep.raster;
        int G = r.G, ds = std::max(1, G / 128);
        int D = G / ds;
        std::vector<double> cell((std::size_t)D * D, 0);
        double mx = 0;
        for (int y = 0; y < G; ++y)
            for (int x = 0; x < G; ++x) {
                auto& c = cell[(std::size_t)(y / ds) * D + (x / ds)];
                c += r.at(x, y);
                mx = std::max(mx, c);
            }
        s << "<defs><g id=\"heat\">\n";
        double q = T / D;
        for (int y = 0; y < D; ++y) {
            int x = 0;
            while (x < D) {
                auto level = [&](int xx) {
                    double c = cell[(std::size_t)y * D + xx];
                    return c > 0 ? 1 + (int)std::lround(15 * std::sqrt(c / mx)) : 0;
                };
                int lv = level(x);
                if (lv == 0) {
                    ++x;
                    continue;
                }
                int x1 = x;
                while (x1 < D && level(x1) == lv) ++x1;
                s << "<rect x=\"" << fmt6(x * q) << "\" y=\"" << fmt6((D - 1 - y) * q)
                  << "\" width=\"" << fmt6((x1 - x) * q) << "\" height=\"" << fmt6(q)
                  << "\" fill=\"#1d3557\" fill-opacity=\"" << fmt6(0.1 + 0.9 * lv / 16.0)
                  << "\"/>\n";
                x = x1;
            }
        }
        s << "</g></defs>\n";
        for (int ty = 0; ty < k; ++ty)
            for (int tx = 0; tx < k; ++tx)
                s << "<use href=\"#heat\" x=\"" << fmt6(M + tx * T) << "\" y=\""
                  << fmt6(M + ty * T) << "\"/>\n";
    }

    // domain grid
    for (int t = 0; t <= k; ++t) {
        double u = M + t * T;
        s << "<line x1=\"" << fmt6(u) << "\" y1=\"" << fmt6(M) << "\" x2=\"" << fmt6(u)
          << "\" y2=\"" << fmt6(M + torusW) << "\" stroke=\"#cccccc\" stroke-width=\"0.8\"/>\n";
        s << "<line x1=\"" << fmt6(M) << "\" y1=\"" << fmt6(u) << "\" x2=\"" << fmt6(M + torusW)
          << "\" y2=\"" << fmt6(u) << "\" stroke=\"#cccccc\" stroke-width=\"0.8\"/>\n";
    }

    // shell lines over the k x k cover
    if (rep.shell.n == 2) {
        auto lines = detail::torus_lines(rep.shell);
        for (const auto& L : lines) {
            const auto& h = rep.shell.hyperplanes[L.hyperplane];
            double span = kTwoPi * k;
            double reach = (std::abs((double)L.dir0[0]) + std::abs((double)L.dir0[1])) * span;
            int mLo = (int)std::floor((0 - L.c - reach) / kTwoPi) - 1;
            int mHi = (int)std::ceil((reach - L.c) / kTwoPi) + 1;
            double n2 = (double)(L.dir0[0] * L.dir0[0] + L.dir0[1] * L.dir0[1]);
            for (int m = mLo; m <= mHi; ++m) {
                double c = L.c + kTwoPi * m;
                std::array<double, 2> p0 = {c * L.dir0[0] / n2, c * L.dir0[1] / n2};
                std::array<double, 2> d = {(double)L.tangent[0], (double)L.tangent[1]};
                auto seg = detail::clip_segment(p0, d, 0, span, 0, span);
                if (!seg) continue;
                auto [s0, s1] = *seg;
                double ax = p0[0] + s0 * d[0], ay = p0[1] + s0 * d[1];
                double bx = p0[0] + s1 * d[0], by = p0[1] + s1 * d[1];
                s << "<line x1=\"" << fmt6(px(ax)) << "\" y1=\"" << fmt6(py(ay)) << "\" x2=\""
                  << fmt6(px(bx)) << "\" y2=\"" << fmt6(py(by)) << "\" stroke=\""
                  << detail::palette(L.hyperplane) << "\" stroke-width=\""
                  << fmt6(1.0 + 1.2 * (double)(h.weight - 1))
                  << (h.effective ? "\"" : "\" stroke-dasharray=\"6 4\"") << "/>\n";
            }
        }
    }

    // spine panel over the search box
    {
        double ox = M + torusW + M;
        double oy = M;
        s << "<rect x=\"" << fmt6(ox) << "\" y=\"" << fmt6(oy) << "\" width=\"" << fmt6(spineW)
          << "\" height=\"" << fmt6(spineW)
          << "\" fill=\"#fafafa\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
        if (rep.poly.n == 2 && rep.boxLo.size() == 2) {
            double lo0 = rep.boxLo[0], hi0 = rep.boxHi[0], lo1 = rep.boxLo[1], hi1 = rep.boxHi[1];
            double sc = spineW / std::max(hi0 - lo0, hi1 - lo1);
            auto sx = [&](double v) { return ox + (v - lo0) * sc; };
            auto sy = [&](double v) { return oy + spineW - (v - lo1) * sc; };
            std::vector<std::array<double, 2>> vpos;
            for (const auto& v : rep.spine.vertices)
                vpos.push_back({rat_to_double(v.pos[0]), rat_to_double(v.pos[1])});
            for (const auto& e : rep.spine.edges)
                s << "<line x1=\"" << fmt6(sx(vpos[e.v0][0])) << "\" y1=\""
                  << fmt6(sy(vpos[e.v0][1])) << "\" x2=\"" << fmt6(sx(vpos[e.v1][0]))
                  << "\" y2=\"" << fmt6(sy(vpos[e.v1][1])) << "\" stroke=\"#222222\" stroke-width=\""
                  << fmt6(1.0 + 1.2 * (double)(e.weight - 1)) << "\"/>\n";
            for (const auto& rY : rep.spine.rays) {
                std::array<double, 2> p0 = vpos[rY.v0];
                std::array<double, 2> d = {(double)rY.dir[0], (double)rY.dir[1]};
                auto seg = detail::clip_segment(p0, d, lo0, hi0, lo1, hi1);
                if (!seg) continue;
                double s1 = seg->second;
                s << "<line x1=\"" << fmt6(sx(p0[0])) << "\" y1=\"" << fmt6(sy(p0[1]))
                  << "\" x2=\"" << fmt6(sx(p0[0] + s1 * d[0])) << "\" y2=\""
                  << fmt6(sy(p0[1] + s1 * d[1])) << "\" stroke=\"#222222\" stroke-width=\""
                  << fmt6(1.0 + 1.2 * (double)(rY.weight - 1)) << "\"/>\n";
            }
            for (const auto& v : vpos)
                s << "<circle cx=\"" << fmt6(sx(v[0])) << "\" cy=\"" << fmt6(sy(v[1]))
                  << "\" r=\"3\" fill=\"#000000\"/>\n";
        }
    }

    s << "</svg>\n";
    return s.str();
}

}  // namespace coam
