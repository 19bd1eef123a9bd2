#include "zonoplan/covering.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace zp {

namespace {

constexpr double kAreaTol = 1e-9;

std::vector<Vec2> drop_collinear(const std::vector<Vec2>& poly) {
    std::vector<Vec2> out;
    const size_t k = poly.size();
    for (size_t i = 0; i < k; ++i) {
        const Vec2& a = poly[(i + k - 1) % k];
        const Vec2& b = poly[i];
        const Vec2& c = poly[(i + 1) % k];
        double cr = (b - a).x() * (c - b).y() - (b - a).y() * (c - b).x();
        if (std::abs(cr) > 1e-12 * (1.0 + (b - a).norm() * (c - b).norm())) out.push_back(b);
    }
    return out;
}

// merge neighbouring pieces while their union stays convex
std::vector<std::vector<Vec2>> merge_convex(std::vector<std::vector<Vec2>> pieces) {
    bool merged = true;
    while (merged) {
        merged = false;
        for (size_t i = 0; i < pieces.size() && !merged; ++i) {
            for (size_t j = i + 1; j < pieces.size() && !merged; ++j) {
                std::vector<Vec2> all = pieces[i];
                all.insert(all.end(), pieces[j].begin(), pieces[j].end());
                auto hull = convex_hull_2d(all);
                double sum = polygon_area(pieces[i]) + polygon_area(pieces[j]);
                if (std::abs(polygon_area(hull) - sum) < 1e-9 * (1.0 + sum)) {
                    pieces[i] = hull;
                    pieces.erase(pieces.begin() + static_cast<long>(j));
                    merged = true;
                }
            }
        }
    }
    return pieces;
}

}  // namespace

CoverConfig seed_hex(const Vec2& lo, const Vec2& hi, double spacing, double expand_eps) {
    if (spacing <= 0) throw std::invalid_argument("seed_hex: spacing must be positive");
    CoverConfig cfg;
    cfg.lo = lo;
    cfg.hi = hi;
    cfg.expand_eps = expand_eps;
    const double dy = spacing * std::sqrt(3.0) / 2.0;
    int row = 0;
    for (double y = lo.y(); y <= hi.y() + dy * 0.5; y += dy, ++row) {
        double x0 = lo.x() + ((row % 2) ? spacing / 2.0 : 0.0);
        for (double x = x0; x <= hi.x() + spacing * 0.5; x += spacing)
            cfg.centers.emplace_back(std::min(x, hi.x()), std::min(y, hi.y()));
    }
    for (size_t i = 0; i < cfg.centers.size(); ++i)
        for (size_t j = 0; j < cfg.centers.size(); ++j)
            if (i != j && (cfg.centers[i] - cfg.centers[j]).norm() <= 1.5 * spacing + 1e-12)
                cfg.links.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return cfg;
}

std::vector<CZono> generate_zonotopes(const CoverConfig& cfg) {
    const int N = static_cast<int>(cfg.centers.size());
    if (N <= 2) throw std::invalid_argument("generate_zonotopes: need more than 2 centers in the plane");
    std::vector<std::vector<Vec2>> cols(N);
    for (auto [i, j] : cfg.links) {
        if (i < 0 || j < 0 || i >= N || j >= N || i == j)
            throw std::invalid_argument("generate_zonotopes: bad link " + std::to_string(i + 1) + "-" +
                                        std::to_string(j + 1));
        cols[i].push_back(cfg.centers[j] - cfg.centers[i]);
    }
    std::vector<CZono> out;
    for (int i = 0; i < N; ++i) {
        Mat G(2, cols[i].size());
        for (size_t k = 0; k < cols[i].size(); ++k) G.col(k) = cols[i][k];
        Eigen::FullPivLU<Mat> lu(G);
        if (cols[i].size() < 2 || lu.rank() < 2)
            throw std::invalid_argument("generate_zonotopes: generator matrix of center " + std::to_string(i + 1) +
                                        " is rank deficient");
        out.push_back(make_zonotope(cfg.centers[i], 0.5 * G));
    }
    return out;
}

std::vector<std::vector<Vec2>> convex_difference(const std::vector<std::vector<Vec2>>& pieces,
                                                 const std::vector<Vec2>& cut) {
    HRep hr = hrep_from_polygon(cut);
    std::vector<std::vector<Vec2>> out;
    for (const auto& p : pieces) {
        std::vector<Vec2> inside = p;
        for (int r = 0; r < hr.N.rows() && inside.size() >= 3; ++r) {
            Vec2 a(hr.N(r, 0), hr.N(r, 1));
            auto outside = clip_halfplane(inside, -a, -hr.h(r));
            outside = convex_hull_2d(outside);
            if (outside.size() >= 3 && polygon_area(outside) > kAreaTol) out.push_back(outside);
            inside = convex_hull_2d(clip_halfplane(inside, a, hr.h(r)));
        }
    }
    return out;
}

std::vector<CZono> fill_gaps(const Vec2& lo, const Vec2& hi, const std::vector<CZono>& zonos) {
    std::vector<std::vector<Vec2>> pieces = {{lo, Vec2(hi.x(), lo.y()), hi, Vec2(lo.x(), hi.y())}};
    for (const auto& z : zonos) {
        if (z.dim() != 2) throw std::invalid_argument("fill_gaps: planar cover required");
        pieces = convex_difference(pieces, to_vertices_2d(z));
        if (pieces.empty()) break;
    }
    pieces = merge_convex(pieces);
    std::vector<CZono> out;
    for (const auto& p : pieces) {
        auto poly = drop_collinear(p);
        if (poly.size() < 3) continue;
        // ear clipping on a convex polygon reduces to a fan
        for (size_t k = 1; k + 1 < poly.size(); ++k) {
            std::vector<Vec2> tri = {poly[0], poly[k], poly[k + 1]};
            if (std::abs(polygon_area(tri)) > kAreaTol) out.push_back(from_vertices_2d(tri));
        }
    }
    return out;
}

Cover build_cover(const CoverConfig& cfg) {
    Cover cover;
    cover.config = cfg;
    auto zonos = generate_zonotopes(cfg);
    auto gaps = fill_gaps(cfg.lo, cfg.hi, zonos);
    cover.n_zonotopes = static_cast<int>(zonos.size());
    cover.n_gaps = static_cast<int>(gaps.size());
    int k = 0;
    auto add = [&](const CZono& z, bool constrained) {
        Cell c;
        c.id = "v" + std::to_string(++k);
        c.plane = expand(z, cfg.expand_eps);
        c.region = cfg.extra_lo.size() > 0 ? lift(c.plane, cfg.extra_lo, cfg.extra_hi) : c.plane;
        c.constrained = constrained;
        cover.cells.push_back(std::move(c));
    };
    for (const auto& z : zonos) add(z, false);
    for (const auto& g : gaps) add(g, true);
    return cover;
}

}  // namespace zp
