#pragma once
// Randomised geometry checks shared by the unit tests and the acceptance run.

#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "zonoplan/geometry.hpp"

namespace suite {

struct Counts {
    int sets = 0;
    int points = 0;
    int compared = 0;
    int disagreements = 0;
    std::string first_failure;
};

inline zp::CZono random_czono(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int ng = n + 2;
    zp::Vec c(n);
    for (int i = 0; i < n; ++i) c(i) = 3.0 * u(rng);
    zp::Mat G(n, ng);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < ng; ++j) G(i, j) = u(rng);
    zp::Mat A(1, ng);
    for (int j = 0; j < ng; ++j) A(0, j) = u(rng);
    zp::Vec xs(ng);
    for (int j = 0; j < ng; ++j) xs(j) = 0.8 * u(rng);
    zp::Vec b = A * xs;
    return zp::make_czono(c, G, A, b);
}

// LP membership against the exact enumeration oracle
inline Counts membership_agreement(int nsets, int pts_per_set, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Counts out;
    for (int s = 0; s < nsets; ++s) {
        int n = (s % 2 == 0) ? 2 : 3;
        zp::CZono z = random_czono(rng, n);
        ++out.sets;
        zp::Mat M(n + z.ncon(), z.ngen());
        M << z.G, z.A;
        for (int p = 0; p < pts_per_set; ++p) {
            zp::Vec xi(z.ngen());
            for (int j = 0; j < z.ngen(); ++j) xi(j) = 1.4 * u(rng);
            zp::Vec pt = z.c + z.G * xi;
            if (p % 3 == 0)
                for (int i = 0; i < n; ++i) pt(i) += 0.5 * u(rng);
            ++out.points;
            zp::Membership m = zp::contains_point(z, pt);
            zp::Vec d(n + z.ncon());
            d << pt - z.c, z.b;
            double opt = oracle::min_inf_norm(M, d);
            bool ref = opt <= 1.0 + 1e-9;
            if (std::abs(m.margin) <= 1e-6) continue;
            ++out.compared;
            if (ref != m.inside) {
                ++out.disagreements;
                if (out.first_failure.empty())
                    out.first_failure = "set " + std::to_string(s) + " point " + std::to_string(p);
            }
        }
    }
    return out;
}

inline std::vector<zp::Vec> sample_inside(const zp::CZono& s, int count, std::mt19937& rng) {
    auto [lo, hi] = zp::bounding_box(s);
    std::vector<zp::Vec> pts;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int guard = 0;
    while (static_cast<int>(pts.size()) < count && guard++ < 200 * count) {
        zp::Vec x(s.dim());
        for (int i = 0; i < s.dim(); ++i) x(i) = lo(i) + (hi(i) - lo(i)) * u(rng);
        if (zp::contains_point(s, x).inside) pts.push_back(x);
    }
    return pts;
}

// sets on which expansion and contraction are exercised
inline std::vector<zp::CZono> sampler_sets(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<zp::CZono> sets;
    sets.push_back(zp::make_box(zp::Vec::Zero(2), zp::Vec::Ones(2)));
    sets.push_back(zp::make_box(zp::Vec::Constant(3, -1.0), zp::Vec::Constant(3, 2.0)));
    for (int k = 0; k < 3; ++k) {
        zp::Mat G(2, 2);
        G << 1.0 + 0.3 * u(rng), 0.4 * u(rng), 0.4 * u(rng), 1.0 + 0.3 * u(rng);
        sets.push_back(zp::make_zonotope(zp::Vec::Zero(2), G));
    }
    zp::Mat G3(2, 3);
    G3 << 1, 0, 0.5, 0, 1, 0.5;
    sets.push_back(zp::make_zonotope(zp::Vec::Ones(2), G3));
    zp::Mat G33(3, 3);
    G33 << 1, 0.2, 0, 0.1, 1, 0.3, 0, 0.2, 1;
    sets.push_back(zp::make_zonotope(zp::Vec::Zero(3), G33));
    sets.push_back(zp::from_vertices_2d({zp::Vec2(0, 0), zp::Vec2(2, 0), zp::Vec2(0.5, 1.5)}));
    sets.push_back(zp::from_vertices_2d({zp::Vec2(1, 1), zp::Vec2(3, 1.2), zp::Vec2(1.8, 3)}));
    return sets;
}

inline Counts expand_soundness(int pts, unsigned seed) {
    std::mt19937 rng(seed);
    Counts out;
    for (const auto& s : sampler_sets(rng)) {
        ++out.sets;
        zp::CZono e1 = zp::expand(s, 0.1), e2 = zp::expand(s, 0.2);
        for (const auto& x : sample_inside(s, pts, rng)) {
            ++out.points;
            ++out.compared;
            if (!zp::contains_point(e1, x).inside) ++out.disagreements;
        }
        for (const auto& x : sample_inside(e1, pts / 4, rng)) {
            ++out.compared;
            if (!zp::contains_point(e2, x).inside) ++out.disagreements;
        }
    }
    return out;
}

inline Counts contract_soundness(int pts, double eps, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    Counts out;
    for (const auto& s : sampler_sets(rng)) {
        ++out.sets;
        zp::CZono c = zp::contract(s, eps);
        if (c.empty_marker) continue;
        const int n = s.dim();
        for (const auto& x : sample_inside(c, pts, rng)) {
            ++out.points;
            std::vector<zp::Vec> dirs;
            for (int i = 0; i < n; ++i) {
                dirs.push_back(zp::Vec::Unit(n, i));
                dirs.push_back(-zp::Vec::Unit(n, i));
            }
            for (int r = 0; r < 10; ++r) {
                zp::Vec d(n);
                for (int i = 0; i < n; ++i) d(i) = nd(rng);
                dirs.push_back(d / d.cwiseAbs().maxCoeff());
            }
            for (const auto& d : dirs) {
                ++out.compared;
                if (!zp::contains_point(s, x + eps * d).inside) ++out.disagreements;
            }
        }
    }
    return out;
}

}  // namespace suite
