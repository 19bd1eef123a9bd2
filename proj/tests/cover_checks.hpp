#pragma once
// Sampling checks on a cover, shared by the covering tests and the acceptance run.

#include <random>
#include <string>
#include <utility>

#include "zonoplan/covering.hpp"
#include "zonoplan/geometry.hpp"

namespace cover_checks {

// uniform samples of the rectangle that fall in no cell
inline int uncovered(const zp::Cover& cv, int samples, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ux(cv.config.lo.x(), cv.config.hi.x());
    std::uniform_real_distribution<double> uy(cv.config.lo.y(), cv.config.hi.y());
    int miss = 0;
    for (int k = 0; k < samples; ++k) {
        zp::Vec p(2);
        p << ux(rng), uy(rng);
        bool in = false;
        for (const auto& c : cv.cells)
            if (zp::contains_point(c.plane, p).inside) {
                in = true;
                break;
            }
        if (!in) ++miss;
    }
    return miss;
}

// linked pairs whose expanded cells do not intersect
inline int disjoint_links(const zp::Cover& cv, std::string* first = nullptr) {
    int bad = 0;
    for (auto [i, j] : cv.config.links) {
        if (zp::is_empty(zp::intersect(cv.cells[i].plane, cv.cells[j].plane))) {
            if (first && bad == 0) *first = cv.cells[i].id + "-" + cv.cells[j].id;
            ++bad;
        }
    }
    return bad;
}

}  // namespace cover_checks
