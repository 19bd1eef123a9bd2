#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "zonoplan/lp.hpp"

namespace zp {

using Vec2 = Eigen::Vector2d;

// Rows of N are unit (2-norm) outward normals: N x <= h.
struct HRep {
    Mat N;
    Vec h;
    bool contains(const Vec& x, double tol = 1e-9) const;
    // smallest slack h - N x over rows; negative outside
    double slack(const Vec& x) const;
};

// Constrained zonotope {c + G xi : A xi = b, |xi|_inf <= 1}.
// A with zero rows is a plain zonotope.
class CZono {
public:
    Vec c;
    Mat G;
    Mat A;
    Vec b;
    // exact halfspace form, attached when cheap to get (n <= 3 zonotopes,
    // planar sets, intersections and lifts of those). Used by hot loops.
    std::shared_ptr<const HRep> hrep;
    bool empty_marker = false;

    int dim() const { return static_cast<int>(c.size()); }
    int ngen() const { return static_cast<int>(G.cols()); }
    int ncon() const { return static_cast<int>(A.rows()); }
    bool is_zonotope() const { return A.rows() == 0; }

    // fast membership; halfspace check when available, LP otherwise
    bool contains(const Vec& x, double tol = 1e-9) const;

    static CZono empty(int n);
};

CZono make_zonotope(const Vec& c, const Mat& G);
CZono make_box(const Vec& lo, const Vec& hi);
CZono make_czono(const Vec& c, const Mat& G, const Mat& A, const Vec& b);

struct Membership {
    bool inside = false;
    double margin = 0.0;  // 1 - min |xi|_inf, -inf when the affine system has no solution
};

// Membership test: min |xi|_inf s.t. G xi = z - c, A xi = b.
Membership contains_point(const CZono& s, const Vec& z);
bool is_empty(const CZono& s);

CZono expand(const CZono& s, double eps);
// Returns an empty marker when nothing is left.
CZono contract(const CZono& s, double eps);
CZono intersect(const CZono& a, const CZono& b);
// Minkowski sum with the eps inf-norm ball; exact in generator form.
CZono inflate(const CZono& s, double eps);
// Cartesian product with the box [lo, hi] on extra trailing axes.
CZono lift(const CZono& s, const Vec& lo, const Vec& hi);

double g_norm(const Mat& G, const Vec& v);

// max d.x over the set; returns the maximiser through arg if given
double support(const CZono& s, const Vec& d, Vec* arg = nullptr);
std::pair<Vec, Vec> bounding_box(const CZono& s);

std::vector<Vec2> to_vertices_2d(const CZono& s);
CZono from_vertices_2d(const std::vector<Vec2>& pts);

// planar helpers
std::vector<Vec2> convex_hull_2d(std::vector<Vec2> pts);
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, const Vec2& a, double h);
double polygon_area(const std::vector<Vec2>& poly);
HRep hrep_from_polygon(const std::vector<Vec2>& ccw);
std::vector<Vec2> polygon_from_hrep(const HRep& hr, const Vec2& lo, const Vec2& hi);

// axis-aligned box test on a zonotope
bool is_axis_box(const CZono& s, Vec* lo = nullptr, Vec* hi = nullptr);

}  // namespace zp
