#include "zonoplan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "zonoplan/log.hpp"

namespace zp {

namespace {

constexpr double kTol = 1e-9;

void check_dims(const CZono& s, const Vec& z, const char* op) {
    if (z.size() != s.dim())
        throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                    std::to_string(z.size()) + " vs " + std::to_string(s.dim()) + ")");
}

std::shared_ptr<const HRep> zonotope_hrep(const Vec& c, const Mat& G) {
    const int n = static_cast<int>(c.size());
    const int m = static_cast<int>(G.cols());
    if (n == 0 || n > 3 || m == 0) return nullptr;
    Eigen::FullPivLU<Mat> lu(G);
    lu.setThreshold(1e-10);
    if (lu.rank() < n) return nullptr;
    std::vector<Vec> normals;
    auto push = [&](Vec a) {
        double nrm = a.norm();
        if (nrm < 1e-12) return;
        a /= nrm;
        for (const auto& o : normals)
            if ((o - a).norm() < 1e-12 || (o + a).norm() < 1e-12) return;
        normals.push_back(a);
    };
    if (n == 1) {
        push(Vec::Ones(1));
    } else if (n == 2) {
        for (int j = 0; j < m; ++j) {
            Vec a(2);
            a << -G(1, j), G(0, j);
            push(a);
        }
    } else {
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                Eigen::Vector3d gi = G.col(i), gj = G.col(j);
                Vec a = gi.cross(gj);
                push(a);
            }
    }
    auto hr = std::make_shared<HRep>();
    const int k = static_cast<int>(normals.size());
    hr->N.resize(2 * k, n);
    hr->h.resize(2 * k);
    for (int r = 0; r < k; ++r) {
        const Vec& a = normals[r];
        double spread = (a.transpose() * G).cwiseAbs().sum();
        double ac = a.dot(c);
        hr->N.row(2 * r) = a.transpose();
        hr->h(2 * r) = ac + spread;
        hr->N.row(2 * r + 1) = -a.transpose();
        hr->h(2 * r + 1) = -ac + spread;
    }
    return hr;
}

Mat strip_zero_columns(const Mat& G, const Mat* A, Mat* Aout) {
    std::vector<int> keep;
    for (int j = 0; j < G.cols(); ++j) {
        bool zero = G.col(j).norm() < 1e-14;
        if (A && A->rows() > 0 && A->col(j).norm() >= 1e-14) zero = false;
        if (!zero) keep.push_back(j);
    }
    if (static_cast<int>(keep.size()) != G.cols())
        warn("dropped " + std::to_string(G.cols() - keep.size()) + " degenerate generator(s)");
    Mat out(G.rows(), keep.size());
    for (size_t k = 0; k < keep.size(); ++k) out.col(k) = G.col(keep[k]);
    if (Aout && A) {
        Aout->resize(A->rows(), keep.size());
        for (size_t k = 0; k < keep.size(); ++k) Aout->col(k) = A->col(keep[k]);
    }
    return out;
}

// vertices of a planar set by repeated support queries
std::vector<Vec2> support_vertices(const CZono& s) {
    std::vector<Vec2> pts;
    const Vec2 dirs[4] = {Vec2(1, 0), Vec2(0, 1), Vec2(-1, 0), Vec2(0, -1)};
    for (const auto& d : dirs) {
        Vec arg;
        support(s, d, &arg);
        pts.emplace_back(arg(0), arg(1));
    }
    std::vector<Vec2> hull = convex_hull_2d(pts);
    for (int round = 0; round < 200; ++round) {
        if (hull.size() < 2) return hull;
        bool added = false;
        std::vector<Vec2> next = hull;
        const size_t k = hull.size();
        for (size_t i = 0; i < k; ++i) {
            const Vec2& p = hull[i];
            const Vec2& q = hull[(i + 1) % k];
            Vec2 e = q - p;
            if (e.norm() < 1e-12) continue;
            Vec2 nrm(e.y(), -e.x());
            nrm.normalize();
            if (k == 2 && i == 1) nrm = -nrm;  // segment: query both sides
            Vec arg;
            double val = support(s, nrm, &arg);
            if (val > nrm.dot(p) + 1e-9) {
                next.emplace_back(arg(0), arg(1));
                added = true;
            }
        }
        if (k == 2) {
            // a degenerate segment may still have width in the other normal
            Vec2 e = hull[1] - hull[0];
            Vec2 nrm(-e.y(), e.x());
            if (nrm.norm() > 1e-12) {
                nrm.normalize();
                for (double sg : {1.0, -1.0}) {
                    Vec arg;
                    double val = support(s, sg * nrm, &arg);
                    if (val > sg * nrm.dot(hull[0]) + 1e-9) {
                        next.emplace_back(arg(0), arg(1));
                        added = true;
                    }
                }
            }
        }
        if (!added) return hull;
        hull = convex_hull_2d(next);
    }
    return hull;
}

std::shared_ptr<const HRep> planar_hrep(const CZono& s) {
    std::vector<Vec2> v = to_vertices_2d(s);
    if (v.size() < 3) return nullptr;
    return std::make_shared<HRep>(hrep_from_polygon(v));
}

CZono intersect_halfspaces(const CZono& s, const Mat& N, const Vec& h) {
    const int n = s.dim();
    const int k = static_cast<int>(N.rows());
    const int ng = s.ngen();
    const int nc = s.ncon();
    std::vector<double> ranges(k);
    for (int r = 0; r < k; ++r) {
        Vec a = N.row(r).transpose();
        double lo = -support(s, -a);
        if (lo > h(r) + kTol) return CZono::empty(n);
        ranges[r] = std::max(h(r) - lo, 0.0);
    }
    CZono out;
    out.c = s.c;
    out.G = Mat::Zero(n, ng + k);
    out.G.leftCols(ng) = s.G;
    out.A = Mat::Zero(nc + k, ng + k);
    out.b = Vec::Zero(nc + k);
    if (nc > 0) {
        out.A.topLeftCorner(nc, ng) = s.A;
        out.b.head(nc) = s.b;
    }
    for (int r = 0; r < k; ++r) {
        Vec a = N.row(r).transpose();
        out.A.block(nc + r, 0, 1, ng) = a.transpose() * s.G;
        out.A(nc + r, ng + r) = ranges[r] / 2.0;
        out.b(nc + r) = h(r) - a.dot(s.c) - ranges[r] / 2.0;
    }
    if (s.hrep) {
        auto hr = std::make_shared<HRep>();
        hr->N.resize(s.hrep->N.rows() + k, n);
        hr->h.resize(s.hrep->N.rows() + k);
        hr->N << s.hrep->N, N;
        hr->h << s.hrep->h, h;
        out.hrep = hr;
    }
    return out;
}

}  // namespace

bool HRep::contains(const Vec& x, double tol) const {
    for (int r = 0; r < N.rows(); ++r)
        if (N.row(r).dot(x) > h(r) + tol) return false;
    return true;
}

double HRep::slack(const Vec& x) const {
    double s = std::numeric_limits<double>::infinity();
    for (int r = 0; r < N.rows(); ++r) s = std::min(s, h(r) - N.row(r).dot(x));
    return s;
}

bool CZono::contains(const Vec& x, double tol) const {
    if (empty_marker) return false;
    if (hrep) {
        if (x.size() != dim()) throw std::invalid_argument("contains: dimension mismatch");
        return hrep->contains(x, tol);
    }
    return contains_point(*this, x).inside;
}

CZono CZono::empty(int n) {
    CZono e;
    e.c = Vec::Zero(n);
    e.G = Mat::Zero(n, 0);
    e.A = Mat::Zero(0, 0);
    e.b = Vec::Zero(0);
    e.empty_marker = true;
    return e;
}

CZono make_zonotope(const Vec& c, const Mat& G) {
    if (G.rows() != c.size()) throw std::invalid_argument("make_zonotope: G rows != dim");
    CZono z;
    z.c = c;
    z.G = strip_zero_columns(G, nullptr, nullptr);
    z.A = Mat::Zero(0, z.G.cols());
    z.b = Vec::Zero(0);
    z.hrep = zonotope_hrep(z.c, z.G);
    return z;
}

CZono make_box(const Vec& lo, const Vec& hi) {
    if (lo.size() != hi.size()) throw std::invalid_argument("make_box: bound size mismatch");
    for (int i = 0; i < lo.size(); ++i)
        if (hi(i) < lo(i)) throw std::invalid_argument("make_box: inverted bounds");
    Vec c = (lo + hi) / 2.0;
    Mat G = ((hi - lo) / 2.0).asDiagonal();
    return make_zonotope(c, G);
}

CZono make_czono(const Vec& c, const Mat& G, const Mat& A, const Vec& b) {
    if (G.rows() != c.size()) throw std::invalid_argument("make_czono: G rows != dim");
    if (A.rows() > 0 && A.cols() != G.cols()) throw std::invalid_argument("make_czono: A cols != ngen");
    if (A.rows() != b.size()) throw std::invalid_argument("make_czono: A rows != b size");
    if (A.rows() == 0) return make_zonotope(c, G);
    CZono z;
    z.c = c;
    z.G = strip_zero_columns(G, &A, &z.A);
    z.b = b;
    if (z.dim() == 2) {
        if (is_empty(z)) {
            CZono e = CZono::empty(2);
            return e;
        }
        z.hrep = planar_hrep(z);
    }
    return z;
}

Membership contains_point(const CZono& s, const Vec& z) {
    check_dims(s, z, "contains_point");
    Membership m;
    if (s.empty_marker) {
        m.margin = -std::numeric_limits<double>::infinity();
        return m;
    }
    const int n = s.dim();
    const int ng = s.ngen();
    const int nc = s.ncon();
    if (ng == 0) {
        bool eq = (z - s.c).cwiseAbs().maxCoeff() <= kTol;
        m.inside = eq;
        m.margin = eq ? 1.0 : -std::numeric_limits<double>::infinity();
        return m;
    }
    // xi = y - t, 0 <= y <= 2t ; minimise t
    Mat M(n + nc, ng);
    M.topRows(n) = s.G;
    if (nc > 0) M.bottomRows(nc) = s.A;
    Vec d(n + nc);
    d.head(n) = z - s.c;
    if (nc > 0) d.tail(nc) = s.b;
    Mat Aeq(n + nc, ng + 1);
    Aeq.leftCols(ng) = M;
    Aeq.col(ng) = -M.rowwise().sum();
    Mat Ale = Mat::Zero(ng, ng + 1);
    for (int i = 0; i < ng; ++i) {
        Ale(i, i) = 1.0;
        Ale(i, ng) = -2.0;
    }
    Vec cost = Vec::Zero(ng + 1);
    cost(ng) = 1.0;
    LpResult r = solve_lp(cost, Aeq, d, Ale, Vec::Zero(ng));
    if (r.status == LpStatus::infeasible) {
        m.margin = -std::numeric_limits<double>::infinity();
        return m;
    }
    if (r.status != LpStatus::optimal) throw std::runtime_error("contains_point: LP did not converge");
    double t = r.x(ng);
    m.margin = 1.0 - t;
    m.inside = t <= 1.0 + kTol;
    return m;
}

bool is_empty(const CZono& s) {
    if (s.empty_marker) return true;
    if (s.ncon() == 0) return false;
    const int ng = s.ngen();
    Mat Ale = Mat::Identity(ng, ng);
    Vec ble = Vec::Constant(ng, 2.0);
    Vec beq = s.b + s.A.rowwise().sum();
    LpResult r = solve_lp(Vec::Zero(ng), s.A, beq, Ale, ble);
    if (r.status == LpStatus::iteration_limit) throw std::runtime_error("is_empty: LP did not converge");
    return r.status == LpStatus::infeasible;
}

double support(const CZono& s, const Vec& d, Vec* arg) {
    if (s.empty_marker) return -std::numeric_limits<double>::infinity();
    const int ng = s.ngen();
    if (ng == 0) {
        if (arg) *arg = s.c;
        return d.dot(s.c);
    }
    Vec gd = s.G.transpose() * d;
    if (s.ncon() == 0) {
        Vec xi = gd.unaryExpr([](double v) { return v >= 0 ? 1.0 : -1.0; });
        if (arg) *arg = s.c + s.G * xi;
        return d.dot(s.c) + gd.cwiseAbs().sum();
    }
    Mat Ale = Mat::Identity(ng, ng);
    Vec ble = Vec::Constant(ng, 2.0);
    Vec beq = s.b + s.A.rowwise().sum();
    LpResult r = solve_lp(-gd, s.A, beq, Ale, ble);
    if (r.status == LpStatus::infeasible) return -std::numeric_limits<double>::infinity();
    if (r.status != LpStatus::optimal) throw std::runtime_error("support: LP did not converge");
    Vec xi = r.x.array() - 1.0;
    if (arg) *arg = s.c + s.G * xi;
    return d.dot(s.c) + gd.dot(xi);
}

std::pair<Vec, Vec> bounding_box(const CZono& s) {
    const int n = s.dim();
    Vec lo(n), hi(n);
    if (s.is_zonotope()) {
        Vec r = s.G.cwiseAbs().rowwise().sum();
        return {s.c - r, s.c + r};
    }
    if (n == 2 && s.hrep) {
        auto v = to_vertices_2d(s);
        if (!v.empty()) {
            lo = Vec::Constant(2, std::numeric_limits<double>::infinity());
            hi = -lo;
            for (const auto& p : v) {
                lo = lo.cwiseMin(Vec(p));
                hi = hi.cwiseMax(Vec(p));
            }
            return {lo, hi};
        }
    }
    for (int i = 0; i < n; ++i) {
        Vec e = Vec::Unit(n, i);
        hi(i) = support(s, e);
        lo(i) = -support(s, -e);
    }
    return {lo, hi};
}

CZono expand(const CZono& s, double eps) {
    if (eps < 0) throw std::invalid_argument("expand: negative eps");
    if (s.empty_marker) return s;
    if (s.is_zonotope()) return make_zonotope(s.c, (1.0 + eps) * s.G);
    return make_czono(s.c, (1.0 + eps) * s.G, s.A, (1.0 + eps) * s.b);
}

bool is_axis_box(const CZono& s, Vec* lo, Vec* hi) {
    if (!s.is_zonotope() || s.empty_marker) return false;
    for (int j = 0; j < s.ngen(); ++j) {
        int nz = 0;
        for (int i = 0; i < s.dim(); ++i)
            if (std::abs(s.G(i, j)) > 1e-14) ++nz;
        if (nz > 1) return false;
    }
    Vec r = s.G.cwiseAbs().rowwise().sum();
    if (lo) *lo = s.c - r;
    if (hi) *hi = s.c + r;
    return true;
}

CZono contract(const CZono& s, double eps) {
    if (eps < 0) throw std::invalid_argument("contract: negative eps");
    if (s.empty_marker) return s;
    const int n = s.dim();
    Vec lo, hi;
    if (is_axis_box(s, &lo, &hi)) {
        Vec l2 = lo.array() + eps, h2 = hi.array() - eps;
        for (int i = 0; i < n; ++i)
            if (h2(i) < l2(i) - kTol) return CZono::empty(n);
        return make_box(l2, h2.cwiseMax(l2));
    }
    if (s.is_zonotope()) {
        double rmin;
        if (s.hrep) {
            rmin = std::numeric_limits<double>::infinity();
            for (int r = 0; r < s.hrep->N.rows(); ++r) {
                double dist = s.hrep->h(r) - s.hrep->N.row(r).dot(s.c);
                rmin = std::min(rmin, dist / s.hrep->N.row(r).cwiseAbs().sum());
            }
        } else {
            Eigen::JacobiSVD<Mat> svd(s.G);
            rmin = svd.singularValues().minCoeff() / std::sqrt(static_cast<double>(n));
        }
        double k = 1.0 - eps / rmin;
        if (k < 0) return CZono::empty(n);
        return make_zonotope(s.c, k * s.G);
    }
    if (n == 2) {
        if (!s.hrep) {
            if (is_empty(s)) return CZono::empty(2);
            throw std::invalid_argument("contract: degenerate planar set");
        }
        HRep hr = *s.hrep;
        for (int r = 0; r < hr.N.rows(); ++r) hr.h(r) -= eps * hr.N.row(r).cwiseAbs().sum();
        auto [blo, bhi] = bounding_box(s);
        auto poly = polygon_from_hrep(hr, Vec2(blo(0) - 1, blo(1) - 1), Vec2(bhi(0) + 1, bhi(1) + 1));
        if (poly.size() < 3 || polygon_area(poly) < 1e-12) return CZono::empty(2);
        return from_vertices_2d(poly);
    }
    if (s.hrep) {
        Vec h = s.hrep->h;
        for (int r = 0; r < h.size(); ++r) h(r) -= eps * s.hrep->N.row(r).cwiseAbs().sum();
        CZono out = intersect_halfspaces(s, s.hrep->N, h);
        if (!out.empty_marker && is_empty(out)) return CZono::empty(n);
        return out;
    }
    throw std::invalid_argument("contract: no halfspace form for this set");
}

CZono intersect(const CZono& a, const CZono& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("intersect: dimension mismatch");
    const int n = a.dim();
    if (a.empty_marker || b.empty_marker) return CZono::empty(n);
    const int ga = a.ngen(), gb = b.ngen();
    const int ca = a.ncon(), cb = b.ncon();
    CZono out;
    out.c = a.c;
    out.G = Mat::Zero(n, ga + gb);
    out.G.leftCols(ga) = a.G;
    out.A = Mat::Zero(ca + cb + n, ga + gb);
    out.b = Vec::Zero(ca + cb + n);
    if (ca > 0) {
        out.A.block(0, 0, ca, ga) = a.A;
        out.b.head(ca) = a.b;
    }
    if (cb > 0) {
        out.A.block(ca, ga, cb, gb) = b.A;
        out.b.segment(ca, cb) = b.b;
    }
    out.A.block(ca + cb, 0, n, ga) = a.G;
    out.A.block(ca + cb, ga, n, gb) = -b.G;
    out.b.tail(n) = b.c - a.c;
    if (a.hrep && b.hrep) {
        auto hr = std::make_shared<HRep>();
        hr->N.resize(a.hrep->N.rows() + b.hrep->N.rows(), n);
        hr->h.resize(a.hrep->h.size() + b.hrep->h.size());
        hr->N << a.hrep->N, b.hrep->N;
        hr->h << a.hrep->h, b.hrep->h;
        if (n == 2) {
            Vec2 lo(-1e6, -1e6), hi(1e6, 1e6);
            auto poly = polygon_from_hrep(*hr, lo, hi);
            if (poly.size() < 3 || polygon_area(poly) < 1e-14) {
                if (poly.empty()) return CZono::empty(n);
                out.hrep = nullptr;  // lower dimensional overlap, keep the LP path
                return out;
            }
            hr->N = hrep_from_polygon(poly).N;
            hr->h = hrep_from_polygon(poly).h;
        }
        out.hrep = hr;
    } else if (n == 2) {
        if (is_empty(out)) return CZono::empty(n);
        out.hrep = planar_hrep(out);
    }
    return out;
}

CZono inflate(const CZono& s, double eps) {
    if (eps < 0) throw std::invalid_argument("inflate: negative eps");
    if (s.empty_marker) return s;
    const int n = s.dim();
    Vec lo, hi;
    if (is_axis_box(s, &lo, &hi)) return make_box(lo.array() - eps, hi.array() + eps);
    Mat G(n, s.ngen() + n);
    G << s.G, eps * Mat::Identity(n, n);
    if (s.is_zonotope()) return make_zonotope(s.c, G);
    Mat A = Mat::Zero(s.ncon(), G.cols());
    A.leftCols(s.ngen()) = s.A;
    return make_czono(s.c, G, A, s.b);
}

CZono lift(const CZono& s, const Vec& lo, const Vec& hi) {
    const int n = s.dim();
    const int k = static_cast<int>(lo.size());
    CZono out;
    out.empty_marker = s.empty_marker;
    out.c.resize(n + k);
    out.c << s.c, (lo + hi) / 2.0;
    out.G = Mat::Zero(n + k, s.ngen() + k);
    out.G.topLeftCorner(n, s.ngen()) = s.G;
    for (int i = 0; i < k; ++i) out.G(n + i, s.ngen() + i) = (hi(i) - lo(i)) / 2.0;
    out.A = Mat::Zero(s.ncon(), s.ngen() + k);
    if (s.ncon() > 0) out.A.leftCols(s.ngen()) = s.A;
    out.b = s.b;
    if (s.hrep) {
        auto hr = std::make_shared<HRep>();
        const int r = static_cast<int>(s.hrep->N.rows());
        hr->N = Mat::Zero(r + 2 * k, n + k);
        hr->h.resize(r + 2 * k);
        hr->N.topLeftCorner(r, n) = s.hrep->N;
        hr->h.head(r) = s.hrep->h;
        for (int i = 0; i < k; ++i) {
            hr->N(r + 2 * i, n + i) = 1.0;
            hr->h(r + 2 * i) = hi(i);
            hr->N(r + 2 * i + 1, n + i) = -1.0;
            hr->h(r + 2 * i + 1) = -lo(i);
        }
        out.hrep = hr;
    }
    return out;
}

double g_norm(const Mat& G, const Vec& v) {
    if (v.size() != G.rows()) throw std::invalid_argument("g_norm: dimension mismatch");
    double best = 0.0;
    for (int l = 0; l < G.cols(); ++l) {
        double n = G.col(l).norm();
        if (n < 1e-14) continue;
        best = std::max(best, std::abs(v.dot(G.col(l))) / n);
    }
    return best;
}

std::vector<Vec2> to_vertices_2d(const CZono& s) {
    if (s.dim() != 2) throw std::invalid_argument("to_vertices_2d: set is not planar");
    if (s.empty_marker) return {};
    if (s.hrep) {
        Vec r = s.G.cwiseAbs().rowwise().sum();
        Vec2 lo = (s.c - r).array() - 1.0, hi = (s.c + r).array() + 1.0;
        return polygon_from_hrep(*s.hrep, lo, hi);
    }
    if (s.is_zonotope()) {
        std::vector<Vec2> pts;
        for (int k = 0; k < s.ngen(); ++k) {
            Vec2 a(-s.G(1, k), s.G(0, k));
            for (double sg : {1.0, -1.0}) {
                Vec arg;
                support(s, sg * Vec(a), &arg);
                pts.emplace_back(arg(0), arg(1));
            }
        }
        if (pts.empty()) pts.emplace_back(s.c(0), s.c(1));
        return convex_hull_2d(pts);
    }
    if (is_empty(s)) return {};
    return support_vertices(s);
}

CZono from_vertices_2d(const std::vector<Vec2>& pts) {
    std::vector<Vec2> hull = convex_hull_2d(pts);
    if (hull.size() < 3) throw std::invalid_argument("from_vertices_2d: need a polygon with area");
    const int k = static_cast<int>(hull.size());
    Vec2 mean = Vec2::Zero();
    for (const auto& p : hull) mean += p;
    mean /= k;
    CZono z;
    z.c = mean;
    z.G.resize(2, k);
    for (int i = 0; i < k; ++i) z.G.col(i) = (hull[i] - mean) / 2.0;
    z.A = Mat::Ones(1, k);
    z.b = Vec::Constant(1, 2.0 - k);
    z.hrep = std::make_shared<HRep>(hrep_from_polygon(hull));
    return z;
}

std::vector<Vec2> convex_hull_2d(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    std::vector<Vec2> uniq;
    for (const auto& p : pts)
        if (uniq.empty() || (p - uniq.back()).norm() > 1e-12) uniq.push_back(p);
    if (uniq.size() < 3) return uniq;
    auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
        return (a - o).x() * (b - o).y() - (a - o).y() * (b - o).x();
    };
    std::vector<Vec2> h(2 * uniq.size());
    size_t k = 0;
    for (size_t i = 0; i < uniq.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], uniq[i]) <= 1e-12) --k;
        h[k++] = uniq[i];
    }
    for (size_t i = uniq.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], uniq[i]) <= 1e-12) --k;
        h[k++] = uniq[i];
    }
    h.resize(k - 1);
    return h;
}

std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, const Vec2& a, double h) {
    std::vector<Vec2> out;
    const size_t k = poly.size();
    for (size_t i = 0; i < k; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % k];
        double fp = a.dot(p) - h, fq = a.dot(q) - h;
        if (fp <= 0) out.push_back(p);
        if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) {
            double t = fp / (fp - fq);
            out.push_back(p + t * (q - p));
        }
    }
    return out;
}

double polygon_area(const std::vector<Vec2>& poly) {
    double a = 0;
    for (size_t i = 0; i < poly.size(); ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % poly.size()];
        a += p.x() * q.y() - p.y() * q.x();
    }
    return 0.5 * a;
}

HRep hrep_from_polygon(const std::vector<Vec2>& ccw) {
    HRep hr;
    const int k = static_cast<int>(ccw.size());
    hr.N.resize(k, 2);
    hr.h.resize(k);
    for (int i = 0; i < k; ++i) {
        Vec2 e = ccw[(i + 1) % k] - ccw[i];
        Vec2 nrm(e.y(), -e.x());
        nrm.normalize();
        hr.N.row(i) = nrm.transpose();
        hr.h(i) = nrm.dot(ccw[i]);
    }
    return hr;
}

std::vector<Vec2> polygon_from_hrep(const HRep& hr, const Vec2& lo, const Vec2& hi) {
    std::vector<Vec2> poly = {lo, Vec2(hi.x(), lo.y()), hi, Vec2(lo.x(), hi.y())};
    for (int r = 0; r < hr.N.rows() && !poly.empty(); ++r)
        poly = clip_halfplane(poly, Vec2(hr.N(r, 0), hr.N(r, 1)), hr.h(r));
    return convex_hull_2d(poly);
}

}  // namespace zp
