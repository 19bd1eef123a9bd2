#include "zonoplan/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace zp {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-10;

struct Tableau {
    int rows = 0;  // constraint rows
    int cols = 0;  // variables (rhs kept separately)
    std::vector<double> a;  // rows x cols
    std::vector<double> rhs;
    std::vector<double> cost;  // reduced costs, length cols
    double cost_rhs = 0.0;     // minus the current objective
    std::vector<int> basis;

    double& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    void pivot(int pr, int pc) {
        double p = at(pr, pc);
        for (int j = 0; j < cols; ++j) at(pr, j) /= p;
        rhs[pr] /= p;
        for (int r = 0; r < rows; ++r) {
            if (r == pr) continue;
            double f = at(r, pc);
            if (f == 0.0) continue;
            for (int j = 0; j < cols; ++j) at(r, j) -= f * at(pr, j);
            rhs[r] -= f * rhs[pr];
        }
        double f = cost[pc];
        if (f != 0.0) {
            for (int j = 0; j < cols; ++j) cost[j] -= f * at(pr, j);
            cost_rhs -= f * rhs[pr];
        }
        basis[pr] = pc;
    }

    // returns status; allowed[j] false excludes column j from entering
    LpStatus run(const std::vector<char>& allowed, int max_iter) {
        for (int it = 0; it < max_iter; ++it) {
            int enter = -1;
            for (int j = 0; j < cols; ++j) {
                if (allowed[j] && cost[j] < -kCostTol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return LpStatus::optimal;
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int r = 0; r < rows; ++r) {
                double v = at(r, enter);
                if (v > kPivotTol) {
                    double ratio = rhs[r] / v;
                    if (ratio < best - 1e-12 ||
                        (std::abs(ratio - best) <= 1e-12 && leave >= 0 && basis[r] < basis[leave])) {
                        best = ratio;
                        leave = r;
                    }
                }
            }
            if (leave < 0) return LpStatus::unbounded;
            pivot(leave, enter);
        }
        return LpStatus::iteration_limit;
    }
};

}  // namespace

LpResult solve_lp(const Vec& c, const Mat& Aeq, const Vec& beq, const Mat& Ale, const Vec& ble,
                  int max_iter) {
    const int n = static_cast<int>(c.size());
    const int me = static_cast<int>(Aeq.rows());
    const int ml = static_cast<int>(Ale.rows());
    const int m = me + ml;

    // columns: n originals, ml slacks, m artificials
    Tableau t;
    t.rows = m;
    t.cols = n + ml + m;
    t.a.assign(static_cast<size_t>(t.rows) * t.cols, 0.0);
    t.rhs.assign(m, 0.0);
    t.basis.assign(m, -1);

    for (int r = 0; r < me; ++r) {
        double s = beq(r) < 0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) t.at(r, j) = s * Aeq(r, j);
        t.rhs[r] = s * beq(r);
    }
    for (int r = 0; r < ml; ++r) {
        int row = me + r;
        double s = ble(r) < 0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) t.at(row, j) = s * Ale(r, j);
        t.at(row, n + r) = s;
        t.rhs[row] = s * ble(r);
    }
    // slack with +1 coefficient can start basic; others get an artificial
    std::vector<char> is_art(t.cols, 0);
    for (int r = 0; r < m; ++r) {
        int art = n + ml + r;
        is_art[art] = 1;
        if (r >= me && t.at(r, n + (r - me)) > 0) {
            t.basis[r] = n + (r - me);
        } else {
            t.at(r, art) = 1.0;
            t.basis[r] = art;
        }
    }

    // phase 1
    t.cost.assign(t.cols, 0.0);
    t.cost_rhs = 0.0;
    for (int r = 0; r < m; ++r) {
        if (!is_art[t.basis[r]]) continue;
        t.cost[t.basis[r]] = 1.0;
    }
    for (int r = 0; r < m; ++r) {
        if (!is_art[t.basis[r]]) continue;
        for (int j = 0; j < t.cols; ++j) t.cost[j] -= t.at(r, j);
        t.cost_rhs -= t.rhs[r];
    }
    std::vector<char> allowed(t.cols, 1);
    LpResult res;
    LpStatus st = t.run(allowed, max_iter);
    if (st == LpStatus::iteration_limit) {
        res.status = st;
        return res;
    }
    double scale = 1.0;
    for (int r = 0; r < m; ++r) scale = std::max(scale, std::abs(t.rhs[r]));
    if (-t.cost_rhs > 1e-9 * scale) {
        res.status = LpStatus::infeasible;
        return res;
    }
    // drive remaining artificials out of the basis
    for (int r = 0; r < m; ++r) {
        if (!is_art[t.basis[r]]) continue;
        int pc = -1;
        for (int j = 0; j < n + ml; ++j) {
            if (std::abs(t.at(r, j)) > 1e-9) {
                pc = j;
                break;
            }
        }
        if (pc >= 0) t.pivot(r, pc);
        // otherwise the row is redundant; the artificial stays at zero
    }
    for (int j = 0; j < t.cols; ++j)
        if (is_art[j]) allowed[j] = 0;

    // phase 2
    t.cost.assign(t.cols, 0.0);
    for (int j = 0; j < n; ++j) t.cost[j] = c(j);
    t.cost_rhs = 0.0;
    for (int r = 0; r < m; ++r) {
        int b = t.basis[r];
        double cb = t.cost[b];
        if (cb == 0.0) continue;
        for (int j = 0; j < t.cols; ++j) t.cost[j] -= cb * t.at(r, j);
        t.cost_rhs -= cb * t.rhs[r];
    }
    st = t.run(allowed, max_iter);
    res.status = st;
    if (st != LpStatus::optimal) return res;
    res.x = Vec::Zero(n);
    for (int r = 0; r < m; ++r)
        if (t.basis[r] < n) res.x(t.basis[r]) = t.rhs[r];
    res.objective = c.dot(res.x);
    return res;
}

}  // namespace zp
