#pragma once

#include <Eigen/Dense>

namespace zp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    Vec x;
    double objective = 0.0;
};

// minimize c'x  s.t.  Aeq x = beq,  Ale x <= ble,  x >= 0
// Dense two-phase simplex with Bland's rule. Fine for the small programs
// produced by the set operations (tens of variables).
LpResult solve_lp(const Vec& c, const Mat& Aeq, const Vec& beq, const Mat& Ale, const Vec& ble,
                  int max_iter = 20000);

}  // namespace zp
