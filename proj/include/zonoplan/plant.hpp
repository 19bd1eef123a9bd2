#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zonoplan/lp.hpp"

namespace zp {

constexpr int kMaxDim = 8;

enum class PlantKind { bicycle, integrator, stable, drift, zero };

struct Beta {
    double C = 1.0;
    double lambda = 1.0;
    double operator()(double r, double t) const;
};

struct Plant {
    PlantKind kind = PlantKind::zero;
    std::string name;
    int n = 0;  // state dimension
    int m = 0;  // input dimension
    Vec u_lo, u_hi;
    double lipschitz = 0.0;  // infinity-norm bound over the input box
    std::optional<Beta> beta;

    void rhs(const double* x, const double* u, double* dx) const;
};

// bicycle: n = 3, m = 2; integrator/stable/drift/zero: m = n
Plant make_plant(const std::string& name, int n = 0);

// fixed-step RK4 with h = tau / K
Vec flow(const Plant& p, const Vec& x, const Vec& u, double tau, int K = 10);
void flow_raw(const Plant& p, const double* x, const double* u, double tau, int K, double* out);

// all grid points lo + k*step inside [lo, hi] per axis, last axis fastest
std::vector<Vec> input_grid(const Vec& lo, const Vec& hi, double step);

}  // namespace zp
