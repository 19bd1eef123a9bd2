#include "zonoplan/plant.hpp"

#include <cmath>
#include <stdexcept>

namespace zp {

double Beta::operator()(double r, double t) const { return C * r * std::exp(-lambda * t); }

void Plant::rhs(const double* x, const double* u, double* dx) const {
    switch (kind) {
        case PlantKind::bicycle: {
            double a = std::atan(0.5 * std::tan(u[1]));
            double ca = std::cos(a);
            dx[0] = u[0] * std::cos(a + x[2]) / ca;
            dx[1] = u[0] * std::sin(a + x[2]) / ca;
            dx[2] = u[0] * std::tan(u[1]);
            break;
        }
        case PlantKind::integrator:
            for (int i = 0; i < n; ++i) dx[i] = u[i];
            break;
        case PlantKind::stable:
            for (int i = 0; i < n; ++i) dx[i] = -x[i] + u[i];
            break;
        case PlantKind::drift:
            for (int i = 0; i < n; ++i) dx[i] = 0.5 + u[i];
            break;
        case PlantKind::zero:
            for (int i = 0; i < n; ++i) dx[i] = 0.0;
            break;
    }
}

Plant make_plant(const std::string& name, int n) {
    Plant p;
    p.name = name;
    if (name == "bicycle") {
        p.kind = PlantKind::bicycle;
        p.n = 3;
        p.m = 2;
        p.u_lo = Vec::Constant(2, -1.0);
        p.u_hi = Vec::Constant(2, 1.0);
        // max over the input box of |u1| / cos(alpha)
        double a = std::atan(0.5 * std::tan(1.0));
        p.lipschitz = 1.0 / std::cos(a);
        return p;
    }
    if (n <= 0) n = 2;
    if (n > kMaxDim) throw std::invalid_argument("plant dimension too large");
    p.n = n;
    p.m = n;
    p.u_lo = Vec::Constant(n, -1.0);
    p.u_hi = Vec::Constant(n, 1.0);
    if (name == "integrator") {
        p.kind = PlantKind::integrator;
    } else if (name == "stable") {
        p.kind = PlantKind::stable;
        p.lipschitz = 1.0;
        p.beta = Beta{1.0, 1.0};
    } else if (name == "drift") {
        p.kind = PlantKind::drift;
    } else if (name == "zero") {
        p.kind = PlantKind::zero;
    } else {
        throw std::invalid_argument("unknown plant model '" + name + "'");
    }
    return p;
}

void flow_raw(const Plant& p, const double* x, const double* u, double tau, int K, double* out) {
    const int n = p.n;
    double h = tau / K;
    double y[kMaxDim], k1[kMaxDim], k2[kMaxDim], k3[kMaxDim], k4[kMaxDim], t[kMaxDim];
    for (int i = 0; i < n; ++i) y[i] = x[i];
    for (int s = 0; s < K; ++s) {
        p.rhs(y, u, k1);
        for (int i = 0; i < n; ++i) t[i] = y[i] + 0.5 * h * k1[i];
        p.rhs(t, u, k2);
        for (int i = 0; i < n; ++i) t[i] = y[i] + 0.5 * h * k2[i];
        p.rhs(t, u, k3);
        for (int i = 0; i < n; ++i) t[i] = y[i] + h * k3[i];
        p.rhs(t, u, k4);
        for (int i = 0; i < n; ++i) y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
    for (int i = 0; i < n; ++i) out[i] = y[i];
}

Vec flow(const Plant& p, const Vec& x, const Vec& u, double tau, int K) {
    if (x.size() != p.n || u.size() != p.m) throw std::invalid_argument("flow: dimension mismatch");
    Vec out(p.n);
    flow_raw(p, x.data(), u.data(), tau, K, out.data());
    return out;
}

std::vector<Vec> input_grid(const Vec& lo, const Vec& hi, double step) {
    if (step <= 0) throw std::invalid_argument("input_grid: step must be positive");
    const int m = static_cast<int>(lo.size());
    std::vector<int> cnt(m);
    for (int i = 0; i < m; ++i) cnt[i] = static_cast<int>(std::floor((hi[i] - lo[i]) / step + 1e-9)) + 1;
    std::vector<Vec> out;
    std::vector<int> k(m, 0);
    while (true) {
        Vec u(m);
        for (int i = 0; i < m; ++i) {
            u[i] = lo[i] + k[i] * step;
            if (std::abs(u[i]) < 1e-12) u[i] = 0.0;
        }
        out.push_back(u);
        int d = m - 1;
        while (d >= 0 && ++k[d] == cnt[d]) k[d--] = 0;
        if (d < 0) break;
    }
    return out;
}

}  // namespace zp
