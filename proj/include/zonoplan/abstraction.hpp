#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zonoplan/geometry.hpp"
#include "zonoplan/plant.hpp"

namespace zp {

enum class LatticeMode { full, reduced };

struct Lattice {
    Vec c;
    Mat G;       // generators of the approximated set
    Mat basic;   // columns g_l / N_l
    std::vector<int> N, M;
    double mu = 0.0;  // max |basic_l|
    Mat points;       // n x P, sorted lexicographically

    int size() const { return static_cast<int>(points.cols()); }
    int dim() const { return static_cast<int>(points.rows()); }
    Vec point(int i) const { return points.col(i); }
};

Lattice approximate_cell(const CZono& cell, double mu, LatticeMode mode = LatticeMode::full);

// Normalised generator rows; g-norm of v is max |Ghat v|.
struct GNorm {
    Mat Ghat;  // ng x n
    Vec extent;  // per-axis bound of the unit g-norm ball
    explicit GNorm(const Mat& G);
    GNorm() = default;
    double operator()(const double* v) const;
    double operator()(const Vec& v) const { return (*this)(v.data()); }
};

// Bin index over lattice points for radius queries.
class PointIndex {
public:
    PointIndex() = default;
    PointIndex(const Mat& points, const GNorm& norm, double bin);
    // indices sorted ascending with g-norm distance <= r
    void query(const double* x, double r, std::vector<int>& out) const;
    int nearest(const double* x, double* dist = nullptr) const;

private:
    Mat pts_;
    GNorm norm_;
    bool built_ = false;
    Vec lo_;
    double bin_ = 1.0;
    std::vector<int> cnt_;
    std::vector<int> start_, items_;
    int cell_of(const double* x, int axis) const;
};

enum class Relation { frr, abr };
std::string to_string(Relation r);

struct ModelParams {
    double tau = 0.2;
    double eps = 0.2;
    double eta = 0.2;
    Relation kind = Relation::frr;
    int rk4_steps = 10;
    double radius_scale = 1.0;  // negative controls only
    bool allow_uncertified = false;
    int jobs = 1;  // worker threads; the table does not depend on it
};

// eps - (beta(eps, tau) + mu + eta/2); negative means the certificate fails
double abr_slack(const Beta& beta, double eps, double tau, double mu, double eta);

struct SymbolicModel {
    std::string cell;
    CZono region;
    Lattice lattice;
    std::vector<Vec> inputs;
    Relation kind = Relation::frr;
    ModelParams params;
    double lipschitz = 0.0;
    double radius = 0.0;
    bool certified = true;
    // CSR rows indexed q * inputs.size() + u; an empty row is a disabled input
    std::vector<uint64_t> offsets;
    std::vector<int32_t> succ;

    int states() const { return lattice.size(); }
    int n_inputs() const { return static_cast<int>(inputs.size()); }
    size_t transitions() const { return succ.size(); }
    bool enabled(int q, int u) const {
        size_t r = static_cast<size_t>(q) * inputs.size() + u;
        return offsets[r + 1] > offsets[r];
    }
    std::pair<const int32_t*, const int32_t*> successors(int q, int u) const {
        size_t r = static_cast<size_t>(q) * inputs.size() + u;
        return {succ.data() + offsets[r], succ.data() + offsets[r + 1]};
    }
    std::vector<int> enabled_inputs(int q) const;
    GNorm norm() const { return GNorm(lattice.G); }
    std::string summary() const;
};

// U2(q): grid inputs whose flow endpoint stays in the region
std::vector<std::vector<int>> build_input_map(const Lattice& lat, const CZono& region, const std::vector<Vec>& inputs,
                                              const Plant& plant, double tau, int rk4_steps = 10);

SymbolicModel build_symbolic_model(const std::string& cell, const CZono& region, const Lattice& lat,
                                   const std::vector<Vec>& inputs, const Plant& plant, const ModelParams& params);

uint64_t model_build_count();
void reset_model_build_count();

struct SampleReport {
    int samples = 0;
    int violations = 0;
    int skipped = 0;
};

SampleReport check_frr_sampled(const SymbolicModel& m, const Plant& plant, int samples, uint64_t seed = 1);
SampleReport check_abr_sampled(const SymbolicModel& m, const Plant& plant, int samples, uint64_t seed = 1);

void save_model(const SymbolicModel& m, const std::string& path);
SymbolicModel load_model(const std::string& path);

}  // namespace zp
