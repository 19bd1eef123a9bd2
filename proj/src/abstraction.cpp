#include "zonoplan/abstraction.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "zonoplan/log.hpp"

namespace zp {

namespace {

std::atomic<uint64_t> g_builds{0};

std::vector<int> independent_columns(const Mat& G) {
    const int n = static_cast<int>(G.rows());
    std::vector<int> order(G.cols());
    for (int i = 0; i < static_cast<int>(order.size()); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return G.col(a).norm() > G.col(b).norm(); });
    std::vector<int> chosen;
    Mat B(n, 0);
    for (int j : order) {
        Mat T(n, B.cols() + 1);
        T << B, G.col(j);
        Eigen::FullPivLU<Mat> lu(T);
        lu.setThreshold(1e-9);
        if (lu.rank() == T.cols()) {
            B = T;
            chosen.push_back(j);
            if (static_cast<int>(chosen.size()) == n) break;
        }
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

// Parallel generators add up to one; the set is unchanged.
Mat merge_parallel(const Mat& G) {
    std::vector<Vec> out;
    for (int j = 0; j < G.cols(); ++j) {
        Vec g = G.col(j);
        bool merged = false;
        for (auto& o : out) {
            double c = o.dot(g) / (o.norm() * g.norm());
            if (std::abs(c) > 1.0 - 1e-12) {
                o += c > 0 ? g : Vec(-g);
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(g);
    }
    Mat R(G.rows(), out.size());
    for (size_t j = 0; j < out.size(); ++j) R.col(j) = out[j];
    return R;
}

struct Key {
    std::vector<long long> k;
    bool operator<(const Key& o) const { return k < o.k; }
};

Key key_of(const Vec& p) {
    Key k;
    k.k.resize(p.size());
    for (int i = 0; i < p.size(); ++i) k.k[i] = std::llround(p[i] * 1e8);
    return k;
}

}  // namespace

Lattice approximate_cell(const CZono& cell, double mu, LatticeMode mode) {
    if (mu <= 0) throw std::invalid_argument("approximate_cell: mu must be positive");
    if (cell.empty_marker || is_empty(cell)) throw std::invalid_argument("approximate_cell: empty cell");
    if (!cell.contains(cell.c)) throw std::invalid_argument("approximate_cell: centre lies outside the set");
    Lattice L;
    L.c = cell.c;
    L.G = cell.G;
    Mat G = cell.G;
    if (mode == LatticeMode::reduced) {
        G = merge_parallel(G);
        auto cols = independent_columns(G);
        Mat R(G.rows(), cols.size());
        for (size_t j = 0; j < cols.size(); ++j) R.col(j) = G.col(cols[j]);
        G = R;
    }
    const int n = cell.dim();
    const int ng = static_cast<int>(G.cols());
    double gmax = 0.0;
    for (int l = 0; l < ng; ++l) gmax = std::max(gmax, G.col(l).norm());
    if (mu > gmax) {
        warn("mu " + std::to_string(mu) + " exceeds every generator length; lattice is the centre only");
        L.basic = Mat::Zero(n, 0);
        L.points = cell.c;
        L.mu = 0.0;
        return L;
    }
    L.basic.resize(n, ng);
    L.N.resize(ng);
    L.M.resize(ng);
    for (int l = 0; l < ng; ++l) {
        double len = G.col(l).norm();
        int N = std::max(1, static_cast<int>(std::ceil(len / mu - 1e-9)));
        L.N[l] = N;
        L.basic.col(l) = G.col(l) / N;
        L.mu = std::max(L.mu, len / N);
        int M = 0;
        while (M < N && cell.contains(cell.c + (M + 1) * L.basic.col(l)) &&
               cell.contains(cell.c - (M + 1) * L.basic.col(l)))
            ++M;
        L.M[l] = M;
    }
    // propagate from the centre one basic generator at a time
    std::map<Key, int> seen;
    std::vector<Vec> pts;
    std::deque<std::pair<Vec, std::vector<int>>> q;
    seen[key_of(cell.c)] = 0;
    pts.push_back(cell.c);
    q.emplace_back(cell.c, std::vector<int>(ng, 0));
    while (!q.empty()) {
        auto [p, a] = q.front();
        q.pop_front();
        for (int l = 0; l < ng; ++l) {
            for (int s : {1, -1}) {
                if (std::abs(a[l] + s) > L.M[l]) continue;
                Vec r = p + s * L.basic.col(l);
                Key k = key_of(r);
                if (seen.count(k)) continue;
                if (!cell.contains(r)) continue;
                seen[k] = 1;
                pts.push_back(r);
                auto b = a;
                b[l] += s;
                q.emplace_back(r, b);
            }
        }
    }
    std::sort(pts.begin(), pts.end(), [](const Vec& x, const Vec& y) {
        for (int i = 0; i < x.size(); ++i)
            if (x[i] != y[i]) return x[i] < y[i];
        return false;
    });
    L.points.resize(n, pts.size());
    for (size_t i = 0; i < pts.size(); ++i) L.points.col(i) = pts[i];
    return L;
}

GNorm::GNorm(const Mat& G) {
    const int n = static_cast<int>(G.rows());
    Ghat.resize(G.cols(), n);
    for (int l = 0; l < G.cols(); ++l) Ghat.row(l) = G.col(l).transpose() / G.col(l).norm();
    extent = Vec::Constant(n, 1.0);
    auto cols = independent_columns(G);
    if (static_cast<int>(cols.size()) == n) {
        Mat B(n, n);
        for (int j = 0; j < n; ++j) B.row(j) = Ghat.row(cols[j]);
        Mat Bi = B.inverse();
        for (int i = 0; i < n; ++i) extent[i] = Bi.row(i).cwiseAbs().sum();
    } else {
        extent = Vec::Constant(n, std::numeric_limits<double>::infinity());
    }
}

double GNorm::operator()(const double* v) const {
    double m = 0.0;
    const int n = static_cast<int>(Ghat.cols());
    for (int l = 0; l < Ghat.rows(); ++l) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += Ghat(l, i) * v[i];
        m = std::max(m, std::abs(s));
    }
    return m;
}

PointIndex::PointIndex(const Mat& points, const GNorm& norm, double bin) : bin_(bin) {
    pts_ = points;
    built_ = true;
    norm_ = norm;
    const int n = static_cast<int>(points.rows());
    lo_ = points.rowwise().minCoeff();
    Vec hi = points.rowwise().maxCoeff();
    cnt_.resize(n);
    size_t total = 1;
    for (int i = 0; i < n; ++i) {
        cnt_[i] = static_cast<int>(std::floor((hi[i] - lo_[i]) / bin_)) + 1;
        total *= cnt_[i];
    }
    std::vector<int> bin_of(points.cols());
    std::vector<int> count(total + 1, 0);
    for (int p = 0; p < points.cols(); ++p) {
        size_t id = 0;
        for (int i = n - 1; i >= 0; --i) id = id * cnt_[i] + cell_of(points.col(p).data(), i);
        bin_of[p] = static_cast<int>(id);
        ++count[id + 1];
    }
    start_.assign(total + 1, 0);
    for (size_t b = 0; b < total; ++b) start_[b + 1] = start_[b] + count[b + 1];
    items_.resize(points.cols());
    std::vector<int> fill(start_.begin(), start_.end() - 1);
    for (int p = 0; p < points.cols(); ++p) items_[fill[bin_of[p]]++] = p;
}

int PointIndex::cell_of(const double* x, int axis) const {
    int k = static_cast<int>(std::floor((x[axis] - lo_[axis]) / bin_));
    return std::clamp(k, 0, cnt_[axis] - 1);
}

void PointIndex::query(const double* x, double r, std::vector<int>& out) const {
    out.clear();
    if (!built_) return;
    const int n = static_cast<int>(pts_.rows());
    int lo[kMaxDim], hi[kMaxDim], k[kMaxDim];
    for (int i = 0; i < n; ++i) {
        double e = r * norm_.extent[i] + 1e-9;
        if (!std::isfinite(e)) e = 1e300;
        double a = (x[i] - e - lo_[i]) / bin_, b = (x[i] + e - lo_[i]) / bin_;
        if (b < 0 || a >= cnt_[i]) return;
        lo[i] = std::max(0, static_cast<int>(std::floor(a)));
        hi[i] = std::min(cnt_[i] - 1, static_cast<int>(std::floor(b)));
        k[i] = lo[i];
    }
    double d[kMaxDim];
    while (true) {
        size_t id = 0;
        for (int i = n - 1; i >= 0; --i) id = id * cnt_[i] + k[i];
        for (int t = start_[id]; t < start_[id + 1]; ++t) {
            int p = items_[t];
            for (int i = 0; i < n; ++i) d[i] = pts_(i, p) - x[i];
            if (norm_(d) <= r + 1e-9) out.push_back(p);
        }
        int i = 0;
        while (i < n && ++k[i] > hi[i]) k[i] = lo[i], ++i;
        if (i == n) break;
    }
    std::sort(out.begin(), out.end());
}

int PointIndex::nearest(const double* x, double* dist) const {
    if (!built_ || pts_.cols() == 0) return -1;
    const int n = static_cast<int>(pts_.rows());
    std::vector<int> cand;
    double r = bin_;
    for (int it = 0; it < 60 && cand.empty(); ++it, r *= 2) query(x, r, cand);
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    double d[kMaxDim];
    for (int p : cand) {
        for (int i = 0; i < n; ++i) d[i] = pts_(i, p) - x[i];
        double v = norm_(d);
        if (v < bd - 1e-12) {
            bd = v;
            best = p;
        }
    }
    if (dist) *dist = bd;
    return best;
}

std::string to_string(Relation r) { return r == Relation::frr ? "FRR" : "ABR"; }

double abr_slack(const Beta& beta, double eps, double tau, double mu, double eta) {
    return eps - (beta(eps, tau) + mu + 0.5 * eta);
}

std::vector<int> SymbolicModel::enabled_inputs(int q) const {
    std::vector<int> out;
    for (int u = 0; u < n_inputs(); ++u)
        if (enabled(q, u)) out.push_back(u);
    return out;
}

std::string SymbolicModel::summary() const {
    std::ostringstream os;
    os << "cell " << cell << "\n"
       << "relation " << to_string(kind) << (certified ? "" : " (uncertified)") << "\n"
       << "states " << states() << "\n"
       << "inputs " << n_inputs() << "\n"
       << "transitions " << transitions() << "\n"
       << "tau " << params.tau << "\neps " << params.eps << "\nmu " << lattice.mu << "\neta " << params.eta << "\n"
       << "radius " << radius << "\n";
    return os.str();
}

std::vector<std::vector<int>> build_input_map(const Lattice& lat, const CZono& region, const std::vector<Vec>& inputs,
                                              const Plant& plant, double tau, int rk4_steps) {
    std::vector<std::vector<int>> out(lat.size());
    Vec e(plant.n);
    for (int q = 0; q < lat.size(); ++q) {
        Vec x = lat.point(q);
        for (int u = 0; u < static_cast<int>(inputs.size()); ++u) {
            flow_raw(plant, x.data(), inputs[u].data(), tau, rk4_steps, e.data());
            if (region.contains(e)) out[q].push_back(u);
        }
    }
    return out;
}

SymbolicModel build_symbolic_model(const std::string& cell, const CZono& region, const Lattice& lat,
                                   const std::vector<Vec>& inputs, const Plant& plant, const ModelParams& params) {
    if (region.dim() != plant.n || lat.dim() != plant.n)
        throw std::invalid_argument("build_symbolic_model: dimension mismatch for cell " + cell);
    SymbolicModel m;
    m.cell = cell;
    m.region = region;
    m.lattice = lat;
    m.inputs = inputs;
    m.kind = params.kind;
    m.params = params;
    m.lipschitz = plant.lipschitz;
    if (params.kind == Relation::frr) {
        m.radius = (1.0 + std::exp(plant.lipschitz * params.tau)) * params.eps;
    } else {
        if (!plant.beta) throw std::invalid_argument("ABR requires a beta certificate for plant " + plant.name);
        double slack = abr_slack(*plant.beta, params.eps, params.tau, lat.mu, params.eta);
        if (slack < 0) {
            if (!params.allow_uncertified) {
                std::ostringstream os;
                os << "ABR certificate fails for cell " << cell << ": beta(eps,tau) + mu + eta/2 exceeds eps by "
                   << -slack;
                throw std::runtime_error(os.str());
            }
            m.certified = false;
        }
        m.radius = 0.5 * lat.mu;
    }
    m.radius *= params.radius_scale;
    ++g_builds;

    GNorm norm(lat.G);
    double bin = std::max(m.radius, 1e-3);
    PointIndex index(lat.points, norm, bin);
    const size_t Q = lat.size(), M = inputs.size();
    const int jobs = std::max(1, std::min<int>(params.jobs, static_cast<int>(Q)));
    std::vector<std::vector<uint32_t>> counts(jobs);
    std::vector<std::vector<int32_t>> parts(jobs);
    auto work = [&](int w) {
        size_t q0 = Q * w / jobs, q1 = Q * (w + 1) / jobs;
        std::vector<int> hits;
        Vec e(plant.n);
        counts[w].reserve((q1 - q0) * M);
        for (size_t q = q0; q < q1; ++q) {
            const double* x = lat.points.col(q).data();
            for (size_t u = 0; u < M; ++u) {
                flow_raw(plant, x, inputs[u].data(), params.tau, params.rk4_steps, e.data());
                if (!region.contains(e)) {
                    counts[w].push_back(0);
                    continue;
                }
                index.query(e.data(), m.radius, hits);
                parts[w].insert(parts[w].end(), hits.begin(), hits.end());
                counts[w].push_back(static_cast<uint32_t>(hits.size()));
            }
        }
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> th;
        for (int w = 0; w < jobs; ++w) th.emplace_back(work, w);
        for (auto& t : th) t.join();
    }
    m.offsets.assign(Q * M + 1, 0);
    size_t r = 0;
    for (int w = 0; w < jobs; ++w) {
        for (uint32_t c : counts[w]) {
            m.offsets[r + 1] = m.offsets[r] + c;
            ++r;
        }
        m.succ.insert(m.succ.end(), parts[w].begin(), parts[w].end());
        std::vector<int32_t>().swap(parts[w]);
    }
    return m;
}

uint64_t model_build_count() { return g_builds.load(); }
void reset_model_build_count() { g_builds = 0; }

namespace {

Vec sample_offset(std::mt19937_64& rng, const GNorm& norm, double eps) {
    const int n = static_cast<int>(norm.extent.size());
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Vec v(n);
    for (int it = 0; it < 1000; ++it) {
        for (int i = 0; i < n; ++i) v[i] = U(rng) * eps * std::min(norm.extent[i], 1e3);
        if (norm(v) <= eps) return v;
    }
    return Vec::Zero(n);
}

}  // namespace

SampleReport check_frr_sampled(const SymbolicModel& m, const Plant& plant, int samples, uint64_t seed) {
    SampleReport rep;
    std::mt19937_64 rng(seed);
    GNorm norm = m.norm();
    PointIndex index(m.lattice.points, norm, std::max(m.params.eps, 1e-3));
    std::uniform_int_distribution<int> pick_q(0, m.states() - 1);
    std::vector<int> related;
    Vec xp(plant.n);
    for (int s = 0; s < samples; ++s) {
        int q = pick_q(rng);
        auto en = m.enabled_inputs(q);
        if (en.empty()) {
            ++rep.skipped;
            continue;
        }
        ++rep.samples;
        int u = en[std::uniform_int_distribution<int>(0, static_cast<int>(en.size()) - 1)(rng)];
        Vec x = m.lattice.point(q) + sample_offset(rng, norm, m.params.eps);
        flow_raw(plant, x.data(), m.inputs[u].data(), m.params.tau, m.params.rk4_steps, xp.data());
        index.query(xp.data(), m.params.eps, related);
        auto [b, e] = m.successors(q, u);
        bool bad = related.empty() && m.region.contains(xp);
        for (int r : related)
            if (!std::binary_search(b, e, r)) bad = true;
        if (bad) ++rep.violations;
    }
    return rep;
}

SampleReport check_abr_sampled(const SymbolicModel& m, const Plant& plant, int samples, uint64_t seed) {
    SampleReport rep;
    std::mt19937_64 rng(seed);
    GNorm norm = m.norm();
    std::uniform_int_distribution<int> pick_q(0, m.states() - 1);
    std::uniform_real_distribution<double> U01(0.0, 1.0);
    Vec xp(plant.n);
    double d[kMaxDim];
    const double eps = m.params.eps;
    for (int s = 0; s < samples; ++s) {
        int q = pick_q(rng);
        auto en = m.enabled_inputs(q);
        if (en.empty()) {
            ++rep.skipped;
            continue;
        }
        Vec x = m.lattice.point(q) + sample_offset(rng, norm, eps);
        bool bad = false;
        // abstract input matched by the same concrete input
        int u = en[std::uniform_int_distribution<int>(0, static_cast<int>(en.size()) - 1)(rng)];
        flow_raw(plant, x.data(), m.inputs[u].data(), m.params.tau, m.params.rk4_steps, xp.data());
        auto [b, e] = m.successors(q, u);
        bool any = false;
        for (auto it = b; it != e && !any; ++it) {
            for (int i = 0; i < plant.n; ++i) d[i] = m.lattice.points(i, *it) - xp[i];
            any = norm(d) <= eps + 1e-9;
        }
        if (!any) bad = true;
        // concrete input matched by the nearest grid input
        Vec uc(plant.m);
        for (int i = 0; i < plant.m; ++i) uc[i] = plant.u_lo[i] + U01(rng) * (plant.u_hi[i] - plant.u_lo[i]);
        int best = 0;
        double bd = 1e300;
        for (int k = 0; k < m.n_inputs(); ++k) {
            double dd = (m.inputs[k] - uc).cwiseAbs().maxCoeff();
            if (dd < bd) bd = dd, best = k;
        }
        if (m.enabled(q, best)) {
            flow_raw(plant, x.data(), uc.data(), m.params.tau, m.params.rk4_steps, xp.data());
            auto [b2, e2] = m.successors(q, best);
            for (auto it = b2; it != e2; ++it) {
                for (int i = 0; i < plant.n; ++i) d[i] = m.lattice.points(i, *it) - xp[i];
                if (norm(d) > eps + 1e-9) bad = true;
            }
        }
        ++rep.samples;
        if (bad) ++rep.violations;
    }
    return rep;
}

namespace {

template <class T>
void put(std::ofstream& f, const T& v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
void get(std::ifstream& f, T& v) {
    f.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!f) throw std::runtime_error("model file truncated");
}
void put_mat(std::ofstream& f, const Mat& M) {
    put<int64_t>(f, M.rows());
    put<int64_t>(f, M.cols());
    f.write(reinterpret_cast<const char*>(M.data()), sizeof(double) * M.size());
}
Mat get_mat(std::ifstream& f) {
    int64_t r, c;
    get(f, r);
    get(f, c);
    if (r < 0 || c < 0 || r > (1 << 20) || c > (1 << 26)) throw std::runtime_error("model file corrupt");
    Mat M(r, c);
    f.read(reinterpret_cast<char*>(M.data()), sizeof(double) * M.size());
    if (!f) throw std::runtime_error("model file truncated");
    return M;
}
void put_str(std::ofstream& f, const std::string& s) {
    put<uint32_t>(f, static_cast<uint32_t>(s.size()));
    f.write(s.data(), s.size());
}
std::string get_str(std::ifstream& f) {
    uint32_t n;
    get(f, n);
    if (n > (1u << 20)) throw std::runtime_error("model file corrupt");
    std::string s(n, '\0');
    f.read(s.data(), n);
    return s;
}

const uint32_t kMagic = 0x4d505a31;  // "1ZPM"

}  // namespace

void save_model(const SymbolicModel& m, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    put(f, kMagic);
    put_str(f, m.cell);
    put<int32_t>(f, m.kind == Relation::frr ? 0 : 1);
    put<int32_t>(f, m.certified ? 1 : 0);
    for (double v : {m.params.tau, m.params.eps, m.params.eta, m.params.radius_scale, m.lipschitz, m.radius})
        put(f, v);
    put<int32_t>(f, m.params.rk4_steps);
    put_mat(f, m.region.c);
    put_mat(f, m.region.G);
    put_mat(f, m.region.A);
    put_mat(f, m.region.b);
    put_mat(f, m.lattice.c);
    put_mat(f, m.lattice.G);
    put_mat(f, m.lattice.basic);
    put(f, m.lattice.mu);
    put_mat(f, m.lattice.points);
    Mat U(m.inputs.empty() ? 0 : m.inputs[0].size(), m.inputs.size());
    for (size_t i = 0; i < m.inputs.size(); ++i) U.col(i) = m.inputs[i];
    put_mat(f, U);
    put<uint64_t>(f, m.offsets.size());
    f.write(reinterpret_cast<const char*>(m.offsets.data()), sizeof(uint64_t) * m.offsets.size());
    put<uint64_t>(f, m.succ.size());
    f.write(reinterpret_cast<const char*>(m.succ.data()), sizeof(int32_t) * m.succ.size());
    if (!f) throw std::runtime_error("write failed: " + path);
}

SymbolicModel load_model(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    uint32_t magic;
    get(f, magic);
    if (magic != kMagic) throw std::runtime_error(path + " is not a model file");
    SymbolicModel m;
    m.cell = get_str(f);
    int32_t kind, cert;
    get(f, kind);
    get(f, cert);
    m.kind = kind == 0 ? Relation::frr : Relation::abr;
    m.params.kind = m.kind;
    m.certified = cert != 0;
    get(f, m.params.tau);
    get(f, m.params.eps);
    get(f, m.params.eta);
    get(f, m.params.radius_scale);
    get(f, m.lipschitz);
    get(f, m.radius);
    get(f, m.params.rk4_steps);
    Vec c = get_mat(f);
    Mat G = get_mat(f), A = get_mat(f);
    Vec b = get_mat(f);
    m.region = A.rows() ? make_czono(c, G, A, b) : make_zonotope(c, G);
    m.lattice.c = get_mat(f);
    m.lattice.G = get_mat(f);
    m.lattice.basic = get_mat(f);
    get(f, m.lattice.mu);
    m.lattice.points = get_mat(f);
    Mat U = get_mat(f);
    for (int i = 0; i < U.cols(); ++i) m.inputs.push_back(U.col(i));
    uint64_t no, ns;
    get(f, no);
    if (no != static_cast<uint64_t>(m.states()) * m.inputs.size() + 1) throw std::runtime_error("model file corrupt");
    m.offsets.resize(no);
    f.read(reinterpret_cast<char*>(m.offsets.data()), sizeof(uint64_t) * no);
    get(f, ns);
    if (ns != m.offsets.back()) throw std::runtime_error("model file corrupt");
    m.succ.resize(ns);
    f.read(reinterpret_cast<char*>(m.succ.data()), sizeof(int32_t) * ns);
    if (!f) throw std::runtime_error("model file truncated");
    return m;
}

}  // namespace zp
