#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "ssclab/capacities.hpp"
#include "ssclab/classical.hpp"
#include "ssclab/entropics.hpp"

namespace ssclab {

namespace {

// q(v, u, y, z) flattened with z fastest.
struct Joint {
    std::size_t nv, nu, ny, nz;
    std::vector<double> q;
};

Joint push_through(const JointDistribution& p, const MarkovPair& mp) {
    const auto [nx, ny, nz] = p.dims;
    const auto nv = static_cast<std::size_t>(mp.chan_xv.cols());
    const auto nu = static_cast<std::size_t>(mp.chan_vu.cols());
    Joint j{nv, nu, ny, nz, std::vector<double>(nv * nu * ny * nz, 0.0)};
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t v = 0; v < nv; ++v) {
            const double pxv = mp.chan_xv(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(v));
            if (pxv == 0.0) continue;
            for (std::size_t u = 0; u < nu; ++u) {
                const double w = pxv * mp.chan_vu(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u));
                if (w == 0.0) continue;
                for (std::size_t y = 0; y < ny; ++y) {
                    for (std::size_t z = 0; z < nz; ++z) j.q[((v * nu + u) * ny + y) * nz + z] += w * p.p(x, y, z);
                }
            }
        }
    }
    return j;
}

// Entropy of the marginal on the selected coordinates (mask bits: v=8, u=4, y=2, z=1).
double H(const Joint& j, unsigned mask) {
    const std::size_t dv = mask & 8 ? j.nv : 1, du = mask & 4 ? j.nu : 1;
    const std::size_t dy = mask & 2 ? j.ny : 1, dz = mask & 1 ? j.nz : 1;
    std::vector<double> m(dv * du * dy * dz, 0.0);
    for (std::size_t v = 0; v < j.nv; ++v) {
        for (std::size_t u = 0; u < j.nu; ++u) {
            for (std::size_t y = 0; y < j.ny; ++y) {
                for (std::size_t z = 0; z < j.nz; ++z) {
                    const std::size_t k = (((mask & 8 ? v : 0) * du + (mask & 4 ? u : 0)) * dy + (mask & 2 ? y : 0)) * dz +
                                          (mask & 1 ? z : 0);
                    m[k] += j.q[((v * j.nu + u) * j.ny + y) * j.nz + z];
                }
            }
        }
    }
    return shannon_entropy(m);
}

void check_compatible(const JointDistribution& p, const MarkovPair& mp) {
    mp.validate(1e-9);
    if (static_cast<std::size_t>(mp.chan_xv.rows()) != p.dims[0]) {
        throw ValidationError("chanXV has " + std::to_string(mp.chan_xv.rows()) + " rows but |X| = " +
                                  std::to_string(p.dims[0]),
                              "chanXV");
    }
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Eigen::MatrixXd random_stochastic(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::exponential_distribution<double> ex(1.0);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = ex(rng);
        m.row(r) /= m.row(r).sum();
    }
    return m;
}

Eigen::MatrixXd deterministic(std::size_t rows, std::size_t cols, bool spread) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(spread ? r % cols : 0)) = 1.0;
    return m;
}

// Moves mass `step` between two entries of one row; stays on the simplex.
bool improve(Eigen::MatrixXd& m, const std::function<double()>& f, double& value, double step) {
    bool moved = false;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index i = 0; i < m.cols(); ++i) {
            for (Eigen::Index k = 0; k < m.cols(); ++k) {
                if (i == k) continue;
                const double t = std::min(step, m(r, i));
                if (t <= 0.0) continue;
                m(r, i) -= t;
                m(r, k) += t;
                const double cand = f();
                if (cand > value + 1e-15) {
                    value = cand;
                    moved = true;
                } else {
                    m(r, i) += t;
                    m(r, k) -= t;
                }
            }
        }
    }
    return moved;
}

CkSearchResult run_restart(const JointDistribution& p, std::size_t nv, std::size_t nu, const CkSearchConfig& cfg,
                           std::size_t r, std::uint64_t seed) {
    std::mt19937_64 rng(splitmix(seed ^ splitmix(r + 1)));
    MarkovPair mp;
    if (r == 0) {
        mp = {deterministic(p.dims[0], nv, true), deterministic(nv, nu, false)};
    } else {
        mp = {random_stochastic(p.dims[0], nv, rng), random_stochastic(nv, nu, rng)};
    }
    auto f = [&] { return ck_objective(p, mp); };
    double value = f();
    double step = cfg.init_step;
    CkSearchResult out;
    out.restart = r;
    while (out.iterations < cfg.max_iters) {
        ++out.iterations;
        const bool a = improve(mp.chan_xv, f, value, step);
        const bool b = improve(mp.chan_vu, f, value, step);
        if (!a && !b) {
            step *= 0.5;
            if (step < cfg.tol) {
                out.converged = true;
                break;
            }
        }
    }
    out.best = std::move(mp);
    out.value = value;
    return out;
}

}  // namespace

double ck_objective(const JointDistribution& p, const MarkovPair& mp) {
    check_compatible(p, mp);
    const Joint j = push_through(p, mp);
    const double hu = H(j, 4), hvu = H(j, 12);
    const double iy = hvu + H(j, 6) - H(j, 14) - hu;
    const double iz = hvu + H(j, 5) - H(j, 13) - hu;
    return iy - iz;
}

ChainCheck chain_identity_check(const JointDistribution& p, const MarkovPair& mp) {
    check_compatible(p, mp);
    const Joint j = push_through(p, mp);
    const double hv = H(j, 8), hu = H(j, 4), hvu = H(j, 12);
    ChainCheck c;
    c.lhs = (hv + H(j, 6) - H(j, 14)) - (hv + H(j, 5) - H(j, 13));
    c.rhs = (hvu + H(j, 6) - H(j, 14) - hu) - (hvu + H(j, 5) - H(j, 13) - hu);
    c.max_gap = std::abs(c.lhs - c.rhs);
    return c;
}

CkSearchResult ck_rate_search(const JointDistribution& p, const CkSearchConfig& cfg, std::uint64_t seed) {
    p.validate(1e-9);
    const std::size_t nv = cfg.cap_v ? cfg.cap_v : p.dims[0] + 1;
    const std::size_t nu = cfg.cap_u ? cfg.cap_u : p.dims[0] + 1;
    if (cfg.restarts < 1) throw ValidationError("restarts must be at least 1", "restarts");
    if (!(cfg.init_step > 0.0)) throw ValidationError("init_step must be positive", "init_step");

    std::vector<CkSearchResult> results(cfg.restarts);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t r = next++; r < cfg.restarts; r = next++) results[r] = run_restart(p, nv, nu, cfg, r, seed);
    };
    const std::size_t nt = std::min(resolve_threads(cfg.threads), cfg.restarts);
    if (nt <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    std::size_t best = 0;
    for (std::size_t r = 1; r < results.size(); ++r) {
        if (results[r].value > results[best].value) best = r;
    }
    CkSearchResult out = results[best];
    out.value = ck_objective(p, out.best);
    return out;
}

json to_json(const CkSearchResult& r) {
    return {{"value", r.value},
            {"certificate", to_json(r.best)},
            {"restart", r.restart},
            {"iterations", r.iterations},
            {"converged", r.converged}};
}

json to_json(const ChainCheck& c) { return {{"lhs", c.lhs}, {"rhs", c.rhs}, {"max_gap", c.max_gap}}; }

}  // namespace ssclab
