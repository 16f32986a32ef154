#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include <Eigen/SVD>

#include "common.hpp"

namespace ssclab {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive(std::uint64_t seed, std::uint64_t k) { return splitmix(seed ^ splitmix(k + 1)); }

struct Move {
    Eigen::Index p, q;  // q < 0: phase on row p
    bool imaginary;
};

std::vector<Move> moves_for(std::size_t out) {
    std::vector<Move> m;
    const auto n = static_cast<Eigen::Index>(out);
    for (Eigen::Index p = 0; p < n; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
            m.push_back({p, q, false});
            m.push_back({p, q, true});
        }
    }
    for (Eigen::Index p = 0; p < n; ++p) m.push_back({p, -1, false});
    return m;
}

void apply_move(Mat& v, const Move& mv, double theta) {
    if (mv.q < 0) {
        v.row(mv.p) *= std::polar(1.0, theta);
        return;
    }
    const double c = std::cos(theta), s = std::sin(theta);
    const cplx off = mv.imaginary ? cplx(0.0, s) : cplx(s, 0.0);
    const Eigen::RowVectorXcd rp = v.row(mv.p);
    const Eigen::RowVectorXcd rq = v.row(mv.q);
    // [[c, -conj(off)], [off, c]] is unitary for either choice of off.
    v.row(mv.p) = c * rp - std::conj(off) * rq;
    v.row(mv.q) = off * rp + c * rq;
}

Mat polar_clean(const Mat& v) {
    Eigen::JacobiSVD<Mat> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

double safe(double x) { return std::isnan(x) ? -std::numeric_limits<double>::infinity() : x; }

SearchResult run_restart(const std::function<double(const Mat&)>& f, Mat v, const OptimizerConfig& cfg,
                         const std::vector<Move>& moves) {
    SearchResult r;
    double best = safe(f(v));
    double step = cfg.init_step;
    while (r.iterations < cfg.max_iters) {
        ++r.iterations;
        bool improved = false;
        for (const auto& mv : moves) {
            for (double sign : {1.0, -1.0}) {
                Mat trial = v;
                apply_move(trial, mv, sign * step);
                const double val = safe(f(trial));
                if (val > best + 1e-15) {
                    best = val;
                    v = std::move(trial);
                    improved = true;
                    break;
                }
            }
        }
        r.trace.push_back(best);
        if (!improved) {
            step *= cfg.shrink;
            if (step < cfg.tol) {
                r.converged = true;
                break;
            }
        }
    }
    r.best = polar_clean(v);
    r.value = best;
    return r;
}

}  // namespace

std::size_t resolve_threads(std::size_t requested) {
    std::size_t n = requested;
    if (n == 0) {
        if (const char* env = std::getenv("SSCLAB_THREADS")) n = static_cast<std::size_t>(std::strtoul(env, nullptr, 10));
    }
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

void OptimizerConfig::validate() const {
    if (restarts < 1) throw ValidationError("restarts must be at least 1", "restarts");
    if (max_iters < 1) throw ValidationError("max_iters must be at least 1", "max_iters");
    if (!(init_step > 0.0)) throw ValidationError("init_step must be positive", "init_step");
    if (!(shrink > 0.0 && shrink < 1.0)) throw ValidationError("shrink must lie in (0, 1)", "shrink");
    if (!(tol > 0.0)) throw ValidationError("tol must be positive", "tol");
    if (kraus < 1) throw ValidationError("kraus must be at least 1", "kraus");
    for (const auto& [x, y] : ancilla_dims) {
        if (x < 1 || y < 1) throw ValidationError("ancilla dimensions must be positive", "ancilla_dims");
    }
}

SearchResult search_isometry(const std::function<double(const Mat&)>& f, std::size_t in, std::size_t out,
                             const OptimizerConfig& cfg, std::uint64_t seed, const std::vector<Mat>& starts) {
    cfg.validate();
    const std::size_t total = std::max(cfg.restarts, starts.size());
    const auto moves = moves_for(out);
    std::vector<SearchResult> results(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t r; (r = next.fetch_add(1)) < total;) {
            Mat v0 = r < starts.size() ? starts[r] : random_isometry_matrix(in, out, derive(seed, r));
            results[r] = run_restart(f, std::move(v0), cfg, moves);
            results[r].restart = r;
        }
    };
    const std::size_t nt = std::min(resolve_threads(cfg.threads), total);
    if (nt <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    std::size_t best = 0;
    for (std::size_t r = 1; r < total; ++r) {
        if (results[r].value > results[best].value) best = r;
    }
    return results[best];
}

std::string to_string(Objective o) {
    switch (o) {
        case Objective::ZeroWayWmi: return "wmi";
        case Objective::ErasureCoherent: return "erasure-coherent";
        case Objective::SsAssisted: return "ss-assisted";
        case Objective::G: return "g";
        case Objective::GGeneral: return "g-general";
    }
    return "?";
}

Objective objective_from_string(const std::string& s) {
    for (auto o : {Objective::ZeroWayWmi, Objective::ErasureCoherent, Objective::SsAssisted, Objective::G, Objective::GGeneral}) {
        if (to_string(o) == s) return o;
    }
    throw ValidationError("unknown objective '" + s + "'", "objective");
}

double evaluate(const ObjectiveSpec& obj, const LabeledState& psi, const Parties& p, const Certificate& cert) {
    if (obj.id == Objective::G) {
        const auto* inst = std::get_if<Instrument>(&cert);
        if (!inst) throw ValidationError("objective g needs an instrument certificate", "certificate");
        return eval_G(psi, p, *inst);
    }
    const auto* split = std::get_if<SplittingCertificate>(&cert);
    if (!split) throw ValidationError("objective " + to_string(obj.id) + " needs a splitting certificate", "certificate");
    switch (obj.id) {
        case Objective::ZeroWayWmi: return eval_zero_way_wmi(psi, p, *split);
        case Objective::ErasureCoherent: return eval_erasure_coherent(psi, p, *split);
        case Objective::SsAssisted: return eval_ss_assisted(psi, p, *split, obj.ss_dim);
        case Objective::GGeneral:
            if (!obj.lambda) throw ValidationError("objective g-general needs a channel", "lambda");
            return eval_G_general(*obj.lambda, psi, p, *split);
        case Objective::G: break;
    }
    throw ConsistencyError("evaluate: unreachable objective");
}

RateEstimate maximize(const ObjectiveSpec& obj, const LabeledState& psi_in, const Parties& p_in, const OptimizerConfig& cfg,
                      const std::vector<Certificate>& seeds) {
    cfg.validate();
    const auto [psi, p] = detail::ensure_pure(psi_in, p_in);
    const std::size_t dA = psi.dim_of(p.alice);
    if (obj.id == Objective::GGeneral && !obj.lambda) throw ValidationError("objective g-general needs a channel", "lambda");

    auto dims_list = cfg.ancilla_dims;
    if (dims_list.empty()) {
        if (obj.id == Objective::G) dims_list = {{dA, 2}};
        else if (obj.id == Objective::GGeneral) dims_list = {{dA, 1}};
        else dims_list = {{dA, 1}, {dA, 2}, {dA, 4}};
    }

    RateEstimate best;
    best.objective_name = to_string(obj.id);
    best.value = -std::numeric_limits<double>::infinity();
    best.seed = cfg.seed;
    std::optional<Mat> best_mat;
    InstrumentShape best_shape;
    std::vector<std::size_t> best_out;
    bool any = false;

    for (std::size_t di = 0; di < dims_list.size(); ++di) {
        const auto [x, y] = dims_list[di];
        std::vector<Mat> starts;
        std::size_t out = 0;
        InstrumentShape shape;
        std::vector<std::size_t> out_dims;
        std::function<double(const Mat&)> f;

        if (obj.id == Objective::G) {
            shape.cls = obj.cls;
            shape.a_dim = x;
            shape.branches = y;
            shape.kraus = obj.cls == InstrumentClass::RO ? 1 : cfg.kraus;
            if (obj.cls == InstrumentClass::CP) {
                for (const auto& s : seeds) {
                    if (const auto* inst = std::get_if<Instrument>(&s)) {
                        for (const auto& br : inst->branches) shape.kraus = std::max(shape.kraus, br.kraus.size());
                    }
                }
            }
            out = shape.param_dim();
            if (out >= dA) {
                for (const auto& s : seeds) {
                    const auto* inst = std::get_if<Instrument>(&s);
                    if (!inst || obj.cls != InstrumentClass::CP) continue;
                    try {
                        starts.push_back(cp_isometry_from_instrument(*inst, shape));
                    } catch (const ValidationError&) {
                    }
                }
            }
            f = [&, shape](const Mat& w) { return eval_G(psi, p, instrument_from_isometry(w, shape)); };
        } else {
            out_dims = obj.id == Objective::GGeneral ? std::vector<std::size_t>{x, obj.lambda->input_dim(), y}
                                                     : std::vector<std::size_t>{x, y};
            out = 1;
            for (auto d : out_dims) out *= d;
            for (const auto& s : seeds) {
                const auto* split = std::get_if<SplittingCertificate>(&s);
                if (split && split->dims() == out_dims && split->isometry.input_dim() == dA) starts.push_back(split->isometry.matrix());
            }
            f = [&, out_dims](const Mat& m) { return evaluate(obj, psi, p, split_from_matrix(psi, p, m, out_dims)); };
        }

        DimBest db{{x, y}, 0.0, out < dA};
        if (db.skipped) {
            best.per_dim.push_back(db);
            continue;
        }
        const SearchResult r = search_isometry(f, dA, out, cfg, derive(cfg.seed, 1000 + di), starts);
        db.value = r.value;
        best.per_dim.push_back(db);
        if (!any || r.value > best.value) {
            any = true;
            best.value = r.value;
            best.dims = {x, y};
            best.restarts_used = std::max(cfg.restarts, starts.size());
            best.iterations = r.iterations;
            best.converged = r.converged;
            best.trace = r.trace;
            best_mat = r.best;
            best_shape = shape;
            best_out = out_dims;
        }
    }
    if (!any) throw ValidationError("no ancilla dimension is large enough for Alice's input", "ancilla_dims");

    if (obj.id == Objective::G) {
        best.certificate = instrument_from_isometry(*best_mat, best_shape);
    } else {
        best.certificate = split_from_matrix(psi, p, *best_mat, best_out);
    }
    best.value = evaluate(obj, psi, p, best.certificate);
    for (auto& d : best.per_dim) {
        if (!d.skipped && d.dims == best.dims) d.value = best.value;
    }
    return best;
}

}  // namespace ssclab
