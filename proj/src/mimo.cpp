#include "pnc/mimo.hpp"

#include "pnc/error.hpp"
#include "pnc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pnc {

int dof_max(int m, int n) {
    if (m < 1 || n < 1) throw InvalidArgument("antenna counts must be positive");
    return std::max(0, 2 * n - m);
}

int precoder_space_dim(int m, int n) {
    const int d = dof_max(m, n);
    if (d < 1) throw Infeasible("no aligned transmission: d = 2N - M < 1");
    return 2 * (d * d - 1);
}

PrecoderProblem PrecoderProblem::from_channels(ComplexMatrix h_a, ComplexMatrix h_b, double snr) {
    PrecoderProblem p;
    p.h_a = std::move(h_a);
    p.h_b = std::move(h_b);
    p.snr = snr;
    p.p_a = snr / 2.0;
    p.p_b = snr / 2.0;
    p.noise_var = 1.0;
    return p;
}

namespace {

bool all_finite(const ComplexMatrix& a) {
    return a.unaryExpr([](const std::complex<double>& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); })
        .all();
}

int numeric_rank(const ComplexMatrix& a) {
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    const auto& s = svd.singularValues();
    if (s.size() == 0) return 0;
    const double tol = 1e-10 * s(0);
    return static_cast<int>((s.array() > tol).count());
}

} // namespace

void PrecoderProblem::validate() const {
    if (h_a.rows() != h_b.rows() || h_a.cols() != h_b.cols()) throw InvalidArgument("H_A and H_B must have the same shape");
    if (n() < 1 || m() < n()) throw InvalidArgument("channels must be M x N with 1 <= N <= M");
    if (d() < 1) throw Infeasible("no aligned transmission: d = 2N - M < 1");
    if (!all_finite(h_a) || !all_finite(h_b)) throw InvalidArgument("channel entries must be finite");
    if (!(snr > 0.0) || !std::isfinite(snr)) throw InvalidArgument("snr must be positive");
    if (numeric_rank(h_a) < n() || numeric_rank(h_b) < n()) throw RankDeficient("channel matrices must have full column rank");
}

ComplexMatrix nullspace_basis(const ComplexMatrix& h_a, const ComplexMatrix& h_b) {
    if (h_a.rows() != h_b.rows() || h_a.cols() != h_b.cols()) throw InvalidArgument("H_A and H_B must have the same shape");
    const Eigen::Index m = h_a.rows();
    const Eigen::Index n = h_a.cols();
    ComplexMatrix stacked(m, 2 * n);
    stacked << h_a, -h_b;
    Eigen::JacobiSVD<ComplexMatrix> svd(stacked, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double tol = s.size() > 0 ? 1e-10 * s(0) : 0.0;
    const Eigen::Index rank = (s.array() > tol).count();
    if (rank < m) throw RankDeficient("[H_A -H_B] has rank " + std::to_string(rank) + " < M = " + std::to_string(m));
    const Eigen::Index nullity = 2 * n - rank;
    if (nullity < 1) throw Infeasible("[H_A -H_B] has a trivial nullspace");
    return svd.matrixV().rightCols(nullity);
}

PrecoderPair zf_precoders(const PrecoderProblem& problem) {
    problem.validate();
    const double root_n = std::sqrt(static_cast<double>(problem.n()));
    PrecoderPair pair;
    if (problem.m() == problem.n()) {
        const ComplexMatrix inv_a = problem.h_a.inverse();
        const ComplexMatrix inv_b = problem.h_b.inverse();
        const double gamma = std::max(inv_a.norm(), inv_b.norm());
        pair.g_a = root_n * inv_a / gamma;
        pair.g_b = root_n * inv_b / gamma;
        return pair;
    }
    const ComplexMatrix basis = nullspace_basis(problem.h_a, problem.h_b);
    const Eigen::Index n = problem.n();
    const ComplexMatrix e_a = basis.topRows(n);
    const ComplexMatrix e_b = basis.bottomRows(n);
    const double gamma = std::max(e_a.norm(), e_b.norm());
    pair.g_a = root_n * e_a / gamma;
    pair.g_b = root_n * e_b / gamma;
    return pair;
}

double capacity(const ComplexMatrix& h_a, const ComplexMatrix& g_a, double snr) {
    if (!(snr > 0.0)) throw InvalidArgument("snr must be positive");
    if (!all_finite(h_a) || !all_finite(g_a)) throw InvalidArgument("non-finite matrix entries");
    const ComplexMatrix k = h_a * g_a;
    // det(I_M + s K K^H) = det(I_d + s K^H K); the latter is smaller and HPD.
    ComplexMatrix x = ComplexMatrix::Identity(k.cols(), k.cols()) + snr * k.adjoint() * k;
    Eigen::LLT<ComplexMatrix> llt(x);
    if (llt.info() != Eigen::Success) throw InvalidArgument("capacity argument is not positive definite");
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i).real());
    return logdet / std::numbers::ln2;
}

ComplexMatrix capacity_gradient(const ComplexMatrix& h_a, const ComplexMatrix& g_a, double snr) {
    const ComplexMatrix k = h_a * g_a;
    // X^{-1} K = K (I_d + s K^H K)^{-1} (push-through identity).
    const ComplexMatrix inner = ComplexMatrix::Identity(k.cols(), k.cols()) + snr * k.adjoint() * k;
    const ComplexMatrix right = inner.llt().solve(k.adjoint()).adjoint();
    return (2.0 * snr / std::numbers::ln2) * (h_a.adjoint() * right);
}

double alignment_residual(const PrecoderProblem& problem, const PrecoderPair& pair) {
    return (problem.h_a * pair.g_a - problem.h_b * pair.g_b).norm();
}

bool is_feasible(const PrecoderProblem& problem, const PrecoderPair& pair) {
    const double n = problem.n();
    const double scale = std::max(1.0, (problem.h_a * pair.g_a).norm());
    if (alignment_residual(problem, pair) > 1e-10 * scale) return false;
    const double pa = pair.g_a.squaredNorm();
    const double pb = pair.g_b.squaredNorm();
    if (pa > n + 1e-9 || pb > n + 1e-9) return false;
    return std::abs(std::max(pa, pb) - n) <= 1e-9;
}

namespace {

/// Stacked-precoder workspace shared by the optimizer and the stationarity
/// measure.
struct Stacked {
    ComplexMatrix basis; // 2N x k orthonormal
    Eigen::Index n;

    ComplexMatrix project(const ComplexMatrix& g) const { return basis * (basis.adjoint() * g); }

    static double inner(const ComplexMatrix& a, const ComplexMatrix& b) { return (a.adjoint() * b).trace().real(); }

    ComplexMatrix rescale(const ComplexMatrix& g) const {
        const double peak = std::max(g.topRows(n).norm(), g.bottomRows(n).norm());
        return g * (std::sqrt(static_cast<double>(n)) / peak);
    }

    /// Nullspace-projected gradient with the binding constraints' normals
    /// removed.
    ComplexMatrix tangent_gradient(const ComplexMatrix& g, const ComplexMatrix& h_a, double snr) const {
        ComplexMatrix full = ComplexMatrix::Zero(g.rows(), g.cols());
        full.topRows(n) = capacity_gradient(h_a, g.topRows(n), snr);
        ComplexMatrix dir = project(full);

        const double pa = g.topRows(n).squaredNorm();
        const double pb = g.bottomRows(n).squaredNorm();
        const double peak = std::max(pa, pb);
        std::vector<ComplexMatrix> normals;
        for (int side = 0; side < 2; ++side) {
            const double p = side == 0 ? pa : pb;
            if (peak - p > 1e-9 * peak) continue;
            ComplexMatrix e = ComplexMatrix::Zero(g.rows(), g.cols());
            if (side == 0) e.topRows(n) = g.topRows(n); else e.bottomRows(n) = g.bottomRows(n);
            ComplexMatrix v = project(e);
            for (const auto& u : normals) v -= inner(u, v) * u;
            const double len = std::sqrt(inner(v, v));
            if (len > 1e-14) normals.push_back(v / len);
        }
        for (const auto& u : normals) dir -= inner(u, dir) * u;
        return dir;
    }
};

ComplexMatrix stack(const PrecoderPair& pair) {
    ComplexMatrix g(pair.g_a.rows() + pair.g_b.rows(), pair.g_a.cols());
    g << pair.g_a, pair.g_b;
    return g;
}

PrecoderPair unstack(const ComplexMatrix& g, Eigen::Index n) { return {g.topRows(n), g.bottomRows(n)}; }

} // namespace

double tangent_gradient_norm(const PrecoderProblem& problem, const PrecoderPair& pair) {
    problem.validate();
    const Stacked ws{nullspace_basis(problem.h_a, problem.h_b), problem.n()};
    return ws.tangent_gradient(stack(pair), problem.h_a, problem.snr).norm();
}

OptimizeResult optimize_precoders(const PrecoderProblem& problem, const PrecoderPair& init, const OptimizeOptions& opts) {
    problem.validate();
    if (!is_feasible(problem, init)) throw InvalidArgument("initial precoders violate the alignment or power constraint");
    const Stacked ws{nullspace_basis(problem.h_a, problem.h_b), problem.n()};
    const Eigen::Index n = problem.n();

    ComplexMatrix g = stack(init);
    double f = capacity(problem.h_a, g.topRows(n), problem.snr);
    OptimizeResult result;
    result.initial_capacity = f;

    for (int it = 0; it < opts.max_iters; ++it) {
        const ComplexMatrix dir = ws.tangent_gradient(g, problem.h_a, problem.snr);
        result.gradient_norm = dir.norm();
        if (result.gradient_norm < opts.grad_tol) {
            result.converged = true;
            break;
        }
        const double slope = dir.squaredNorm();
        bool accepted = false;
        for (double t = opts.initial_step; t >= opts.min_step; t *= 0.5) {
            const ComplexMatrix candidate = ws.rescale(ws.project(g + t * dir));
            const double fc = capacity(problem.h_a, candidate.topRows(n), problem.snr);
            if (fc >= f + opts.armijo * t * slope) {
                g = candidate;
                f = fc;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            result.stalled = true;
            break;
        }
        ++result.iterations;
        if (opts.on_iterate) opts.on_iterate(unstack(g, n), f);
    }
    if (!result.converged && !result.stalled && result.iterations == opts.max_iters) {
        result.gradient_norm = ws.tangent_gradient(g, problem.h_a, problem.snr).norm();
        result.converged = result.gradient_norm < opts.grad_tol;
    }
    result.precoders = unstack(g, n);
    result.capacity = f;
    return result;
}

ChannelSampler::ChannelSampler(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

double ChannelSampler::uniform_open() {
    // 53 random bits mapped into (0, 1].
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double ChannelSampler::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    const double theta = 2.0 * std::numbers::pi * uniform_open();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

ComplexMatrix ChannelSampler::sample(int rows, int cols, double variance) {
    const double sd = std::sqrt(variance / 2.0);
    ComplexMatrix h(rows, cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) {
            const double re = normal();
            const double im = normal();
            h(i, j) = {sd * re, sd * im};
        }
    }
    return h;
}

const char* to_string(PrecoderMethod method) noexcept {
    return method == PrecoderMethod::ZeroForcing ? "zf" : "opt";
}

std::vector<CapacityRow> ergodic_capacity_mc(int m, int n, const std::vector<double>& snr_db, int trials,
                                             std::uint64_t seed, PrecoderMethod method, unsigned threads) {
    if (trials < 1) throw InvalidArgument("trials must be >= 1");
    if (dof_max(m, n) < 1 || n > m) throw Infeasible("(M, N) admits no aligned transmission with N <= M");
    const std::size_t n_snr = snr_db.size();
    std::vector<double> per_trial(static_cast<std::size_t>(trials) * n_snr, 0.0);
    parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        ChannelSampler sampler(seed, t);
        ComplexMatrix h_a = sampler.sample(m, n, 1.0 / m);
        ComplexMatrix h_b = sampler.sample(m, n, 1.0 / m);
        for (std::size_t s = 0; s < n_snr; ++s) {
            const auto problem = PrecoderProblem::from_channels(h_a, h_b, db_to_ratio(snr_db[s]));
            PrecoderPair pair = zf_precoders(problem);
            double c = capacity(problem.h_a, pair.g_a, problem.snr);
            if (method == PrecoderMethod::Optimized) c = optimize_precoders(problem, pair).capacity;
            per_trial[t * n_snr + s] = c;
        }
    });
    std::vector<CapacityRow> rows(n_snr);
    for (std::size_t s = 0; s < n_snr; ++s) {
        double acc = 0.0;
        for (int t = 0; t < trials; ++t) acc += per_trial[static_cast<std::size_t>(t) * n_snr + s];
        rows[s] = {snr_db[s], acc / trials};
    }
    return rows;
}

std::string capacity_csv(const std::vector<CapacityRow>& rows) {
    std::string out = "snr_db,mean_capacity_bits\n";
    for (const auto& r : rows) out += format_real(r.snr_db) + "," + format_real(r.mean_capacity) + "\n";
    return out;
}

} // namespace pnc
