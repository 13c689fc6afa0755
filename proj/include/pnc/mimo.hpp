#ifndef PNC_MIMO_HPP
#define PNC_MIMO_HPP

// Aligned precoding for the two-user MIMO relay channel.
//
// Alice and Bob (N antennas each) precode d = 2N - M streams with N x d
// matrices G_A, G_B so that the relay (M antennas) sees H_A G_A = H_B G_B and
// hence only the sum of the two symbol vectors. Power: ||G||_F^2 <= N per user.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace pnc {

using ComplexMatrix = Eigen::MatrixXcd;

int dof_max(int m, int n);

/// Real dimension 2(d^2 - 1) of the feasible precoder set; throws Infeasible
/// when d = 2N - M < 1.
int precoder_space_dim(int m, int n);

struct PrecoderProblem {
    ComplexMatrix h_a; // M x N
    ComplexMatrix h_b;
    double snr = 1.0;  // (P_A + P_B) / sigma_R^2
    double p_a = 0.5;
    double p_b = 0.5;
    double noise_var = 1.0;

    int m() const noexcept { return static_cast<int>(h_a.rows()); }
    int n() const noexcept { return static_cast<int>(h_a.cols()); }
    int d() const noexcept { return 2 * n() - m(); }

    /// Splits snr evenly between the users with unit noise variance.
    static PrecoderProblem from_channels(ComplexMatrix h_a, ComplexMatrix h_b, double snr);
    /// Shape, rank and finiteness checks; throws on violation.
    void validate() const;
};

struct PrecoderPair {
    ComplexMatrix g_a; // N x d
    ComplexMatrix g_b;
};

/// Orthonormal basis (2N x d) of the right nullspace of [H_A  -H_B], via SVD
/// with rank tolerance 1e-10 times the largest singular value.
ComplexMatrix nullspace_basis(const ComplexMatrix& h_a, const ComplexMatrix& h_b);

PrecoderPair zf_precoders(const PrecoderProblem& problem);

/// log2 det(I_M + snr H_A G_A G_A^H H_A^H).
double capacity(const ComplexMatrix& h_a, const ComplexMatrix& g_a, double snr);

/// Direction of steepest ascent of capacity() in G_A, as a complex matrix
/// whose real and imaginary parts are the partials w.r.t. Re G_A and Im G_A:
/// (2 snr / ln 2) H_A^H X^{-1} H_A G_A with X the determinant's argument.
ComplexMatrix capacity_gradient(const ComplexMatrix& h_a, const ComplexMatrix& g_a, double snr);

/// ||H_A G_A - H_B G_B||_F.
double alignment_residual(const PrecoderProblem& problem, const PrecoderPair& pair);

/// Whether the pair meets alignment (relative 1e-10) and the power cap with
/// equality on at least one side (1e-9).
bool is_feasible(const PrecoderProblem& problem, const PrecoderPair& pair);

/// Norm of the nullspace-projected gradient after removing its component
/// normal to the binding power constraint.
double tangent_gradient_norm(const PrecoderProblem& problem, const PrecoderPair& pair);

struct OptimizeOptions {
    double initial_step = 1.0;
    double armijo = 1e-4;
    double min_step = 1e-14;
    int max_iters = 500;
    double grad_tol = 1e-8;
    /// Called after every accepted iterate with (pair, capacity).
    std::function<void(const PrecoderPair&, double)> on_iterate;
};

struct OptimizeResult {
    PrecoderPair precoders;
    double initial_capacity = 0.0;
    double capacity = 0.0;
    int iterations = 0;
    double gradient_norm = 0.0;
    /// Gradient tolerance met.
    bool converged = false;
    /// Line search found no ascent step before min_step.
    bool stalled = false;
};

/// Projected gradient ascent on the stacked precoder G = [G_A; G_B]: ascend
/// along the gradient in G_A (zero block for G_B), project onto the nullspace,
/// rescale both blocks to the power cap, and backtrack by halving until the
/// Armijo condition holds.
OptimizeResult optimize_precoders(const PrecoderProblem& problem, const PrecoderPair& init,
                                  const OptimizeOptions& opts = {});

/// Seeded circularly symmetric complex Gaussian matrices with entry variance
/// `variance`. The stream is a function of (seed, stream) only.
class ChannelSampler {
public:
    ChannelSampler(std::uint64_t seed, std::uint64_t stream);
    ComplexMatrix sample(int rows, int cols, double variance);
    double normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
    double uniform_open();
};

enum class PrecoderMethod { ZeroForcing, Optimized };

const char* to_string(PrecoderMethod method) noexcept;

struct CapacityRow {
    double snr_db = 0.0;
    double mean_capacity = 0.0;
};

/// Ergodic capacity averaged over `trials` channel pairs with entries of
/// variance 1/M. Deterministic for a fixed seed regardless of threads.
std::vector<CapacityRow> ergodic_capacity_mc(int m, int n, const std::vector<double>& snr_db, int trials,
                                             std::uint64_t seed, PrecoderMethod method, unsigned threads = 0);

std::string capacity_csv(const std::vector<CapacityRow>& rows);

inline double db_to_ratio(double db) { return std::pow(10.0, db / 10.0); }

} // namespace pnc

#endif
