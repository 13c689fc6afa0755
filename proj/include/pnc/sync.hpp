#ifndef PNC_SYNC_HPP
#define PNC_SYNC_HPP

// Secrecy-rate bound under symbol timing errors.
//
// With a rectangular pulse and a correlator receiver, the relay's l-th
// observation mixes the current and previous symbols of each user:
//
//   y = (1 - alpha) x_A + alpha x_A(l-1) + (1 - beta) x_B + beta x_B(l-1)
//
// Current and previous symbols are i.i.d. uniform. Observations are real
// combinations, so coincident values are grouped with a tolerance before the
// mutual informations are taken over the resulting finite joint law.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace pnc {

struct SyncParams {
    double delta_a = 0.0; // timing error of Alice, in [0, period]
    double delta_b = 0.0;
    double period = 1.0;

    void validate() const;
};

/// (alpha, beta) = (sin(4 pi d/T) / (4 pi) + d/T) for each user.
std::pair<double, double> alpha_beta(const SyncParams& p);

struct MisalignedOutcome {
    int xa_prev = 0;
    int xa = 0;
    int xb_prev = 0;
    int xb = 0;
    double y = 0.0;
};

class MisalignedChannel {
public:
    MisalignedChannel(int order_a, int order_b, double alpha, double beta);

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    int order_a() const noexcept { return order_a_; }
    int order_b() const noexcept { return order_b_; }
    /// M_A^2 M_B^2 outcomes, one per (x_A(l-1), x_A, x_B(l-1), x_B).
    const std::vector<MisalignedOutcome>& outcomes() const noexcept { return outcomes_; }

private:
    int order_a_;
    int order_b_;
    double alpha_;
    double beta_;
    std::vector<MisalignedOutcome> outcomes_;
};

/// How the legitimate receiver's term I(Y_B; X_A | .) is evaluated.
enum class ReceiverModel {
    /// The peer sees the relay's observation unchanged and knows both of its
    /// own symbols (current and previous): I(Y; X_A | X_B, X_B(l-1)).
    OwnSymbols,
    /// The peer always recovers the symbol: I(Y_B; X_A | X_B) = m_A.
    Ideal,
};

/// Which of the user's two symbols in the window is audited.
enum class SymbolSlot { Current, Previous };

struct SyncBound {
    double ub_alice = 0.0;       // [receiver_alice - leakage_alice]^+
    double ub_bob = 0.0;
    double leakage_alice = 0.0;  // I(Y; X_A)
    double leakage_bob = 0.0;
    double receiver_alice = 0.0;
    double receiver_bob = 0.0;
};

double default_merge_tol(int order_a, int order_b);

SyncBound ub_with_sync(int order_a, int order_b, const SyncParams& p, double merge_tol,
                       ReceiverModel receiver = ReceiverModel::OwnSymbols,
                       SymbolSlot slot = SymbolSlot::Current);

struct SweepRow {
    double delta_a = 0.0;
    double delta_b = 0.0;
    double ub = 0.0;
};

/// Grid over [0,1]^2 with T = 1; rows in row-major order (delta_a outer).
/// Grid points run concurrently, capped by `threads` (0 = PNC_THREADS or
/// hardware default); output order is independent of scheduling.
std::vector<SweepRow> sync_sweep(int order_a, int order_b, double grid_step, double merge_tol,
                                 ReceiverModel receiver = ReceiverModel::OwnSymbols, unsigned threads = 0);

std::size_t sweep_points_per_axis(double grid_step);

std::string sweep_csv(const std::vector<SweepRow>& rows);

} // namespace pnc

#endif
