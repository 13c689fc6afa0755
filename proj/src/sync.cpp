#include "pnc/sync.hpp"

#include "pnc/bounds.hpp"
#include "pnc/constellation.hpp"
#include "pnc/error.hpp"
#include "pnc/information.hpp"
#include "pnc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pnc {

void SyncParams::validate() const {
    if (!(period > 0.0) || !std::isfinite(period)) throw InvalidArgument("symbol period must be positive");
    for (double d : {delta_a, delta_b}) {
        if (!(d >= 0.0 && d <= period)) throw InvalidArgument("timing errors must lie in [0, T]");
    }
}

std::pair<double, double> alpha_beta(const SyncParams& p) {
    p.validate();
    const auto weight = [&](double delta) {
        const double r = delta / p.period;
        return std::sin(4.0 * std::numbers::pi * r) / (4.0 * std::numbers::pi) + r;
    };
    return {weight(p.delta_a), weight(p.delta_b)};
}

MisalignedChannel::MisalignedChannel(int order_a, int order_b, double alpha, double beta)
    : order_a_(order_a), order_b_(order_b), alpha_(alpha), beta_(beta) {
    const PamConstellation a(order_a);
    const PamConstellation b(order_b);
    outcomes_.reserve(static_cast<std::size_t>(order_a) * order_a * order_b * order_b);
    for (int xa_prev : a.points()) {
        for (int xa : a.points()) {
            for (int xb_prev : b.points()) {
                for (int xb : b.points()) {
                    const double y = (1.0 - alpha) * xa + (1.0 - beta) * xb + alpha * xa_prev + beta * xb_prev;
                    outcomes_.push_back({xa_prev, xa, xb_prev, xb, y});
                }
            }
        }
    }
}

double default_merge_tol(int order_a, int order_b) { return 1e-9 * (order_a + order_b); }

namespace {

std::int64_t pair_code(int first, int second) {
    return (static_cast<std::int64_t>(first) + 4096) * 16384 + (second + 4096);
}

} // namespace

SyncBound ub_with_sync(int order_a, int order_b, const SyncParams& p, double merge_tol, ReceiverModel receiver,
                       SymbolSlot slot) {
    require_pam_orders(order_a, order_b);
    if (!(merge_tol >= 0.0)) throw InvalidArgument("merge tolerance must be nonnegative");
    const auto [alpha, beta] = alpha_beta(p);
    const MisalignedChannel channel(order_a, order_b, alpha, beta);

    const auto& outcomes = channel.outcomes();
    std::vector<double> ys(outcomes.size());
    std::transform(outcomes.begin(), outcomes.end(), ys.begin(), [](const MisalignedOutcome& o) { return o.y; });
    const auto obs = info::group_by_tolerance(ys, merge_tol);

    const bool current = slot == SymbolSlot::Current;
    info::Counts2 leak_a;
    info::Counts2 leak_b;
    info::Counts3 recv_a;
    info::Counts3 recv_b;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        const std::int64_t target_a = current ? o.xa : o.xa_prev;
        const std::int64_t target_b = current ? o.xb : o.xb_prev;
        leak_a.add({obs[i], target_a});
        leak_b.add({obs[i], target_b});
        if (receiver == ReceiverModel::OwnSymbols) {
            recv_a.add({obs[i], target_a, pair_code(o.xb, o.xb_prev)});
            recv_b.add({obs[i], target_b, pair_code(o.xa, o.xa_prev)});
        }
    }

    SyncBound out;
    out.leakage_alice = info::mutual_information(leak_a);
    out.leakage_bob = info::mutual_information(leak_b);
    if (receiver == ReceiverModel::OwnSymbols) {
        out.receiver_alice = info::conditional_mutual_information(recv_a);
        out.receiver_bob = info::conditional_mutual_information(recv_b);
    } else {
        out.receiver_alice = log2_exact(order_a);
        out.receiver_bob = log2_exact(order_b);
    }
    out.ub_alice = std::max(0.0, out.receiver_alice - out.leakage_alice);
    out.ub_bob = std::max(0.0, out.receiver_bob - out.leakage_bob);
    return out;
}

std::size_t sweep_points_per_axis(double grid_step) {
    if (!(grid_step > 0.0 && grid_step <= 0.5)) throw InvalidArgument("grid step must lie in (0, 0.5]");
    return static_cast<std::size_t>(std::floor(1.0 / grid_step + 1e-9)) + 1;
}

std::vector<SweepRow> sync_sweep(int order_a, int order_b, double grid_step, double merge_tol,
                                 ReceiverModel receiver, unsigned threads) {
    require_pam_orders(order_a, order_b);
    const std::size_t n = sweep_points_per_axis(grid_step);
    // i / intervals is exact where the step divides the period, e.g. 0.25 at step 0.05.
    const double intervals = 1.0 / grid_step;
    const bool divides = std::abs(intervals - std::round(intervals)) < 1e-9;
    const auto coordinate = [&](std::size_t i) {
        const double v = divides ? static_cast<double>(i) / std::round(intervals) : static_cast<double>(i) * grid_step;
        return std::min(1.0, v);
    };
    std::vector<SweepRow> rows(n * n);
    parallel_for(rows.size(), threads, [&](std::size_t idx) {
        const double da = coordinate(idx / n);
        const double db = coordinate(idx % n);
        const auto bound = ub_with_sync(order_a, order_b, {da, db, 1.0}, merge_tol, receiver);
        rows[idx] = {da, db, bound.ub_alice};
    });
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "dta,dtb,ub\n";
    for (const auto& r : rows) {
        out += format_real(r.delta_a) + "," + format_real(r.delta_b) + "," + format_real(r.ub) + "\n";
    }
    return out;
}

} // namespace pnc
