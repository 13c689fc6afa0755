#include "pnc/bounds.hpp"

#include "pnc/error.hpp"
#include "pnc/information.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace pnc {

void require_pam_orders(int order_a, int order_b) {
    if (order_a < 2 || !is_power_of_two(order_a) || order_b < 2 || !is_power_of_two(order_b)) {
        throw InvalidArgument("PAM orders must be powers of two >= 2 (got M_A=" + std::to_string(order_a) +
                              ", M_B=" + std::to_string(order_b) + ")");
    }
    if (order_b < 2 * order_a) {
        throw Infeasible("requires M_B >= 2*M_A (got M_A=" + std::to_string(order_a) +
                         ", M_B=" + std::to_string(order_b) + ")");
    }
}

double ub_generic(const SumProfile& profile) {
    const auto total = static_cast<double>(profile.total());
    double acc = 0.0;
    for (const auto& e : profile.entries()) {
        if (e.count > 1) acc += std::log2(static_cast<double>(e.count)) * static_cast<double>(e.count);
    }
    return acc / total;
}

double ub_pam(int order_a, int order_b) {
    require_pam_orders(order_a, order_b);
    const double ma = static_cast<double>(order_a);
    const double mb = static_cast<double>(order_b);
    const double bits_a = log2_exact(order_a);
    double edge = 0.0;
    for (int a = 2; a < order_a; ++a) edge += std::log2(static_cast<double>(a)) * 2.0 * a;
    return bits_a * (mb - ma + 1.0) / mb + edge / (ma * mb);
}

namespace {

bool in_points(double x, std::span<const double> points, double tol) {
    return std::any_of(points.begin(), points.end(), [&](double p) { return std::abs(p - x) <= tol; });
}

} // namespace

std::uint64_t guaranteed_preimages(double x, Side side, const SumProfile& profile) {
    const auto own = side == Side::Alice ? profile.a_points() : profile.b_points();
    const auto other = side == Side::Alice ? profile.b_points() : profile.a_points();
    if (!in_points(x, own, profile.tolerance())) {
        throw InvalidArgument("symbol " + std::to_string(x) + " is not in " + to_string(side) + "'s alphabet");
    }
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (double o : other) best = std::min(best, profile.count_at(x + o));
    return best;
}

double guaranteed_entropy(double x, Side side, const SumProfile& profile) {
    return std::log2(static_cast<double>(guaranteed_preimages(x, side, profile)));
}

std::uint64_t guaranteed_preimages_pam(long long x, Side side, int order_a, int order_b) {
    require_pam_orders(order_a, order_b);
    const PamConstellation own(side == Side::Alice ? order_a : order_b);
    if (!own.contains(x)) {
        throw InvalidArgument("symbol " + std::to_string(x) + " is not in " + to_string(side) + "'s constellation");
    }
    const long long ax = std::llabs(x);
    if (side == Side::Alice) return static_cast<std::uint64_t>((order_a + 1 - ax) / 2);
    if (ax <= order_b - 2 * order_a + 1) return static_cast<std::uint64_t>(order_a);
    return static_cast<std::uint64_t>((order_b + 1 - ax) / 2);
}

double guaranteed_entropy_pam(long long x, Side side, int order_a, int order_b) {
    return std::log2(static_cast<double>(guaranteed_preimages_pam(x, side, order_a, order_b)));
}

std::pair<double, double> ub_nocoop(int order_a, int order_b) {
    require_pam_orders(order_a, order_b);
    const PamConstellation pam_a(order_a);
    const PamConstellation pam_b(order_b);
    double alice = 0.0;
    for (int x : pam_a.points()) alice += guaranteed_entropy_pam(x, Side::Alice, order_a, order_b);
    double bob = 0.0;
    for (int x : pam_b.points()) bob += guaranteed_entropy_pam(x, Side::Bob, order_a, order_b);
    return {alice / order_a, bob / order_b};
}

SecrecyBounds secrecy_bounds(int order_a, int order_b) {
    const auto [alice, bob] = ub_nocoop(order_a, order_b);
    return {ub_pam(order_a, order_b), alice, bob};
}

double csiszar_ub(std::span<const JointAtom> joint) {
    if (joint.empty()) throw InvalidArgument("joint distribution is empty");
    double sum = 0.0;
    for (const auto& atom : joint) {
        if (!(atom.p >= 0.0) || !std::isfinite(atom.p)) throw InvalidArgument("joint masses must be finite and nonnegative");
        sum += atom.p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw InvalidArgument("joint distribution does not sum to 1");

    info::Table<3, double> receiver; // (Y_receiver, X | X_other)
    info::Table<2, double> eavesdropper; // (Y, X)
    for (const auto& atom : joint) {
        receiver.add({atom.y_receiver, atom.x, atom.x_other}, atom.p);
        eavesdropper.add({atom.y, atom.x}, atom.p);
    }
    const double diff = info::conditional_mutual_information(receiver) - info::mutual_information(eavesdropper);
    return std::max(0.0, diff);
}

} // namespace pnc
