#ifndef PNC_BOUNDS_HPP
#define PNC_BOUNDS_HPP

#include "pnc/constellation.hpp"

#include <cstdint>
#include <span>
#include <utility>

namespace pnc {

/// Throws InvalidArgument for non power-of-two orders and Infeasible when
/// order_b < 2 order_a.
void require_pam_orders(int order_a, int order_b);

/// Sum over observations of log2(count) * count / total, in bits per symbol.
double ub_generic(const SumProfile& profile);

/// Closed form of ub_generic for M_A- and M_B-PAM, M_B >= 2 M_A.
double ub_pam(int order_a, int order_b);

/// Minimum preimage count of x + (other user's symbol) over the other
/// alphabet of the profile.
std::uint64_t guaranteed_preimages(double x, Side side, const SumProfile& profile);

/// log2 of guaranteed_preimages.
double guaranteed_entropy(double x, Side side, const SumProfile& profile);

std::uint64_t guaranteed_preimages_pam(long long x, Side side, int order_a, int order_b);
double guaranteed_entropy_pam(long long x, Side side, int order_a, int order_b);

/// Average guaranteed entropy over each constellation: (alice, bob).
std::pair<double, double> ub_nocoop(int order_a, int order_b);

struct SecrecyBounds {
    double ub_shared = 0.0;
    double ub_alice_nocoop = 0.0;
    double ub_bob_nocoop = 0.0;
};

SecrecyBounds secrecy_bounds(int order_a, int order_b);

/// One atom of a finite joint distribution of (Y, Y_receiver, X, X_other);
/// outcomes are integer codes.
struct JointAtom {
    std::int64_t y = 0;
    std::int64_t y_receiver = 0;
    std::int64_t x = 0;
    std::int64_t x_other = 0;
    double p = 0.0;
};

/// [I(Y_receiver; X | X_other) - I(Y; X)]^+ by exact summation over the
/// support. Throws InvalidArgument unless the atoms form a pmf (sum 1 within
/// 1e-12, no negative masses).
double csiszar_ub(std::span<const JointAtom> joint);

} // namespace pnc

#endif
