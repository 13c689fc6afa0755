#ifndef PNC_CONSTELLATION_HPP
#define PNC_CONSTELLATION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pnc {

enum class Side { Alice, Bob };

const char* to_string(Side side) noexcept;

bool is_power_of_two(long long n) noexcept;

/// Integer log2 of a power of two.
int log2_exact(long long n);

/// Canonical M-PAM alphabet {-(M-1), -(M-3), ..., M-1} with unit half-spacing.
///
/// Point i (in increasing order) has rank i, and its label is the m-bit
/// big-endian binary expansion of the rank: the most significant bit is the
/// edge leaving the root of the labeling tree.
class PamConstellation {
public:
    explicit PamConstellation(int order);

    int order() const noexcept { return order_; }
    int bits_per_symbol() const noexcept { return bits_; }
    std::span<const int> points() const noexcept { return points_; }

    int point(int rank) const;
    bool contains(long long x) const noexcept;
    /// Throws InvalidArgument when x is not a point.
    int rank_of(long long x) const;

    std::uint32_t label(long long x) const { return static_cast<std::uint32_t>(rank_of(x)); }
    std::string label_string(long long x) const;
    int point_from_label(std::uint32_t label) const;
    int point_from_label(const std::string& bits) const;

private:
    int order_;
    int bits_;
    std::vector<int> points_;
};

PamConstellation make_pam(int order);

/// Finite real alphabet with per-point probability masses.
class FiniteAlphabet {
public:
    /// Uniform masses.
    explicit FiniteAlphabet(std::vector<double> points);
    FiniteAlphabet(std::vector<double> points, std::vector<double> weights);

    static FiniteAlphabet from_pam(const PamConstellation& pam);

    std::size_t size() const noexcept { return points_.size(); }
    std::span<const double> points() const noexcept { return points_; }
    std::span<const double> weights() const noexcept { return weights_; }
    bool is_uniform() const noexcept { return uniform_; }

private:
    std::vector<double> points_;
    std::vector<double> weights_;
    bool uniform_ = true;
};

struct SumEntry {
    double y = 0.0;
    std::uint64_t count = 0; // |psi^{-1}(y)|
    double mass = 0.0;       // P(Y = y) under the alphabets' weights
};

/// Observation y = x_a + x_b with its preimage counts, sorted by y.
class SumProfile {
public:
    SumProfile(std::vector<SumEntry> entries, std::vector<double> a_points,
               std::vector<double> b_points, double tol,
               std::optional<std::pair<int, int>> pam_orders);

    std::span<const SumEntry> entries() const noexcept { return entries_; }
    std::uint64_t total() const noexcept { return total_; }
    std::span<const double> a_points() const noexcept { return a_points_; }
    std::span<const double> b_points() const noexcept { return b_points_; }
    double tolerance() const noexcept { return tol_; }
    const std::optional<std::pair<int, int>>& pam_orders() const noexcept { return pam_orders_; }

    /// Preimage count of y, zero if y is not an observation.
    std::uint64_t count_at(double y) const noexcept;
    /// count(y) / (|a| |b|).
    double pmf(double y) const noexcept;

private:
    std::vector<SumEntry> entries_;
    std::vector<double> a_points_;
    std::vector<double> b_points_;
    double tol_;
    std::uint64_t total_ = 0;
    std::optional<std::pair<int, int>> pam_orders_;
};

/// Exact integer enumeration for two PAM inputs.
SumProfile sum_profile(const PamConstellation& a, const PamConstellation& b);

/// Enumerates every pair; sums closer than tol are merged into one entry whose
/// y is the count-weighted mean of its members.
SumProfile sum_profile(const FiniteAlphabet& a, const FiniteAlphabet& b, double tol);

/// Closed-form |psi^{-1}(y)| for M_A- and M_B-PAM with M_B >= 2 M_A.
std::uint64_t preimage_count_pam(double y, int order_a, int order_b);

} // namespace pnc

#endif
