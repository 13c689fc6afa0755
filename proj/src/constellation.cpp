#include "pnc/constellation.hpp"

#include "pnc/error.hpp"
#include "pnc/information.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace pnc {

const char* to_string(Side side) noexcept { return side == Side::Alice ? "alice" : "bob"; }

bool is_power_of_two(long long n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(long long n) {
    if (!is_power_of_two(n)) {
        throw InvalidArgument("expected a power of two, got " + std::to_string(n));
    }
    return std::countr_zero(static_cast<unsigned long long>(n));
}

PamConstellation::PamConstellation(int order) : order_(order), bits_(0) {
    if (order < 2 || !is_power_of_two(order)) {
        throw InvalidArgument("PAM order must be a power of two >= 2, got " + std::to_string(order));
    }
    bits_ = log2_exact(order);
    points_.resize(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) {
        points_[static_cast<std::size_t>(i)] = 2 * i - (order - 1);
    }
}

int PamConstellation::point(int rank) const {
    if (rank < 0 || rank >= order_) {
        throw InvalidArgument("rank " + std::to_string(rank) + " outside " + std::to_string(order_) + "-PAM");
    }
    return points_[static_cast<std::size_t>(rank)];
}

bool PamConstellation::contains(long long x) const noexcept {
    const long long shifted = x + (order_ - 1);
    return shifted >= 0 && shifted <= 2LL * (order_ - 1) && shifted % 2 == 0;
}

int PamConstellation::rank_of(long long x) const {
    if (!contains(x)) {
        throw InvalidArgument(std::to_string(x) + " is not a point of " + std::to_string(order_) + "-PAM");
    }
    return static_cast<int>((x + order_ - 1) / 2);
}

std::string PamConstellation::label_string(long long x) const {
    const auto lab = label(x);
    std::string out(static_cast<std::size_t>(bits_), '0');
    for (int d = 0; d < bits_; ++d) {
        if ((lab >> (bits_ - 1 - d)) & 1U) out[static_cast<std::size_t>(d)] = '1';
    }
    return out;
}

int PamConstellation::point_from_label(std::uint32_t label) const {
    if (label >= static_cast<std::uint32_t>(order_)) {
        throw InvalidArgument("label out of range for " + std::to_string(order_) + "-PAM");
    }
    return point(static_cast<int>(label));
}

int PamConstellation::point_from_label(const std::string& bits) const {
    if (bits.size() != static_cast<std::size_t>(bits_)) {
        throw InvalidArgument("label '" + bits + "' must have " + std::to_string(bits_) + " bits");
    }
    std::uint32_t lab = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw InvalidArgument("label '" + bits + "' is not binary");
        lab = (lab << 1) | static_cast<std::uint32_t>(c == '1');
    }
    return point_from_label(lab);
}

PamConstellation make_pam(int order) { return PamConstellation(order); }

FiniteAlphabet::FiniteAlphabet(std::vector<double> points)
    : FiniteAlphabet(points, std::vector<double>(points.size(), points.empty() ? 0.0 : 1.0 / static_cast<double>(points.size()))) {
    uniform_ = true;
}

FiniteAlphabet::FiniteAlphabet(std::vector<double> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.empty()) throw InvalidArgument("alphabet must be nonempty");
    if (points_.size() != weights_.size()) throw InvalidArgument("alphabet points and weights differ in length");
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("alphabet weights must be finite and nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw InvalidArgument("alphabet weights must sum to 1");
    auto sorted = points_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InvalidArgument("alphabet points must be distinct");
    }
    for (double p : points_) {
        if (!std::isfinite(p)) throw InvalidArgument("alphabet points must be finite");
    }
    uniform_ = std::all_of(weights_.begin(), weights_.end(),
                           [&](double w) { return std::abs(w - weights_.front()) <= 1e-15; });
}

FiniteAlphabet FiniteAlphabet::from_pam(const PamConstellation& pam) {
    return FiniteAlphabet(std::vector<double>(pam.points().begin(), pam.points().end()));
}

SumProfile::SumProfile(std::vector<SumEntry> entries, std::vector<double> a_points,
                       std::vector<double> b_points, double tol,
                       std::optional<std::pair<int, int>> pam_orders)
    : entries_(std::move(entries)), a_points_(std::move(a_points)), b_points_(std::move(b_points)),
      tol_(tol), pam_orders_(pam_orders) {
    for (const auto& e : entries_) total_ += e.count;
}

std::uint64_t SumProfile::count_at(double y) const noexcept {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), y - tol_,
                               [](const SumEntry& e, double v) { return e.y < v; });
    if (it != entries_.end() && std::abs(it->y - y) <= tol_) return it->count;
    return 0;
}

double SumProfile::pmf(double y) const noexcept {
    return total_ == 0 ? 0.0 : static_cast<double>(count_at(y)) / static_cast<double>(total_);
}

SumProfile sum_profile(const PamConstellation& a, const PamConstellation& b) {
    const int lo = -(a.order() - 1) - (b.order() - 1);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(2 * (a.order() + b.order() - 2) + 1), 0);
    for (int xa : a.points()) {
        for (int xb : b.points()) ++counts[static_cast<std::size_t>(xa + xb - lo)];
    }
    const double total = static_cast<double>(a.order()) * static_cast<double>(b.order());
    std::vector<SumEntry> entries;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        entries.push_back({static_cast<double>(static_cast<int>(i) + lo), counts[i],
                           static_cast<double>(counts[i]) / total});
    }
    return SumProfile(std::move(entries), std::vector<double>(a.points().begin(), a.points().end()),
                      std::vector<double>(b.points().begin(), b.points().end()), 0.0,
                      std::make_pair(a.order(), b.order()));
}

SumProfile sum_profile(const FiniteAlphabet& a, const FiniteAlphabet& b, double tol) {
    if (!(tol >= 0.0)) throw InvalidArgument("merge tolerance must be nonnegative");
    std::vector<double> sums;
    std::vector<double> masses;
    sums.reserve(a.size() * b.size());
    masses.reserve(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            sums.push_back(a.points()[i] + b.points()[j]);
            masses.push_back(a.weights()[i] * b.weights()[j]);
        }
    }
    const auto groups = info::group_by_tolerance(sums, tol);
    const auto n_groups = groups.empty() ? 0 : static_cast<std::size_t>(*std::max_element(groups.begin(), groups.end()) + 1);
    std::vector<SumEntry> entries(n_groups);
    std::vector<double> y_sum(n_groups, 0.0);
    for (std::size_t k = 0; k < sums.size(); ++k) {
        auto& e = entries[static_cast<std::size_t>(groups[k])];
        ++e.count;
        e.mass += masses[k];
        y_sum[static_cast<std::size_t>(groups[k])] += sums[k];
    }
    for (std::size_t g = 0; g < n_groups; ++g) entries[g].y = y_sum[g] / static_cast<double>(entries[g].count);
    return SumProfile(std::move(entries), std::vector<double>(a.points().begin(), a.points().end()),
                      std::vector<double>(b.points().begin(), b.points().end()), tol, std::nullopt);
}

std::uint64_t preimage_count_pam(double y, int order_a, int order_b) {
    if (!is_power_of_two(order_a) || !is_power_of_two(order_b) || order_a < 2) {
        throw InvalidArgument("PAM orders must be powers of two >= 2");
    }
    if (order_b < 2 * order_a) {
        throw Infeasible("closed-form preimage count requires M_B >= 2 M_A");
    }
    if (!std::isfinite(y) || std::floor(y) != y) return 0;
    const long long iy = std::llabs(static_cast<long long>(y));
    if (iy % 2 != 0 || iy >= order_a + order_b) return 0;
    if (iy <= order_b - order_a) return static_cast<std::uint64_t>(order_a);
    return static_cast<std::uint64_t>((order_b + order_a - iy) / 2);
}

} // namespace pnc
