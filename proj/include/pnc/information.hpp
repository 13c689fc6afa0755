#ifndef PNC_INFORMATION_HPP
#define PNC_INFORMATION_HPP

// Exact mutual information over finite joint tables.
//
// Outcomes are integer-coded; weights are either integer counts (uniform
// inputs, exact) or real probabilities. With integer counts every log term is
// evaluated on an exact rational, so independent cells contribute exactly 0.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

namespace pnc::info {

/// Sorts the values and assigns consecutive group ids, starting a new group
/// whenever the gap to the previous value exceeds tol. Ids follow ascending
/// value order; the returned vector is indexed like the input.
std::vector<std::int64_t> group_by_tolerance(std::span<const double> values, double tol);

template <std::size_t K, class W>
class Table {
public:
    using Key = std::array<std::int64_t, K>;
    static_assert(std::is_arithmetic_v<W>);

    void add(const Key& key, W weight = W{1}) {
        if (weight == W{0}) return;
        cells_[key] += weight;
        total_ += weight;
    }

    const std::map<Key, W>& cells() const noexcept { return cells_; }
    W total() const noexcept { return total_; }
    bool empty() const noexcept { return cells_.empty(); }

    /// Marginal over the listed coordinates, in that order.
    template <std::size_t J>
    Table<J, W> marginal(const std::array<std::size_t, J>& coords) const {
        Table<J, W> out;
        for (const auto& [key, w] : cells_) {
            typename Table<J, W>::Key k{};
            for (std::size_t i = 0; i < J; ++i) k[i] = key[coords[i]];
            out.add(k, w);
        }
        return out;
    }

private:
    std::map<Key, W> cells_;
    W total_{};
};

using Counts2 = Table<2, std::uint64_t>;
using Counts3 = Table<3, std::uint64_t>;

namespace detail {

/// log2(n1*n2 / (d1*d2)), exactly zero when the ratio is one.
template <class W>
long double log2_ratio(W n1, W n2, W d1, W d2) {
    if constexpr (std::is_integral_v<W>) {
        __extension__ typedef unsigned __int128 wide;
        const auto num = static_cast<wide>(n1) * n2;
        const auto den = static_cast<wide>(d1) * d2;
        if (num == den) return 0.0L;
        return std::log2(static_cast<long double>(num) / static_cast<long double>(den));
    } else {
        const long double num = static_cast<long double>(n1) * n2;
        const long double den = static_cast<long double>(d1) * d2;
        if (num == den) return 0.0L;
        return std::log2(num / den);
    }
}

template <class Key, class W>
W lookup(const std::map<Key, W>& m, const Key& k) {
    auto it = m.find(k);
    return it == m.end() ? W{0} : it->second;
}

} // namespace detail

/// H(X) in bits.
template <class W>
double entropy(const Table<1, W>& t) {
    const auto total = static_cast<long double>(t.total());
    long double h = 0.0L;
    for (const auto& [key, w] : t.cells()) {
        const long double p = static_cast<long double>(w) / total;
        h -= p * std::log2(p);
    }
    return static_cast<double>(h);
}

/// I(X0; X1) in bits.
template <class W>
double mutual_information(const Table<2, W>& t) {
    if (t.empty()) return 0.0;
    const auto a = t.template marginal<1>({0});
    const auto b = t.template marginal<1>({1});
    const W total = t.total();
    long double acc = 0.0L;
    for (const auto& [key, w] : t.cells()) {
        const W wa = detail::lookup(a.cells(), typename Table<1, W>::Key{key[0]});
        const W wb = detail::lookup(b.cells(), typename Table<1, W>::Key{key[1]});
        acc += static_cast<long double>(w) * detail::log2_ratio(w, total, wa, wb);
    }
    const long double mi = acc / static_cast<long double>(total);
    return static_cast<double>(mi < 0.0L ? 0.0L : mi);
}

/// I(X0; X1 | X2) in bits.
template <class W>
double conditional_mutual_information(const Table<3, W>& t) {
    if (t.empty()) return 0.0;
    const auto ac = t.template marginal<2>({0, 2});
    const auto bc = t.template marginal<2>({1, 2});
    const auto c = t.template marginal<1>({2});
    long double acc = 0.0L;
    for (const auto& [key, w] : t.cells()) {
        const W wac = detail::lookup(ac.cells(), typename Table<2, W>::Key{key[0], key[2]});
        const W wbc = detail::lookup(bc.cells(), typename Table<2, W>::Key{key[1], key[2]});
        const W wc = detail::lookup(c.cells(), typename Table<1, W>::Key{key[2]});
        acc += static_cast<long double>(w) * detail::log2_ratio(w, wc, wac, wbc);
    }
    const long double mi = acc / static_cast<long double>(t.total());
    return static_cast<double>(mi < 0.0L ? 0.0L : mi);
}

} // namespace pnc::info

#endif
