#include "pnc/information.hpp"

#include "pnc/error.hpp"

#include <algorithm>
#include <numeric>

namespace pnc::info {

std::vector<std::int64_t> group_by_tolerance(std::span<const double> values, double tol) {
    if (!(tol >= 0.0)) throw InvalidArgument("grouping tolerance must be nonnegative");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    std::vector<std::int64_t> ids(values.size(), 0);
    std::int64_t group = -1;
    double prev = 0.0;
    for (std::size_t idx : order) {
        if (group < 0 || values[idx] - prev > tol) ++group;
        ids[idx] = group;
        prev = values[idx];
    }
    return ids;
}

} // namespace pnc::info
