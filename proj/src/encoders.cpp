#include "pnc/encoders.hpp"

#include "pnc/bounds.hpp"
#include "pnc/error.hpp"
#include "pnc/information.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>

namespace pnc {

SecrecyPartition::SecrecyPartition(Side side, int order, std::vector<int> levels)
    : side_(side), order_(order), bits_(log2_exact(order)), levels_(std::move(levels)) {
    if (levels_.size() != static_cast<std::size_t>(order)) {
        throw InvalidArgument("partition needs one level per point");
    }
    for (int k : levels_) {
        if (k < 0 || k > bits_) throw InvalidArgument("secrecy level out of range: " + std::to_string(k));
        max_level_ = std::max(max_level_, k);
    }
    min_level_.resize(static_cast<std::size_t>(bits_) + 1);
    min_level_[static_cast<std::size_t>(bits_)] = levels_;
    for (int depth = bits_ - 1; depth >= 0; --depth) {
        const auto& below = min_level_[static_cast<std::size_t>(depth) + 1];
        auto& here = min_level_[static_cast<std::size_t>(depth)];
        here.resize(std::size_t{1} << depth);
        for (std::size_t p = 0; p < here.size(); ++p) here[p] = std::min(below[2 * p], below[2 * p + 1]);
    }
}

int SecrecyPartition::level(long long x) const {
    return level_of_rank(PamConstellation(order_).rank_of(x));
}

std::vector<int> SecrecyPartition::subset(int k) const {
    std::vector<int> out;
    for (int r = 0; r < order_; ++r) {
        if (levels_[static_cast<std::size_t>(r)] == k) out.push_back(2 * r - (order_ - 1));
    }
    return out;
}

bool SecrecyPartition::node_is_secret(int depth, std::uint32_t prefix) const {
    if (depth < 0 || depth >= bits_) throw InvalidArgument("depth outside the labeling tree");
    const int min_level = min_level_[static_cast<std::size_t>(depth)].at(prefix);
    return depth >= bits_ - min_level;
}

std::vector<bool> SecrecyPartition::secret_mask(int rank) const {
    if (rank < 0 || rank >= order_) throw InvalidArgument("rank outside the labeling tree");
    std::vector<bool> mask(static_cast<std::size_t>(bits_));
    for (int depth = 0; depth < bits_; ++depth) {
        const auto prefix = static_cast<std::uint32_t>(rank) >> (bits_ - depth);
        mask[static_cast<std::size_t>(depth)] = node_is_secret(depth, prefix);
    }
    return mask;
}

int SecrecyPartition::secret_bits(int rank) const {
    const auto mask = secret_mask(rank);
    return static_cast<int>(std::count(mask.begin(), mask.end(), true));
}

SecrecyPartition build_partition(int order_a, int order_b, Side side) {
    require_pam_orders(order_a, order_b);
    const int bits_a = log2_exact(order_a);
    const int order = side == Side::Alice ? order_a : order_b;
    const PamConstellation pam(order);
    std::vector<int> levels(static_cast<std::size_t>(order), 0);

    // Interval (lo, hi] on |x| for each listed level.
    struct Band {
        long long lo, hi;
        int k;
    };
    std::vector<Band> bands;
    const long long top = order - 1;
    bands.push_back({top - 4, top, 0});
    const int last_band = side == Side::Alice ? bits_a - 2 : bits_a - 1;
    for (int k = 1; k <= last_band; ++k) {
        bands.push_back({top - (1LL << (k + 2)), top - (1LL << (k + 1)), k});
    }
    if (side == Side::Bob) bands.push_back({-1, static_cast<long long>(order_b) - 2LL * order_a - 1, bits_a});

    for (int r = 0; r < order; ++r) {
        const long long ax = std::llabs(static_cast<long long>(pam.point(r)));
        for (const auto& band : bands) {
            if (ax > band.lo && ax <= band.hi) {
                levels[static_cast<std::size_t>(r)] = band.k;
                break;
            }
        }
    }
    return SecrecyPartition(side, order, std::move(levels));
}

SecrecyPartition uniform_partition(int order, int level, Side side) {
    return SecrecyPartition(side, order, std::vector<int>(static_cast<std::size_t>(order), level));
}

BitQueue BitQueue::parse(std::string_view text) {
    std::vector<bool> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') throw InvalidArgument("bit string may contain only '0' and '1'");
        bits.push_back(c == '1');
    }
    return BitQueue(std::move(bits));
}

std::string BitQueue::consumed() const {
    std::string out;
    out.reserve(cursor_);
    for (std::size_t i = 0; i < cursor_; ++i) out.push_back(bits_[i] ? '1' : '0');
    return out;
}

namespace {

int encode_one(BitQueues& queues, const SecrecyPartition& partition, std::size_t index) {
    std::uint32_t prefix = 0;
    for (int depth = 0; depth < partition.bits(); ++depth) {
        const bool secret = partition.node_is_secret(depth, prefix);
        BitQueue& q = secret ? queues.secret_bits : queues.public_bits;
        if (q.empty()) throw QueueUnderflow(index, secret ? "secret" : "public");
        prefix = (prefix << 1) | static_cast<std::uint32_t>(q.take());
    }
    return static_cast<int>(prefix);
}

void require_labeling(const SecrecyPartition& partition, const PamConstellation& labeling) {
    if (partition.order() != labeling.order()) {
        throw InvalidArgument("partition and labeling have different orders");
    }
}

void split_label(const SecrecyPartition& partition, int rank, DecodedBits& out) {
    const auto mask = partition.secret_mask(rank);
    const int bits = partition.bits();
    for (int depth = 0; depth < bits; ++depth) {
        const char c = ((rank >> (bits - 1 - depth)) & 1) ? '1' : '0';
        (mask[static_cast<std::size_t>(depth)] ? out.secret_bits : out.public_bits).push_back(c);
    }
}

long long recover_peer(double sum, int own, const PamConstellation& peer, std::size_t index) {
    const double value = sum - own;
    if (!std::isfinite(value) || std::floor(value) != value || !peer.contains(static_cast<long long>(value))) {
        throw IntegrityError("recovered value " + std::to_string(value) + " at instance " + std::to_string(index) +
                             " is not a point of " + std::to_string(peer.order()) + "-PAM");
    }
    return static_cast<long long>(value);
}

} // namespace

std::vector<int> encode_stream(BitQueues& queues, const SecrecyPartition& partition,
                               const PamConstellation& labeling, std::size_t count) {
    require_labeling(partition, labeling);
    std::vector<int> symbols;
    symbols.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        symbols.push_back(labeling.point_from_label(static_cast<std::uint32_t>(encode_one(queues, partition, i))));
    }
    return symbols;
}

std::vector<int> encode_all(BitQueues& queues, const SecrecyPartition& partition,
                            const PamConstellation& labeling) {
    require_labeling(partition, labeling);
    std::vector<int> symbols;
    while (!queues.public_bits.empty() || !queues.secret_bits.empty()) {
        const auto rank = encode_one(queues, partition, symbols.size());
        symbols.push_back(labeling.point_from_label(static_cast<std::uint32_t>(rank)));
    }
    return symbols;
}

DecodedBits decode_stream(std::span<const double> sums, std::span<const int> own_symbols,
                          const SecrecyPartition& peer_partition) {
    if (sums.size() != own_symbols.size()) throw InvalidArgument("sums and own symbols differ in length");
    const PamConstellation peer(peer_partition.order());
    DecodedBits out;
    for (std::size_t i = 0; i < sums.size(); ++i) {
        const long long x = recover_peer(sums[i], own_symbols[i], peer, i);
        split_label(peer_partition, peer.rank_of(x), out);
    }
    return out;
}

int coop_level(long long x_b, int order_a, int order_b) {
    const auto count = guaranteed_preimages_pam(x_b, Side::Bob, order_a, order_b);
    return std::bit_width(count) - 1;
}

std::vector<int> encode_coop(BitQueues& queues, std::span<const int> levels, const PamConstellation& labeling) {
    std::vector<int> symbols;
    symbols.reserve(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const int k = levels[i];
        if (k < 0 || k > labeling.bits_per_symbol()) {
            throw InvalidArgument("cooperative level " + std::to_string(k) + " at instance " + std::to_string(i) +
                                  " exceeds " + std::to_string(labeling.bits_per_symbol()) + " bits");
        }
        const auto partition = uniform_partition(labeling.order(), k, Side::Alice);
        symbols.push_back(labeling.point_from_label(static_cast<std::uint32_t>(encode_one(queues, partition, i))));
    }
    return symbols;
}

DecodedBits decode_coop(std::span<const double> sums, std::span<const int> bob_symbols, int order_a, int order_b) {
    if (sums.size() != bob_symbols.size()) throw InvalidArgument("sums and own symbols differ in length");
    require_pam_orders(order_a, order_b);
    const PamConstellation alice(order_a);
    DecodedBits out;
    for (std::size_t i = 0; i < sums.size(); ++i) {
        const long long x = recover_peer(sums[i], bob_symbols[i], alice, i);
        const auto partition = uniform_partition(order_a, coop_level(bob_symbols[i], order_a, order_b), Side::Alice);
        split_label(partition, alice.rank_of(x), out);
    }
    return out;
}

std::pair<double, double> rate_nocoop(int order_a, int order_b) {
    require_pam_orders(order_a, order_b);
    const double bits_a = log2_exact(order_a);
    const double alice = bits_a - 3.0 + 4.0 / order_a;
    const double bob = bits_a - 4.0 * (order_a - 1) / order_b;
    return {alice, bob};
}

double rate_coop(int order_a, int order_b) {
    require_pam_orders(order_a, order_b);
    const double bits_a = log2_exact(order_a);
    return bits_a - 4.0 * (order_a - 1) / order_b + 2.0 * bits_a / order_b;
}

double partition_rate(const SecrecyPartition& partition) {
    long long acc = 0;
    for (int r = 0; r < partition.order(); ++r) acc += partition.secret_bits(r);
    return static_cast<double>(acc) / partition.order();
}

Gaps gaps(int order_a, int order_b) {
    const auto [ub_a, ub_b] = ub_nocoop(order_a, order_b);
    const auto [r_a, r_b] = rate_nocoop(order_a, order_b);
    return {std::abs(ub_a - r_a), std::abs(ub_b - r_b), std::abs(ub_pam(order_a, order_b) - rate_coop(order_a, order_b))};
}

const char* to_string(Scheme scheme) noexcept {
    switch (scheme) {
    case Scheme::NoCoopAlice: return "nocoop-alice";
    case Scheme::NoCoopBob: return "nocoop-bob";
    case Scheme::Coop: return "coop";
    }
    return "?";
}

std::string to_string(const SecretContent& content) {
    std::string out(static_cast<std::size_t>(content.count), '0');
    for (int i = 0; i < content.count; ++i) {
        if ((content.bits >> (content.count - 1 - i)) & 1U) out[static_cast<std::size_t>(i)] = '1';
    }
    return out;
}

const ObservationPosterior& LeakageReport::at(int y) const {
    auto it = std::lower_bound(posteriors.begin(), posteriors.end(), y,
                               [](const ObservationPosterior& p, int v) { return p.y < v; });
    if (it == posteriors.end() || it->y != y) throw InvalidArgument("y=" + std::to_string(y) + " is not an observation");
    return *it;
}

double LeakageReport::secret_posterior(int y, int count, std::uint32_t bits) const {
    const auto& post = at(y);
    double given_count = 0.0;
    double match = 0.0;
    for (const auto& [content, p] : post.semantic) {
        if (content.count != count) continue;
        given_count += p;
        if (content.bits == bits) match += p;
    }
    return given_count == 0.0 ? 0.0 : match / given_count;
}

namespace {

SecretContent secret_content(const SecrecyPartition& partition, int rank) {
    const auto mask = partition.secret_mask(rank);
    SecretContent c;
    for (int depth = 0; depth < partition.bits(); ++depth) {
        if (!mask[static_cast<std::size_t>(depth)]) continue;
        c.bits = (c.bits << 1) | static_cast<std::uint32_t>((rank >> (partition.bits() - 1 - depth)) & 1);
        ++c.count;
    }
    return c;
}

std::int64_t content_code(const SecretContent& c) {
    return (static_cast<std::int64_t>(c.count) << 32) | static_cast<std::int64_t>(c.bits);
}

struct PosteriorAccumulator {
    std::uint64_t weight = 0;
    std::vector<std::vector<std::uint64_t>> suffix;
    std::map<SecretContent, std::uint64_t> semantic;
};

} // namespace

LeakageReport audit_leakage(Scheme scheme, int order_a, int order_b) {
    require_pam_orders(order_a, order_b);
    const int bits_a = log2_exact(order_a);
    const PamConstellation alice(order_a);
    const PamConstellation bob(order_b);
    const auto alice_partition = build_partition(order_a, order_b, Side::Alice);
    const auto bob_partition = build_partition(order_a, order_b, Side::Bob);
    const long long flat_edge = order_b - order_a;

    std::vector<info::Counts2> suffix(static_cast<std::size_t>(bits_a));
    std::vector<info::Counts2> flat_suffix(static_cast<std::size_t>(bits_a));
    info::Counts2 semantic;
    info::Counts2 flat_semantic;
    std::map<int, PosteriorAccumulator> by_y;

    for (int ra = 0; ra < order_a; ++ra) {
        for (int rb = 0; rb < order_b; ++rb) {
            const int xa = alice.point(ra);
            const int xb = bob.point(rb);
            const int y = xa + xb;

            int target_rank = 0;
            int target_bits = 0;
            SecretContent content;
            switch (scheme) {
            case Scheme::NoCoopBob:
                target_rank = rb;
                target_bits = bob.bits_per_symbol();
                content = secret_content(bob_partition, rb);
                break;
            case Scheme::NoCoopAlice:
                target_rank = ra;
                target_bits = bits_a;
                content = secret_content(alice_partition, ra);
                break;
            case Scheme::Coop:
                target_rank = ra;
                target_bits = bits_a;
                content = secret_content(uniform_partition(order_a, coop_level(xb, order_a, order_b), Side::Alice), ra);
                break;
            }

            const bool flat = std::llabs(y) <= flat_edge;
            auto& acc = by_y[y];
            if (acc.suffix.empty()) {
                acc.suffix.resize(static_cast<std::size_t>(bits_a));
                for (int j = 1; j <= bits_a; ++j) acc.suffix[static_cast<std::size_t>(j - 1)].assign(std::size_t{1} << j, 0);
            }
            ++acc.weight;
            ++acc.semantic[content];
            for (int j = 1; j <= bits_a && j <= target_bits; ++j) {
                const auto v = static_cast<std::int64_t>(target_rank & ((1 << j) - 1));
                suffix[static_cast<std::size_t>(j - 1)].add({y, v});
                if (flat) flat_suffix[static_cast<std::size_t>(j - 1)].add({y, v});
                ++acc.suffix[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(v)];
            }
            semantic.add({y, content_code(content)});
            if (flat) flat_semantic.add({y, content_code(content)});
        }
    }

    LeakageReport report;
    report.scheme = scheme;
    report.order_a = order_a;
    report.order_b = order_b;
    for (int j = 0; j < bits_a; ++j) {
        report.suffix_mi.push_back(info::mutual_information(suffix[static_cast<std::size_t>(j)]));
        report.flat_suffix_mi.push_back(info::mutual_information(flat_suffix[static_cast<std::size_t>(j)]));
    }
    report.semantic_mi = info::mutual_information(semantic);
    report.flat_semantic_mi = info::mutual_information(flat_semantic);

    for (const auto& [y, acc] : by_y) {
        ObservationPosterior post;
        post.y = y;
        post.weight = acc.weight;
        const auto w = static_cast<double>(acc.weight);
        for (const auto& counts : acc.suffix) {
            std::vector<double> probs(counts.size());
            for (std::size_t v = 0; v < counts.size(); ++v) probs[v] = static_cast<double>(counts[v]) / w;
            post.suffix.push_back(std::move(probs));
        }
        for (const auto& [content, n] : acc.semantic) post.semantic[content] = static_cast<double>(n) / w;
        report.posteriors.push_back(std::move(post));
    }
    return report;
}

} // namespace pnc
