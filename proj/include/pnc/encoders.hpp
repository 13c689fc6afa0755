#ifndef PNC_ENCODERS_HPP
#define PNC_ENCODERS_HPP

// Secret-bit encoders on the PAM labeling tree.
//
// Each point carries a secrecy level k: the last k bits of its label are
// secret. Encoding walks the tree from the root and draws a secret bit at a
// node only when every leaf below that node marks the current depth secret;
// otherwise a public bit is drawn.

#include "pnc/constellation.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pnc {

class SecrecyPartition {
public:
    /// levels[r] is the secrecy level of the point of rank r.
    SecrecyPartition(Side side, int order, std::vector<int> levels);

    Side side() const noexcept { return side_; }
    int order() const noexcept { return order_; }
    int bits() const noexcept { return bits_; }

    int level(long long x) const;
    int level_of_rank(int rank) const { return levels_.at(static_cast<std::size_t>(rank)); }
    std::span<const int> levels() const noexcept { return levels_; }
    int max_level() const noexcept { return max_level_; }

    /// Points of X^(k) in increasing order; empty for k above max_level().
    std::vector<int> subset(int k) const;

    /// Per-depth secret flags of the leaf with this rank under the descent
    /// rule (true = bit drawn from the secret queue).
    std::vector<bool> secret_mask(int rank) const;
    /// Number of secret bits the descent rule draws for this leaf.
    int secret_bits(int rank) const;

    /// Whether the node reached by the top `depth` bits `prefix` draws a secret
    /// bit next.
    bool node_is_secret(int depth, std::uint32_t prefix) const;

private:
    Side side_;
    int order_;
    int bits_;
    std::vector<int> levels_;
    int max_level_ = 0;
    // min_level_[depth][prefix]: smallest level among leaves under the node.
    std::vector<std::vector<int>> min_level_;
};

/// X^(k) sets of the non-cooperative scheme. Points outside every listed
/// interval get level 0.
SecrecyPartition build_partition(int order_a, int order_b, Side side);

/// Every point at the same level; the cooperative scheme uses one such
/// partition per time instance.
SecrecyPartition uniform_partition(int order, int level, Side side);

class BitQueue {
public:
    BitQueue() = default;
    explicit BitQueue(std::vector<bool> bits) : bits_(std::move(bits)) {}
    /// Parses a string of '0'/'1' characters.
    static BitQueue parse(std::string_view text);

    bool empty() const noexcept { return cursor_ >= bits_.size(); }
    std::size_t size() const noexcept { return bits_.size(); }
    std::size_t cursor() const noexcept { return cursor_; }
    std::size_t remaining() const noexcept { return bits_.size() - cursor_; }
    /// Consumed prefix as a '0'/'1' string.
    std::string consumed() const;

    /// Caller checks empty() first.
    bool take() { return bits_[cursor_++]; }

private:
    std::vector<bool> bits_;
    std::size_t cursor_ = 0;
};

struct BitQueues {
    BitQueue public_bits;
    BitQueue secret_bits;
};

/// Tree-descent encoder. Throws QueueUnderflow with the index of the symbol
/// being encoded when a queue runs dry; bits drawn for that symbol stay
/// consumed.
std::vector<int> encode_stream(BitQueues& queues, const SecrecyPartition& partition,
                               const PamConstellation& labeling, std::size_t count);

/// Encodes while either queue has bits left.
std::vector<int> encode_all(BitQueues& queues, const SecrecyPartition& partition,
                            const PamConstellation& labeling);

struct DecodedBits {
    std::string public_bits;
    std::string secret_bits;
};

/// Noiseless decoding at the peer: x_peer = y - x_own, whose label is split by
/// the descent rule of peer_partition.
DecodedBits decode_stream(std::span<const double> sums, std::span<const int> own_symbols,
                          const SecrecyPartition& peer_partition);

/// Secret-bit count per time instance in the cooperative scheme:
/// floor(s(x_B)).
int coop_level(long long x_b, int order_a, int order_b);

/// Cooperative encoder: symbol i carries (m_A - levels[i]) public bits followed
/// by levels[i] secret bits.
std::vector<int> encode_coop(BitQueues& queues, std::span<const int> levels, const PamConstellation& labeling);

/// Bob's decoder for the cooperative scheme; the per-instance levels come
/// from his own symbols.
DecodedBits decode_coop(std::span<const double> sums, std::span<const int> bob_symbols, int order_a, int order_b);

/// Non-cooperative secret rates: (alice, bob) in bits per symbol.
std::pair<double, double> rate_nocoop(int order_a, int order_b);

/// Alice's cooperative secret rate.
double rate_coop(int order_a, int order_b);

/// Average secret bits per point of a partition (uniform symbols).
double partition_rate(const SecrecyPartition& partition);

struct Gaps {
    double delta_a = 0.0;      // |R~_A - R_A|
    double delta_b = 0.0;      // |R~_B - R_B|
    double delta_a_coop = 0.0; // |R^ - R_A^coop|
};

Gaps gaps(int order_a, int order_b);

enum class Scheme { NoCoopAlice, NoCoopBob, Coop };

const char* to_string(Scheme scheme) noexcept;

/// Secret content of one symbol: bit count and the bits themselves
/// (most significant first).
struct SecretContent {
    int count = 0;
    std::uint32_t bits = 0;
    friend auto operator<=>(const SecretContent&, const SecretContent&) = default;
};

std::string to_string(const SecretContent& content);

struct ObservationPosterior {
    int y = 0;
    std::uint64_t weight = 0;                          // pairs producing y
    std::vector<std::vector<double>> suffix;           // suffix[j-1][v] = P(suffix_j = v | y)
    std::map<SecretContent, double> semantic;          // P((K, S) | y)
};

/// Exact leakage of a scheme to the relay under uniform independent symbols.
struct LeakageReport {
    Scheme scheme = Scheme::NoCoopBob;
    int order_a = 0;
    int order_b = 0;
    std::vector<double> suffix_mi;       // I(Y; suffix_j(X)), j = 1..m_A
    double semantic_mi = 0.0;            // I(Y; (K, S))
    std::vector<double> flat_suffix_mi;  // same, conditioned on |y| <= M_B - M_A
    double flat_semantic_mi = 0.0;
    std::vector<ObservationPosterior> posteriors; // ascending y

    const ObservationPosterior& at(int y) const;
    /// P(S = bits | Y = y, K = count); zero when K = count is impossible at y.
    double secret_posterior(int y, int count, std::uint32_t bits) const;
};

LeakageReport audit_leakage(Scheme scheme, int order_a, int order_b);

} // namespace pnc

#endif
