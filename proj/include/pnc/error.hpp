#ifndef PNC_ERROR_HPP
#define PNC_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pnc {

/// Malformed argument: non power-of-two order, symbol outside an alphabet,
/// non-normalized distribution and the like.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parameters are well formed but outside the region where a result is
/// defined, e.g. M_B < 2 M_A for the PAM closed forms.
class Infeasible : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class QueueUnderflow : public std::runtime_error {
public:
    QueueUnderflow(std::size_t symbol_index, const std::string& queue)
        : std::runtime_error("bit queue '" + queue + "' ran out while encoding symbol " +
                             std::to_string(symbol_index)),
          symbol_index_(symbol_index) {}

    std::size_t symbol_index() const noexcept { return symbol_index_; }

private:
    std::size_t symbol_index_;
};

/// A recovered peer symbol is not a point of the peer constellation.
class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RankDeficient : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pnc

#endif
