#ifndef PNC_PARALLEL_HPP
#define PNC_PARALLEL_HPP

#include <cstddef>
#include <functional>
#include <string>

namespace pnc {

/// Worker count: `requested` if nonzero, else PNC_THREADS if set, else the
/// hardware concurrency.
unsigned resolve_threads(unsigned requested = 0);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Callers write
/// results into slot i so output order never depends on scheduling.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

/// 12 significant digits, shortest of fixed/scientific ("%.12g").
std::string format_real(double value);

} // namespace pnc

#endif
