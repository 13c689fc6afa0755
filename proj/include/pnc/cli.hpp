#ifndef PNC_CLI_HPP
#define PNC_CLI_HPP

// Front end for the `pnc` binary: flag parsing, validation and dispatch.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pnc::cli {

inline constexpr std::uint64_t kDefaultSeed = 20161114;

enum class ExitCode : int { Ok = 0, Internal = 1, Usage = 2, Infeasible = 3 };

struct RunConfig {
    std::string subcommand; // profile, bounds, encode, audit, sync-sweep, mimo, figure

    int ma = 4;
    int mb = 16;
    std::string side = "bob";       // nocoop encode/audit
    std::string scheme = "nocoop";  // nocoop, coop
    std::string public_bits;
    std::string secret_bits;
    std::vector<int> levels;        // coop encode
    bool posteriors = false;        // audit

    double step = 0.05;             // sync-sweep, figure sync_err
    std::string receiver = "own";   // own, ideal
    std::optional<double> merge_tol;

    int m = 4;
    int n = 3;
    std::vector<double> snr_db{0, 5, 10, 15, 20, 25, 30};
    int trials = 1000;
    std::uint64_t seed = kDefaultSeed;
    std::string method = "zf";      // zf, opt
    bool dim = false;

    std::string figure;             // rays_pmf, sync_err, gaps, cap_approx

    std::string csv_path;           // empty = stdout
    unsigned threads = 0;
};

struct ParseResult {
    std::optional<RunConfig> config; // empty when parsing ended the run
    int exit_code = 0;
};

/// Parses argv; help and usage errors are written to out/err and reported via
/// exit_code with no config.
ParseResult parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Validates, computes and writes the single artifact. Failures produce one
/// JSON line on err.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace pnc::cli

#endif
