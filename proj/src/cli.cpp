#include "pnc/cli.hpp"

#include "pnc/bounds.hpp"
#include "pnc/constellation.hpp"
#include "pnc/encoders.hpp"
#include "pnc/error.hpp"
#include "pnc/mimo.hpp"
#include "pnc/parallel.hpp"
#include "pnc/sync.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

namespace pnc::cli {

namespace {

using nlohmann::ordered_json;

/// Rounds through the 12-digit text form so JSON and CSV agree.
double r12(double v) { return std::stod(format_real(v)); }

ordered_json r12(const std::vector<double>& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(r12(x));
    return a;
}

void error_line(std::ostream& err, const std::string& kind, const std::string& message, ordered_json extra = {}) {
    ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    if (extra.is_object()) j.update(extra);
    err << j.dump() << '\n';
}

Side parse_side(const std::string& s) { return s == "alice" ? Side::Alice : Side::Bob; }

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
    if (c.csv_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.csv_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + c.csv_path + " for writing");
    f << text;
    if (!f) throw std::runtime_error("write failed: " + c.csv_path);
}

std::string profile_csv(int ma, int mb) {
    const auto profile = sum_profile(make_pam(ma), make_pam(mb));
    std::string s = "y,count,pmf\n";
    for (const auto& e : profile.entries())
        s += format_real(e.y) + "," + std::to_string(e.count) + "," + format_real(profile.pmf(e.y)) + "\n";
    return s;
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

ordered_json bounds_json(int ma, int mb) {
    const auto b = secrecy_bounds(ma, mb);
    const auto [ra, rb] = rate_nocoop(ma, mb);
    const auto g = gaps(ma, mb);
    ordered_json j;
    j["ma"] = ma;
    j["mb"] = mb;
    j["ub_shared"] = r12(b.ub_shared);
    j["ub_alice_nocoop"] = r12(b.ub_alice_nocoop);
    j["ub_bob_nocoop"] = r12(b.ub_bob_nocoop);
    j["rate_alice_nocoop"] = r12(ra);
    j["rate_bob_nocoop"] = r12(rb);
    j["rate_alice_coop"] = r12(rate_coop(ma, mb));
    j["delta_a"] = r12(g.delta_a);
    j["delta_b"] = r12(g.delta_b);
    j["delta_a_coop"] = r12(g.delta_a_coop);
    return j;
}

std::string encode(const RunConfig& c) {
    BitQueues queues{BitQueue::parse(c.public_bits), BitQueue::parse(c.secret_bits)};
    if (c.scheme == "coop") {
        require_pam_orders(c.ma, c.mb);
        if (c.levels.empty()) throw InvalidArgument("--scheme coop needs --levels");
        return join(encode_coop(queues, c.levels, make_pam(c.ma))) + "\n";
    }
    const Side side = parse_side(c.side);
    const auto partition = build_partition(c.ma, c.mb, side);
    const auto labeling = make_pam(side == Side::Alice ? c.ma : c.mb);
    return join(encode_all(queues, partition, labeling)) + "\n";
}

ordered_json audit_json(const RunConfig& c) {
    const Scheme scheme = c.scheme == "coop" ? Scheme::Coop
                          : parse_side(c.side) == Side::Alice ? Scheme::NoCoopAlice
                                                             : Scheme::NoCoopBob;
    const auto report = audit_leakage(scheme, c.ma, c.mb);
    ordered_json j;
    j["scheme"] = to_string(report.scheme);
    j["ma"] = report.order_a;
    j["mb"] = report.order_b;
    j["suffix_mi"] = r12(report.suffix_mi);
    j["semantic_mi"] = r12(report.semantic_mi);
    j["flat_suffix_mi"] = r12(report.flat_suffix_mi);
    j["flat_semantic_mi"] = r12(report.flat_semantic_mi);
    if (c.posteriors) {
        ordered_json rows = ordered_json::array();
        for (const auto& p : report.posteriors) {
            ordered_json row;
            row["y"] = p.y;
            row["weight"] = p.weight;
            ordered_json suffix = ordered_json::array();
            for (const auto& dist : p.suffix) suffix.push_back(r12(dist));
            row["suffix"] = suffix;
            ordered_json sem = ordered_json::array();
            for (const auto& [content, prob] : p.semantic)
                sem.push_back({{"count", content.count}, {"bits", to_string(content)}, {"p", r12(prob)}});
            row["semantic"] = sem;
            rows.push_back(row);
        }
        j["posteriors"] = rows;
    }
    return j;
}

ReceiverModel parse_receiver(const std::string& s) { return s == "ideal" ? ReceiverModel::Ideal : ReceiverModel::OwnSymbols; }

std::string sweep(int ma, int mb, const RunConfig& c) {
    require_pam_orders(ma, mb);
    const double tol = c.merge_tol.value_or(default_merge_tol(ma, mb));
    return sweep_csv(sync_sweep(ma, mb, c.step, tol, parse_receiver(c.receiver), c.threads));
}

PrecoderMethod parse_method(const std::string& s) { return s == "opt" ? PrecoderMethod::Optimized : PrecoderMethod::ZeroForcing; }

std::string gaps_csv() {
    std::string s = "ma,mb,delta_a,delta_b,delta_a_coop\n";
    for (int ma = 4; ma <= 64; ma *= 2) {
        for (int mb = 2 * ma; mb <= 256; mb *= 2) {
            const auto g = gaps(ma, mb);
            s += std::to_string(ma) + "," + std::to_string(mb) + "," + format_real(g.delta_a) + "," +
                 format_real(g.delta_b) + "," + format_real(g.delta_a_coop) + "\n";
        }
    }
    return s;
}

std::string cap_approx_csv(const RunConfig& c) {
    static constexpr int kShapes[][2] = {{2, 2}, {3, 3}, {3, 2}, {4, 3}};
    std::string s = "m,n,method,snr_db,mean_capacity_bits\n";
    for (const auto& shape : kShapes) {
        for (PrecoderMethod method : {PrecoderMethod::ZeroForcing, PrecoderMethod::Optimized}) {
            const auto rows = ergodic_capacity_mc(shape[0], shape[1], c.snr_db, c.trials, c.seed, method, c.threads);
            for (const auto& r : rows)
                s += std::to_string(shape[0]) + "," + std::to_string(shape[1]) + "," + to_string(method) + "," +
                     format_real(r.snr_db) + "," + format_real(r.mean_capacity) + "\n";
        }
    }
    return s;
}

void validate(const RunConfig& c) {
    if (c.trials < 1) throw InvalidArgument("--trials must be >= 1");
    if (!(c.step > 0.0 && c.step <= 0.5)) throw InvalidArgument("--step must lie in (0, 0.5]");
    if (c.merge_tol && !(*c.merge_tol >= 0.0)) throw InvalidArgument("--tol must be non-negative");
    const bool closed_form = c.subcommand == "bounds" || c.subcommand == "encode" || c.subcommand == "audit" ||
                             c.subcommand == "sync-sweep";
    if (closed_form && c.mb < 2 * c.ma)
        throw Infeasible("M_B >= 2*M_A is required (got M_A=" + std::to_string(c.ma) + ", M_B=" + std::to_string(c.mb) + ")");
    if (c.subcommand == "profile" || c.subcommand == "bounds" || c.subcommand == "encode" ||
        c.subcommand == "audit" || c.subcommand == "sync-sweep") {
        if (!is_power_of_two(c.ma) || c.ma < 2) throw InvalidArgument("--ma must be a power of two >= 2");
        if (!is_power_of_two(c.mb) || c.mb < 2) throw InvalidArgument("--mb must be a power of two >= 2");
    }
    if (c.subcommand == "mimo" && (c.m < 1 || c.n < 1)) throw InvalidArgument("--m and --n must be positive");
}

} // namespace

ParseResult parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Perfect-secrecy physical-layer network coding toolkit", "pnc"};
    app.require_subcommand(1);
    RunConfig c;

    auto add_orders = [&](CLI::App* sub) {
        sub->add_option("--ma", c.ma, "Alice's PAM order")->capture_default_str();
        sub->add_option("--mb", c.mb, "Bob's PAM order")->capture_default_str();
    };
    auto add_threads = [&](CLI::App* sub) {
        sub->add_option("--threads", c.threads, "worker cap (0 = PNC_THREADS or hardware)");
    };
    auto add_csv = [&](CLI::App* sub) { sub->add_option("--csv", c.csv_path, "write CSV here instead of stdout"); };
    const std::vector<std::string> sides{"alice", "bob"};
    const std::vector<std::string> schemes{"nocoop", "coop"};

    auto* profile = app.add_subcommand("profile", "preimage counts of y = x_A + x_B");
    add_orders(profile);
    add_csv(profile);

    auto* bounds = app.add_subcommand("bounds", "secrecy-rate bounds, achievable rates and gaps (JSON)");
    add_orders(bounds);
    bool json_flag = false;
    bounds->add_flag("--json", json_flag, "JSON output (the only format)");

    auto* enc = app.add_subcommand("encode", "run a secret-bit encoder on explicit bit queues");
    add_orders(enc);
    enc->add_option("--scheme", c.scheme)->check(CLI::IsMember(schemes))->capture_default_str();
    enc->add_option("--side", c.side, "encoding user for nocoop")->check(CLI::IsMember(sides))->capture_default_str();
    enc->add_option("--public", c.public_bits, "public bit queue")->required();
    enc->add_option("--secret", c.secret_bits, "secret bit queue")->required();
    enc->add_option("--levels", c.levels, "per-instance secret bit counts (coop)")->delimiter(',');

    auto* audit = app.add_subcommand("audit", "exact leakage of an encoder to the relay (JSON)");
    add_orders(audit);
    audit->add_option("--scheme", c.scheme)->check(CLI::IsMember(schemes))->capture_default_str();
    audit->add_option("--side", c.side)->check(CLI::IsMember(sides))->capture_default_str();
    audit->add_flag("--posteriors", c.posteriors, "include per-observation posteriors");

    const std::vector<std::string> receivers{"own", "ideal"};
    auto* sync = app.add_subcommand("sync-sweep", "bound under timing errors over a [0,1]^2 grid");
    add_orders(sync);
    sync->add_option("--step", c.step)->capture_default_str();
    sync->add_option("--receiver", c.receiver)->check(CLI::IsMember(receivers))->capture_default_str();
    sync->add_option("--tol", c.merge_tol, "observation merge tolerance");
    add_csv(sync);
    add_threads(sync);

    const std::vector<std::string> methods{"zf", "opt"};
    auto* mimo = app.add_subcommand("mimo", "ergodic capacity of aligned precoders");
    mimo->add_option("--m", c.m, "relay antennas")->capture_default_str();
    mimo->add_option("--n", c.n, "user antennas")->capture_default_str();
    mimo->add_option("--snr-db", c.snr_db, "SNR list in dB")->delimiter(',');
    mimo->add_option("--trials", c.trials)->capture_default_str();
    mimo->add_option("--seed", c.seed)->capture_default_str();
    mimo->add_option("--method", c.method)->check(CLI::IsMember(methods))->capture_default_str();
    mimo->add_flag("--dim", c.dim, "print dof_max and precoder_space_dim only");
    add_csv(mimo);
    add_threads(mimo);

    const std::vector<std::string> figures{"rays_pmf", "sync_err", "gaps", "cap_approx"};
    auto* fig = app.add_subcommand("figure", "data series behind a figure");
    fig->add_option("name", c.figure)->required()->check(CLI::IsMember(figures));
    fig->add_option("--step", c.step, "sync_err grid step")->capture_default_str();
    fig->add_option("--trials", c.trials, "cap_approx trials")->capture_default_str();
    fig->add_option("--seed", c.seed)->capture_default_str();
    fig->add_option("--snr-db", c.snr_db)->delimiter(',');
    add_csv(fig);
    add_threads(fig);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return {std::nullopt, 0};
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return {std::nullopt, 0};
    } catch (const CLI::ParseError& e) {
        error_line(err, "usage", e.what());
        return {std::nullopt, static_cast<int>(ExitCode::Usage)};
    }
    for (auto* sub : app.get_subcommands()) c.subcommand = sub->get_name();
    return {c, 0};
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        validate(c);
        const std::string& s = c.subcommand;
        if (s == "profile") {
            emit(c, profile_csv(c.ma, c.mb), out);
        } else if (s == "bounds") {
            out << bounds_json(c.ma, c.mb).dump() << '\n';
        } else if (s == "encode") {
            out << encode(c);
        } else if (s == "audit") {
            out << audit_json(c).dump() << '\n';
        } else if (s == "sync-sweep") {
            emit(c, sweep(c.ma, c.mb, c), out);
        } else if (s == "mimo") {
            if (c.dim) {
                ordered_json j;
                j["m"] = c.m;
                j["n"] = c.n;
                j["dof_max"] = dof_max(c.m, c.n);
                j["precoder_space_dim"] = precoder_space_dim(c.m, c.n);
                out << j.dump() << '\n';
            } else {
                if (c.n > c.m) throw InvalidArgument("--n must not exceed --m");
                emit(c, capacity_csv(ergodic_capacity_mc(c.m, c.n, c.snr_db, c.trials, c.seed, parse_method(c.method),
                                                         c.threads)),
                     out);
            }
        } else if (s == "figure") {
            if (c.figure == "rays_pmf") emit(c, profile_csv(4, 16), out);
            else if (c.figure == "sync_err") emit(c, sweep(4, 16, c), out);
            else if (c.figure == "gaps") emit(c, gaps_csv(), out);
            else emit(c, cap_approx_csv(c), out);
        } else {
            throw InvalidArgument("unknown subcommand '" + s + "'");
        }
        return static_cast<int>(ExitCode::Ok);
    } catch (const Infeasible& e) {
        error_line(err, "infeasible", e.what());
        return static_cast<int>(ExitCode::Infeasible);
    } catch (const QueueUnderflow& e) {
        error_line(err, "queue_underflow", e.what(), {{"symbol_index", e.symbol_index()}});
        return static_cast<int>(ExitCode::Usage);
    } catch (const InvalidArgument& e) {
        error_line(err, "invalid_argument", e.what());
        return static_cast<int>(ExitCode::Usage);
    } catch (const std::exception& e) {
        error_line(err, "internal", e.what());
        return static_cast<int>(ExitCode::Internal);
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    const auto parsed = parse(argc, argv, out, err);
    if (!parsed.config) return parsed.exit_code;
    return run(*parsed.config, out, err);
}

} // namespace pnc::cli
