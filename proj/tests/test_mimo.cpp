#include "pnc/error.hpp"
#include "pnc/mimo.hpp"

#include <doctest.h>

#include <cmath>

using namespace pnc;

namespace {

PrecoderProblem random_problem(int m, int n, double snr, std::uint64_t seed) {
    ChannelSampler s(seed, 0);
    ComplexMatrix ha = s.sample(m, n, 1.0 / m);
    ComplexMatrix hb = s.sample(m, n, 1.0 / m);
    return PrecoderProblem::from_channels(ha, hb, snr);
}

double fd_relative_error(const ComplexMatrix& h, const ComplexMatrix& g, double snr) {
    const ComplexMatrix analytic = capacity_gradient(h, g, snr);
    const double step = 1e-6;
    ComplexMatrix numeric(g.rows(), g.cols());
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            double parts[2];
            for (int part = 0; part < 2; ++part) {
                const std::complex<double> e = part == 0 ? std::complex<double>(step, 0) : std::complex<double>(0, step);
                ComplexMatrix plus = g, minus = g;
                plus(i, j) += e;
                minus(i, j) -= e;
                parts[part] = (capacity(h, plus, snr) - capacity(h, minus, snr)) / (2 * step);
            }
            numeric(i, j) = {parts[0], parts[1]};
        }
    }
    return (analytic - numeric).norm() / analytic.norm();
}

} // namespace

TEST_CASE("dimension counts") {
    CHECK(dof_max(3, 2) == 1);
    CHECK(dof_max(4, 3) == 2);
    CHECK(dof_max(3, 3) == 3);
    CHECK(dof_max(5, 2) == 0);
    CHECK(precoder_space_dim(3, 2) == 0);
    CHECK(precoder_space_dim(4, 3) == 6);
    CHECK(precoder_space_dim(3, 3) == 16);
    CHECK(precoder_space_dim(2, 2) == 6);
    CHECK_THROWS_AS(precoder_space_dim(4, 2), Infeasible);
    CHECK_THROWS_AS(dof_max(0, 2), InvalidArgument);
}

TEST_CASE("nullspace basis") {
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    const ComplexMatrix b = nullspace_basis(id, id);
    REQUIRE(b.cols() == 2);
    ComplexMatrix block(2, 4);
    block << id, -id;
    CHECK((block * b).norm() < 1e-12);
    CHECK((b.adjoint() * b - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto p = random_problem(3, 2, 1.0, seed);
        const ComplexMatrix nb = nullspace_basis(p.h_a, p.h_b);
        REQUIRE(nb.cols() == 1);
        CHECK(std::abs(nb.norm() - 1.0) < 1e-12);
        ComplexMatrix st(3, 4);
        st << p.h_a, -p.h_b;
        CHECK((st * nb).norm() < 1e-12);
    }

    // [H -H] with H of rank 1 loses rank.
    ComplexMatrix lowrank(3, 2);
    lowrank << 1, 2, 2, 4, 3, 6;
    CHECK_THROWS_AS(nullspace_basis(lowrank, lowrank), RankDeficient);
}

TEST_CASE("zero-forcing precoders") {
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    const auto p = PrecoderProblem::from_channels(id, id, 1.0);
    const auto zf = zf_precoders(p);
    CHECK((zf.g_a - id).norm() < 1e-12);
    CHECK((zf.g_b - id).norm() < 1e-12);

    for (auto [m, n] : std::vector<std::pair<int, int>>{{2, 2}, {3, 3}, {3, 2}, {4, 3}, {5, 3}}) {
        for (std::uint64_t seed = 10; seed < 20; ++seed) {
            const auto prob = random_problem(m, n, 10.0, seed);
            const auto pair = zf_precoders(prob);
            CHECK(pair.g_a.cols() == 2 * n - m);
            CHECK(is_feasible(prob, pair));
            CHECK(alignment_residual(prob, pair) <= 1e-10 * std::max(1.0, (prob.h_a * pair.g_a).norm()));
            const double pa = pair.g_a.squaredNorm();
            const double pb = pair.g_b.squaredNorm();
            CHECK(std::max(pa, pb) == doctest::Approx(n).epsilon(1e-9));
            if (m > n) CHECK(std::abs(pa - pb) > 1e-9);
        }
    }
    ComplexMatrix wide(2, 3);
    wide.setOnes();
    CHECK_THROWS_AS(zf_precoders(PrecoderProblem::from_channels(wide, wide, 1.0)), InvalidArgument);
    CHECK_THROWS_AS(zf_precoders(random_problem(5, 2, 1.0, 1)), Infeasible);
}

TEST_CASE("capacity examples") {
    const ComplexMatrix id3 = ComplexMatrix::Identity(3, 3);
    CHECK(capacity(id3, ComplexMatrix::Zero(3, 2), 5.0) == 0.0);
    CHECK(capacity(id3, id3, 1.0) == doctest::Approx(3.0).epsilon(1e-14));
    // Against the full M x M determinant.
    const auto p = random_problem(4, 3, 1.0, 3);
    const auto g = zf_precoders(p).g_a;
    const ComplexMatrix k = p.h_a * g;
    const ComplexMatrix x = ComplexMatrix::Identity(4, 4) + 7.0 * k * k.adjoint();
    CHECK(capacity(p.h_a, g, 7.0) == doctest::Approx(std::log2(x.determinant().real())).epsilon(1e-12));
    double prev = 0;
    for (double snr : {0.1, 1.0, 10.0, 100.0}) {
        const double c = capacity(p.h_a, g, snr);
        CHECK(c > prev);
        prev = c;
    }
    CHECK_THROWS_AS(capacity(id3, id3, 0.0), InvalidArgument);
    ComplexMatrix bad = id3;
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(capacity(bad, id3, 1.0), InvalidArgument);
}

TEST_CASE("analytic gradient matches finite differences") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto p = random_problem(4, 3, 10.0, 100 + seed);
        const auto zf = zf_precoders(p);
        CHECK(fd_relative_error(p.h_a, zf.g_a, p.snr) < 1e-5);
    }
    ChannelSampler s(5, 5);
    const ComplexMatrix h = s.sample(3, 3, 1.0 / 3);
    const ComplexMatrix g = s.sample(3, 3, 1.0);
    CHECK(fd_relative_error(h, g, 2.0) < 1e-5);
}

TEST_CASE("optimizer keeps every iterate feasible and ascending") {
    for (auto [m, n] : std::vector<std::pair<int, int>>{{3, 3}, {4, 3}, {2, 2}}) {
        for (std::uint64_t seed = 30; seed < 35; ++seed) {
            const auto p = random_problem(m, n, 10.0, seed);
            const auto zf = zf_precoders(p);
            const double start = capacity(p.h_a, zf.g_a, p.snr);
            double last = start;
            bool feasible = true, monotone = true;
            OptimizeOptions opts;
            opts.on_iterate = [&](const PrecoderPair& pair, double c) {
                feasible = feasible && is_feasible(p, pair);
                monotone = monotone && c >= last - 1e-12;
                last = c;
            };
            const auto r = optimize_precoders(p, zf, opts);
            CHECK(feasible);
            CHECK(monotone);
            CHECK(r.capacity >= start - 1e-12);
            CHECK(r.initial_capacity == start);
            CHECK(is_feasible(p, r.precoders));
            CHECK(r.capacity == doctest::Approx(capacity(p.h_a, r.precoders.g_a, p.snr)).epsilon(1e-12));
        }
    }
}

TEST_CASE("zero-dimensional precoder sets admit no ascent") {
    for (auto [m, n] : std::vector<std::pair<int, int>>{{3, 2}, {5, 3}}) {
        for (std::uint64_t seed = 40; seed < 50; ++seed) {
            const auto p = random_problem(m, n, 10.0, seed);
            const auto zf = zf_precoders(p);
            CHECK(tangent_gradient_norm(p, zf) <= 1e-8);
            const auto r = optimize_precoders(p, zf);
            CHECK(r.capacity - r.initial_capacity < 1e-6);
            CHECK(r.converged);
        }
    }
    // A non-degenerate case has a genuine ascent direction.
    const auto p = random_problem(4, 3, 10.0, 41);
    CHECK(tangent_gradient_norm(p, zf_precoders(p)) > 1e-6);
}

TEST_CASE("optimizer rejects infeasible starts") {
    const auto p = random_problem(4, 3, 10.0, 7);
    auto zf = zf_precoders(p);
    zf.g_a *= 2.0;
    CHECK_THROWS_AS(optimize_precoders(p, zf), InvalidArgument);
}

TEST_CASE("channel statistics") {
    ChannelSampler s(123, 0);
    const int draws = 20000;
    double re = 0, im = 0, power = 0, cross = 0;
    for (int i = 0; i < draws; ++i) {
        const auto h = s.sample(1, 1, 0.5)(0, 0);
        re += h.real();
        im += h.imag();
        power += std::norm(h);
        cross += h.real() * h.imag();
    }
    CHECK(std::abs(re / draws) < 0.02);
    CHECK(std::abs(im / draws) < 0.02);
    CHECK(power / draws == doctest::Approx(0.5).epsilon(0.03));
    CHECK(std::abs(cross / draws) < 0.01);

    ChannelSampler a(9, 3), b(9, 3), c(9, 4);
    CHECK(a.sample(3, 2, 1.0) == b.sample(3, 2, 1.0));
    CHECK(a.sample(3, 2, 1.0) != c.sample(3, 2, 1.0));
}

TEST_CASE("received power equals the sum of transmit powers") {
    // Unit-norm precoding vectors fixed independently of the variance-1/M
    // channels: E||sqrt(P_A) H_A g x_A + sqrt(P_B) H_B g x_B||^2 = P_A + P_B.
    const int m = 4, n = 3;
    const double pa = 2.0, pb = 3.0;
    Eigen::VectorXcd g = Eigen::VectorXcd::Ones(n) / std::sqrt(static_cast<double>(n));
    ChannelSampler s(77, 0);
    double acc = 0;
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
        const ComplexMatrix ha = s.sample(m, n, 1.0 / m);
        const ComplexMatrix hb = s.sample(m, n, 1.0 / m);
        const std::complex<double> xa(s.normal() / std::sqrt(2.0), s.normal() / std::sqrt(2.0));
        const std::complex<double> xb(s.normal() / std::sqrt(2.0), s.normal() / std::sqrt(2.0));
        const Eigen::VectorXcd y = std::sqrt(pa) * ha * g * xa + std::sqrt(pb) * hb * g * xb;
        acc += y.squaredNorm();
    }
    CHECK(acc / trials == doctest::Approx(pa + pb).epsilon(0.05));
}

TEST_CASE("monte carlo capacity is deterministic and ordered") {
    const std::vector<double> snr{0, 10, 20};
    const auto a = capacity_csv(ergodic_capacity_mc(4, 3, snr, 30, 5, PrecoderMethod::Optimized, 1));
    const auto b = capacity_csv(ergodic_capacity_mc(4, 3, snr, 30, 5, PrecoderMethod::Optimized, 3));
    CHECK(a == b);
    CHECK(a.rfind("snr_db,mean_capacity_bits\n", 0) == 0);
    const auto zf = ergodic_capacity_mc(4, 3, snr, 30, 5, PrecoderMethod::ZeroForcing);
    const auto opt = ergodic_capacity_mc(4, 3, snr, 30, 5, PrecoderMethod::Optimized);
    for (std::size_t i = 0; i < snr.size(); ++i) {
        CHECK(opt[i].mean_capacity >= zf[i].mean_capacity - 1e-12);
        if (i > 0) CHECK(zf[i].mean_capacity > zf[i - 1].mean_capacity);
    }
    CHECK_THROWS_AS(ergodic_capacity_mc(4, 3, snr, 0, 5, PrecoderMethod::ZeroForcing), InvalidArgument);
    CHECK_THROWS_AS(ergodic_capacity_mc(4, 2, snr, 1, 5, PrecoderMethod::ZeroForcing), Infeasible);
    CHECK(db_to_ratio(10) == doctest::Approx(10.0));
}
