#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ctvgs/oracle.hpp"
#include "ctvgs/synth.hpp"

using namespace ctvgs;

TEST_CASE("nrmse basics") {
    TimeGrid g{4, 0.25, 0.0};
    TimeVertexSignal a{g, Eigen::MatrixXd::Ones(2, 4)};
    TimeVertexSignal b = a;
    CHECK(nrmse(a, b) == 0.0);
    b.values(0, 0) += 1.0;
    CHECK(nrmse(a, b) == Catch::Approx(1.0 / std::sqrt(8.0)));
    TimeVertexSignal z{g, Eigen::MatrixXd::Zero(2, 4)};
    CHECK(nrmse(z, z) == 0.0);
    CHECK(std::isinf(nrmse(z, a)));
    CHECK_THROWS_AS(nrmse(a, TimeVertexSignal{g, Eigen::MatrixXd::Zero(3, 4)}),
                    std::invalid_argument);
}

TEST_CASE("complementary determinant identity on hand cases") {
    SECTION("identity matrix") {
        Eigen::MatrixXd u = Eigen::MatrixXd::Identity(4, 4);
        SchurCheck c = schur_determinant_check(u, {1, 3}, {0, 2});
        CHECK(c.det_primary == Catch::Approx(1.0));
        CHECK(c.det_complement == Catch::Approx(1.0));
    }
    SECTION("plane rotation") {
        const double th = 0.7;
        Eigen::MatrixXd u(2, 2);
        u << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
        SchurCheck c = schur_determinant_check(u, {0}, {0});
        CHECK(c.det_primary == Catch::Approx(std::sin(th)));
        CHECK(c.det_complement == Catch::Approx(std::sin(th)));
    }
    SECTION("empty silent set is vacuously invertible") {
        std::mt19937_64 rng(2);
        GftBasis b = make_random_basis(3, rng);
        SchurCheck c = schur_determinant_check(b.vectors, {}, {0, 1, 2});
        CHECK(c.det_primary == 1.0);
        CHECK(c.det_complement == Catch::Approx(1.0));  // |det U| of an orthonormal U
    }
}

TEST_CASE("complementary determinant identity across random orthonormal bases") {
    std::mt19937_64 rng(71);
    int checked = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);
        GftBasis basis = make_random_basis(n, rng);
        std::vector<int> idx(static_cast<size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        const int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
        std::vector<int> lambda0(idx.begin(), idx.begin() + m);
        std::sort(lambda0.begin(), lambda0.end());
        std::shuffle(idx.begin(), idx.end(), rng);
        std::vector<int> v0(idx.begin(), idx.begin() + (n - m));
        std::sort(v0.begin(), v0.end());

        SchurCheck c = schur_determinant_check(basis.vectors, lambda0, v0);
        if (std::max(c.det_primary, c.det_complement) < 1e-6) continue;  // too small to compare
        ++checked;
        CHECK(c.det_primary ==
              Catch::Approx(c.det_complement).epsilon(1e-8).margin(1e-12));
    }
    CHECK(checked > 1500);  // the conditioning filter must not eat the sweep
}

TEST_CASE("least-squares oracle rebuilds the reference instance") {
    TimeGrid grid{2400, 1.0 / 1200.0, 0.0};
    std::mt19937_64 rng(73);
    SynthResult inst = synthesize_equal(grid, {50.0, 30.0, 10.0, 0.0}, rng);
    SamplingPlan plan = build_plan(grid, inst.basis, inst.profile);
    SampleSet s = extract_samples(inst.signal, plan.schedule);

    OracleResult o = least_squares_oracle(s, plan);
    // Critical rates on a divisor-exact grid: the system is square.
    CHECK(o.unknowns == 360);
    CHECK(o.equations == 360);
    CHECK(o.residual < 1e-8);
    CHECK(o.condition < 1e6);
    CHECK(nrmse(inst.signal, o.signal) < 1e-6);

    // And it agrees with the staged path, which shares no solver code.
    TimeVertexSignal staged = reconstruct_equal(s, plan);
    CHECK(nrmse(staged, o.signal) < 1e-6);
}

TEST_CASE("oracle handles silent-only instances") {
    TimeGrid grid{64, 1.0 / 16.0, 0.0};
    std::mt19937_64 rng(79);
    SynthResult inst = synthesize_equal(grid, {0.0, 0.0}, rng);
    SamplingPlan plan = build_plan(grid, inst.basis, inst.profile);
    SampleSet s = extract_samples(inst.signal, plan.schedule);
    OracleResult o = least_squares_oracle(s, plan);
    CHECK(o.unknowns == 0);
    CHECK(o.signal.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("recoverability flips when a stream is removed") {
    TimeGrid grid{128, 1.0 / 32.0, 0.0};  // bin = 0.25 Hz
    std::mt19937_64 rng(83);
    // Bin counts dividing 64 so every rate is hit exactly.
    SynthResult inst = synthesize_equal(grid, {4.0, 2.0, 1.0}, rng);
    SamplingPlan plan = build_plan(grid, inst.basis, inst.profile);
    SampleSet s = extract_samples(inst.signal, plan.schedule);

    RecoverabilityReport full = recoverability_test(s, plan);
    CHECK(full.recoverable);
    CHECK(full.rank == full.space_dim);
    CHECK(full.gap > 1e-8);

    for (size_t drop = 0; drop < s.streams.size(); ++drop) {
        SampleSet reduced = s;
        reduced.streams.erase(reduced.streams.begin() + static_cast<std::ptrdiff_t>(drop));
        RecoverabilityReport r = recoverability_test(reduced, plan);
        CHECK_FALSE(r.recoverable);
    }

    SECTION("oversampling stays recoverable") {
        SamplingSchedule denser = plan.schedule;
        for (auto& e : denser.entries) e.rate_hz *= 2.0;
        SampleSet s2 = extract_samples(inst.signal, denser);
        RecoverabilityReport r = recoverability_test(s2, plan);
        CHECK(r.recoverable);
    }
}

TEST_CASE("baseline rate charges every non-silent vertex") {
    BandwidthProfile p;
    p.vertex_bw_hz = {50.0, 20.0, 50.0, 50.0};
    p.freq_bw_hz = {50.0, 50.0, 50.0, 50.0};
    p.grid_nyquist_hz = 128.0;
    CHECK(separate_baseline_rate(p) == 340.0);
    p.vertex_bw_hz[1] = 0.0;
    CHECK(separate_baseline_rate(p) == 300.0);
}
