#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ctvgs/spectral.hpp"

using namespace ctvgs;

namespace {

constexpr double kPi = 3.14159265358979323846;

// O(T^2) DFT, written from the definition; the FFT wrapper must agree.
std::vector<std::complex<double>> naive_dft(const Eigen::VectorXd& x) {
    const int t = static_cast<int>(x.size());
    std::vector<std::complex<double>> out(static_cast<size_t>(t));
    for (int k = 0; k < t; ++k) {
        std::complex<double> acc = 0.0;
        for (int j = 0; j < t; ++j)
            acc += x[j] * std::exp(std::complex<double>(0.0, -2.0 * kPi * k * j / t));
        out[static_cast<size_t>(k)] = acc;
    }
    return out;
}

Eigen::VectorXd tone(int t, int k, double amp, double phase) {
    Eigen::VectorXd v(t);
    for (int i = 0; i < t; ++i) v[i] = amp * std::cos(2.0 * kPi * k * i / t + phase);
    return v;
}

} // namespace

TEST_CASE("fft wrapper agrees with the textbook transform") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    for (int t : {8, 12, 31, 64}) {
        Eigen::VectorXd x(t);
        for (int i = 0; i < t; ++i) x[i] = gauss(rng);
        auto fast = detail::dft_forward(x);
        auto slow = naive_dft(x);
        REQUIRE(fast.size() == slow.size());
        for (size_t k = 0; k < slow.size(); ++k)
            CHECK(std::abs(fast[k] - slow[k]) < 1e-9 * (1.0 + std::abs(slow[k])));
        Eigen::VectorXd back = detail::dft_inverse_real(fast);
        CHECK((back - x).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("bandwidth measurement finds the top occupied bin") {
    TimeGrid g{256, 1.0 / 64.0, 0.0};  // bin = 0.25 Hz
    SECTION("pure tones") {
        for (int k : {1, 5, 100, 128}) {
            Series s{g, tone(256, k, 1.0, 0.3)};
            CHECK(estimate_bandwidth(s) == Catch::Approx(k * 0.25).margin(1e-12));
        }
    }
    SECTION("zero and DC-only series report zero") {
        CHECK(estimate_bandwidth(Series{g, Eigen::VectorXd::Zero(256)}) == 0.0);
        CHECK(estimate_bandwidth(Series{g, Eigen::VectorXd::Constant(256, 3.5)}) == 0.0);
    }
    SECTION("mixtures report the widest component") {
        Series s{g, tone(256, 3, 1.0, 0.0) + tone(256, 40, 0.01, 1.0)};
        CHECK(estimate_bandwidth(s) == Catch::Approx(10.0).margin(1e-12));
    }
    SECTION("components under the relative floor are ignored") {
        Series s{g, tone(256, 3, 1.0, 0.0) + tone(256, 90, 1e-12, 0.0)};
        CHECK(estimate_bandwidth(s, 1e-8) == Catch::Approx(0.75).margin(1e-12));
        CHECK(estimate_bandwidth(s, 1e-14) == Catch::Approx(22.5).margin(1e-12));
    }
}

TEST_CASE("brick-wall filter keeps exactly the requested closed band") {
    TimeGrid g{256, 1.0 / 64.0, 0.0};
    Series s{g, tone(256, 2, 1.0, 0.1) + tone(256, 10, 2.0, 0.7) + tone(256, 50, 0.5, 2.0)};
    SECTION("interior band") {
        FilterResult r = ideal_filter(s, 1.0, 5.0);  // bins 4..20: keeps only bin 10
        CHECK(r.shift_hz == 0.0);
        CHECK((r.series.values - tone(256, 10, 2.0, 0.7)).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("band edges are inclusive") {
        FilterResult r = ideal_filter(s, 0.5, 2.5);  // bins 2..10 inclusive
        Eigen::VectorXd want = tone(256, 2, 1.0, 0.1) + tone(256, 10, 2.0, 0.7);
        CHECK((r.series.values - want).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("lowpass keeps DC") {
        Series c{g, Eigen::VectorXd::Constant(256, 4.0) + tone(256, 50, 0.5, 2.0)};
        FilterResult r = ideal_filter(c, 0.0, 1.0);
        CHECK((r.series.values - Eigen::VectorXd::Constant(256, 4.0)).cwiseAbs().maxCoeff() <
              1e-12);
    }
    SECTION("argument contracts") {
        CHECK_THROWS_AS(ideal_filter(s, -1.0, 5.0), std::invalid_argument);
        CHECK_THROWS_AS(ideal_filter(s, 5.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(ideal_filter(s, 0.0, 40.0), std::invalid_argument);
    }
}

TEST_CASE("shifted band selection moves content down and back up exactly") {
    TimeGrid g{256, 1.0 / 64.0, 0.0};
    // Content straddling the cut at 5 Hz (bin 20): bins 18, 25, 40.
    Series s{g, tone(256, 18, 1.0, 0.4) + tone(256, 25, 2.0, 1.3) + tone(256, 40, 0.7, -0.5)};

    FilterResult r = ideal_filter(s, 5.0, 10.0, /*shift_to_baseband=*/true);
    CHECK(r.shift_hz == Catch::Approx(5.0));
    // (5, 10] selects bins 21..40; they land on bins 1..20 with phase kept.
    Eigen::VectorXd want = tone(256, 5, 2.0, 1.3) + tone(256, 20, 0.7, -0.5);
    CHECK((r.series.values - want).cwiseAbs().maxCoeff() < 1e-12);

    SECTION("undo restores the original band content") {
        Series back = undo_baseband_shift(r.series, r.shift_hz);
        Eigen::VectorXd orig_band = tone(256, 25, 2.0, 1.3) + tone(256, 40, 0.7, -0.5);
        CHECK((back.values - orig_band).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("round trip equals the unshifted half-open band filter") {
        Series back = undo_baseband_shift(r.series, r.shift_hz);
        FilterResult plain = ideal_filter(s, 5.0 + 0.125, 10.0);  // (5,10] as closed band
        CHECK((back.values - plain.series.values).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("shift edge must be bin-aligned") {
        CHECK_THROWS_AS(ideal_filter(s, 5.1, 10.0, true), std::invalid_argument);
    }
    SECTION("undo refuses DC content") {
        Series with_dc{g, Eigen::VectorXd::Constant(256, 1.0) + tone(256, 4, 1.0, 0.0)};
        CHECK_THROWS_AS(undo_baseband_shift(with_dc, 5.0), std::invalid_argument);
    }
    SECTION("undo refuses a shift past Nyquist") {
        Series hi{g, tone(256, 100, 1.0, 0.0)};
        CHECK_THROWS_AS(undo_baseband_shift(hi, 20.0), std::invalid_argument);
    }
}

TEST_CASE("decimated streams rebuild bandlimited series exactly") {
    TimeGrid g{256, 1.0 / 64.0, 0.0};
    // Bandwidth 8 Hz = bin 32; content on bins 0, 7, 19, 32 (cosine edge).
    Eigen::VectorXd x = Eigen::VectorXd::Constant(256, 0.6) + tone(256, 7, 1.2, 0.9) +
                        tone(256, 19, 0.8, -1.1) + tone(256, 32, 0.5, 0.0);

    auto decimate = [&](int m) {
        const int s = 256 / m;
        Eigen::VectorXd v(s);
        for (int i = 0; i < s; ++i) v[i] = x[i * m];
        return Series{TimeGrid{s, m / 64.0, 0.0}, v};
    };

    SECTION("at twice the critical rate") {
        Series rec = shannon_interpolate(decimate(2), g, 8.0);
        CHECK((rec.values - x).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("exactly at the critical rate") {
        // 16 Hz stream, 2B = 16: the edge pair collapses onto the stream
        // Nyquist bin and splits back because the edge is cosine-phase.
        Series rec = shannon_interpolate(decimate(4), g, 8.0);
        CHECK((rec.values - x).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("identity when the stream is the grid itself") {
        Series rec = shannon_interpolate(decimate(1), g, 8.0);
        CHECK((rec.values - x).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("a sine-phase edge is outside the critical-rate space") {
        Eigen::VectorXd y = tone(256, 32, 1.0, kPi / 2);  // pure sine at the edge
        Eigen::VectorXd v(64);
        for (int i = 0; i < 64; ++i) v[i] = y[i * 4];
        CHECK(v.cwiseAbs().maxCoeff() < 1e-12);  // sampled at its own zeros
        Series rec = shannon_interpolate(Series{TimeGrid{64, 4 / 64.0, 0.0}, v}, g, 8.0);
        CHECK((rec.values - y).cwiseAbs().maxCoeff() > 0.9);  // cannot come back
    }
    SECTION("sub-critical streams are rejected") {
        CHECK_THROWS_AS(shannon_interpolate(decimate(8), g, 8.0), AliasingError);
    }
    SECTION("stream geometry must tile the grid") {
        Series bad = decimate(4);
        bad.grid.t0 = 0.5;
        CHECK_THROWS_AS(shannon_interpolate(bad, g, 8.0), std::invalid_argument);
        Series bad2 = decimate(4);
        bad2.grid.dt *= 1.5;
        CHECK_THROWS_AS(shannon_interpolate(bad2, g, 8.0), std::invalid_argument);
        Series bad3{TimeGrid{100, 256.0 / 100 / 64.0, 0.0}, Eigen::VectorXd::Zero(100)};
        CHECK_THROWS_AS(shannon_interpolate(bad3, g, 8.0), std::invalid_argument);
    }
}

TEST_CASE("interpolation clips content above the declared bandwidth") {
    TimeGrid g{128, 1.0 / 32.0, 0.0};
    // The stream faithfully carries a 6 Hz tone, but the declared band is
    // 4 Hz: the out-of-band part is dropped, not smeared.
    Eigen::VectorXd in_band = tone(128, 8, 1.0, 0.2);    // 2 Hz
    Eigen::VectorXd out_band = tone(128, 24, 0.5, 0.9);  // 6 Hz
    Eigen::VectorXd x = in_band + out_band;
    Eigen::VectorXd v(64);
    for (int i = 0; i < 64; ++i) v[i] = x[i * 2];  // 16 Hz stream, no aliasing
    Series rec = shannon_interpolate(Series{TimeGrid{64, 2 / 32.0, 0.0}, v}, g, 4.0);
    CHECK((rec.values - in_band).cwiseAbs().maxCoeff() < 1e-12);
}
