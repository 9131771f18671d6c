#include <catch_amalgamated.hpp>

#include <cmath>

#include "support.hpp"
#include "vortex/correction.hpp"
#include "vortex/error.hpp"

using namespace vortex;
using Catch::Approx;

namespace {

// IMI demo geometry: wider Rx ring at 40 cm.
Scenario demo_scenario()
{
    Scenario s = test::bench_scenario();
    s.rx = UcaGeometry::make(20, 0.03);
    return s;
}

ImiMatrix matrix(std::vector<int> modes, std::vector<double> power)
{
    ImiMatrix m;
    m.decoded_modes = modes;
    m.tx_modes = modes;
    m.power = std::move(power);
    m.received_power.assign(modes.size(), 1.0);
    return m;
}

} // namespace

TEST_CASE("mask is zero at normal incidence")
{
    const auto m = phase_mask(0.0, 1.3, 2500.0, UcaGeometry::make(20, 0.008));
    REQUIRE(m.phases.size() == 20);
    for (double p : m.phases) CHECK(p == 0.0);
}

TEST_CASE("mask flips sign when phi moves by pi")
{
    const auto rx = UcaGeometry::make(20, 0.03);
    const auto a = phase_mask(deg2rad(25), 0.4, 2513.0, rx);
    const auto b = phase_mask(deg2rad(25), 0.4 + kPi, 2513.0, rx);
    for (int m = 0; m < 20; ++m) CHECK(std::abs(std::polar(1.0, a.phases[m]) - std::polar(1.0, -b.phases[m])) < 1e-12);
}

TEST_CASE("mask for the 14.3 degree scenario matches a scalar evaluation")
{
    const double k = 2 * kPi * 120e9 / kSpeedOfLight;
    const double th = deg2rad(14.3), ph = deg2rad(-134.7), a = 0.008;
    const auto mask = phase_mask(th, ph, k, UcaGeometry::make(20, a));
    REQUIRE(mask.phases.size() == 20);
    CHECK(mask.theta == th);
    CHECK(mask.phi == ph);
    CHECK(mask.k == k);
    for (int m = 0; m < 20; ++m) {
        const double pm = 2 * kPi * m / 20;
        const double x = a * std::cos(pm), y = a * std::sin(pm);
        const double raw = -k * std::sin(th) * (x * std::cos(ph) + y * std::sin(ph));
        const double wrapped = std::remainder(raw, 2 * kPi);
        CHECK(mask.phases[m] == Approx(wrapped).margin(1e-12));
        CHECK(mask.phases[m] > -kPi);
        CHECK(mask.phases[m] <= kPi);
    }
}

TEST_CASE("mask rejects grazing elevations")
{
    const auto rx = UcaGeometry::make(8, 0.01);
    CHECK_THROWS_AS(phase_mask(kPi / 2, 0.0, 1.0, rx), Error);
    CHECK_THROWS_AS(phase_mask(-0.1, 0.0, 1.0, rx), Error);
}

TEST_CASE("ideal helical samples decode to a single mode")
{
    const auto rx = UcaGeometry::make(20, 0.01);
    std::vector<int> modes;
    for (int l = -max_decodable_mode(20); l <= max_decodable_mode(20); ++l) modes.push_back(l);
    for (int l : modes) {
        // The facing receiver sees mode l as exp(-i l phi_m).
        std::vector<cdouble> y(20);
        for (int m = 0; m < 20; ++m) y[m] = std::polar(1.0, -l * rx.azimuth(m));
        const auto d = decode_modes(y, rx, nullptr, modes);
        for (std::size_t j = 0; j < modes.size(); ++j) {
            if (modes[j] == l) CHECK(std::abs(d[j] - cdouble{1.0, 0.0}) < 1e-14);
            else CHECK(std::abs(d[j]) < 1e-14);
        }
    }
}

TEST_CASE("decoding beyond the sampling limit is rejected")
{
    const auto rx = UcaGeometry::make(20, 0.01);
    const std::vector<cdouble> y(20, cdouble{1.0, 0.0});
    CHECK(max_decodable_mode(20) == 9);
    CHECK(max_decodable_mode(11) == 4);
    try {
        decode_modes(y, rx, nullptr, std::vector<int>{10});
        FAIL("expected ALIASED_MODE");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::aliased_mode);
    }
    CHECK_NOTHROW(decode_modes(y, rx, nullptr, std::vector<int>{-9, 9}));
    CHECK_THROWS_AS(decode_modes(std::vector<cdouble>(19), rx, nullptr, std::vector<int>{0}), Error);
}

TEST_CASE("decoding is linear")
{
    const auto s = demo_scenario();
    const RxPose pose = test::pose_for(12, -100, 0.4);
    const double k = s.carrier_wavenumber();
    const auto a = exact_received_signal(s, pose, 1, k);
    const auto b = exact_received_signal(s, pose, -2, k);
    std::vector<cdouble> sum(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) sum[i] = a[i] + b[i];
    const auto mask = phase_mask(deg2rad(12), deg2rad(-100), k, s.rx);
    const std::vector<int> modes{-2, -1, 0, 1, 2};
    const auto da = decode_modes(a, s.rx, &mask, modes);
    const auto db = decode_modes(b, s.rx, &mask, modes);
    const auto ds = decode_modes(sum, s.rx, &mask, modes);
    for (std::size_t j = 0; j < modes.size(); ++j) CHECK(std::abs(ds[j] - da[j] - db[j]) <= 1e-12 * std::abs(ds[j]) + 1e-300);
}

TEST_CASE("aligned IMI is diagonal")
{
    const auto s = demo_scenario();
    const std::vector<int> modes{-2, -1, 0, 1, 2};
    const auto imi = imi_matrix(s, s.pose, modes, modes, nullptr, ChannelModel::exact, s.carrier_wavenumber());
    for (int l : modes) CHECK(isolation_db(imi, l) >= 30.0);
    for (int l : modes) CHECK(diagonal_fraction_db(imi, l) > -0.01);
}

TEST_CASE("ten degree tilt leaks power and the true-angle mask restores it")
{
    const auto s = demo_scenario();
    const double k = s.carrier_wavenumber();
    const std::vector<int> modes{-2, -1, 0, 1, 2};
    const RxPose tilted = RxPose::tilted(0.4, deg2rad(10), 0.0);
    const auto ang = misalignment_angles(tilted);
    const auto aligned = imi_matrix(s, s.pose, modes, modes, nullptr, ChannelModel::exact, k);
    const auto bent = imi_matrix(s, tilted, modes, modes, nullptr, ChannelModel::exact, k);
    const auto mask = phase_mask(ang.theta, ang.phi, k, s.rx);
    const auto fixed = imi_matrix(s, tilted, modes, modes, &mask, ChannelModel::exact, k);

    // Uncorrected: some off-diagonal entry within 10 dB of a diagonal entry.
    bool leak = false;
    for (std::size_t c = 0; c < modes.size(); ++c)
        for (std::size_t r = 0; r < modes.size(); ++r)
            if (r != c && bent.at(r, c) * 10.0 >= bent.at(c, c)) leak = true;
    CHECK(leak);
    for (int l : modes) CHECK(diagonal_fraction_db(fixed, l) >= diagonal_fraction_db(aligned, l) - 3.0);
}

TEST_CASE("single mode IMI")
{
    const auto s = demo_scenario();
    const double k = s.carrier_wavenumber();
    const auto imi = imi_matrix(s, s.pose, std::vector<int>{1}, std::vector<int>{1}, nullptr, ChannelModel::exact, k);
    REQUIRE(imi.rows() == 1);
    REQUIRE(imi.cols() == 1);
    const auto y = exact_received_signal(s, s.pose, 1, k);
    const auto d = decode_modes(y, s.rx, nullptr, std::vector<int>{1});
    CHECK(imi.at(0, 0) == Approx(std::norm(d[0])).epsilon(1e-14));
}

TEST_CASE("sir arithmetic")
{
    const auto m = matrix({-1, 1}, {1.0, 0.01, 0.01, 1.0});
    const auto r = sir(m);
    CHECK(r.per_mode_db[0] == Approx(20.0));
    CHECK(r.per_mode_db[1] == Approx(20.0));
    CHECK(r.average_db == Approx(20.0));

    const auto diag = matrix({-1, 1}, {1.0, 0.0, 0.0, 1.0});
    CHECK(sir(diag).average_db == kSirCapDb);
    CHECK(capacity(diag) == Approx(2 * std::log2(1 + 1e20)));
    CHECK(capacity(diag) == Approx(132.877).epsilon(1e-5));

    const auto even = matrix({-1, 1}, {1.0, 1.0, 1.0, 1.0});
    CHECK(capacity(even) == Approx(2.0));

    CHECK_THROWS_AS(sir(matrix({-1, 1}, {0.0, 0.1, 0.1, 1.0})), Error);
    try {
        sir(matrix({-1, 1}, {0.0, 0.1, 0.1, 1.0}));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::zero_signal);
    }
}

TEST_CASE("sir is row-wise; leakage diagnostics are column-wise")
{
    // Row 0 (decode slot -1) collects 0.1 from tx +1; column 0 (tx -1) leaks 0.001 into slot +1.
    const auto m = matrix({-1, 1}, {1.0, 0.1, 0.001, 1.0});
    const auto r = sir(m);
    CHECK(r.per_mode_db[0] == Approx(10.0));
    CHECK(r.per_mode_db[1] == Approx(30.0));
    CHECK(r.leakage_db[0] == Approx(30.0));
    CHECK(r.leakage_db[1] == Approx(10.0));
}

TEST_CASE("sir gain")
{
    const auto m = matrix({-1, 1}, {1.0, 0.1, 0.1, 1.0});
    CHECK(sir_gain(m, m) == 0.0);
    const auto s = demo_scenario();
    const double k = s.carrier_wavenumber();
    const std::vector<int> modes{-1, 1};
    const auto zero = phase_mask(0.0, 0.0, k, s.rx);
    const auto plain = imi_matrix(s, s.pose, modes, modes, nullptr, ChannelModel::exact, k);
    const auto masked = imi_matrix(s, s.pose, modes, modes, &zero, ChannelModel::exact, k);
    CHECK(sir_gain(plain, masked) == Approx(0.0).margin(1e-9));
    CHECK_THROWS_AS(sir_gain(plain, matrix({-2, 2}, {1, 0, 0, 1})), Error);
}

TEST_CASE("true-angle correction never lowers SIR on the test grid")
{
    const auto s = test::bench_scenario();
    const double k = s.carrier_wavenumber();
    const std::vector<int> modes{-1, 1};
    for (double th = 5; th <= 45; th += 5)
        for (double ph : {-180.0, -150.0, -120.0, -90.0}) {
            const RxPose pose = test::pose_for(th, ph, 0.4);
            const auto before = imi_matrix(s, pose, modes, modes, nullptr, ChannelModel::exact, k);
            const auto mask = phase_mask(deg2rad(th), deg2rad(ph), k, s.rx);
            const auto after = imi_matrix(s, pose, modes, modes, &mask, ChannelModel::exact, k);
            INFO("theta " << th << " phi " << ph);
            CHECK(sir(after).average_db >= sir(before).average_db);
        }
}

TEST_CASE("mask flattens the linear phase front; the ellipse term remains")
{
    const auto s = test::validation_scenario(20, 0.03);
    const double k = s.carrier_wavenumber();
    for (double th : {5.0, 10.0, 20.0, 30.0}) {
        for (double ph : {-150.0, -100.0}) {
            const RxPose pose = test::pose_for(th, ph, 100.0);
            const auto ang = misalignment_angles(pose);
            const auto mask = phase_mask(ang.theta, ang.phi, k, s.rx);
            const double c = std::cos(ang.theta);
            const double bound = std::atan(1 / std::sqrt(c)) - std::atan(std::sqrt(c));
            for (int l : {-1, 1}) {
                const auto y = farfield_received_signal(s, pose, l, k);
                auto post = [&](int m) { return std::arg(y[m] * std::polar(1.0, mask.phases[m])); };
                for (int m = 0; m < 20; ++m) {
                    const double dm = delta(ang.theta, ang.phi, s.rx.azimuth(m));
                    const double d0 = delta(ang.theta, ang.phi, s.rx.azimuth(0));
                    // After masking only l * delta_m varies across the ring.
                    CHECK(std::abs(wrap_pi(post(m) - post(0) - l * (dm - d0))) < 1e-9);
                    // Its departure from the ideal helix l * (phi - phi_m) is the ellipse term.
                    const double ellipse = wrap_pi(dm - (ang.phi - s.rx.azimuth(m)));
                    CHECK(std::abs(ellipse) <= bound + 1e-12);
                }
            }
            if (th <= 20.0) CHECK(rad2deg(bound) < 2.0);
        }
    }
}

TEST_CASE("estimated-angle gain converges to the true-angle gain as errors shrink")
{
    const auto s = test::bench_scenario();
    const double k = s.carrier_wavenumber();
    const std::vector<int> modes{-1, 1};
    for (double th : {10.0, 20.0, 45.0}) {
        const double ph = -130.0;
        const RxPose pose = test::pose_for(th, ph, 0.4);
        const auto before = imi_matrix(s, pose, modes, modes, nullptr, ChannelModel::exact, k);
        const auto exact_mask = phase_mask(deg2rad(th), deg2rad(ph), k, s.rx);
        const double g_true = sir_gain(before, imi_matrix(s, pose, modes, modes, &exact_mask, ChannelModel::exact, k));
        double prev = -1e9;
        for (double scale : {1.0, 0.5, 0.25, 0.1, 0.01}) {
            const auto m = phase_mask(deg2rad(th + 2.54 * scale), deg2rad(ph + 0.69 * scale), k, s.rx);
            const double g = sir_gain(before, imi_matrix(s, pose, modes, modes, &m, ChannelModel::exact, k));
            CHECK(g >= prev);
            CHECK(g <= g_true + 1e-9);
            prev = g;
        }
        CHECK(prev >= g_true - 3.0);
    }
}

TEST_CASE("IMI csv layout")
{
    const auto m = matrix({-1, 1}, {1.0, 0.25, 0.5, 2.0});
    CHECK(to_csv(m) == "decoded\\tx,-1,1\n-1,1,0.25\n1,0.5,2\n");
}
