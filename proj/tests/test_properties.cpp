#include <catch_amalgamated.hpp>

#include <random>

#include "support.hpp"
#include "vortex/correction.hpp"
#include "vortex/error.hpp"
#include "vortex/estimator.hpp"

using namespace vortex;
using vortex::test::bench_scenario;
using vortex::test::iota_list;
using vortex::test::pose_for;

namespace {

constexpr int kSamples = 200;

EstimationConfig far_config(const Scenario& sc)
{
    EstimationConfig cfg;
    cfg.modes = {-1, 1};
    cfg.antennas = select_antennas(sc.rx.n_elements, 6);
    cfg.subcarriers = {sc.nearest_subcarrier_to_carrier()};
    return cfg;
}

} // namespace

TEST_CASE("bessel parity and reflection")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> xs(0.0, 40.0);
    std::uniform_int_distribution<int> ns(-12, 12);
    for (int i = 0; i < kSamples; ++i) {
        const double x = xs(rng);
        const int n = ns(rng);
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        CHECK(bessel_j(-n, x) == Catch::Approx(sign * bessel_j(n, x)).margin(1e-14));
        CHECK(bessel_j(n, -x) == Catch::Approx(sign * bessel_j(n, x)).margin(1e-14));
    }
}

TEST_CASE("bessel recurrence")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> xs(0.5, 30.0);
    std::uniform_int_distribution<int> ns(-8, 8);
    for (int i = 0; i < kSamples; ++i) {
        const double x = xs(rng);
        const int n = ns(rng);
        const double lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
        CHECK(lhs == Catch::Approx(2.0 * n / x * bessel_j(n, x)).margin(1e-12));
    }
}

TEST_CASE("delta and rho trivial cases")
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    for (int i = 0; i < kSamples; ++i) {
        const double phi = ang(rng), phi_m = ang(rng);
        CHECK(std::abs(wrap_pi(delta(0.0, phi, phi_m) - (phi - phi_m))) < 1e-12);
        CHECK(rho(0.0, phi, phi_m) == Catch::Approx(1.0));
        // Element on the tilt axis sees no foreshortening; the one facing the tilt sees the most.
        CHECK(rho(0.7, phi, phi + kPi / 2) == Catch::Approx(1.0));
        CHECK(delta(0.7, phi, phi + kPi / 2) == Catch::Approx(-kPi / 2));
        CHECK(rho(0.7, phi, phi) == Catch::Approx(std::cos(0.7)));
        CHECK(std::abs(wrap_pi(delta(0.7, phi, phi))) < 1e-12);
    }
}

TEST_CASE("mask vanishes without misalignment")
{
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    const auto sc = bench_scenario();
    for (int i = 0; i < 50; ++i) {
        const auto mask = phase_mask(0.0, ang(rng), sc.carrier_wavenumber(), sc.rx);
        for (double v : mask.phases) CHECK(v == 0.0);
    }
}

TEST_CASE("mask at phi and phi + pi are negatives")
{
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> th(0.0, deg2rad(70.0));
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    const auto sc = bench_scenario();
    const double k = sc.carrier_wavenumber();
    for (int i = 0; i < 50; ++i) {
        const double theta = th(rng), phi = ang(rng);
        const auto a = phase_mask(theta, phi, k, sc.rx);
        const auto b = phase_mask(theta, phi + kPi, k, sc.rx);
        for (std::size_t m = 0; m < a.phases.size(); ++m) CHECK(a.phases[m] == Catch::Approx(-b.phases[m]).margin(1e-9));
    }
}

TEST_CASE("geometry round trip over random poses")
{
    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> th(0.5, 80.0);
    std::uniform_real_distribution<double> ph(-179.5, 179.5);
    std::uniform_real_distribution<double> dist(0.05, 500.0);
    for (int i = 0; i < kSamples; ++i) {
        const double theta = th(rng), phi = ph(rng), d = dist(rng);
        const auto ang = misalignment_angles(pose_for(theta, phi, d));
        CHECK(rad2deg(ang.theta) == Catch::Approx(theta).margin(1e-9));
        CHECK(rad2deg(circular_distance(ang.phi, deg2rad(phi))) < 1e-9);
        const auto g = gamma(pose_for(theta, phi, d));
        CHECK_FALSE(g.degenerate);
    }
}

TEST_CASE("receiver elements stay on a rigid ring")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> tilt(-1.4, 1.4);
    const auto rx = UcaGeometry::make(20, 0.008);
    for (int i = 0; i < 50; ++i) {
        const RxPose pose = RxPose::tilted(0.4, tilt(rng), tilt(rng));
        const auto pts = element_positions_rx(rx, pose);
        const Vec3 c(0, 0, 0.4);
        for (std::size_t m = 0; m < pts.size(); ++m) {
            CHECK((pts[m] - c).norm() == Catch::Approx(0.008));
            const auto& next = pts[(m + 1) % pts.size()];
            CHECK((next - pts[m]).norm() == Catch::Approx(2 * 0.008 * std::sin(kPi / 20)));
        }
        CHECK((pose.rotation.transpose() * pose.rotation - Mat3::Identity()).norm() < 1e-12);
        CHECK(pose.rotation.determinant() == Catch::Approx(1.0));
    }
}

TEST_CASE("cross-modal phase ignores the carrier frequency")
{
    std::mt19937_64 rng(18);
    std::uniform_real_distribution<double> th(5.0, 60.0);
    std::uniform_real_distribution<double> ph(-180.0, 180.0);
    std::uniform_real_distribution<double> fr(60e9, 300e9);
    auto sc = bench_scenario(100.0);
    const std::vector<int> modes{-1, 1};
    for (int i = 0; i < 20; ++i) {
        const RxPose pose = pose_for(th(rng), ph(rng), 100.0);
        sc.subcarriers_hz = {120e9, fr(rng)};
        const auto t = simulate_measurement(sc, pose, modes, std::vector<int>{0, 1}, NoiseSpec::none(),
                                            ChannelModel::farfield);
        for (int m = 0; m < sc.rx.n_elements; ++m) {
            const double a = cross_modal_phase(t, m, 1, -1, std::vector<int>{0});
            const double b = cross_modal_phase(t, m, 1, -1, std::vector<int>{1});
            if (std::abs(t.at(static_cast<std::size_t>(m), 1, 1)) < 1e-12) continue;
            CHECK(std::abs(wrap_pi(2.0 * (a - b))) < 1e-9);
        }
    }
}

TEST_CASE("estimates ignore a global complex gain")
{
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> th(10.0, 60.0);
    std::uniform_real_distribution<double> ph(-180.0, 180.0);
    std::uniform_real_distribution<double> mag(-6.0, 6.0);
    const auto sc = bench_scenario(100.0);
    const auto cfg = far_config(sc);
    const std::vector<int> modes{-1, 1};
    for (int i = 0; i < 5; ++i) {
        const RxPose pose = pose_for(th(rng), ph(rng), 100.0);
        auto t = simulate_measurement(sc, pose, modes, iota_list(71), NoiseSpec::with_snr_db(25.0, 100 + i),
                                      ChannelModel::farfield);
        const auto a = estimate(t, sc, cfg);
        t.scale(std::polar(std::pow(10.0, mag(rng)), ph(rng)));
        const auto b = estimate(t, sc, cfg);
        CHECK(b.theta == Catch::Approx(a.theta).margin(1e-7));
        CHECK(circular_distance(a.phi, b.phi) < 1e-7);
    }
}

TEST_CASE("loss is blind to phi + pi and the resolver picks the true side")
{
    std::mt19937_64 rng(20);
    std::uniform_real_distribution<double> th(15.0, 60.0);
    std::uniform_real_distribution<double> ph(-180.0, 180.0);
    const auto sc = bench_scenario(100.0);
    const auto cfg = far_config(sc);
    const std::vector<int> modes{-1, 1};
    for (int i = 0; i < 10; ++i) {
        const double theta = th(rng), phi = ph(rng);
        const RxPose pose = pose_for(theta, phi, 100.0);
        const auto t = simulate_measurement(sc, pose, modes, iota_list(71), NoiseSpec::none(), ChannelModel::farfield);
        const auto phases = measure_cross_modal_phases(t, cfg, sc.rx);
        const auto w = weights(phases.amplitudes, cfg.weighting);
        const double g = gamma(pose).gamma;
        const double l1 = loss(deg2rad(theta), deg2rad(phi), g, phases, w);
        const double l2 = loss(deg2rad(theta), deg2rad(phi) + kPi, g + kPi, phases, w);
        CHECK(l1 < 1e-18);
        CHECK(l2 < 1e-18);

        const auto est = estimate(t, sc, cfg);
        CHECK(est.ambiguity_resolved);
        CHECK(est.kept_power >= est.rejected_power);
        CHECK(rad2deg(circular_distance(est.phi, deg2rad(phi))) < 0.1);
    }
}

TEST_CASE("noise is reproducible and seed dependent")
{
    const auto sc = bench_scenario();
    const std::vector<int> modes{-1, 1};
    const RxPose pose = pose_for(25.0, -100.0, 0.4);
    const auto a = simulate_measurement(sc, pose, modes, std::vector<int>{0, 10}, NoiseSpec::with_snr_db(10.0, 5),
                                        ChannelModel::exact);
    const auto b = simulate_measurement(sc, pose, modes, std::vector<int>{0, 10}, NoiseSpec::with_snr_db(10.0, 5),
                                        ChannelModel::exact);
    const auto c = simulate_measurement(sc, pose, modes, std::vector<int>{0, 10}, NoiseSpec::with_snr_db(10.0, 6),
                                        ChannelModel::exact);
    REQUIRE(a.size() == b.size());
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.values()[i] == b.values()[i]);
        differs = differs || a.values()[i] != c.values()[i];
    }
    CHECK(differs);
}

TEST_CASE("sir never exceeds the cap and capacity is monotone in sir")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> pw(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        ImiMatrix m;
        m.decoded_modes = {-1, 0, 1};
        m.tx_modes = {-1, 0, 1};
        m.power.resize(9);
        for (auto& v : m.power) v = pw(rng);
        const auto s = sir(m);
        for (double v : s.per_mode_db) CHECK(v <= kSirCapDb);
        ImiMatrix better = m;
        for (std::size_t r = 0; r < 3; ++r) better.at(r, r) *= 2.0;
        CHECK(capacity(better) > capacity(m));
    }
}
