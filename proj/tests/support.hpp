#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "vortex/channel.hpp"
#include "vortex/geometry.hpp"

namespace vortex::test {

// Measurement setup: metasurface-sized Tx ring, 20-element Rx ring, 40 cm link.
inline Scenario bench_scenario(double distance = 0.4)
{
    Scenario s;
    s.tx = UcaGeometry::make(202, 0.04);
    s.rx = UcaGeometry::make(20, 0.008);
    s.carrier_hz = 120e9;
    for (int i = 0; i < 71; ++i) s.subcarriers_hz.push_back(119.5e9 + 10e6 * i);
    s.pose = RxPose::tilted(distance, 0.0, 0.0);
    return s;
}

// Model-validation setup at 100 m.
inline Scenario validation_scenario(int n_rx, double a_r)
{
    Scenario s;
    s.tx = UcaGeometry::make(160, 0.03);
    s.rx = UcaGeometry::make(n_rx, a_r);
    s.carrier_hz = 120e9;
    s.subcarriers_hz = {120e9};
    s.pose = RxPose::tilted(100.0, 0.0, 0.0);
    return s;
}

inline RxPose pose_for(double theta_deg, double phi_deg, double distance)
{
    const TiltAngles t = tilt_for_angles(deg2rad(theta_deg), deg2rad(phi_deg));
    return RxPose::tilted(distance, t.angle_y, t.angle_x);
}

inline std::vector<int> iota_list(int n)
{
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

inline double correlation(const std::vector<cdouble>& a, const std::vector<cdouble>& b)
{
    cdouble cross{};
    double pa = 0.0, pb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cross += a[i] * std::conj(b[i]);
        pa += std::norm(a[i]);
        pb += std::norm(b[i]);
    }
    return std::abs(cross) / std::sqrt(pa * pb);
}

} // namespace vortex::test
