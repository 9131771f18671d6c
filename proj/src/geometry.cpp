#include "vortex/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "vortex/error.hpp"

namespace vortex {

namespace {
constexpr double kDegenerateSin = 1e-12;
constexpr double kOrthonormalTol = 1e-9;
} // namespace

double wrap_pi(double angle)
{
    double w = std::remainder(angle, 2.0 * kPi); // [-pi, pi]
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

double circular_distance(double a, double b) { return std::abs(wrap_pi(a - b)); }

double wavenumber(double frequency_hz) { return 2.0 * kPi * frequency_hz / kSpeedOfLight; }

UcaGeometry UcaGeometry::make(int n_elements, double radius)
{
    UcaGeometry g{n_elements, radius};
    g.validate();
    return g;
}

void UcaGeometry::validate() const
{
    if (n_elements < 1) throw Error(ErrorCode::invalid_argument, "UCA needs at least one element");
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw Error(ErrorCode::invalid_argument, "UCA radius must be positive");
}

double UcaGeometry::azimuth(int index) const { return 2.0 * kPi * index / n_elements; }

std::vector<double> UcaGeometry::azimuths() const
{
    std::vector<double> out(n_elements);
    for (int n = 0; n < n_elements; ++n) out[n] = azimuth(n);
    return out;
}

RxPose RxPose::tilted(double distance, double angle_y, double angle_x)
{
    RxPose p{distance, rotation_yx(angle_y, angle_x) * facing_base_rotation()};
    p.validate();
    return p;
}

void RxPose::validate() const
{
    if (!(distance > 0.0) || !std::isfinite(distance))
        throw Error(ErrorCode::invalid_argument, "Tx-Rx distance must be positive");
    const Mat3 gram = rotation.transpose() * rotation;
    if ((gram - Mat3::Identity()).cwiseAbs().maxCoeff() > kOrthonormalTol)
        throw Error(ErrorCode::invalid_argument, "pose rotation is not orthonormal");
    if (std::abs(rotation.determinant() - 1.0) > kOrthonormalTol)
        throw Error(ErrorCode::invalid_argument, "pose rotation must have determinant +1");
}

void Scenario::validate() const
{
    tx.validate();
    rx.validate();
    pose.validate();
    if (!(carrier_hz > 0.0)) throw Error(ErrorCode::invalid_argument, "carrier frequency must be positive");
    if (subcarriers_hz.empty()) throw Error(ErrorCode::invalid_argument, "subcarrier list is empty");
    for (double f : subcarriers_hz) {
        if (!(f > 0.0)) throw Error(ErrorCode::invalid_argument, "subcarrier frequencies must be positive");
        // Flat-gain model: the band must be narrow relative to the carrier.
        if (std::abs(f - carrier_hz) > 0.1 * carrier_hz)
            throw Error(ErrorCode::invalid_argument, "subcarrier outside +-10% of the carrier");
    }
    if (std::abs(alpha) == 0.0) throw Error(ErrorCode::invalid_argument, "gain alpha must be nonzero");
}

double Scenario::subcarrier_wavenumber(int index) const
{
    return wavenumber(subcarriers_hz.at(static_cast<std::size_t>(index)));
}

int Scenario::nearest_subcarrier_to_carrier() const
{
    int best = 0;
    for (int i = 1; i < static_cast<int>(subcarriers_hz.size()); ++i) {
        if (std::abs(subcarriers_hz[i] - carrier_hz) < std::abs(subcarriers_hz[best] - carrier_hz)) best = i;
    }
    return best;
}

std::vector<Vec3> element_positions_tx(const UcaGeometry& tx)
{
    std::vector<Vec3> out;
    out.reserve(tx.n_elements);
    for (int n = 0; n < tx.n_elements; ++n) {
        const double a = tx.azimuth(n);
        out.emplace_back(tx.radius * std::cos(a), tx.radius * std::sin(a), 0.0);
    }
    return out;
}

std::vector<Vec3> element_positions_rx(const UcaGeometry& rx, const RxPose& pose)
{
    const Vec3 center(0.0, 0.0, pose.distance);
    std::vector<Vec3> out;
    out.reserve(rx.n_elements);
    for (int m = 0; m < rx.n_elements; ++m) {
        const double a = rx.azimuth(m);
        const Vec3 local(rx.radius * std::cos(a), rx.radius * std::sin(a), 0.0);
        out.push_back(center + pose.rotation * local);
    }
    return out;
}

Mat3 rotation_yx(double angle_y, double angle_x)
{
    const Mat3 ry = Eigen::AngleAxisd(angle_y, Vec3::UnitY()).toRotationMatrix();
    const Mat3 rx = Eigen::AngleAxisd(angle_x, Vec3::UnitX()).toRotationMatrix();
    return rx * ry;
}

Mat3 facing_base_rotation() { return rotation_yx(kPi, 0.0); }

MisalignmentAngles misalignment_angles(const RxPose& pose)
{
    const Vec3 d = pose.rotation.transpose() * Vec3(0.0, 0.0, -1.0);
    MisalignmentAngles out;
    out.theta = std::acos(std::clamp(d.z(), -1.0, 1.0));
    if (std::hypot(d.x(), d.y()) < kDegenerateSin) {
        out.degenerate = true;
        out.phi = 0.0;
    } else {
        out.phi = wrap_pi(std::atan2(d.y(), d.x()));
    }
    return out;
}

GammaAngle gamma(const RxPose& pose)
{
    const Vec3 z_rx = pose.rotation.col(2);
    const Vec3 w = z_rx.cross(Vec3::UnitZ());
    GammaAngle out;
    if (w.norm() < kDegenerateSin) {
        out.degenerate = true;
        return out;
    }
    out.gamma = wrap_pi(std::atan2(w.y(), w.x()));
    return out;
}

Vec3 direction_from_angles(double theta, double phi)
{
    return {std::cos(phi) * std::sin(theta), std::sin(phi) * std::sin(theta), std::cos(theta)};
}

TiltAngles tilt_for_angles(double theta, double phi)
{
    // For R = R_x(b) R_y(a) R_y(pi): R^T (0,0,-1) = (-sin a cos b, -sin b, cos a cos b).
    const Vec3 d = direction_from_angles(theta, phi);
    TiltAngles t;
    t.angle_x = std::asin(std::clamp(-d.y(), -1.0, 1.0));
    t.angle_y = std::atan2(-d.x(), d.z());
    return t;
}

} // namespace vortex
