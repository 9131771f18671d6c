#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace vortex {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using cdouble = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0; // m/s

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

// Wraps an angle into (-pi, pi].
double wrap_pi(double angle);

// Smallest absolute difference between two angles on the circle, in [0, pi].
double circular_distance(double a, double b);

double wavenumber(double frequency_hz);

// Uniform circular array: n_elements on a ring of the given radius, element n
// at azimuth 2*pi*n/N in the array's own xy-plane.
struct UcaGeometry {
    int n_elements = 1;
    double radius = 1.0; // m

    static UcaGeometry make(int n_elements, double radius);
    void validate() const;
    double azimuth(int index) const;
    std::vector<double> azimuths() const;
};

// Receiver placement: center C at (0, 0, distance) in the Tx frame; rotation
// maps receiver-local axes (x', y', z') to Tx-frame directions.
struct RxPose {
    double distance = 1.0; // m
    Mat3 rotation = Mat3::Identity();

    // Aligned receiver tilted about Y then X. Identity tilt faces the Tx.
    static RxPose tilted(double distance, double angle_y, double angle_x);
    void validate() const;
};

struct Scenario {
    UcaGeometry tx;
    UcaGeometry rx;
    RxPose pose;
    double carrier_hz = 120e9;
    std::vector<double> subcarriers_hz;
    cdouble alpha{1.0, 0.0};

    void validate() const;
    double carrier_wavenumber() const { return wavenumber(carrier_hz); }
    double subcarrier_wavenumber(int index) const;
    // Position of the subcarrier closest to the carrier.
    int nearest_subcarrier_to_carrier() const;
};

std::vector<Vec3> element_positions_tx(const UcaGeometry& tx);
std::vector<Vec3> element_positions_rx(const UcaGeometry& rx, const RxPose& pose);

// R = R_x(angle_x) * R_y(angle_y): rotate about Y first, then about X.
Mat3 rotation_yx(double angle_y, double angle_x);

// 180 degrees about Y: puts the receiver z' axis anti-parallel to the beam so
// that an untilted receiver faces the transmitter.
Mat3 facing_base_rotation();

struct MisalignmentAngles {
    double theta = 0.0; // elevation of the Tx center seen from the Rx, rad
    double phi = 0.0;   // azimuth of the Tx center seen from the Rx, rad
    bool degenerate = false; // sin(theta) ~ 0, phi undefined and reported as 0
};

MisalignmentAngles misalignment_angles(const RxPose& pose);

struct GammaAngle {
    double gamma = 0.0;
    bool degenerate = false; // z' parallel to z, gamma undefined and reported as 0
};

// gamma = atan2(w2, w1) with w = z' x z in the Tx frame.
GammaAngle gamma(const RxPose& pose);

// Unit vector (cos phi sin theta, sin phi sin theta, cos theta): the direction
// from C to O in the receiver frame.
Vec3 direction_from_angles(double theta, double phi);

struct TiltAngles {
    double angle_y = 0.0;
    double angle_x = 0.0;
};

// Inverse of misalignment_angles for RxPose::tilted: tilt angles that place
// the Tx center at (theta, phi) in the receiver frame.
TiltAngles tilt_for_angles(double theta, double phi);

} // namespace vortex
