#include <cmath>
#include <cstdlib>

#include <boost/math/special_functions/bessel.hpp>

#include "vortex/channel.hpp"
#include "vortex/error.hpp"

namespace vortex {

double bessel_j(int order, double x)
{
    if (!std::isfinite(x)) throw Error(ErrorCode::invalid_argument, "bessel_j argument must be finite");
    const int n = std::abs(order);
    const bool odd = (n % 2) != 0;
    double sign = 1.0;
    if (order < 0 && odd) sign = -sign;
    if (x < 0.0) {
        x = -x;
        if (odd) sign = -sign;
    }
    return sign * boost::math::cyl_bessel_j(n, x);
}

} // namespace vortex
