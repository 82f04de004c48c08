#pragma once

#include <algorithm>
#include <cmath>

namespace ahspec {

// quintic smoothstep on [0,1]: value 0->1, C^2 at both ends
inline double smoothstep5(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return ((6.0 * x - 15.0) * x + 10.0) * x * x * x;
}
inline double smoothstep5_d1(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return ((30.0 * x - 60.0) * x + 30.0) * x * x;
}
inline double smoothstep5_d2(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return ((120.0 * x - 180.0) * x + 60.0) * x;
}

// septic smoothstep on [0,1]: value 0->1, C^3 at both ends
inline double smoothstep7(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double x4 = x * x * x * x;
    return (((-20.0 * x + 70.0) * x - 84.0) * x + 35.0) * x4;
}
inline double smoothstep7_d1(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double x3 = x * x * x;
    return (((-140.0 * x + 420.0) * x - 420.0) * x + 140.0) * x3;
}
inline double smoothstep7_d2(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double x2 = x * x;
    return (((-840.0 * x + 2100.0) * x - 1680.0) * x + 420.0) * x2;
}

// Plateau bump supported on [a,b]: ramps up over the first `ramp` fraction,
// flat 1 in the middle, ramps down over the last `ramp` fraction.
struct PlateauBump {
    double a = 0.0, b = 1.0, ramp = 0.3, amplitude = 1.0;

    double operator()(double t) const { return value(t); }

    double value(double t) const {
        if (t <= a || t >= b) return 0.0;
        const double w = (b - a) * ramp;
        return amplitude * smoothstep5((t - a) / w) * smoothstep5((b - t) / w);
    }
    double d1(double t) const {
        if (t <= a || t >= b) return 0.0;
        const double w = (b - a) * ramp;
        const double up = smoothstep5((t - a) / w), dn = smoothstep5((b - t) / w);
        const double up1 = smoothstep5_d1((t - a) / w) / w;
        const double dn1 = -smoothstep5_d1((b - t) / w) / w;
        return amplitude * (up1 * dn + up * dn1);
    }
    double d2(double t) const {
        if (t <= a || t >= b) return 0.0;
        const double w = (b - a) * ramp;
        const double up = smoothstep5((t - a) / w), dn = smoothstep5((b - t) / w);
        const double up1 = smoothstep5_d1((t - a) / w) / w;
        const double dn1 = -smoothstep5_d1((b - t) / w) / w;
        const double up2 = smoothstep5_d2((t - a) / w) / (w * w);
        const double dn2 = smoothstep5_d2((b - t) / w) / (w * w);
        return amplitude * (up2 * dn + 2.0 * up1 * dn1 + up * dn2);
    }
};

// C-infinity mollifier bump on (center - halfwidth, center + halfwidth),
// normalized to `amplitude` at the center; all derivatives vanish at the edges
struct MollifierBump {
    double center = 0.0, halfwidth = 1.0, amplitude = 1.0;

    double operator()(double t) const { return value(t); }

    double value(double t) const {
        const double x = (t - center) / halfwidth;
        if (std::abs(x) >= 1.0) return 0.0;
        return amplitude * std::exp(1.0 - 1.0 / (1.0 - x * x));
    }
    double d1(double t) const {
        const double x = (t - center) / halfwidth;
        if (std::abs(x) >= 1.0) return 0.0;
        const double q = 1.0 - x * x;
        return value(t) * (-2.0 * x / (q * q)) / halfwidth;
    }
    double d2(double t) const {
        const double x = (t - center) / halfwidth;
        if (std::abs(x) >= 1.0) return 0.0;
        const double q = 1.0 - x * x;
        const double g = -2.0 * x / (q * q);
        const double gp = -2.0 * (1.0 + 3.0 * x * x) / (q * q * q);
        return value(t) * (g * g + gp) / (halfwidth * halfwidth);
    }
};

} // namespace ahspec
