#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qtlink {

// Optical fiber with exponential loss. The dB figure is primary; the
// attenuation length L0 = 10 / (alpha_dB * ln 10) is derived from it
// (0.2 dB/km gives L0 = 21.71 km, commonly quoted as 22 km).
class FiberLink {
public:
    explicit FiberLink(double length_km, double attenuation_db_per_km = 0.2)
        : length_km_(length_km), attenuation_db_per_km_(attenuation_db_per_km) {
        if (!(length_km >= 0.0)) throw std::domain_error("fiber length must be >= 0");
        if (!(attenuation_db_per_km >= 0.0)) throw std::domain_error("attenuation must be >= 0");
    }

    double length_km() const { return length_km_; }
    double attenuation_db_per_km() const { return attenuation_db_per_km_; }

    double attenuation_length_km() const {
        if (attenuation_db_per_km_ == 0.0) return std::numeric_limits<double>::infinity();
        return 10.0 / (attenuation_db_per_km_ * std::log(10.0));
    }

private:
    double length_km_;
    double attenuation_db_per_km_;
};

// Full: photon traverses the whole link, exp(-l/L0).
// Half: photon travels only to the midpoint, exp(-l/(2 L0)).
enum class Segment { Full, Half };

inline double transmissivity(const FiberLink& fiber, Segment segment) {
    const double l0 = fiber.attenuation_length_km();
    double exponent = fiber.length_km() / l0;
    if (segment == Segment::Half) exponent *= 0.5;
    return std::exp(-exponent);
}

} // namespace qtlink
