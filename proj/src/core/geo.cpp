#include "parkcast/core/geo.hpp"

#include <algorithm>
#include <cmath>

namespace parkcast::core {

double haversine_km(double lat1_deg, double lon1_deg, double lat2_deg, double lon2_deg) {
  constexpr double kDegToRad = M_PI / 180.0;
  const double phi1 = lat1_deg * kDegToRad;
  const double phi2 = lat2_deg * kDegToRad;
  // Absolute differences keep the formula bit-exactly symmetric in (a, b).
  const double dphi = std::fabs(lat2_deg - lat1_deg) * kDegToRad;
  const double dlambda = std::fabs(lon2_deg - lon1_deg) * kDegToRad;

  const double sin_dphi = std::sin(dphi / 2.0);
  const double sin_dlambda = std::sin(dlambda / 2.0);
  double a = sin_dphi * sin_dphi + std::cos(phi1) * std::cos(phi2) * sin_dlambda * sin_dlambda;
  a = std::clamp(a, 0.0, 1.0);
  return kEarthRadiusKm * 2.0 * std::atan2(std::sqrt(a), std::sqrt(1.0 - a));
}

}  // namespace parkcast::core
