#pragma once

namespace parkcast::core {

inline constexpr double kEarthRadiusKm = 6371.0;

/// Great-circle distance in kilometers between two WGS84 points.
double haversine_km(double lat1_deg, double lon1_deg, double lat2_deg, double lon2_deg);

}  // namespace parkcast::core
