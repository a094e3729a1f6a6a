#pragma once

#include "stlf/core_data.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stlf {

struct SynthConfig {
    std::size_t n_hours = 4000;
    std::uint64_t seed = 1;
    std::size_t zone_count = 2;
    /// Weight of the common weather signal in each zone's temperature.
    double shared_weather_weight = 0.9;
    /// Scale of the AR(1) load noise, MW.
    double noise_sd = 20.0;
    HourlyTimestamp start{2020, 5, 1, 0};

    /// Throws InvalidArgument for n_hours < 336, zone_count < 2, weight outside [0, 1] or noise_sd < 0.
    void validate() const;
};

/// WEST, FAR_WEST, NORTH, ... then ZONE_<k> past the eighth zone.
std::vector<std::string> synthetic_zone_names(std::size_t count);

/// Seeded two-or-more-zone dataset with shared weather and a convex cooling load term.
ZonalDataset generate_synthetic(const SynthConfig& cfg);

}  // namespace stlf
