#include "stlf/synth.hpp"

#include "stlf/error.hpp"
#include "stlf/features.hpp"
#include "stlf/seed.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace stlf {

namespace {

constexpr std::array<const char*, 8> kZoneNames{"WEST", "FAR_WEST", "NORTH", "NORTH_C",
                                                "EAST", "SOUTH_C",  "COAST", "SOUTHERN"};

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Per-zone load scale: base MW and cooling coefficient (MW per squared degF).
constexpr std::array<double, 8> kBaseLoad{1100.0, 2600.0, 1400.0, 9500.0, 1700.0, 6000.0, 11000.0, 3000.0};
constexpr std::array<double, 8> kCooling{0.35, 0.55, 0.4, 2.6, 0.5, 1.7, 3.0, 0.9};

/// Stationary AR(1) path with unit marginal variance.
std::vector<double> ar1_unit(std::size_t n, double phi, std::mt19937_64& rng) {
    std::normal_distribution<double> z(0.0, 1.0);
    const double innovation = std::sqrt(1.0 - phi * phi);
    std::vector<double> out(n);
    double x = z(rng);
    for (std::size_t t = 0; t < n; ++t) {
        out[t] = x;
        x = phi * x + innovation * z(rng);
    }
    return out;
}

struct WeatherShape {
    double mean = 76.0;
    double seasonal_amp = 12.0;
    double diurnal_amp = 10.0;
    double peak_hour = 15.0;
    double day_shift = 0.0;
    double noise_sd = 3.5;
};

std::vector<double> weather(const WeatherShape& w, const HourlyTimestamp& start, std::size_t n,
                            std::mt19937_64& rng) {
    const auto noise = ar1_unit(n, 0.96, rng);
    std::vector<double> out(n);
    const std::int64_t h0 = start.hour_index();
    for (std::size_t t = 0; t < n; ++t) {
        const std::int64_t idx = h0 + static_cast<std::int64_t>(t);
        const double day_of_year = std::fmod(static_cast<double>(idx) / 24.0, 365.2425);
        const double hour = static_cast<double>(((idx % 24) + 24) % 24);
        out[t] = w.mean + w.seasonal_amp * std::sin(kTwoPi * (day_of_year - 115.0 - w.day_shift) / 365.2425) +
                 w.diurnal_amp * std::cos(kTwoPi * (hour - w.peak_hour) / 24.0) + w.noise_sd * noise[t];
    }
    return out;
}

}  // namespace

void SynthConfig::validate() const {
    if (n_hours < static_cast<std::size_t>(kLagTwoWeeks)) {
        throw Error(ErrorKind::InvalidArgument, "n_hours must be at least 336");
    }
    if (zone_count < 2) throw Error(ErrorKind::InvalidArgument, "zone_count must be at least 2");
    if (!(shared_weather_weight >= 0.0 && shared_weather_weight <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "shared_weather_weight must be in [0, 1]");
    }
    if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
        throw Error(ErrorKind::InvalidArgument, "noise_sd must be finite and >= 0");
    }
}

std::vector<std::string> synthetic_zone_names(std::size_t count) {
    std::vector<std::string> names;
    for (std::size_t z = 0; z < count; ++z) {
        names.push_back(z < kZoneNames.size() ? std::string(kZoneNames[z]) : "ZONE_" + std::to_string(z + 1));
    }
    return names;
}

ZonalDataset generate_synthetic(const SynthConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.n_hours;
    std::mt19937_64 shared_rng(derive_seed(cfg.seed, "synth/weather"));
    const auto shared = weather(WeatherShape{}, cfg.start, n, shared_rng);
    const auto names = synthetic_zone_names(cfg.zone_count);

    std::map<std::string, ZoneSeries> zones;
    for (std::size_t z = 0; z < cfg.zone_count; ++z) {
        // Zone constants depend on the zone alone; the run seed only drives
        // the weather and noise paths, so two seeds are draws of one process.
        std::mt19937_64 shape_rng(derive_seed(0, "synth/shape/" + names[z]));
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        WeatherShape local;
        local.mean += 3.0 * u(shape_rng);
        local.peak_hour += 1.5 * u(shape_rng);
        local.day_shift = 10.0 * u(shape_rng);
        const double base = kBaseLoad[z % kBaseLoad.size()] * (1.0 + 0.05 * u(shape_rng));
        const double cooling = kCooling[z % kCooling.size()] * (1.0 + 0.05 * u(shape_rng));

        std::mt19937_64 rng(derive_seed(cfg.seed, "synth/zone/" + names[z]));
        const auto own = weather(local, cfg.start, n, rng);
        const auto noise = ar1_unit(n, 0.9, rng);

        std::vector<double> temp(n);
        std::vector<double> load(n);
        const double w = cfg.shared_weather_weight;
        for (std::size_t t = 0; t < n; ++t) {
            temp[t] = w * shared[t] + (1.0 - w) * own[t];
            const HourlyTimestamp ts = cfg.start.plus_hours(static_cast<std::int64_t>(t));
            const double h = ts.hour();
            double profile = base * (-0.10 * std::cos(kTwoPi * (h - 4.0) / 24.0) + 0.03 * std::sin(kTwoPi * h / 12.0));
            if (is_weekend(ts)) profile -= 0.06 * base;
            const double heat = std::max(temp[t] - 65.0, 0.0);
            load[t] = base + cooling * heat * heat + profile + cfg.noise_sd * noise[t];
        }
        zones.emplace(names[z], ZoneSeries{TimeSeries(Unit::MW, cfg.start, std::move(load)),
                                           TimeSeries(Unit::DegF, cfg.start, std::move(temp))});
    }
    return ZonalDataset(std::move(zones));
}

}  // namespace stlf
