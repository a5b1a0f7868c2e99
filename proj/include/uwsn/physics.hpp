#pragma once

#include <numbers>
#include <optional>

namespace uwsn {

/// Vacuum permeability, H/m.
inline constexpr double kMu0 = 4.0 * std::numbers::pi * 1e-7;

/// Attenuation multiplier for AUV transmitters: effective distance = 0.79 * distance.
inline constexpr double kAuvDistanceScale = 0.79;

inline constexpr double kDefaultFrequencyHz = 1.0e5;
inline constexpr double kMinTemperatureC = -2.0;
inline constexpr double kMaxTemperatureC = 40.0;

/// Seawater state driving the channel model.
struct Environment {
    double temperature_c = 25.0;
    double salinity_psu = 35.0;
    double frequency_hz = kDefaultFrequencyHz;
    /// When set, replaces the temperature/salinity conductivity estimate everywhere.
    std::optional<double> pinned_conductivity_s_per_m;

    /// Throws DomainError naming the first violated bound.
    void validate() const;

    bool operator==(const Environment&) const = default;
};

/// Logistic per-hop delivery model: P(L) = 1 / (1 + exp(s * (L - theta))).
struct DeliveryModel {
    double slope_s = 0.05;
    double threshold_theta_db = 0.0;

    void validate() const;

    /// s = 0.05 /dB and theta = attenuation of a 30 m non-AUV hop at 25 C, 35 PSU, 100 kHz.
    static DeliveryModel calibrated_default();

    bool operator==(const DeliveryModel&) const = default;
};

inline constexpr double kReferenceHopDistanceM = 30.0;

struct LinkBudget {
    double distance_m = 0.0;
    double effective_distance_m = 0.0;
    double attenuation_db = 0.0;
    double delay_s = 0.0;
    double delivery_prob = 1.0;

    bool operator==(const LinkBudget&) const = default;
};

namespace physics {

/// Raw linear conductivity estimate 0.19 * S * (1 + 0.02 * (T - 25)) in S/m, unclamped.
double conductivity_estimate(double temperature_c, double salinity_psu);

/// Conductivity in S/m. Honors a pinned value; clamps a negative estimate to 0.
double conductivity(const Environment& env);

/// Attenuation coefficient in dB/m: 8.686 * sqrt(pi * f * mu0 * sigma).
/// Throws InvalidChannelError when sigma <= 0.
double attenuation_coefficient(const Environment& env);

/// Total attenuation in dB over `distance_m`, with AUV transmitters scaled by 0.79.
double total_attenuation(const Environment& env, double distance_m, bool transmitter_is_auv);

/// Good-conductor phase velocity sqrt(4 pi f / (mu0 sigma)) in m/s.
double phase_velocity(const Environment& env);

double propagation_delay(const Environment& env, double distance_m);

/// Numerically safe logistic; saturates to exactly 0 or 1 far in the tails.
double delivery_probability(const DeliveryModel& model, double attenuation_db);

/// Full budget for one hop.
LinkBudget link_budget(const Environment& env, const DeliveryModel& model, double distance_m,
                       bool transmitter_is_auv);

}  // namespace physics
}  // namespace uwsn
