#include "uwsn/physics.hpp"

#include <cmath>
#include <string>

#include "uwsn/errors.hpp"

namespace uwsn {

void Environment::validate() const {
    if (!std::isfinite(temperature_c) || temperature_c < kMinTemperatureC ||
        temperature_c > kMaxTemperatureC)
        throw DomainError("temperature_c must lie in [-2, 40] C, got " + std::to_string(temperature_c));
    if (!std::isfinite(salinity_psu) || salinity_psu < 0.0)
        throw DomainError("salinity_psu must be >= 0, got " + std::to_string(salinity_psu));
    if (!std::isfinite(frequency_hz) || frequency_hz <= 0.0)
        throw DomainError("frequency_hz must be > 0, got " + std::to_string(frequency_hz));
    if (pinned_conductivity_s_per_m &&
        (!std::isfinite(*pinned_conductivity_s_per_m) || *pinned_conductivity_s_per_m < 0.0))
        throw DomainError("conductivity_s_per_m must be >= 0");
}

void DeliveryModel::validate() const {
    if (!std::isfinite(slope_s) || slope_s <= 0.0)
        throw DomainError("slope_s must be > 0, got " + std::to_string(slope_s));
    if (std::isnan(threshold_theta_db))
        throw DomainError("threshold_theta_db must not be NaN");
}

DeliveryModel DeliveryModel::calibrated_default() {
    const Environment reference{};
    return DeliveryModel{
        .slope_s = 0.05,
        .threshold_theta_db = physics::attenuation_coefficient(reference) * kReferenceHopDistanceM,
    };
}

namespace physics {

double conductivity_estimate(double temperature_c, double salinity_psu) {
    return 0.19 * salinity_psu * (1.0 + 0.02 * (temperature_c - 25.0));
}

double conductivity(const Environment& env) {
    env.validate();
    if (env.pinned_conductivity_s_per_m) return *env.pinned_conductivity_s_per_m;
    const double sigma = conductivity_estimate(env.temperature_c, env.salinity_psu);
    return sigma < 0.0 ? 0.0 : sigma;
}

namespace {

double checked_conductivity(const Environment& env) {
    const double sigma = conductivity(env);
    if (!(sigma > 0.0))
        throw InvalidChannelError("conductivity must be > 0 for the EM channel model (got " +
                                  std::to_string(sigma) + " S/m)");
    return sigma;
}

}  // namespace

double attenuation_coefficient(const Environment& env) {
    const double sigma = checked_conductivity(env);
    return 8.686 * std::sqrt(env.frequency_hz * kMu0 * sigma * std::numbers::pi);
}

double total_attenuation(const Environment& env, double distance_m, bool transmitter_is_auv) {
    if (!(distance_m >= 0.0)) throw DomainError("distance_m must be >= 0");
    const double effective = transmitter_is_auv ? kAuvDistanceScale * distance_m : distance_m;
    return attenuation_coefficient(env) * effective;
}

double phase_velocity(const Environment& env) {
    const double sigma = checked_conductivity(env);
    return std::sqrt(4.0 * std::numbers::pi * env.frequency_hz / (kMu0 * sigma));
}

double propagation_delay(const Environment& env, double distance_m) {
    if (!(distance_m >= 0.0)) throw DomainError("distance_m must be >= 0");
    return distance_m / phase_velocity(env);
}

double delivery_probability(const DeliveryModel& model, double attenuation_db) {
    model.validate();
    const double z = model.slope_s * (attenuation_db - model.threshold_theta_db);
    // exp overflows past ~709; the logistic is already 0/1 to double precision well before.
    if (z > 700.0) return 0.0;
    if (z < -700.0) return 1.0;
    return 1.0 / (1.0 + std::exp(z));
}

LinkBudget link_budget(const Environment& env, const DeliveryModel& model, double distance_m,
                       bool transmitter_is_auv) {
    LinkBudget b;
    b.distance_m = distance_m;
    b.effective_distance_m = transmitter_is_auv ? kAuvDistanceScale * distance_m : distance_m;
    b.attenuation_db = total_attenuation(env, distance_m, transmitter_is_auv);
    b.delay_s = propagation_delay(env, distance_m);
    b.delivery_prob = delivery_probability(model, b.attenuation_db);
    return b;
}

}  // namespace physics
}  // namespace uwsn
