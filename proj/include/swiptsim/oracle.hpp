#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "swiptsim/rng.hpp"

namespace swiptsim {

// Sampling estimators kept deliberately independent of the closed forms in
// metrics.cpp; they only ever draw exponentials and count events.

/// Estimates Pr{z1 <= sum z_i + c} for exponentials with the given rates.
double mc_lemma1(double lambda1, std::span<const double> interferer_rates, double c,
                 std::int64_t samples, Rng& rng);

/// Estimates Pr{rho P x / (rho sum I_i y_i + noise) <= gamma} over unit-mean
/// exponential fading x, y_i. mean_signal and mean_interferers carry the
/// power-times-large-scale products.
double mc_outage(double mean_signal, std::span<const double> mean_interferers, double rho,
                 double noise_w, double gamma, std::int64_t samples, Rng& rng);

struct OracleCase {
    std::string label;
    double closed_form = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    bool pass = false;
};

struct OracleReport {
    std::vector<OracleCase> cases;
    bool all_pass = true;
};

/// Randomized closed-form-vs-sampling comparison for the exponential
/// probability identity. Passes when every case agrees within 3 standard
/// errors.
OracleReport validate_lemma1(int num_cases, std::int64_t samples, std::uint64_t seed);

/// Random interference configurations: checks bound >= exact >= estimate - 3
/// standard errors.
OracleReport validate_outage(int num_cases, std::int64_t samples, std::uint64_t seed);

/// Single weak interferer (mean power at most a tenth of the noise floor):
/// the exponential bound must sit within 5% relative of the exact form.
OracleReport validate_outage_tightness(int num_cases, std::uint64_t seed);

}  // namespace swiptsim
