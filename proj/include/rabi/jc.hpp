// jc.hpp — rotating-wave (Jaynes-Cummings) baseline for the vacuum field.

#pragma once

#include "rabi/model.hpp"

namespace rabi {

struct JcResult {
    double omega_rabi = 0.0;  // sqrt(delta^2 + 4 g^2)
    double p_excited = 0.0;
};

/// Excited-state probability of the RWA model with the field in vacuum.
/// Only excited and ground starts are meaningful; a ground atom stays put.
JcResult jc_excited_probability(const ModelParams& params, double t, InitialKind init);

double jc_rabi_frequency(const ModelParams& params);

}  // namespace rabi
