#include "rabi/jc.hpp"

#include <cmath>

namespace rabi {

double jc_rabi_frequency(const ModelParams& params)
{
    return std::hypot(params.delta(), 2.0 * params.g());
}

JcResult jc_excited_probability(const ModelParams& params, double t, InitialKind init)
{
    if (!(t >= 0.0)) throw ValidationError("t must be >= 0");
    if (init == InitialKind::custom) throw ValidationError("init: J-C baseline needs excited or ground");

    JcResult res;
    res.omega_rabi = jc_rabi_frequency(params);
    if (init == InitialKind::ground || params.g() == 0.0) {
        res.p_excited = init == InitialKind::ground ? 0.0 : 1.0;
        return res;
    }
    const double amp = 2.0 * params.g() * std::sin(0.5 * res.omega_rabi * t) / res.omega_rabi;
    res.p_excited = 1.0 - amp * amp;
    return res;
}

}  // namespace rabi
