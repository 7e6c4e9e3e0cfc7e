#pragma once

namespace rabi::detail {

/// Classical fixed-step Runge-Kutta. rhs(node, y) is evaluated at node 0
/// (step start), 1 (midpoint, used twice) and 2 (step end), so callers can
/// evaluate time-dependent coefficients once per node.
template <class State, class Rhs>
State rk4_step(const State& y, double h, Rhs&& rhs)
{
    const State k1 = rhs(0, y);
    const State k2 = rhs(1, State(y + (0.5 * h) * k1));
    const State k3 = rhs(1, State(y + (0.5 * h) * k2));
    const State k4 = rhs(2, State(y + h * k3));
    return State(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

}  // namespace rabi::detail
