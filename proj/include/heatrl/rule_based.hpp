#pragma once

#include "heatrl/grid.hpp"

namespace heatrl {

// Hysteresis thermostat: full power below the band, off above it, hold the
// previous action in between. Ignores price and flexibility signals.
struct RbState {
    double last_action = 0.0;  // always 0 or 1
};

inline double rb_action(double t_room_c, const ComfortBand& band, RbState& state) {
    if (t_room_c < band.t_min)
        state.last_action = 1.0;
    else if (t_room_c > band.t_max)
        state.last_action = 0.0;
    return state.last_action;
}

}  // namespace heatrl
