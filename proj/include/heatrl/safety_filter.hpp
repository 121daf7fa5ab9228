#pragma once

#include <optional>

#include "heatrl/grid.hpp"
#include "heatrl/thermal.hpp"

namespace heatrl {

// Tolerance law configuration. tau_base shrinks linearly with window
// progress and is pinned to zero for the final terminal_pin_steps so the
// bounds collapse onto the remaining average action before the window
// closes.
struct FilterConfig {
    double w1 = 0.5;             // temperature weight; 1-w1 goes to price
    double exponent = 1.5;
    double tau0 = 0.5;           // tolerance scale at window start
    int terminal_pin_steps = 1;
    NormSpec t_room_spec{23.5, 25.0};
    NormSpec price_spec{0.0, 0.4};

    bool valid() const {
        return w1 >= 0.0 && w1 <= 1.0 && exponent > 0.0 && tau0 >= 0.0 &&
               terminal_pin_steps >= 1 && t_room_spec.valid() && price_spec.valid();
    }

    double tau_base(double progress) const {
        const double p = progress < 0.0 ? 0.0 : (progress > 1.0 ? 1.0 : progress);
        return tau0 * (1.0 - p);
    }
};

// Budget bookkeeping for one flexibility window.
struct WindowLedger {
    double budget_kwh = 0.0;    // committed V(F)
    double consumed_kwh = 0.0;
    int steps_remaining = 0;
    double phi = 1.0;
    int total_steps = 0;
};

// Average action that spends the remaining budget evenly over the rest of
// the window, clamped to the valve range.
double remaining_average_action(const WindowLedger& ledger, const ThermalParams& p,
                                double dt_hours);

// tau = tau_base(progress) * (w1*(1-t_room) + (1-w1)*(1-price))^exponent.
// Cold rooms and cheap power widen the tolerance.
double tolerance(double t_room_norm, double price_norm, double progress,
                 const FilterConfig& cfg);

struct ActionBounds {
    double u_min = 0.0;
    double u_max = 1.0;
};

ActionBounds action_bounds(double u1, double tau);

// Clamps a proposal into the tolerance band, then enforces the budget
// exactly: for phi <= 1 the step may never spend more than what is left of
// the budget; for phi > 1 it must spend at least enough that the remaining
// steps at full power can still reach the budget.
double filter_action(double u_proposed, const WindowLedger& ledger, const ActionBounds& bounds,
                     const ThermalParams& p, double dt_hours);

void ledger_advance(WindowLedger& ledger, double u_safe, const ThermalParams& p,
                    double dt_hours);

// Per-step audit record of one filter decision.
struct FilterDecision {
    bool active = false;
    double u_proposed = 0.0;
    double u_safe = 0.0;
    double u1 = 0.0;
    double tau = 0.0;
    double u_min = 0.0;
    double u_max = 1.0;
};

// Stateful wrapper owned by one episode runner: opens a ledger per window,
// filters proposals while the window is active, and passes actions through
// untouched otherwise.
class SafetyFilter {
public:
    SafetyFilter(FilterConfig cfg, ThermalParams params, double dt_hours);

    // Commits the budget V(F) = phi * e_bau_window. Over-consumption
    // budgets above the physical ceiling (every step at full power) are
    // truncated to that ceiling, otherwise no action sequence could comply.
    void open_window(const FlexibilityRequest& request, double e_bau_window_kwh);
    void close_window() { active_ = false; }

    bool window_active() const { return active_ && ledger_.steps_remaining > 0; }
    const FilterConfig& config() const { return cfg_; }
    const WindowLedger& ledger() const { return ledger_; }
    double committed_budget_kwh() const { return ledger_.budget_kwh; }

    FilterDecision apply(double u_proposed, double t_room_norm, double price_norm) const;

    // Books the applied action; the window deactivates after its last step.
    void advance(double u_safe);

private:
    FilterConfig cfg_;
    ThermalParams params_;
    double dt_hours_;
    WindowLedger ledger_;
    bool active_ = false;
};

}  // namespace heatrl
