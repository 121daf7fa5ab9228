#include "heatrl/safety_filter.hpp"

#include <algorithm>
#include <cmath>

#include "heatrl/errors.hpp"

namespace heatrl {

double remaining_average_action(const WindowLedger& ledger, const ThermalParams& p,
                                double dt_hours) {
    if (ledger.steps_remaining < 1)
        throw ContractError("filter: queried after the window ended");
    const double step_energy = p.rated_power_kw * dt_hours;
    const double u1 =
        (ledger.budget_kwh - ledger.consumed_kwh) / (ledger.steps_remaining * step_energy);
    return std::clamp(u1, 0.0, 1.0);
}

double tolerance(double t_room_norm, double price_norm, double progress,
                 const FilterConfig& cfg) {
    const double mix =
        cfg.w1 * (1.0 - t_room_norm) + (1.0 - cfg.w1) * (1.0 - price_norm);
    return cfg.tau_base(progress) * std::pow(std::max(mix, 0.0), cfg.exponent);
}

ActionBounds action_bounds(double u1, double tau) {
    return {std::max(u1 * (1.0 - tau), 0.0), std::min(u1 * (1.0 + tau), 1.0)};
}

double filter_action(double u_proposed, const WindowLedger& ledger, const ActionBounds& bounds,
                     const ThermalParams& p, double dt_hours) {
    if (ledger.steps_remaining < 1)
        throw ContractError("filter: queried after the window ended");
    const double step_energy = p.rated_power_kw * dt_hours;
    const double remaining = ledger.budget_kwh - ledger.consumed_kwh;
    double u;
    if (ledger.phi <= 1.0) {
        u = std::min(u_proposed, bounds.u_max);
        // Hard budget guarantee: never spend more than what is left.
        u = std::min(u, std::max(remaining / step_energy, 0.0));
    } else {
        u = std::max(u_proposed, bounds.u_min);
        // Feasibility floor: leave no deficit the remaining steps cannot
        // cover even at full power.
        const double floor =
            (remaining - (ledger.steps_remaining - 1) * step_energy) / step_energy;
        u = std::max(u, std::clamp(floor, 0.0, 1.0));
    }
    return std::clamp(u, 0.0, 1.0);
}

void ledger_advance(WindowLedger& ledger, double u_safe, const ThermalParams& p,
                    double dt_hours) {
    if (ledger.steps_remaining < 1)
        throw ContractError("filter: advanced past the window end");
    ledger.consumed_kwh += energy_of_action(u_safe, p, dt_hours);
    --ledger.steps_remaining;
}

SafetyFilter::SafetyFilter(FilterConfig cfg, ThermalParams params, double dt_hours)
    : cfg_(cfg), params_(params), dt_hours_(dt_hours) {
    if (!cfg_.valid()) throw ConfigError("filter: invalid configuration");
    if (!params_.valid()) throw ConfigError("filter: invalid thermal parameters");
    if (dt_hours <= 0.0) throw ConfigError("filter: non-positive step length");
}

void SafetyFilter::open_window(const FlexibilityRequest& request, double e_bau_window_kwh) {
    validate_request(request);
    if (e_bau_window_kwh < 0.0) throw InputError("filter: negative reference energy");
    const int steps = request.duration_steps();
    double budget = flexibility_budget(request, e_bau_window_kwh);
    const double ceiling = steps * params_.rated_power_kw * dt_hours_;
    if (request.phi > 1.0 && budget > ceiling) budget = ceiling;
    ledger_ = WindowLedger{budget, 0.0, steps, request.phi, steps};
    active_ = true;
}

FilterDecision SafetyFilter::apply(double u_proposed, double t_room_norm,
                                   double price_norm) const {
    FilterDecision d;
    d.u_proposed = u_proposed;
    if (!window_active()) {
        d.u_safe = u_proposed;
        return d;
    }
    d.active = true;
    d.u1 = remaining_average_action(ledger_, params_, dt_hours_);
    if (ledger_.steps_remaining <= cfg_.terminal_pin_steps) {
        d.tau = 0.0;
    } else {
        const double progress =
            static_cast<double>(ledger_.total_steps - ledger_.steps_remaining) /
            ledger_.total_steps;
        d.tau = tolerance(t_room_norm, price_norm, progress, cfg_);
    }
    const ActionBounds b = action_bounds(d.u1, d.tau);
    d.u_min = b.u_min;
    d.u_max = b.u_max;
    d.u_safe = filter_action(u_proposed, ledger_, b, params_, dt_hours_);
    return d;
}

void SafetyFilter::advance(double u_safe) {
    if (!window_active()) throw ContractError("filter: advance without an active window");
    ledger_advance(ledger_, u_safe, params_, dt_hours_);
    if (ledger_.steps_remaining == 0) active_ = false;
}

}  // namespace heatrl
