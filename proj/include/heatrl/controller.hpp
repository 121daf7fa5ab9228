#pragma once

#include "heatrl/ddpg.hpp"
#include "heatrl/rule_based.hpp"
#include "heatrl/thermal.hpp"

namespace heatrl {

// Anything that proposes a valve position each step. The episode runner may
// still override the proposal through the safety filter.
class Controller {
public:
    virtual ~Controller() = default;
    virtual double propose(const AgentObservation& obs, const EnvState& state,
                           const ExogenousSample& ex) = 0;
    virtual void reset() {}
};

class RbController final : public Controller {
public:
    explicit RbController(const ComfortBand& band) : band_(band) {}

    double propose(const AgentObservation&, const EnvState& state,
                   const ExogenousSample&) override {
        return rb_action(state.t_room_c, band_, rb_);
    }
    void reset() override { rb_ = RbState{}; }

private:
    ComfortBand band_;
    RbState rb_;
};

class ConstantController final : public Controller {
public:
    explicit ConstantController(double u) : u_(u) {}

    double propose(const AgentObservation&, const EnvState&,
                   const ExogenousSample&) override {
        return u_;
    }

private:
    double u_;
};

// Policy wrapper; sigma > 0 adds exploration noise through the agent's rng.
class DdpgController final : public Controller {
public:
    DdpgController(DdpgAgent& agent, double sigma = 0.0) : agent_(agent), sigma_(sigma) {}

    double propose(const AgentObservation& obs, const EnvState&,
                   const ExogenousSample&) override {
        return agent_.act(obs, sigma_);
    }
    void set_sigma(double sigma) { sigma_ = sigma; }

private:
    DdpgAgent& agent_;
    double sigma_;
};

}  // namespace heatrl
