#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "heatrl/mlp.hpp"
#include "heatrl/rng.hpp"
#include "heatrl/thermal.hpp"

namespace heatrl {

struct Transition {
    AgentObservation s{};
    double u = 0.0;
    double r = 0.0;
    AgentObservation s_next{};
    bool terminal = false;
};

// Fixed-capacity ring with uniform batch sampling (without replacement
// inside one batch).
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(const Transition& t);
    std::size_t size() const { return full_ ? storage_.size() : next_; }
    std::size_t capacity() const { return storage_.size(); }

    // Indices of a uniformly sampled batch; throws InputError when the
    // buffer holds fewer than batch entries.
    std::vector<std::size_t> sample_indices(std::size_t batch, Rng& rng) const;
    const Transition& at(std::size_t i) const { return storage_[i]; }

private:
    std::vector<Transition> storage_;
    std::size_t next_ = 0;
    bool full_ = false;
};

// Bootstrapped regression target for the critic; terminal transitions do
// not look ahead.
inline double bellman_target(double r, double gamma, double q_next, bool terminal) {
    return r + (terminal ? 0.0 : gamma * q_next);
}

struct DdpgConfig {
    double gamma = 0.99;
    double actor_lr = 1e-4;
    double critic_lr = 1e-3;
    double tau_soft = 0.005;         // target-network tracking rate
    int batch_size = 64;
    std::size_t buffer_capacity = 100000;
    double noise_sigma_initial = 0.1;
    double noise_sigma_final = 0.01;
    std::vector<int> hidden_sizes = {64, 64};
    bool use_target_networks = true; // false: bootstrap from the online nets
    double actor_final_init = 1e-3;  // final-layer init range; actions start near 0.5

    bool valid() const {
        if (!(gamma > 0.0 && gamma < 1.0)) return false;
        if (actor_lr <= 0.0 || critic_lr <= 0.0) return false;
        if (!(tau_soft > 0.0 && tau_soft <= 1.0)) return false;
        if (batch_size <= 0 || buffer_capacity < static_cast<std::size_t>(batch_size)) return false;
        if (noise_sigma_initial < 0.0 || noise_sigma_final < 0.0) return false;
        if (hidden_sizes.empty()) return false;
        for (int h : hidden_sizes)
            if (h <= 0) return false;
        return true;
    }
};

// Deterministic-policy actor-critic learner over the fixed observation
// vector and a scalar action in [0, 1]. The critic receives the action
// appended to the observation as its final input component.
class DdpgAgent {
public:
    DdpgAgent(int obs_size, const DdpgConfig& cfg, std::uint64_t seed);

    // Noiseless policy output, in (0, 1).
    double policy(const AgentObservation& obs) const;
    // Policy plus Gaussian exploration noise, clamped to [0, 1].
    double act(const AgentObservation& obs, double noise_sigma);

    double critic_value(const AgentObservation& obs, double u) const;

    void remember(const Transition& t);
    bool ready() const;
    // One gradient step on a sampled batch (critic regression to the
    // bootstrapped target, then deterministic policy-gradient ascent,
    // then target soft updates). Returns the pre-step critic loss, or
    // nullopt while the buffer is still underfilled.
    std::optional<double> update();

    // Exploration schedule: linear from sigma_initial to sigma_final as
    // progress goes 0 -> 1.
    double noise_sigma_at(double progress) const;

    void save_checkpoint(const std::string& path) const;
    static DdpgAgent load_checkpoint(const std::string& path);

    const DdpgConfig& config() const { return cfg_; }
    int observation_size() const { return obs_size_; }
    const Mlp& actor() const { return actor_; }
    const Mlp& critic() const { return critic_; }
    Mlp& actor_for_test() { return actor_; }
    Mlp& critic_for_test() { return critic_; }
    const ReplayBuffer& buffer() const { return buffer_; }
    Rng& rng() { return rng_; }

private:
    DdpgAgent(int obs_size, const DdpgConfig& cfg);  // uninitialized nets, for load

    int obs_size_ = 0;
    DdpgConfig cfg_;
    Mlp actor_, critic_, target_actor_, target_critic_;
    Adam actor_opt_, critic_opt_;
    ReplayBuffer buffer_;
    Rng rng_;
};

}  // namespace heatrl
