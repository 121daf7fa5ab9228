#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "heatrl/rng.hpp"

namespace heatrl {

enum class OutputActivation { identity, sigmoid };

// Fully-connected network with rectifier hidden layers. All parameters live
// in one flat vector (per-layer weight blocks row-major [out][in], then the
// bias block) so the optimizer, soft updates and checkpoints can treat a
// network as a single array.
class Mlp {
public:
    Mlp() = default;
    Mlp(std::vector<int> layer_sizes, OutputActivation output_activation);

    // Uniform init scaled by 1/sqrt(fan_in) per layer. When
    // final_layer_scale > 0 the last layer draws from that fixed range
    // instead, so a sigmoid head starts near 0.5.
    void init_uniform_fanin(Rng& rng, double final_layer_scale = 0.0);

    int input_size() const { return sizes_.front(); }
    int output_size() const { return sizes_.back(); }
    int layer_count() const { return static_cast<int>(sizes_.size()) - 1; }

    struct Cache {
        std::vector<std::vector<double>> act;  // act[0] = input, act[L] = output
        std::vector<std::vector<double>> pre;  // pre-activations of layers 1..L
    };

    std::vector<double> forward(std::span<const double> x) const;
    std::vector<double> forward(std::span<const double> x, Cache& cache) const;

    // Reverse-mode sweep. grad_output is dL/dy for the cached pass;
    // parameter gradients are accumulated into grads (same layout and size
    // as parameters()); the return value is dL/dx.
    std::vector<double> backward(const Cache& cache, std::span<const double> grad_output,
                                 std::vector<double>& grads) const;

    std::vector<double>& parameters() { return params_; }
    const std::vector<double>& parameters() const { return params_; }
    std::size_t parameter_count() const { return params_.size(); }
    const std::vector<int>& layer_sizes() const { return sizes_; }
    OutputActivation output_activation() const { return out_act_; }

    // Direct weight/bias accessors for hand-built test networks.
    double& weight(int layer, int out, int in);
    double& bias(int layer, int out);

private:
    std::vector<int> sizes_;
    OutputActivation out_act_ = OutputActivation::identity;
    std::vector<double> params_;
    std::vector<std::size_t> w_off_, b_off_;
};

// target <- rho * online + (1 - rho) * target, elementwise.
void soft_update(Mlp& target, const Mlp& online, double rho);

// Adaptive-moment optimizer with bias correction.
class Adam {
public:
    Adam() = default;
    Adam(std::size_t n_params, double lr, double beta1 = 0.9, double beta2 = 0.999,
         double eps = 1e-8);

    void step(std::vector<double>& params, const std::vector<double>& grads);

    double learning_rate() const { return lr_; }
    long step_count() const { return t_; }
    const std::vector<double>& moment1() const { return m_; }
    const std::vector<double>& moment2() const { return v_; }
    void restore(long t, std::vector<double> m, std::vector<double> v);

private:
    double lr_ = 1e-3, beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
    long t_ = 0;
    std::vector<double> m_, v_;
};

}  // namespace heatrl
