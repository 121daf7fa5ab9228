#include "heatrl/mlp.hpp"

#include <cmath>

#include "heatrl/errors.hpp"

namespace heatrl {

Mlp::Mlp(std::vector<int> layer_sizes, OutputActivation output_activation)
    : sizes_(std::move(layer_sizes)), out_act_(output_activation) {
    if (sizes_.size() < 2) throw ConfigError("mlp: need at least input and output layer");
    for (int n : sizes_)
        if (n <= 0) throw ConfigError("mlp: non-positive layer size");

    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        w_off_.push_back(total);
        total += static_cast<std::size_t>(sizes_[l]) * sizes_[l + 1];
        b_off_.push_back(total);
        total += sizes_[l + 1];
    }
    params_.assign(total, 0.0);
}

void Mlp::init_uniform_fanin(Rng& rng, double final_layer_scale) {
    const int last = layer_count() - 1;
    for (int l = 0; l <= last; ++l) {
        const int fan_in = sizes_[l];
        double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        if (l == last && final_layer_scale > 0.0) bound = final_layer_scale;
        const std::size_t n_w = static_cast<std::size_t>(sizes_[l]) * sizes_[l + 1];
        for (std::size_t k = 0; k < n_w; ++k)
            params_[w_off_[l] + k] = rng.uniform(-bound, bound);
        for (int o = 0; o < sizes_[l + 1]; ++o)
            params_[b_off_[l] + o] = rng.uniform(-bound, bound);
    }
}

double& Mlp::weight(int layer, int out, int in) {
    return params_[w_off_[layer] + static_cast<std::size_t>(out) * sizes_[layer] + in];
}

double& Mlp::bias(int layer, int out) { return params_[b_off_[layer] + out]; }

std::vector<double> Mlp::forward(std::span<const double> x) const {
    Cache cache;
    return forward(x, cache);
}

std::vector<double> Mlp::forward(std::span<const double> x, Cache& cache) const {
    if (static_cast<int>(x.size()) != input_size())
        throw ConfigError("mlp: input size mismatch");

    const int L = layer_count();
    cache.act.assign(L + 1, {});
    cache.pre.assign(L, {});
    cache.act[0].assign(x.begin(), x.end());

    for (int l = 0; l < L; ++l) {
        const int n_in = sizes_[l], n_out = sizes_[l + 1];
        const std::vector<double>& a = cache.act[l];
        std::vector<double>& z = cache.pre[l];
        z.assign(n_out, 0.0);
        for (int o = 0; o < n_out; ++o) {
            double s = params_[b_off_[l] + o];
            const double* w = &params_[w_off_[l] + static_cast<std::size_t>(o) * n_in];
            for (int i = 0; i < n_in; ++i) s += w[i] * a[i];
            z[o] = s;
        }
        std::vector<double>& out = cache.act[l + 1];
        out.assign(n_out, 0.0);
        if (l + 1 < L) {
            for (int o = 0; o < n_out; ++o) out[o] = z[o] > 0.0 ? z[o] : 0.0;
        } else if (out_act_ == OutputActivation::sigmoid) {
            for (int o = 0; o < n_out; ++o) out[o] = 1.0 / (1.0 + std::exp(-z[o]));
        } else {
            out = z;
        }
    }
    return cache.act[L];
}

std::vector<double> Mlp::backward(const Cache& cache, std::span<const double> grad_output,
                                  std::vector<double>& grads) const {
    const int L = layer_count();
    if (static_cast<int>(cache.act.size()) != L + 1)
        throw ConfigError("mlp: cache does not match network");
    if (static_cast<int>(grad_output.size()) != output_size())
        throw ConfigError("mlp: upstream gradient size mismatch");
    if (grads.size() != params_.size())
        throw ConfigError("mlp: gradient buffer size mismatch");

    std::vector<double> dz(grad_output.begin(), grad_output.end());
    if (out_act_ == OutputActivation::sigmoid) {
        const std::vector<double>& y = cache.act[L];
        for (int o = 0; o < output_size(); ++o) dz[o] *= y[o] * (1.0 - y[o]);
    }

    for (int l = L - 1; l >= 0; --l) {
        const int n_in = sizes_[l], n_out = sizes_[l + 1];
        const std::vector<double>& a_prev = cache.act[l];
        for (int o = 0; o < n_out; ++o) {
            const double g = dz[o];
            double* gw = &grads[w_off_[l] + static_cast<std::size_t>(o) * n_in];
            for (int i = 0; i < n_in; ++i) gw[i] += g * a_prev[i];
            grads[b_off_[l] + o] += g;
        }
        std::vector<double> da(n_in, 0.0);
        for (int o = 0; o < n_out; ++o) {
            const double g = dz[o];
            const double* w = &params_[w_off_[l] + static_cast<std::size_t>(o) * n_in];
            for (int i = 0; i < n_in; ++i) da[i] += w[i] * g;
        }
        if (l > 0) {
            const std::vector<double>& z_prev = cache.pre[l - 1];
            for (int i = 0; i < n_in; ++i) da[i] = z_prev[i] > 0.0 ? da[i] : 0.0;
        }
        dz = std::move(da);
    }
    return dz;
}

void soft_update(Mlp& target, const Mlp& online, double rho) {
    if (target.layer_sizes() != online.layer_sizes())
        throw ConfigError("soft_update: network shapes differ");
    std::vector<double>& t = target.parameters();
    const std::vector<double>& o = online.parameters();
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rho * o[i] + (1.0 - rho) * t[i];
}

Adam::Adam(std::size_t n_params, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(n_params, 0.0), v_(n_params, 0.0) {
    if (lr <= 0.0) throw ConfigError("adam: learning rate must be positive");
}

void Adam::step(std::vector<double>& params, const std::vector<double>& grads) {
    if (params.size() != m_.size() || grads.size() != m_.size())
        throw ConfigError("adam: size mismatch");
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g * g;
        params[i] -= lr_ * (m_[i] / bc1) / (std::sqrt(v_[i] / bc2) + eps_);
    }
}

void Adam::restore(long t, std::vector<double> m, std::vector<double> v) {
    if (m.size() != m_.size() || v.size() != v_.size())
        throw ConfigError("adam: restore size mismatch");
    t_ = t;
    m_ = std::move(m);
    v_ = std::move(v);
}

}  // namespace heatrl
