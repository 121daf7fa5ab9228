#include "heatrl/ddpg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "heatrl/errors.hpp"

namespace heatrl {

ReplayBuffer::ReplayBuffer(std::size_t capacity) {
    if (capacity == 0) throw ConfigError("replay: zero capacity");
    storage_.resize(capacity);
}

void ReplayBuffer::push(const Transition& t) {
    storage_[next_] = t;
    ++next_;
    if (next_ == storage_.size()) {
        next_ = 0;
        full_ = true;
    }
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch, Rng& rng) const {
    const std::size_t n = size();
    if (batch == 0 || batch > n) throw InputError("replay: batch exceeds stored transitions");
    std::vector<std::size_t> out;
    out.reserve(batch);
    if (batch * 2 >= n) {
        // Partial Fisher-Yates: exact and cheap when the batch covers much
        // of the buffer.
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t k = 0; k < batch; ++k) {
            const std::size_t j = k + rng.integer(n - k);
            std::swap(idx[k], idx[j]);
            out.push_back(idx[k]);
        }
    } else {
        // Rejection of duplicates; collisions are rare at batch << n.
        while (out.size() < batch) {
            const std::size_t cand = rng.integer(n);
            if (std::find(out.begin(), out.end(), cand) == out.end()) out.push_back(cand);
        }
    }
    return out;
}

namespace {

std::vector<int> actor_shape(int obs_size, const DdpgConfig& cfg) {
    std::vector<int> s{obs_size};
    s.insert(s.end(), cfg.hidden_sizes.begin(), cfg.hidden_sizes.end());
    s.push_back(1);
    return s;
}

std::vector<int> critic_shape(int obs_size, const DdpgConfig& cfg) {
    std::vector<int> s{obs_size + 1};  // action appended to the observation
    s.insert(s.end(), cfg.hidden_sizes.begin(), cfg.hidden_sizes.end());
    s.push_back(1);
    return s;
}

}  // namespace

DdpgAgent::DdpgAgent(int obs_size, const DdpgConfig& cfg)
    : obs_size_(obs_size),
      cfg_(cfg),
      actor_(actor_shape(obs_size, cfg), OutputActivation::sigmoid),
      critic_(critic_shape(obs_size, cfg), OutputActivation::identity),
      target_actor_(actor_shape(obs_size, cfg), OutputActivation::sigmoid),
      target_critic_(critic_shape(obs_size, cfg), OutputActivation::identity),
      actor_opt_(actor_.parameter_count(), cfg.actor_lr),
      critic_opt_(critic_.parameter_count(), cfg.critic_lr),
      buffer_(cfg.buffer_capacity) {}

DdpgAgent::DdpgAgent(int obs_size, const DdpgConfig& cfg, std::uint64_t seed)
    : DdpgAgent(obs_size, [&] {
          if (obs_size <= 0) throw ConfigError("ddpg: non-positive observation size");
          if (!cfg.valid()) throw ConfigError("ddpg: invalid configuration");
          return cfg;
      }()) {
    rng_.seed(seed);
    actor_.init_uniform_fanin(rng_, cfg_.actor_final_init);
    critic_.init_uniform_fanin(rng_);
    target_actor_.parameters() = actor_.parameters();
    target_critic_.parameters() = critic_.parameters();
}

double DdpgAgent::policy(const AgentObservation& obs) const {
    return actor_.forward(std::span(obs.data(), obs_size_))[0];
}

double DdpgAgent::act(const AgentObservation& obs, double noise_sigma) {
    double u = policy(obs);
    if (noise_sigma > 0.0) u += rng_.normal(0.0, noise_sigma);
    return std::clamp(u, 0.0, 1.0);
}

double DdpgAgent::critic_value(const AgentObservation& obs, double u) const {
    std::vector<double> sq(obs.begin(), obs.begin() + obs_size_);
    sq.push_back(u);
    return critic_.forward(sq)[0];
}

void DdpgAgent::remember(const Transition& t) { buffer_.push(t); }

bool DdpgAgent::ready() const {
    return buffer_.size() >= static_cast<std::size_t>(cfg_.batch_size);
}

std::optional<double> DdpgAgent::update() {
    if (!ready()) return std::nullopt;
    const int batch = cfg_.batch_size;
    const std::vector<std::size_t> idx = buffer_.sample_indices(batch, rng_);

    const Mlp& boot_actor = cfg_.use_target_networks ? target_actor_ : actor_;
    const Mlp& boot_critic = cfg_.use_target_networks ? target_critic_ : critic_;

    std::vector<double> sq(obs_size_ + 1);
    std::vector<double> y(batch);
    for (int k = 0; k < batch; ++k) {
        const Transition& tr = buffer_.at(idx[k]);
        double q_next = 0.0;
        if (!tr.terminal) {
            const double u_next =
                boot_actor.forward(std::span(tr.s_next.data(), obs_size_))[0];
            std::copy(tr.s_next.begin(), tr.s_next.end(), sq.begin());
            sq[obs_size_] = u_next;
            q_next = boot_critic.forward(sq)[0];
        }
        y[k] = bellman_target(tr.r, cfg_.gamma, q_next, tr.terminal);
    }

    // Critic: one optimizer step on the mean squared residual against y.
    std::vector<double> critic_grads(critic_.parameter_count(), 0.0);
    Mlp::Cache cache;
    double loss = 0.0;
    for (int k = 0; k < batch; ++k) {
        const Transition& tr = buffer_.at(idx[k]);
        std::copy(tr.s.begin(), tr.s.end(), sq.begin());
        sq[obs_size_] = tr.u;
        const double q = critic_.forward(sq, cache)[0];
        const double err = q - y[k];
        loss += err * err;
        const std::array<double, 1> up{2.0 * err / batch};
        critic_.backward(cache, up, critic_grads);
    }
    loss /= batch;
    if (!std::isfinite(loss))
        throw TrainingError("ddpg: critic loss is not finite (loss=" + std::to_string(loss) +
                            " after " + std::to_string(critic_opt_.step_count()) + " steps)");
    critic_opt_.step(critic_.parameters(), critic_grads);

    // Actor: ascend mean_s Q(s, mu(s)) by chaining dQ/du into the policy;
    // the critic's own parameters stay fixed during this step.
    std::vector<double> actor_grads(actor_.parameter_count(), 0.0);
    std::vector<double> critic_scratch(critic_.parameter_count(), 0.0);
    Mlp::Cache a_cache, q_cache;
    for (int k = 0; k < batch; ++k) {
        const Transition& tr = buffer_.at(idx[k]);
        const double u = actor_.forward(std::span(tr.s.data(), obs_size_), a_cache)[0];
        std::copy(tr.s.begin(), tr.s.end(), sq.begin());
        sq[obs_size_] = u;
        critic_.forward(sq, q_cache);
        const std::array<double, 1> one{1.0};
        const std::vector<double> dq_dx = critic_.backward(q_cache, one, critic_scratch);
        const std::array<double, 1> up{-dq_dx[obs_size_] / batch};
        actor_.backward(a_cache, up, actor_grads);
    }
    for (double g : actor_grads)
        if (!std::isfinite(g)) throw TrainingError("ddpg: actor gradient is not finite");
    actor_opt_.step(actor_.parameters(), actor_grads);

    soft_update(target_actor_, actor_, cfg_.tau_soft);
    soft_update(target_critic_, critic_, cfg_.tau_soft);
    return loss;
}

double DdpgAgent::noise_sigma_at(double progress) const {
    const double p = std::clamp(progress, 0.0, 1.0);
    return cfg_.noise_sigma_initial + (cfg_.noise_sigma_final - cfg_.noise_sigma_initial) * p;
}

namespace {

constexpr char kMagic[8] = {'H', 'R', 'L', 'C', 'K', 'P', 'T', '\x01'};

template <class T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw ParseError("checkpoint: truncated file");
    return v;
}

void put_doubles(std::ostream& os, const std::vector<double>& v) {
    put<std::uint64_t>(os, v.size());
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> get_doubles(std::istream& is) {
    const auto n = get<std::uint64_t>(is);
    std::vector<double> v(n);
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw ParseError("checkpoint: truncated parameter block");
    return v;
}

void put_net(std::ostream& os, const Mlp& net) {
    put<std::uint32_t>(os, static_cast<std::uint32_t>(net.layer_sizes().size()));
    for (int s : net.layer_sizes()) put<std::int32_t>(os, s);
    put<std::uint8_t>(os, net.output_activation() == OutputActivation::sigmoid ? 1 : 0);
    put_doubles(os, net.parameters());
}

void get_net(std::istream& is, Mlp& net) {
    const auto n_sizes = get<std::uint32_t>(is);
    std::vector<int> sizes(n_sizes);
    for (auto& s : sizes) s = get<std::int32_t>(is);
    const auto act = get<std::uint8_t>(is);
    if (sizes != net.layer_sizes() ||
        (act == 1) != (net.output_activation() == OutputActivation::sigmoid))
        throw ParseError("checkpoint: network shape does not match its configuration");
    std::vector<double> params = get_doubles(is);
    if (params.size() != net.parameter_count())
        throw ParseError("checkpoint: parameter count mismatch");
    net.parameters() = std::move(params);
}

void put_adam(std::ostream& os, const Adam& opt) {
    put<std::int64_t>(os, opt.step_count());
    put_doubles(os, opt.moment1());
    put_doubles(os, opt.moment2());
}

void get_adam(std::istream& is, Adam& opt) {
    const auto t = get<std::int64_t>(is);
    std::vector<double> m = get_doubles(is);
    std::vector<double> v = get_doubles(is);
    opt.restore(static_cast<long>(t), std::move(m), std::move(v));
}

}  // namespace

void DdpgAgent::save_checkpoint(const std::string& path) const {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("checkpoint: cannot open for writing: " + path);
    os.write(kMagic, sizeof kMagic);
    put<std::int32_t>(os, obs_size_);
    put<double>(os, cfg_.gamma);
    put<double>(os, cfg_.actor_lr);
    put<double>(os, cfg_.critic_lr);
    put<double>(os, cfg_.tau_soft);
    put<std::int32_t>(os, cfg_.batch_size);
    put<std::uint64_t>(os, cfg_.buffer_capacity);
    put<double>(os, cfg_.noise_sigma_initial);
    put<double>(os, cfg_.noise_sigma_final);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(cfg_.hidden_sizes.size()));
    for (int h : cfg_.hidden_sizes) put<std::int32_t>(os, h);
    put<std::uint8_t>(os, cfg_.use_target_networks ? 1 : 0);
    put<double>(os, cfg_.actor_final_init);
    put_net(os, actor_);
    put_net(os, critic_);
    put_net(os, target_actor_);
    put_net(os, target_critic_);
    put_adam(os, actor_opt_);
    put_adam(os, critic_opt_);
    const std::string rng_state = rng_.serialize();
    put<std::uint64_t>(os, rng_state.size());
    os.write(rng_state.data(), static_cast<std::streamsize>(rng_state.size()));
    os.flush();
    if (!os) throw IoError("checkpoint: write failed: " + path);
}

DdpgAgent DdpgAgent::load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("checkpoint: cannot open: " + path);
    char magic[8];
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw ParseError("checkpoint: bad magic (not a checkpoint file?): " + path);

    const auto obs_size = get<std::int32_t>(is);
    DdpgConfig cfg;
    cfg.gamma = get<double>(is);
    cfg.actor_lr = get<double>(is);
    cfg.critic_lr = get<double>(is);
    cfg.tau_soft = get<double>(is);
    cfg.batch_size = get<std::int32_t>(is);
    cfg.buffer_capacity = get<std::uint64_t>(is);
    cfg.noise_sigma_initial = get<double>(is);
    cfg.noise_sigma_final = get<double>(is);
    const auto n_hidden = get<std::uint32_t>(is);
    cfg.hidden_sizes.assign(n_hidden, 0);
    for (auto& h : cfg.hidden_sizes) h = get<std::int32_t>(is);
    cfg.use_target_networks = get<std::uint8_t>(is) != 0;
    cfg.actor_final_init = get<double>(is);
    if (obs_size <= 0 || !cfg.valid())
        throw ParseError("checkpoint: stored configuration is invalid: " + path);

    DdpgAgent agent(obs_size, cfg);
    get_net(is, agent.actor_);
    get_net(is, agent.critic_);
    get_net(is, agent.target_actor_);
    get_net(is, agent.target_critic_);
    get_adam(is, agent.actor_opt_);
    get_adam(is, agent.critic_opt_);
    const auto rng_len = get<std::uint64_t>(is);
    std::string rng_state(rng_len, '\0');
    is.read(rng_state.data(), static_cast<std::streamsize>(rng_len));
    if (!is) throw ParseError("checkpoint: truncated rng state");
    agent.rng_.deserialize(rng_state);
    return agent;
}

}  // namespace heatrl
