#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "crossflow/net.hpp"

namespace crossflow {

struct Hyperparams {
    double gamma = 0.8;
    int minibatch = 48;
    double tau = 0.99;        // soft update factor, target <- tau*eval + (1-tau)*target
    int episodes = 50;
    double lr_actor0 = 0.001;   // decays linearly to 0 over `episodes`
    double lr_critic0 = 0.05;
    double noise_sigma0 = 0.5;  // exploration noise, decays linearly to sigma1
    double noise_sigma1 = 0.05;
    std::size_t replay_capacity = 100000;
    int train_every = 1;  // run the update pair every n-th step

    double lr_actor(int episode) const;
    double lr_critic(int episode) const;
    double noise_sigma(int episode) const;
};

struct Transition {
    std::vector<float> state;
    std::vector<float> action;
    float reward = 0.0f;
    std::vector<float> next_state;
};

/// FIFO ring buffer with uniform without-replacement minibatch sampling.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {}

    std::size_t size() const { return data_.size(); }
    std::size_t capacity() const { return capacity_; }

    void store(std::span<const double> s, std::span<const double> a, double r,
               std::span<const double> s2);

    bool can_sample(int batch) const { return size() >= static_cast<std::size_t>(batch); }

    /// Uniform sample of `batch` distinct indices; throws if underfull.
    std::vector<const Transition*> sample(int batch, std::mt19937_64& rng) const;

    const Transition& at(std::size_t i) const { return data_[i]; }

  private:
    std::size_t capacity_;
    std::vector<Transition> data_;
    std::size_t cursor_ = 0;
};

/// Adam with bias correction over a flat parameter vector.
class Adam {
  public:
    explicit Adam(std::size_t n) : m_(n, 0.0), v_(n, 0.0) {}
    void step(std::vector<double>& theta, const std::vector<double>& grad, double lr);

  private:
    double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
    std::int64_t t_ = 0;
    std::vector<double> m_, v_;
};

/// One tier's actor-critic pair with target networks and replay buffer.
class DdpgAgent {
  public:
    DdpgAgent(Tier tier, const Hyperparams& hp, std::uint64_t seed);

    Tier tier() const { return actor_.tier(); }
    const Hyperparams& hyperparams() const { return hp_; }
    Hyperparams& hyperparams() { return hp_; }

    Net& actor() { return actor_; }
    Net& critic() { return critic_; }
    Net& target_actor() { return target_actor_; }
    Net& target_critic() { return target_critic_; }
    const Net& actor() const { return actor_; }
    const Net& critic() const { return critic_; }
    const Net& target_actor() const { return target_actor_; }
    const Net& target_critic() const { return target_critic_; }
    ReplayBuffer& buffer() { return buffer_; }

    std::vector<double> actor_forward(const StateGraph& sg);
    double critic_forward(const StateGraph& sg, std::span<const double> actions);

    /// Deterministic policy plus clamped Gaussian exploration noise.
    std::vector<double> select_action(const StateGraph& sg, double sigma);

    void record_transition(const StateGraph& sg, std::span<const double> actions, double reward,
                           const StateGraph& next_sg);

    bool can_update() const { return buffer_.can_sample(hp_.minibatch); }

    /// One optimizer step on the critic against the bootstrapped target;
    /// returns the minibatch loss. Throws on non-finite loss.
    double critic_update(double lr);

    /// One ascent step on the actor through the frozen critic; returns the
    /// minibatch mean Q objective.
    double actor_update(double lr);

    void target_sync();

    std::mt19937_64& rng() { return rng_; }

  private:
    Hyperparams hp_;
    Net actor_, critic_, target_actor_, target_critic_;
    Adam opt_actor_, opt_critic_;
    ReplayBuffer buffer_;
    std::mt19937_64 rng_;
    Net::Workspace ws_a_, ws_c_, ws_ta_, ws_tc_;
    std::vector<double> grad_;
    std::vector<double> scratch_state_, scratch_state2_, scratch_action_;
};

/// theta_target <- tau * theta + (1 - tau) * theta_target, elementwise.
void soft_update(std::span<const double> theta, std::span<double> theta_target, double tau);

}  // namespace crossflow
