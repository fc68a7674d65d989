#include "crossflow/ddpg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace crossflow {

namespace {

double linear_decay(double v0, double v1, int episode, int episodes) {
    if (episodes <= 1) return v1;
    const double t = std::clamp(static_cast<double>(episode) / (episodes - 1), 0.0, 1.0);
    return v0 + (v1 - v0) * t;
}

}  // namespace

double Hyperparams::lr_actor(int episode) const {
    return linear_decay(lr_actor0, 0.0, episode, episodes);
}

double Hyperparams::lr_critic(int episode) const {
    return linear_decay(lr_critic0, 0.0, episode, episodes);
}

double Hyperparams::noise_sigma(int episode) const {
    return linear_decay(noise_sigma0, noise_sigma1, episode, episodes);
}

void ReplayBuffer::store(std::span<const double> s, std::span<const double> a, double r,
                         std::span<const double> s2) {
    if (s.size() != s2.size()) {
        throw std::invalid_argument("ReplayBuffer::store: state size mismatch");
    }
    Transition t;
    t.state.assign(s.begin(), s.end());
    t.action.assign(a.begin(), a.end());
    t.reward = static_cast<float>(r);
    t.next_state.assign(s2.begin(), s2.end());
    if (data_.size() < capacity_) {
        data_.push_back(std::move(t));
    } else {
        data_[cursor_] = std::move(t);
    }
    cursor_ = (cursor_ + 1) % capacity_;
}

std::vector<const Transition*> ReplayBuffer::sample(int batch, std::mt19937_64& rng) const {
    if (!can_sample(batch)) throw std::logic_error("ReplayBuffer::sample: underfull");
    std::vector<std::size_t> all(data_.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<std::size_t> picked;
    picked.reserve(static_cast<std::size_t>(batch));
    std::sample(all.begin(), all.end(), std::back_inserter(picked),
                static_cast<std::size_t>(batch), rng);
    std::vector<const Transition*> out;
    out.reserve(picked.size());
    for (std::size_t i : picked) out.push_back(&data_[i]);
    return out;
}

void Adam::step(std::vector<double>& theta, const std::vector<double>& grad, double lr) {
    if (theta.size() != m_.size() || grad.size() != m_.size()) {
        throw std::invalid_argument("Adam::step: size mismatch");
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < theta.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
        theta[i] -= lr * (m_[i] / bc1) / (std::sqrt(v_[i] / bc2) + eps_);
    }
}

DdpgAgent::DdpgAgent(Tier tier, const Hyperparams& hp, std::uint64_t seed)
    : hp_(hp),
      actor_(tier, Role::Actor, seed * 0x9E3779B97F4A7C15ULL + 1),
      critic_(tier, Role::Critic, seed * 0x9E3779B97F4A7C15ULL + 2),
      target_actor_(actor_),
      target_critic_(critic_),
      opt_actor_(actor_.params().size()),
      opt_critic_(critic_.params().size()),
      buffer_(hp.replay_capacity),
      rng_(seed * 0x9E3779B97F4A7C15ULL + 3) {}

std::vector<double> DdpgAgent::actor_forward(const StateGraph& sg) {
    actor_.forward(sg.values.data(), nullptr, ws_a_);
    return ws_a_.output();
}

double DdpgAgent::critic_forward(const StateGraph& sg, std::span<const double> actions) {
    if (static_cast<int>(actions.size()) != critic_.action_width()) {
        throw std::invalid_argument("critic_forward: action width mismatch");
    }
    critic_.forward(sg.values.data(), actions.data(), ws_c_);
    return ws_c_.output()[0];
}

std::vector<double> DdpgAgent::select_action(const StateGraph& sg, double sigma) {
    std::vector<double> a = actor_forward(sg);
    if (sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, sigma);
        for (double& v : a) v = std::clamp(v + noise(rng_), -3.0, 3.0);
    }
    return a;
}

void DdpgAgent::record_transition(const StateGraph& sg, std::span<const double> actions,
                                  double reward, const StateGraph& next_sg) {
    buffer_.store(sg.values, actions, reward, next_sg.values);
}

double DdpgAgent::critic_update(double lr) {
    const auto batch = buffer_.sample(hp_.minibatch, rng_);
    const std::size_t n_state = static_cast<std::size_t>(StateGraph::kChannels) *
                                actor_.state_width() * actor_.state_width();
    const std::size_t n_act = static_cast<std::size_t>(actor_.action_width());
    scratch_state_.resize(n_state);
    scratch_state2_.resize(n_state);
    scratch_action_.resize(n_act);
    grad_.assign(critic_.params().size(), 0.0);

    const double inv_b = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    for (const Transition* t : batch) {
        std::copy(t->state.begin(), t->state.end(), scratch_state_.begin());
        std::copy(t->next_state.begin(), t->next_state.end(), scratch_state2_.begin());
        std::copy(t->action.begin(), t->action.end(), scratch_action_.begin());

        target_actor_.forward(scratch_state2_.data(), nullptr, ws_ta_);
        target_critic_.forward(scratch_state2_.data(), ws_ta_.output().data(), ws_tc_);
        const double y = t->reward + hp_.gamma * ws_tc_.output()[0];

        critic_.forward(scratch_state_.data(), scratch_action_.data(), ws_c_);
        const double err = ws_c_.output()[0] - y;
        loss += err * err * inv_b;

        const double dout = 2.0 * err * inv_b;
        critic_.backward(scratch_state_.data(), scratch_action_.data(), ws_c_, &dout,
                         grad_.data(), nullptr);
    }
    if (!std::isfinite(loss)) throw std::runtime_error("critic_update: non-finite loss");
    opt_critic_.step(critic_.params(), grad_, lr);
    return loss;
}

double DdpgAgent::actor_update(double lr) {
    const auto batch = buffer_.sample(hp_.minibatch, rng_);
    const std::size_t n_state = static_cast<std::size_t>(StateGraph::kChannels) *
                                actor_.state_width() * actor_.state_width();
    const std::size_t n_act = static_cast<std::size_t>(actor_.action_width());
    scratch_state_.resize(n_state);
    std::vector<double> daction(n_act);
    std::vector<double> dact_out(n_act);
    grad_.assign(actor_.params().size(), 0.0);

    const double inv_b = 1.0 / static_cast<double>(batch.size());
    double objective = 0.0;
    for (const Transition* t : batch) {
        std::copy(t->state.begin(), t->state.end(), scratch_state_.begin());

        actor_.forward(scratch_state_.data(), nullptr, ws_a_);
        critic_.forward(scratch_state_.data(), ws_a_.output().data(), ws_c_);
        objective += ws_c_.output()[0] * inv_b;

        // dQ/da through the frozen critic, chained into the actor; ascent
        // is a descent step on -Q, so negate.
        const double dout = 1.0;
        std::fill(daction.begin(), daction.end(), 0.0);
        critic_.backward(scratch_state_.data(), ws_a_.output().data(), ws_c_, &dout, nullptr,
                         daction.data());
        for (std::size_t i = 0; i < n_act; ++i) dact_out[i] = -daction[i] * inv_b;
        actor_.backward(scratch_state_.data(), nullptr, ws_a_, dact_out.data(), grad_.data(),
                        nullptr);
    }
    if (!std::isfinite(objective)) throw std::runtime_error("actor_update: non-finite objective");
    opt_actor_.step(actor_.params(), grad_, lr);
    return objective;
}

void DdpgAgent::target_sync() {
    soft_update(actor_.params(), target_actor_.params(), hp_.tau);
    soft_update(critic_.params(), target_critic_.params(), hp_.tau);
}

void soft_update(std::span<const double> theta, std::span<double> theta_target, double tau) {
    if (theta.size() != theta_target.size()) {
        throw std::invalid_argument("soft_update: size mismatch");
    }
    for (std::size_t i = 0; i < theta.size(); ++i) {
        theta_target[i] = tau * theta[i] + (1.0 - tau) * theta_target[i];
    }
}

}  // namespace crossflow
