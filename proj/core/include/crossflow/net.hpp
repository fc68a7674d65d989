#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crossflow/state_graph.hpp"

namespace crossflow {

enum class Tier { Edge, Cloud };
enum class Role { Actor, Critic };

/// Fixed-architecture function approximator for one tier.
///
/// Actor:  state (3,w,w) -> conv stack -> dense stack -> w actions,
///         tanh activations throughout, output 3*tanh(z) in [-3, 3].
/// Critic: same conv stack with ReLU; the action set is concatenated to the
///         flattened conv output; dense stack with layer normalization and
///         ReLU; scalar linear output.
///
/// Edge:  (3,15,15) -> conv 32 -> conv 16 -> flatten 144
/// Cloud: (3,60,60) -> conv 32 -> conv 32 -> conv 16 -> flatten 576
/// All convolutions are 3x3, stride 2, valid padding.
class Net {
  public:
    struct ConvLayer {
        int in_c, in_h, in_w;
        int out_c, out_h, out_w;
        size_t w_off, b_off;
        size_t w_count() const { return static_cast<size_t>(out_c) * in_c * 9; }
        size_t out_count() const { return static_cast<size_t>(out_c) * out_h * out_w; }
    };
    struct DenseLayer {
        int in_n, out_n;
        bool layer_norm;
        size_t w_off, b_off, g_off, lnb_off;
        size_t w_count() const { return static_cast<size_t>(out_n) * in_n; }
    };

    /// Scratch buffers for one forward/backward pass.
    struct Workspace {
        std::vector<std::vector<double>> conv_post;   // per conv layer, activated
        std::vector<double> dense_in;                 // flatten (+ action for critic)
        std::vector<std::vector<double>> dense_post;  // per dense layer, activated
        std::vector<std::vector<double>> ln_xhat;     // per dense layer with LN
        std::vector<double> ln_rstd;                  // per dense layer with LN
        const std::vector<double>& output() const { return dense_post.back(); }
    };

    Net(Tier tier, Role role, std::uint64_t init_seed);

    Tier tier() const { return tier_; }
    Role role() const { return role_; }
    int state_width() const { return state_width_; }
    int action_width() const { return action_width_; }
    int flat_features() const { return flat_features_; }
    int output_size() const { return role_ == Role::Actor ? action_width_ : 1; }

    std::vector<double>& params() { return theta_; }
    const std::vector<double>& params() const { return theta_; }

    /// `state` is channel-major (3, w, w); `action` (length action_width)
    /// is required for critics and ignored for actors.
    void forward(const double* state, const double* action, Workspace& ws) const;

    /// Accumulates dL/dtheta into `grad` (same size as params, may be
    /// null) given dL/doutput; for critics also writes dL/daction into
    /// `daction` (length action_width, may be null).
    void backward(const double* state, const double* action, const Workspace& ws,
                  const double* dout, double* grad, double* daction) const;

    struct Segment {
        std::string name;
        size_t offset;
        std::vector<std::uint64_t> shape;
    };
    std::vector<Segment> segments() const;

  private:
    Tier tier_;
    Role role_;
    int state_width_;
    int action_width_;
    int flat_features_;
    std::vector<ConvLayer> convs_;
    std::vector<DenseLayer> denses_;
    std::vector<double> theta_;
};

}  // namespace crossflow
