#include "crossflow/net.hpp"

#include <cassert>
#include <cmath>
#include <random>
#include <stdexcept>

namespace crossflow {

namespace {

constexpr double kLnEps = 1e-5;

int conv_out_dim(int in) { return (in - 3) / 2 + 1; }

}  // namespace

Net::Net(Tier tier, Role role, std::uint64_t init_seed) : tier_(tier), role_(role) {
    state_width_ = (tier == Tier::Edge) ? 15 : 60;
    action_width_ = state_width_;

    std::vector<int> conv_channels =
        (tier == Tier::Edge) ? std::vector<int>{32, 16} : std::vector<int>{32, 32, 16};
    std::vector<int> dense_widths;
    if (tier == Tier::Edge) {
        dense_widths = (role == Role::Actor) ? std::vector<int>{96, 96, 15}
                                             : std::vector<int>{96, 96, 48, 12, 1};
    } else {
        dense_widths = (role == Role::Actor) ? std::vector<int>{512, 256, 60}
                                             : std::vector<int>{512, 256, 128, 54, 1};
    }

    size_t off = 0;
    int c = StateGraph::kChannels, h = state_width_, w = state_width_;
    for (int oc : conv_channels) {
        ConvLayer cl;
        cl.in_c = c;
        cl.in_h = h;
        cl.in_w = w;
        cl.out_c = oc;
        cl.out_h = conv_out_dim(h);
        cl.out_w = conv_out_dim(w);
        cl.w_off = off;
        off += cl.w_count();
        cl.b_off = off;
        off += static_cast<size_t>(oc);
        convs_.push_back(cl);
        c = oc;
        h = cl.out_h;
        w = cl.out_w;
    }
    flat_features_ = c * h * w;
    // Table-derived shape audit: any deviation is a construction error.
    const int expected_flat = (tier == Tier::Edge) ? 144 : 576;
    if (flat_features_ != expected_flat) {
        throw std::logic_error("Net: convolution stack does not flatten to the expected size");
    }

    int in_n = flat_features_ + (role == Role::Critic ? action_width_ : 0);
    for (size_t i = 0; i < dense_widths.size(); ++i) {
        DenseLayer dl;
        dl.in_n = in_n;
        dl.out_n = dense_widths[i];
        dl.layer_norm = (role == Role::Critic) && (i + 1 < dense_widths.size());
        dl.w_off = off;
        off += dl.w_count();
        dl.b_off = off;
        off += static_cast<size_t>(dl.out_n);
        if (dl.layer_norm) {
            dl.g_off = off;
            off += static_cast<size_t>(dl.out_n);
            dl.lnb_off = off;
            off += static_cast<size_t>(dl.out_n);
        } else {
            dl.g_off = dl.lnb_off = 0;
        }
        denses_.push_back(dl);
        in_n = dl.out_n;
    }

    theta_.assign(off, 0.0);
    std::mt19937_64 rng(init_seed);
    auto fill = [&](size_t o, size_t n, double bound) {
        std::uniform_real_distribution<double> uni(-bound, bound);
        for (size_t i = 0; i < n; ++i) theta_[o + i] = uni(rng);
    };
    for (const ConvLayer& cl : convs_) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(cl.in_c) * 9.0);
        fill(cl.w_off, cl.w_count(), bound);
        fill(cl.b_off, static_cast<size_t>(cl.out_c), bound);
    }
    for (const DenseLayer& dl : denses_) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(dl.in_n));
        fill(dl.w_off, dl.w_count(), bound);
        fill(dl.b_off, static_cast<size_t>(dl.out_n), bound);
        if (dl.layer_norm) {
            for (int i = 0; i < dl.out_n; ++i) {
                theta_[dl.g_off + static_cast<size_t>(i)] = 1.0;
                theta_[dl.lnb_off + static_cast<size_t>(i)] = 0.0;
            }
        }
    }
}

void Net::forward(const double* state, const double* action, Workspace& ws) const {
    if (role_ == Role::Critic && action == nullptr) {
        throw std::invalid_argument("Net::forward: critic requires an action set");
    }
    const bool actor = role_ == Role::Actor;

    ws.conv_post.resize(convs_.size());
    const double* in = state;
    for (size_t li = 0; li < convs_.size(); ++li) {
        const ConvLayer& cl = convs_[li];
        auto& out = ws.conv_post[li];
        out.assign(cl.out_count(), 0.0);
        for (int oc = 0; oc < cl.out_c; ++oc) {
            const double* wbase = theta_.data() + cl.w_off +
                                  static_cast<size_t>(oc) * cl.in_c * 9;
            const double bias = theta_[cl.b_off + static_cast<size_t>(oc)];
            double* orow = out.data() + static_cast<size_t>(oc) * cl.out_h * cl.out_w;
            for (int oy = 0; oy < cl.out_h; ++oy) {
                for (int ox = 0; ox < cl.out_w; ++ox) {
                    double sum = bias;
                    for (int ic = 0; ic < cl.in_c; ++ic) {
                        const double* wk = wbase + static_cast<size_t>(ic) * 9;
                        const double* ib = in + (static_cast<size_t>(ic) * cl.in_h +
                                                 static_cast<size_t>(oy) * 2) * cl.in_w +
                                           static_cast<size_t>(ox) * 2;
                        sum += wk[0] * ib[0] + wk[1] * ib[1] + wk[2] * ib[2];
                        ib += cl.in_w;
                        sum += wk[3] * ib[0] + wk[4] * ib[1] + wk[5] * ib[2];
                        ib += cl.in_w;
                        sum += wk[6] * ib[0] + wk[7] * ib[1] + wk[8] * ib[2];
                    }
                    orow[static_cast<size_t>(oy) * cl.out_w + ox] =
                        actor ? std::tanh(sum) : (sum > 0.0 ? sum : 0.0);
                }
            }
        }
        in = out.data();
    }

    const size_t flat = static_cast<size_t>(flat_features_);
    ws.dense_in.assign(flat + (actor ? 0 : static_cast<size_t>(action_width_)), 0.0);
    std::copy(in, in + flat, ws.dense_in.begin());
    if (!actor) std::copy(action, action + action_width_, ws.dense_in.begin() + flat);

    ws.dense_post.resize(denses_.size());
    ws.ln_xhat.assign(denses_.size(), {});
    ws.ln_rstd.assign(denses_.size(), 0.0);
    const double* x = ws.dense_in.data();
    for (size_t li = 0; li < denses_.size(); ++li) {
        const DenseLayer& dl = denses_[li];
        auto& out = ws.dense_post[li];
        out.assign(static_cast<size_t>(dl.out_n), 0.0);
        for (int o = 0; o < dl.out_n; ++o) {
            const double* wr = theta_.data() + dl.w_off + static_cast<size_t>(o) * dl.in_n;
            double sum = theta_[dl.b_off + static_cast<size_t>(o)];
            for (int i = 0; i < dl.in_n; ++i) sum += wr[i] * x[i];
            out[static_cast<size_t>(o)] = sum;
        }
        const bool last = (li + 1 == denses_.size());
        if (dl.layer_norm) {
            double mean = 0.0;
            for (double z : out) mean += z;
            mean /= dl.out_n;
            double var = 0.0;
            for (double z : out) var += (z - mean) * (z - mean);
            var /= dl.out_n;
            const double rstd = 1.0 / std::sqrt(var + kLnEps);
            ws.ln_rstd[li] = rstd;
            auto& xhat = ws.ln_xhat[li];
            xhat.assign(static_cast<size_t>(dl.out_n), 0.0);
            for (int o = 0; o < dl.out_n; ++o) {
                const double xh = (out[static_cast<size_t>(o)] - mean) * rstd;
                xhat[static_cast<size_t>(o)] = xh;
                const double u = theta_[dl.g_off + static_cast<size_t>(o)] * xh +
                                 theta_[dl.lnb_off + static_cast<size_t>(o)];
                out[static_cast<size_t>(o)] = u > 0.0 ? u : 0.0;
            }
        } else if (actor) {
            for (int o = 0; o < dl.out_n; ++o) {
                const double t = std::tanh(out[static_cast<size_t>(o)]);
                out[static_cast<size_t>(o)] = last ? 3.0 * t : t;
            }
        }
        // Critic final layer stays linear.
        x = out.data();
    }
}

void Net::backward(const double* state, const double* action, const Workspace& ws,
                   const double* dout, double* grad, double* daction) const {
    const bool actor = role_ == Role::Actor;
    (void)action;

    std::vector<double> d(ws.output().size());
    std::copy(dout, dout + d.size(), d.begin());

    // Dense stack, last to first.
    std::vector<double> dprev;
    for (size_t li = denses_.size(); li-- > 0;) {
        const DenseLayer& dl = denses_[li];
        const auto& post = ws.dense_post[li];
        const bool last = (li + 1 == denses_.size());
        const std::vector<double>& x =
            (li == 0) ? ws.dense_in : ws.dense_post[li - 1];

        // Activation backward into dz.
        std::vector<double> dz(static_cast<size_t>(dl.out_n));
        if (dl.layer_norm) {
            const auto& xhat = ws.ln_xhat[li];
            const double rstd = ws.ln_rstd[li];
            std::vector<double> dxhat(static_cast<size_t>(dl.out_n));
            double mean_dxhat = 0.0, mean_dxhat_xhat = 0.0;
            for (int o = 0; o < dl.out_n; ++o) {
                const size_t so = static_cast<size_t>(o);
                const double du = post[so] > 0.0 ? d[so] : 0.0;  // ReLU mask
                if (grad != nullptr) {
                    grad[dl.g_off + so] += du * xhat[so];
                    grad[dl.lnb_off + so] += du;
                }
                dxhat[so] = du * theta_[dl.g_off + so];
                mean_dxhat += dxhat[so];
                mean_dxhat_xhat += dxhat[so] * xhat[so];
            }
            mean_dxhat /= dl.out_n;
            mean_dxhat_xhat /= dl.out_n;
            for (int o = 0; o < dl.out_n; ++o) {
                const size_t so = static_cast<size_t>(o);
                dz[so] = rstd * (dxhat[so] - mean_dxhat - xhat[so] * mean_dxhat_xhat);
            }
        } else if (actor) {
            for (int o = 0; o < dl.out_n; ++o) {
                const size_t so = static_cast<size_t>(o);
                const double t = last ? post[so] / 3.0 : post[so];
                dz[so] = d[so] * (last ? 3.0 : 1.0) * (1.0 - t * t);
            }
        } else {
            dz = d;  // linear scalar output
        }

        dprev.assign(static_cast<size_t>(dl.in_n), 0.0);
        for (int o = 0; o < dl.out_n; ++o) {
            const size_t so = static_cast<size_t>(o);
            const double g = dz[so];
            if (g == 0.0) continue;
            const double* wr = theta_.data() + dl.w_off + so * static_cast<size_t>(dl.in_n);
            if (grad != nullptr) {
                double* gw = grad + dl.w_off + so * static_cast<size_t>(dl.in_n);
                for (int i = 0; i < dl.in_n; ++i) gw[i] += g * x[static_cast<size_t>(i)];
                grad[dl.b_off + so] += g;
            }
            for (int i = 0; i < dl.in_n; ++i) dprev[static_cast<size_t>(i)] += g * wr[i];
        }
        d = std::move(dprev);
    }

    const size_t flat = static_cast<size_t>(flat_features_);
    if (!actor && daction != nullptr) {
        for (int i = 0; i < action_width_; ++i) {
            daction[i] = d[flat + static_cast<size_t>(i)];
        }
    }
    if (grad == nullptr) return;  // nothing left to accumulate

    // Convolution stack, last to first.
    std::vector<double> dconv(d.begin(), d.begin() + static_cast<long>(flat));
    for (size_t li = convs_.size(); li-- > 0;) {
        const ConvLayer& cl = convs_[li];
        const auto& post = ws.conv_post[li];
        const double* in = (li == 0) ? state : ws.conv_post[li - 1].data();

        std::vector<double> din;
        const bool need_din = li > 0;
        if (need_din) din.assign(static_cast<size_t>(cl.in_c) * cl.in_h * cl.in_w, 0.0);

        for (int oc = 0; oc < cl.out_c; ++oc) {
            const size_t plane = static_cast<size_t>(oc) * cl.out_h * cl.out_w;
            const double* wbase = theta_.data() + cl.w_off + static_cast<size_t>(oc) * cl.in_c * 9;
            double* gwbase = grad + cl.w_off + static_cast<size_t>(oc) * cl.in_c * 9;
            for (int oy = 0; oy < cl.out_h; ++oy) {
                for (int ox = 0; ox < cl.out_w; ++ox) {
                    const size_t oi = plane + static_cast<size_t>(oy) * cl.out_w + ox;
                    const double a = post[oi];
                    double g = dconv[oi];
                    if (actor) {
                        g *= (1.0 - a * a);
                    } else if (a <= 0.0) {
                        continue;
                    }
                    if (g == 0.0) continue;
                    grad[cl.b_off + static_cast<size_t>(oc)] += g;
                    for (int ic = 0; ic < cl.in_c; ++ic) {
                        const double* wk = wbase + static_cast<size_t>(ic) * 9;
                        double* gk = gwbase + static_cast<size_t>(ic) * 9;
                        const size_t base = (static_cast<size_t>(ic) * cl.in_h +
                                             static_cast<size_t>(oy) * 2) * cl.in_w +
                                            static_cast<size_t>(ox) * 2;
                        for (int ky = 0; ky < 3; ++ky) {
                            const size_t row = base + static_cast<size_t>(ky) * cl.in_w;
                            for (int kx = 0; kx < 3; ++kx) {
                                gk[ky * 3 + kx] += g * in[row + static_cast<size_t>(kx)];
                                if (need_din) {
                                    din[row + static_cast<size_t>(kx)] += g * wk[ky * 3 + kx];
                                }
                            }
                        }
                    }
                }
            }
        }
        if (need_din) dconv = std::move(din);
    }
}

std::vector<Net::Segment> Net::segments() const {
    std::vector<Segment> out;
    for (size_t i = 0; i < convs_.size(); ++i) {
        const ConvLayer& cl = convs_[i];
        const std::string base = "conv" + std::to_string(i + 1);
        out.push_back({base + ".w", cl.w_off,
                       {static_cast<std::uint64_t>(cl.out_c), static_cast<std::uint64_t>(cl.in_c),
                        3, 3}});
        out.push_back({base + ".b", cl.b_off, {static_cast<std::uint64_t>(cl.out_c)}});
    }
    for (size_t i = 0; i < denses_.size(); ++i) {
        const DenseLayer& dl = denses_[i];
        const std::string base = "dense" + std::to_string(i + 1);
        out.push_back({base + ".w", dl.w_off,
                       {static_cast<std::uint64_t>(dl.out_n), static_cast<std::uint64_t>(dl.in_n)}});
        out.push_back({base + ".b", dl.b_off, {static_cast<std::uint64_t>(dl.out_n)}});
        if (dl.layer_norm) {
            out.push_back({base + ".ln_gain", dl.g_off, {static_cast<std::uint64_t>(dl.out_n)}});
            out.push_back({base + ".ln_bias", dl.lnb_off, {static_cast<std::uint64_t>(dl.out_n)}});
        }
    }
    return out;
}

}  // namespace crossflow
