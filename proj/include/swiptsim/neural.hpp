#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "swiptsim/rng.hpp"

namespace swiptsim {

/// Fully connected network with rectifier hidden layers and a linear output
/// layer. weights[l] maps layer l activations to layer l+1 pre-activations.
struct MlpParameters {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;

    int input_size() const { return static_cast<int>(weights.front().cols()); }
    int output_size() const { return static_cast<int>(weights.back().rows()); }
    std::size_t parameter_count() const;
};

struct MlpGradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

struct RmsPropState {
    std::vector<Eigen::MatrixXd> weight_acc;
    std::vector<Eigen::VectorXd> bias_acc;
    double decay = 0.9;
    double stabilizer = 1e-8;
    double learning_rate = 0.001;
};

/// Zero-mean normal weights scaled by 1/sqrt(fan_in), zero biases.
MlpParameters init_params(const std::vector<int>& layer_sizes, Rng& rng);

RmsPropState make_rmsprop_state(const MlpParameters& params, double learning_rate,
                                double decay, double stabilizer);

Eigen::VectorXd forward(const MlpParameters& params, const Eigen::VectorXd& observation);

/// Column-wise batch forward; returns the output matrix [out x batch].
Eigen::MatrixXd forward_batch(const MlpParameters& params, const Eigen::MatrixXd& inputs);

/// Gradient of 0.5 * (target - Q(s, action))^2 with respect to every
/// parameter; only the selected output port propagates.
MlpGradients backward(const MlpParameters& params, const Eigen::VectorXd& observation,
                      int action, double target);

/// Batched gradient of the mean of 0.5 * (target_i - Q(s_i, a_i))^2.
/// Returns the pre-update loss.
double backward_batch(const MlpParameters& params, const Eigen::MatrixXd& inputs,
                      const std::vector<int>& actions, const Eigen::VectorXd& targets,
                      MlpGradients& out);

void rmsprop_step(MlpParameters& params, const MlpGradients& grads, RmsPropState& state);

/// Binary little-endian weight file; loading restores bit-identical
/// parameters.
void save_params(const MlpParameters& params, const std::string& path);
MlpParameters load_params(const std::string& path);

}  // namespace swiptsim
