#include "swiptsim/neural.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace swiptsim {

namespace {

void check_shapes(const MlpParameters& params, Eigen::Index input_rows) {
    if (params.weights.empty() || params.weights.size() != params.biases.size())
        throw std::invalid_argument("mlp: inconsistent layer lists");
    if (params.weights.front().cols() != input_rows)
        throw std::invalid_argument("mlp: observation length does not match input layer");
}

}  // namespace

std::size_t MlpParameters::parameter_count() const {
    std::size_t n = 0;
    for (const auto& w : weights) n += static_cast<std::size_t>(w.size());
    for (const auto& b : biases) n += static_cast<std::size_t>(b.size());
    return n;
}

MlpParameters init_params(const std::vector<int>& layer_sizes, Rng& rng) {
    if (layer_sizes.size() < 2)
        throw std::invalid_argument("init_params: need at least input and output layers");
    MlpParameters p;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const int fan_in = layer_sizes[l];
        const int fan_out = layer_sizes[l + 1];
        Eigen::MatrixXd w(fan_out, fan_in);
        const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = scale * rng.normal();
        p.weights.push_back(std::move(w));
        p.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    return p;
}

RmsPropState make_rmsprop_state(const MlpParameters& params, double learning_rate,
                                double decay, double stabilizer) {
    RmsPropState st;
    st.learning_rate = learning_rate;
    st.decay = decay;
    st.stabilizer = stabilizer;
    for (const auto& w : params.weights)
        st.weight_acc.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    for (const auto& b : params.biases) st.bias_acc.push_back(Eigen::VectorXd::Zero(b.size()));
    return st;
}

Eigen::VectorXd forward(const MlpParameters& params, const Eigen::VectorXd& observation) {
    check_shapes(params, observation.size());
    Eigen::VectorXd a = observation;
    const std::size_t last = params.weights.size() - 1;
    for (std::size_t l = 0; l <= last; ++l) {
        Eigen::VectorXd z = params.weights[l] * a + params.biases[l];
        a = (l == last) ? z : z.cwiseMax(0.0).eval();
    }
    return a;
}

Eigen::MatrixXd forward_batch(const MlpParameters& params, const Eigen::MatrixXd& inputs) {
    check_shapes(params, inputs.rows());
    Eigen::MatrixXd a = inputs;
    const std::size_t last = params.weights.size() - 1;
    for (std::size_t l = 0; l <= last; ++l) {
        Eigen::MatrixXd z = (params.weights[l] * a).colwise() + params.biases[l];
        a = (l == last) ? z : z.cwiseMax(0.0).eval();
    }
    return a;
}

MlpGradients backward(const MlpParameters& params, const Eigen::VectorXd& observation,
                      int action, double target) {
    Eigen::MatrixXd x = observation;
    std::vector<int> actions{action};
    Eigen::VectorXd targets(1);
    targets[0] = target;
    MlpGradients g;
    backward_batch(params, x, actions, targets, g);
    // batch of one: mean loss scaling is a no-op
    return g;
}

double backward_batch(const MlpParameters& params, const Eigen::MatrixXd& inputs,
                      const std::vector<int>& actions, const Eigen::VectorXd& targets,
                      MlpGradients& out) {
    check_shapes(params, inputs.rows());
    const Eigen::Index batch = inputs.cols();
    if (static_cast<Eigen::Index>(actions.size()) != batch || targets.size() != batch)
        throw std::invalid_argument("backward_batch: batch size mismatch");

    const std::size_t layers = params.weights.size();
    std::vector<Eigen::MatrixXd> activations(layers + 1);
    activations[0] = inputs;
    for (std::size_t l = 0; l < layers; ++l) {
        Eigen::MatrixXd z = (params.weights[l] * activations[l]).colwise() + params.biases[l];
        activations[l + 1] = (l == layers - 1) ? z : z.cwiseMax(0.0).eval();
    }

    // output delta: residual at the selected port only, averaged over batch
    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(params.weights.back().rows(), batch);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < batch; ++i) {
        const int a = actions[static_cast<std::size_t>(i)];
        if (a < 0 || a >= activations[layers].rows())
            throw std::out_of_range("backward_batch: action index out of range");
        const double residual = activations[layers](a, i) - targets[i];
        loss += 0.5 * residual * residual;
        delta(a, i) = residual / static_cast<double>(batch);
    }
    loss /= static_cast<double>(batch);

    out.weights.assign(layers, {});
    out.biases.assign(layers, {});
    for (std::size_t l = layers; l-- > 0;) {
        out.weights[l] = delta * activations[l].transpose();
        out.biases[l] = delta.rowwise().sum();
        if (l > 0) {
            // rectifier gate: units with nonpositive pre-activation pass nothing
            Eigen::MatrixXd back = params.weights[l].transpose() * delta;
            delta = ((activations[l].array() > 0.0).cast<double>() * back.array()).matrix();
        }
    }
    return loss;
}

void rmsprop_step(MlpParameters& params, const MlpGradients& grads, RmsPropState& state) {
    if (grads.weights.size() != params.weights.size())
        throw std::invalid_argument("rmsprop_step: gradient/parameter mismatch");
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        state.weight_acc[l] = (state.decay * state.weight_acc[l].array() +
                               (1.0 - state.decay) * grads.weights[l].array().square())
                                  .matrix();
        params.weights[l].array() -=
            state.learning_rate * grads.weights[l].array() /
            (state.weight_acc[l].array().sqrt() + state.stabilizer);
        state.bias_acc[l] = (state.decay * state.bias_acc[l].array() +
                             (1.0 - state.decay) * grads.biases[l].array().square())
                                .matrix();
        params.biases[l].array() -= state.learning_rate * grads.biases[l].array() /
                                    (state.bias_acc[l].array().sqrt() + state.stabilizer);
    }
}

namespace {

constexpr char kMagic[4] = {'S', 'W', 'N', 'N'};
constexpr std::uint32_t kVersion = 1;

// the file format is little-endian; byte-swap detection keeps it portable
bool host_is_little_endian() {
    const std::uint16_t probe = 1;
    unsigned char b;
    std::memcpy(&b, &probe, 1);
    return b == 1;
}

template <typename T>
void write_pod(std::ostream& os, T v) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    if (!host_is_little_endian())
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(buf[i], buf[sizeof(T) - 1 - i]);
    os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
    unsigned char buf[sizeof(T)];
    is.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (!is) throw std::runtime_error("weight file: truncated");
    if (!host_is_little_endian())
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(buf[i], buf[sizeof(T) - 1 - i]);
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

}  // namespace

void save_params(const MlpParameters& params, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write weight file '" + path + "'");
    os.write(kMagic, 4);
    write_pod<std::uint32_t>(os, kVersion);
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(params.weights.size()));
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        const auto& w = params.weights[l];
        write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(w.rows()));
        write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(w.cols()));
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c) write_pod<double>(os, w(r, c));
        const auto& b = params.biases[l];
        write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(b.size()));
        for (Eigen::Index i = 0; i < b.size(); ++i) write_pod<double>(os, b[i]);
    }
    if (!os) throw std::runtime_error("failed writing weight file '" + path + "'");
}

MlpParameters load_params(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open weight file '" + path + "'");
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("weight file '" + path + "': bad magic");
    const auto version = read_pod<std::uint32_t>(is);
    if (version != kVersion)
        throw std::runtime_error("weight file '" + path + "': unsupported version");
    const auto layers = read_pod<std::uint32_t>(is);
    MlpParameters p;
    for (std::uint32_t l = 0; l < layers; ++l) {
        const auto rows = read_pod<std::uint64_t>(is);
        const auto cols = read_pod<std::uint64_t>(is);
        Eigen::MatrixXd w(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = read_pod<double>(is);
        const auto blen = read_pod<std::uint64_t>(is);
        Eigen::VectorXd b(static_cast<Eigen::Index>(blen));
        for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = read_pod<double>(is);
        p.weights.push_back(std::move(w));
        p.biases.push_back(std::move(b));
    }
    return p;
}

}  // namespace swiptsim
