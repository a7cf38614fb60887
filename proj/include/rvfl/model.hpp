#pragma once

// Random vector functional link network with a single sigmoid hidden layer.
//
//   f(x) = beta_0 + sum_j beta_j x_j + sum_i beta_{n+i} h_i(x)
//   h_i(x) = 1 / (1 + exp(-(a_i . x + b_i)))
//
// Hidden parameters (a_i, b_i) are drawn once and never trained; beta is the
// minimum-norm least-squares solution over the design [1 X H], where the ones
// column and the X block are present only when the topology asks for them.

#include "rvfl/numkernel.hpp"
#include "rvfl/rng.hpp"
#include "rvfl/synthdata.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rvfl {

/// Output-layer structure: direct input links and/or an output bias.
struct Configuration {
    bool direct_links = true;
    bool output_bias = true;

    friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// "+dl+b", "+dl-b", "-dl+b", "-dl-b"
std::string to_string(Configuration c);
Configuration parse_configuration(std::string_view text);

struct Topology {
    std::size_t n = 1;  // inputs
    std::size_t m = 1;  // hidden nodes
    bool direct_links = true;
    bool output_bias = true;

    Topology() = default;
    Topology(std::size_t inputs, std::size_t nodes, Configuration c)
        : n(inputs), m(nodes), direct_links(c.direct_links), output_bias(c.output_bias) {}

    Configuration configuration() const { return {direct_links, output_bias}; }

    /// Width of the design matrix.
    std::size_t width() const { return (output_bias ? 1 : 0) + (direct_links ? n : 0) + m; }

    /// Throws InvalidParameter unless n >= 1 and m >= 1.
    void validate() const;

    friend bool operator==(const Topology&, const Topology&) = default;
};

/// Weights and biases from U(-u, u).
struct StandardInit {
    double u = 1.0;
    friend bool operator==(const StandardInit&, const StandardInit&) = default;
};

/// Weights from U(-u, u); each bias puts the sigmoid's inflection on a random
/// training point: b_i = -a_i . x*_i.
struct AnchoredInit {
    double u = 1.0;
    friend bool operator==(const AnchoredInit&, const AnchoredInit&) = default;
};

/// Slope angles |alpha| ~ U(alpha_min, alpha_max) in degrees with a random
/// sign, weight = 4 tan(alpha); biases anchored as in AnchoredInit.
struct SlopeAngleInit {
    double alpha_min_deg = 0.0;
    double alpha_max_deg = 90.0;
    friend bool operator==(const SlopeAngleInit&, const SlopeAngleInit&) = default;
};

using InitStrategy = std::variant<StandardInit, AnchoredInit, SlopeAngleInit>;

enum class StrategyKind { Gs, Gu, GAlpha };

std::string_view to_string(StrategyKind k);
/// Accepts "Gs", "Gu", "Galpha" / "GAlpha" / "Gα".
StrategyKind parse_strategy_kind(std::string_view text);
StrategyKind kind_of(const InitStrategy& s);
/// Short form like "Gs(u=5)" or "Galpha(30,60)".
std::string describe(const InitStrategy& s);

struct HiddenLayer {
    Matrix weights;  // m x n, row i is a_i
    Vector biases;   // m
    // Row index into the training inputs that anchors each node; empty for
    // StandardInit.
    std::vector<std::size_t> anchors;

    std::size_t nodes() const { return static_cast<std::size_t>(weights.rows()); }
    std::size_t inputs() const { return static_cast<std::size_t>(weights.cols()); }

    /// First k nodes.
    HiddenLayer prefix(std::size_t k) const;
};

HiddenLayer init_hidden_gs(const Topology& topology, double u, Rng& rng);
HiddenLayer init_hidden_gu(const Topology& topology, double u, const Matrix& x, Rng& rng);
HiddenLayer init_hidden_galpha(const Topology& topology, double alpha_min_deg,
                               double alpha_max_deg, const Matrix& x, Rng& rng);
HiddenLayer init_hidden(const Topology& topology, const InitStrategy& strategy, const Matrix& x,
                        Rng& rng);

/// Numerically stable logistic function.
double sigmoid(double z);

/// N x m matrix of hidden activations.
Matrix hidden_output(const HiddenLayer& hidden, const Matrix& x);

/// [1 X H] with absent blocks omitted.
Matrix assemble_design(const Topology& topology, const Matrix& x, const Matrix& h);

struct TrainedModel {
    Topology topology;
    InitStrategy strategy;
    HiddenLayer hidden;
    Vector beta;  // [beta_0 | beta_1..beta_n | beta_{n+1}..beta_{n+m}], absent blocks dropped
    std::optional<std::uint64_t> seed;
};

TrainedModel train(const Topology& topology, const InitStrategy& strategy, const Dataset& data,
                   Rng& rng);

/// Solves for beta with a given hidden layer (no random draws).
TrainedModel fit_output_weights(const Topology& topology, const InitStrategy& strategy,
                                HiddenLayer hidden, const Dataset& data);

Vector predict(const TrainedModel& model, const Matrix& x);

struct Decomposition {
    Vector linear;     // direct-link part
    Vector nonlinear;  // hidden-node part
    Vector bias;       // constant beta_0
};

Decomposition decompose(const TrainedModel& model, const Matrix& x);

/// JSON document with topology, strategy, weights (row-major), biases,
/// anchors, beta and seed. Doubles are written in shortest round-trip form.
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(std::string_view text);

}  // namespace rvfl
