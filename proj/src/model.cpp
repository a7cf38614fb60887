#include "rvfl/model.hpp"

#include "rvfl/errors.hpp"

#include <cmath>
#include <numbers>

namespace rvfl {

std::string to_string(Configuration c) {
    std::string out = c.direct_links ? "+dl" : "-dl";
    out += c.output_bias ? "+b" : "-b";
    return out;
}

Configuration parse_configuration(std::string_view text) {
    // Accept the typographic minus and "--" that appear in printed tables.
    std::string s;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text.compare(i, 3, "\xE2\x80\x93") == 0 || text.compare(i, 3, "\xE2\x88\x92") == 0) {
            s += '-';
            i += 2;
        } else if (text.compare(i, 2, "--") == 0) {
            s += '-';
            ++i;
        } else {
            s += text[i];
        }
    }
    if (s == "+dl+b") return {true, true};
    if (s == "+dl-b") return {true, false};
    if (s == "-dl+b") return {false, true};
    if (s == "-dl-b") return {false, false};
    throw InvalidParameter("unknown configuration '" + std::string(text) +
                           "' (expected +dl+b, +dl-b, -dl+b or -dl-b)");
}

void Topology::validate() const {
    if (n < 1) throw InvalidParameter("topology: input count must be >= 1");
    if (m < 1) throw InvalidParameter("topology: hidden node count must be >= 1");
}

std::string_view to_string(StrategyKind k) {
    switch (k) {
        case StrategyKind::Gs: return "Gs";
        case StrategyKind::Gu: return "Gu";
        case StrategyKind::GAlpha: return "Galpha";
    }
    return "?";
}

StrategyKind parse_strategy_kind(std::string_view text) {
    if (text == "Gs" || text == "gs") return StrategyKind::Gs;
    if (text == "Gu" || text == "gu") return StrategyKind::Gu;
    if (text == "Galpha" || text == "GAlpha" || text == "galpha" || text == "G\xCE\xB1") {
        return StrategyKind::GAlpha;
    }
    throw InvalidParameter("unknown strategy '" + std::string(text) +
                           "' (expected Gs, Gu or Galpha)");
}

StrategyKind kind_of(const InitStrategy& s) {
    switch (s.index()) {
        case 0: return StrategyKind::Gs;
        case 1: return StrategyKind::Gu;
        default: return StrategyKind::GAlpha;
    }
}

std::string describe(const InitStrategy& s) {
    auto num = [](double v) {
        std::string t = std::to_string(v);
        t.erase(t.find_last_not_of('0') + 1);
        if (!t.empty() && t.back() == '.') t.pop_back();
        return t;
    };
    if (const auto* g = std::get_if<StandardInit>(&s)) return "Gs(u=" + num(g->u) + ")";
    if (const auto* g = std::get_if<AnchoredInit>(&s)) return "Gu(u=" + num(g->u) + ")";
    const auto& g = std::get<SlopeAngleInit>(s);
    return "Galpha(" + num(g.alpha_min_deg) + "," + num(g.alpha_max_deg) + ")";
}

HiddenLayer HiddenLayer::prefix(std::size_t k) const {
    if (k < 1 || k > nodes()) throw InvalidParameter("HiddenLayer::prefix: node count out of range");
    const auto kk = static_cast<Eigen::Index>(k);
    HiddenLayer out;
    out.weights = weights.topRows(kk);
    out.biases = biases.head(kk);
    if (!anchors.empty()) out.anchors.assign(anchors.begin(), anchors.begin() + kk);
    return out;
}

namespace {

void check_u(double u) {
    if (!(u > 0.0) || !std::isfinite(u)) throw InvalidParameter("u must be finite and > 0");
}

void check_inputs(const Topology& topology, const Matrix& x) {
    if (x.rows() < 1) throw InvalidInput("anchored init needs at least one training point");
    if (static_cast<std::size_t>(x.cols()) != topology.n) {
        throw InvalidInput("training inputs have " + std::to_string(x.cols()) +
                           " columns, topology expects " + std::to_string(topology.n));
    }
}

// a . x summed left to right. hidden_output uses the same order, so an
// anchored node evaluates to exactly zero pre-activation at its anchor.
template <typename W, typename X>
double dot_in_order(const W& a, const X& x) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.size(); ++j) s += a(j) * x(j);
    return s;
}

void anchor_biases(HiddenLayer& layer, const Matrix& x, Rng& rng, Eigen::Index i) {
    std::uniform_int_distribution<std::size_t> pick(0, static_cast<std::size_t>(x.rows()) - 1);
    const std::size_t row = pick(rng);
    layer.anchors[static_cast<std::size_t>(i)] = row;
    layer.biases(i) = -dot_in_order(layer.weights.row(i), x.row(static_cast<Eigen::Index>(row)));
}

HiddenLayer allocate(const Topology& topology, bool anchored) {
    topology.validate();
    HiddenLayer layer;
    layer.weights.resize(static_cast<Eigen::Index>(topology.m),
                         static_cast<Eigen::Index>(topology.n));
    layer.biases.resize(static_cast<Eigen::Index>(topology.m));
    if (anchored) layer.anchors.resize(topology.m);
    return layer;
}

}  // namespace

// All initializers draw node by node, so the first k nodes of an m-node layer
// equal a k-node layer drawn from the same engine state.

HiddenLayer init_hidden_gs(const Topology& topology, double u, Rng& rng) {
    check_u(u);
    HiddenLayer layer = allocate(topology, false);
    std::uniform_real_distribution<double> dist(-u, u);
    for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) {
        for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) layer.weights(i, j) = dist(rng);
        layer.biases(i) = dist(rng);
    }
    return layer;
}

HiddenLayer init_hidden_gu(const Topology& topology, double u, const Matrix& x, Rng& rng) {
    check_u(u);
    check_inputs(topology, x);
    HiddenLayer layer = allocate(topology, true);
    std::uniform_real_distribution<double> dist(-u, u);
    for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) {
        for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) layer.weights(i, j) = dist(rng);
        anchor_biases(layer, x, rng, i);
    }
    return layer;
}

HiddenLayer init_hidden_galpha(const Topology& topology, double alpha_min_deg,
                               double alpha_max_deg, const Matrix& x, Rng& rng) {
    if (!(alpha_min_deg >= 0.0 && alpha_min_deg < alpha_max_deg && alpha_max_deg <= 90.0)) {
        throw InvalidParameter("slope angles must satisfy 0 <= alpha_min < alpha_max <= 90 degrees");
    }
    check_inputs(topology, x);
    HiddenLayer layer = allocate(topology, true);
    std::uniform_real_distribution<double> angle(alpha_min_deg, alpha_max_deg);
    std::bernoulli_distribution negative(0.5);
    constexpr double deg = std::numbers::pi / 180.0;
    for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) {
        for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) {
            double a = angle(rng);
            while (a >= 90.0) a = angle(rng);  // tan(90 deg) is unbounded
            const double w = 4.0 * std::tan(a * deg);
            layer.weights(i, j) = negative(rng) ? -w : w;
        }
        anchor_biases(layer, x, rng, i);
    }
    return layer;
}

HiddenLayer init_hidden(const Topology& topology, const InitStrategy& strategy, const Matrix& x,
                        Rng& rng) {
    if (const auto* s = std::get_if<StandardInit>(&strategy)) {
        return init_hidden_gs(topology, s->u, rng);
    }
    if (const auto* s = std::get_if<AnchoredInit>(&strategy)) {
        return init_hidden_gu(topology, s->u, x, rng);
    }
    const auto& s = std::get<SlopeAngleInit>(strategy);
    return init_hidden_galpha(topology, s.alpha_min_deg, s.alpha_max_deg, x, rng);
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

Matrix hidden_output(const HiddenLayer& hidden, const Matrix& x) {
    if (x.cols() != hidden.weights.cols()) {
        throw InvalidInput("hidden_output: inputs have " + std::to_string(x.cols()) +
                           " columns, hidden layer expects " +
                           std::to_string(hidden.weights.cols()));
    }
    const Eigen::Index rows = x.rows();
    const Eigen::Index m = hidden.weights.rows();
    Matrix h(rows, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto a = hidden.weights.row(i);
        const double b = hidden.biases(i);
        for (Eigen::Index l = 0; l < rows; ++l) h(l, i) = sigmoid(dot_in_order(a, x.row(l)) + b);
    }
    return h;
}

Matrix assemble_design(const Topology& topology, const Matrix& x, const Matrix& h) {
    if (x.rows() != h.rows()) {
        throw InvalidInput("assemble_design: X has " + std::to_string(x.rows()) +
                           " rows but H has " + std::to_string(h.rows()));
    }
    if (topology.direct_links && static_cast<std::size_t>(x.cols()) != topology.n) {
        throw InvalidInput("assemble_design: X column count does not match topology");
    }
    const Eigen::Index bias_cols = topology.output_bias ? 1 : 0;
    const Eigen::Index link_cols = topology.direct_links ? x.cols() : 0;
    Matrix d(x.rows(), bias_cols + link_cols + h.cols());
    if (bias_cols) d.col(0).setOnes();
    if (link_cols) d.middleCols(bias_cols, link_cols) = x;
    d.rightCols(h.cols()) = h;
    return d;
}

TrainedModel fit_output_weights(const Topology& topology, const InitStrategy& strategy,
                                HiddenLayer hidden, const Dataset& data) {
    topology.validate();
    if (data.dim() != topology.n) {
        throw InvalidInput("train: dataset has " + std::to_string(data.dim()) +
                           " inputs, topology expects " + std::to_string(topology.n));
    }
    if (hidden.nodes() != topology.m || hidden.inputs() != topology.n) {
        throw InvalidInput("train: hidden layer does not match topology");
    }
    const Matrix design = assemble_design(topology, data.x, hidden_output(hidden, data.x));
    TrainedModel model{topology, strategy, std::move(hidden), {}, std::nullopt};
    model.beta = solve_least_squares(design, data.y);
    return model;
}

TrainedModel train(const Topology& topology, const InitStrategy& strategy, const Dataset& data,
                   Rng& rng) {
    topology.validate();
    if (data.size() < 1) throw InvalidInput("train: empty dataset");
    if (data.dim() != topology.n) {
        throw InvalidInput("train: dataset has " + std::to_string(data.dim()) +
                           " inputs, topology expects " + std::to_string(topology.n));
    }
    HiddenLayer hidden = init_hidden(topology, strategy, data.x, rng);
    return fit_output_weights(topology, strategy, std::move(hidden), data);
}

Decomposition decompose(const TrainedModel& model, const Matrix& x) {
    const Topology& t = model.topology;
    if (static_cast<std::size_t>(x.cols()) != t.n) {
        throw InvalidInput("predict: inputs have " + std::to_string(x.cols()) +
                           " columns, model expects " + std::to_string(t.n));
    }
    if (static_cast<std::size_t>(model.beta.size()) != t.width()) {
        throw InvalidInput("predict: beta length does not match topology");
    }
    const Eigen::Index rows = x.rows();
    Eigen::Index offset = 0;
    Decomposition d{Vector::Zero(rows), Vector::Zero(rows), Vector::Zero(rows)};
    if (t.output_bias) d.bias.setConstant(model.beta(offset++));
    if (t.direct_links) {
        const auto n = static_cast<Eigen::Index>(t.n);
        d.linear = x * model.beta.segment(offset, n);
        offset += n;
    }
    d.nonlinear = hidden_output(model.hidden, x) * model.beta.tail(model.beta.size() - offset);
    return d;
}

Vector predict(const TrainedModel& model, const Matrix& x) {
    if (static_cast<std::size_t>(x.cols()) != model.topology.n) {
        throw InvalidInput("predict: inputs have " + std::to_string(x.cols()) +
                           " columns, model expects " + std::to_string(model.topology.n));
    }
    const Matrix design =
        assemble_design(model.topology, x, hidden_output(model.hidden, x));
    if (design.cols() != model.beta.size()) {
        throw InvalidInput("predict: beta length does not match topology");
    }
    return design * model.beta;
}

}  // namespace rvfl
