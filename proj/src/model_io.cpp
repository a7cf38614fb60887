#include "rvfl/model.hpp"

#include "rvfl/errors.hpp"

#include <json.hpp>

namespace rvfl {

using nlohmann::json;

namespace {

json strategy_json(const InitStrategy& s) {
    json j;
    j["kind"] = std::string(to_string(kind_of(s)));
    if (const auto* g = std::get_if<StandardInit>(&s)) j["u"] = g->u;
    if (const auto* g = std::get_if<AnchoredInit>(&s)) j["u"] = g->u;
    if (const auto* g = std::get_if<SlopeAngleInit>(&s)) {
        j["alpha_min_deg"] = g->alpha_min_deg;
        j["alpha_max_deg"] = g->alpha_max_deg;
    }
    return j;
}

InitStrategy strategy_from(const json& j) {
    switch (parse_strategy_kind(j.at("kind").get<std::string>())) {
        case StrategyKind::Gs: return StandardInit{j.at("u").get<double>()};
        case StrategyKind::Gu: return AnchoredInit{j.at("u").get<double>()};
        case StrategyKind::GAlpha:
            return SlopeAngleInit{j.at("alpha_min_deg").get<double>(),
                                  j.at("alpha_max_deg").get<double>()};
    }
    throw InvalidInput("model JSON: bad strategy");
}

std::vector<double> flatten(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string model_to_json(const TrainedModel& model) {
    const Topology& t = model.topology;
    json j;
    j["topology"] = {{"n", t.n},
                     {"m", t.m},
                     {"direct_links", t.direct_links},
                     {"output_bias", t.output_bias}};
    j["strategy"] = strategy_json(model.strategy);
    std::vector<double> weights;
    weights.reserve(static_cast<std::size_t>(model.hidden.weights.size()));
    for (Eigen::Index i = 0; i < model.hidden.weights.rows(); ++i) {
        for (Eigen::Index k = 0; k < model.hidden.weights.cols(); ++k) {
            weights.push_back(model.hidden.weights(i, k));
        }
    }
    j["weights"] = weights;
    j["biases"] = flatten(model.hidden.biases);
    j["anchors"] = model.hidden.anchors;
    j["beta"] = flatten(model.beta);
    j["seed"] = model.seed ? json(*model.seed) : json(nullptr);
    return j.dump(2);
}

TrainedModel model_from_json(std::string_view text) {
    try {
        const json j = json::parse(text);
        TrainedModel model;
        const json& t = j.at("topology");
        model.topology.n = t.at("n").get<std::size_t>();
        model.topology.m = t.at("m").get<std::size_t>();
        model.topology.direct_links = t.at("direct_links").get<bool>();
        model.topology.output_bias = t.at("output_bias").get<bool>();
        model.topology.validate();
        model.strategy = strategy_from(j.at("strategy"));

        const auto weights = j.at("weights").get<std::vector<double>>();
        const auto m = static_cast<Eigen::Index>(model.topology.m);
        const auto n = static_cast<Eigen::Index>(model.topology.n);
        if (static_cast<Eigen::Index>(weights.size()) != m * n) {
            throw InvalidInput("model JSON: weights length does not match topology");
        }
        model.hidden.weights = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                              Eigen::RowMajor>>(weights.data(), m, n);
        model.hidden.biases = to_vector(j.at("biases").get<std::vector<double>>());
        model.hidden.anchors = j.at("anchors").get<std::vector<std::size_t>>();
        model.beta = to_vector(j.at("beta").get<std::vector<double>>());
        if (model.hidden.biases.size() != m) {
            throw InvalidInput("model JSON: biases length does not match topology");
        }
        if (static_cast<std::size_t>(model.beta.size()) != model.topology.width()) {
            throw InvalidInput("model JSON: beta length does not match topology");
        }
        if (!model.hidden.anchors.empty() && model.hidden.anchors.size() != model.topology.m) {
            throw InvalidInput("model JSON: anchors length does not match topology");
        }
        if (!j.at("seed").is_null()) model.seed = j.at("seed").get<std::uint64_t>();
        return model;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("model JSON: ") + e.what());
    }
}

}  // namespace rvfl
