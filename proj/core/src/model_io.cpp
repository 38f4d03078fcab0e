#include "evifuse/model_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "evifuse/errors.hpp"
#include "json.hpp"
#include "spec_json.hpp"

namespace evifuse {
namespace {

using nlohmann::json;
using detail::spec_from_json;
using detail::spec_to_json;

// --- log-prior encoding -----------------------------------------------------
// JSON has no -inf; an unseen class's prior is stored as null.

json encode_log_prior(const std::vector<double>& values) {
    json out = json::array();
    for (double v : values) {
        if (std::isinf(v))
            out.push_back(nullptr);
        else
            out.push_back(v);
    }
    return out;
}

std::vector<double> decode_log_prior(const json& arr) {
    std::vector<double> out;
    for (const auto& v : arr) {
        if (v.is_null())
            out.push_back(-std::numeric_limits<double>::infinity());
        else
            out.push_back(v.get<double>());
    }
    return out;
}

// --- fitted states ----------------------------------------------------------

json nodes_to_json(const std::vector<TreeNode>& nodes) {
    json out = json::array();
    for (const TreeNode& n : nodes)
        out.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"left", n.left},
                       {"right", n.right},
                       {"leaf_class", n.leaf_class}});
    return out;
}

std::vector<TreeNode> nodes_from_json(const json& arr) {
    std::vector<TreeNode> nodes;
    for (const auto& j : arr) {
        TreeNode n;
        n.feature = j.at("feature").get<int>();
        n.threshold = j.at("threshold").get<double>();
        n.left = j.at("left").get<int>();
        n.right = j.at("right").get<int>();
        n.leaf_class = j.at("leaf_class").get<int>();
        nodes.push_back(n);
    }
    return nodes;
}

json state_to_json(const FittedState& state) {
    if (const auto* knn = std::get_if<KnnState>(&state))
        return {{"points", knn->points}, {"point_classes", knn->point_classes}};
    if (const auto* tree = std::get_if<TreeState>(&state))
        return {{"nodes", nodes_to_json(tree->nodes)}};
    if (const auto* nb = std::get_if<GaussianNbState>(&state))
        return {{"log_prior", encode_log_prior(nb->log_prior)},
                {"mean", nb->mean},
                {"var", nb->var}};
    const auto& boost = std::get<BoostState>(state);
    json stages = json::array();
    for (const auto& stage : boost.stages)
        stages.push_back({{"nodes", nodes_to_json(stage.stump.nodes)}, {"alpha", stage.alpha}});
    return {{"stages", stages}};
}

FittedState state_from_json(ClassifierKind kind, const json& j) {
    switch (kind) {
        case ClassifierKind::knn: {
            KnnState s;
            s.points = j.at("points").get<std::vector<std::vector<double>>>();
            s.point_classes = j.at("point_classes").get<std::vector<int>>();
            return s;
        }
        case ClassifierKind::decision_tree:
            return TreeState{nodes_from_json(j.at("nodes"))};
        case ClassifierKind::gaussian_nb: {
            GaussianNbState s;
            s.log_prior = decode_log_prior(j.at("log_prior"));
            s.mean = j.at("mean").get<std::vector<std::vector<double>>>();
            s.var = j.at("var").get<std::vector<std::vector<double>>>();
            return s;
        }
        case ClassifierKind::ada_boost_stumps: {
            BoostState s;
            for (const auto& stage : j.at("stages"))
                s.stages.push_back(
                    {TreeState{nodes_from_json(stage.at("nodes"))}, stage.at("alpha").get<double>()});
            return s;
        }
    }
    throw ParseError("unknown classifier kind tag");
}

}  // namespace

std::string ensemble_to_json(const EnsembleClassifier& ec) {
    json doc;
    doc["format"] = kModelMagic;
    doc["frame"] = ec.frame->labels();
    doc["sensitivity"] = {{"f", ec.k.f}, {"k", ec.k.k}};

    json members = json::array();
    for (const ClassifierModel& m : ec.members) {
        members.push_back({{"spec", spec_to_json(m.spec())},
                           {"standardizer",
                            {{"mean", m.standardizer().mean()},
                             {"stddev", m.standardizer().stddev()}}},
                           {"state", state_to_json(m.state())}});
    }
    doc["members"] = std::move(members);

    json weights = json::array();
    for (const ConfidenceWeights& w : ec.weights) weights.push_back(w.values());
    doc["weights"] = std::move(weights);

    return doc.dump(2) + "\n";
}

EnsembleClassifier ensemble_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("ensemble file is not valid JSON: ") + e.what());
    }
    try {
        const std::string magic = doc.at("format").get<std::string>();
        if (magic != kModelMagic)
            throw ParseError("unsupported ensemble format '" + magic + "', expected '" +
                             kModelMagic + "'");

        const FramePtr frame = make_frame(doc.at("frame").get<std::vector<int>>());
        SensitivityFactor k{doc.at("sensitivity").at("f").get<int>(),
                            doc.at("sensitivity").at("k").get<double>()};

        std::vector<ClassifierModel> members;
        for (const auto& jm : doc.at("members")) {
            ClassifierSpec spec = spec_from_json(jm.at("spec"));
            Standardizer standardizer(
                jm.at("standardizer").at("mean").get<std::vector<double>>(),
                jm.at("standardizer").at("stddev").get<std::vector<double>>());
            FittedState state = state_from_json(spec.kind, jm.at("state"));
            members.emplace_back(spec, frame, std::move(standardizer), std::move(state));
        }

        std::vector<ConfidenceWeights> weights;
        for (const auto& jw : doc.at("weights"))
            weights.emplace_back(frame, jw.get<std::vector<double>>());

        return make_ensemble(std::move(members), std::move(weights), k);
    } catch (const json::exception& e) {
        throw ParseError(std::string("ensemble file is missing fields: ") + e.what());
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(std::string("ensemble file is inconsistent: ") + e.what());
    }
}

void save_ensemble(const EnsembleClassifier& ec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FileNotFoundError("cannot open '" + path + "' for writing");
    out << ensemble_to_json(ec);
    if (!out) throw FileNotFoundError("failed while writing '" + path + "'");
}

EnsembleClassifier load_ensemble(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return ensemble_from_json(buffer.str());
}

}  // namespace evifuse
