#include <fstream>
#include <sstream>
#include <utility>

#include "evifuse/errors.hpp"
#include "evifuse/rules.hpp"
#include "json.hpp"

namespace evifuse {
namespace {

using nlohmann::json;

bool condition_holds(const RuleCondition& c, double v) {
    switch (c.comparator) {
        case Comparator::less: return v < c.threshold;
        case Comparator::less_equal: return v <= c.threshold;
        case Comparator::greater: return v > c.threshold;
        case Comparator::greater_equal: return v >= c.threshold;
        case Comparator::equal: return v == c.threshold;
        case Comparator::within_range: return c.threshold <= v && v <= c.threshold_high;
    }
    return false;
}

Comparator parse_comparator(const std::string& text, const std::string& where) {
    if (text == "<") return Comparator::less;
    if (text == "<=") return Comparator::less_equal;
    if (text == ">") return Comparator::greater;
    if (text == ">=") return Comparator::greater_equal;
    if (text == "=") return Comparator::equal;
    if (text == "within") return Comparator::within_range;
    throw ParseError(where + ": unknown comparator '" + text +
                     "' (expected <, <=, >, >=, =, within)");
}

const char* comparator_text(Comparator c) {
    switch (c) {
        case Comparator::less: return "<";
        case Comparator::less_equal: return "<=";
        case Comparator::greater: return ">";
        case Comparator::greater_equal: return ">=";
        case Comparator::equal: return "=";
        case Comparator::within_range: return "within";
    }
    return "?";
}

}  // namespace

double KnowledgeRule::weight() const {
    double sum = 0.0;
    for (const RuleCondition& c : conditions) sum += c.weight;
    return sum / static_cast<double>(conditions.size());
}

NamedObservation named_row(const std::vector<std::string>& names,
                           const std::vector<double>& row) {
    if (names.size() != row.size())
        throw LengthMismatchError("feature-name list and row width differ");
    NamedObservation obs;
    for (std::size_t i = 0; i < names.size(); ++i) obs[names[i]] = row[i];
    return obs;
}

RuleEvalResult rule_eval(const RuleModel& model, const NamedObservation& obs) {
    for (std::size_t r = 0; r < model.rules.size(); ++r) {
        const KnowledgeRule& rule = model.rules[r];
        bool holds = true;
        for (const RuleCondition& c : rule.conditions) {
            const auto it = obs.find(c.variable);
            if (it == obs.end())
                throw MissingVariableError("rule condition needs variable '" + c.variable +
                                           "' absent from the observation");
            if (!condition_holds(c, it->second)) {
                holds = false;
                break;
            }
        }
        if (holds) return RuleEvalResult{rule.label, rule.weight(), static_cast<int>(r)};
    }
    return RuleEvalResult{model.default_label, 1.0, -1};
}

MassFunction rule_to_mass(const RuleModel& model, int active_label, double active_weight) {
    return prediction_to_mass(active_label,
                              ConfidenceWeights::uniform(model.frame, active_weight), model.k);
}

RuleVerdict klafate_infer(const RuleModel& model, const NamedObservation& obs) {
    const RuleEvalResult active = rule_eval(model, obs);
    MassFunction mass = rule_to_mass(model, active.active_label, active.active_weight);
    const int y_ke = mass.argmax_label();
    const double u = mass.theta();
    return RuleVerdict{y_ke,          std::move(mass),      u,
                       active.active_label, active.active_weight, active.rule_index};
}

RuleVerdict klafate_infer_row(const RuleModel& model,
                              const std::vector<std::string>& feature_names,
                              const std::vector<double>& row) {
    return klafate_infer(model, named_row(feature_names, row));
}

RuleModel load_rule_model(const std::string& path, int sensitivity_exponent) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError("cannot open rule file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& ex) {
        throw ParseError("rule file '" + path + "': " + ex.what());
    }

    try {
        if (!doc.is_object() || !doc.contains("frame") || !doc.contains("rules") ||
            !doc.contains("default_label"))
            throw ParseError("rule file must be an object with frame, default_label, rules");

        const FramePtr frame = make_frame(doc.at("frame").get<std::vector<int>>());
        const int default_label = doc.at("default_label").get<int>();
        if (!frame->contains(default_label))
            throw UnknownLabelError("default_label " + std::to_string(default_label) +
                                    " is not in the frame");

        RuleModel model{frame, {}, default_label, k_factor(sensitivity_exponent)};
        std::size_t r = 0;
        for (const json& jrule : doc.at("rules")) {
            const std::string rule_tag = "rules[" + std::to_string(r) + "]";
            KnowledgeRule rule;
            rule.label = jrule.at("label").get<int>();
            if (!frame->contains(rule.label))
                throw UnknownLabelError(rule_tag + ": label " + std::to_string(rule.label) +
                                        " is not in the frame");
            const json& jconds = jrule.at("conditions");
            if (!jconds.is_array() || jconds.empty())
                throw ParseError(rule_tag + ": conditions must be a non-empty array");
            std::size_t ci = 0;
            for (const json& jc : jconds) {
                const std::string cond_tag = rule_tag + ".conditions[" + std::to_string(ci) + "]";
                RuleCondition cond;
                cond.variable = jc.at("variable").get<std::string>();
                cond.comparator =
                    parse_comparator(jc.at("comparator").get<std::string>(), cond_tag);
                const json& jt = jc.at("threshold");
                if (cond.comparator == Comparator::within_range) {
                    if (!jt.is_array() || jt.size() != 2)
                        throw ParseError(cond_tag + ": 'within' takes threshold [low, high]");
                    cond.threshold = jt.at(0).get<double>();
                    cond.threshold_high = jt.at(1).get<double>();
                    if (!(cond.threshold < cond.threshold_high))
                        throw ParseError(cond_tag + ": range low must be below high");
                } else {
                    cond.threshold = jt.get<double>();
                }
                cond.weight = jc.value("weight", 1.0);
                if (cond.weight < 0.0 || cond.weight > 1.0)
                    throw InvalidWeightError(cond_tag + ": weight " +
                                             std::to_string(cond.weight) +
                                             " outside [0,1]");
                rule.conditions.push_back(std::move(cond));
                ++ci;
            }
            model.rules.push_back(std::move(rule));
            ++r;
        }
        return model;
    } catch (const json::exception& ex) {
        throw ParseError("rule file '" + path + "': " + ex.what());
    }
}

std::string rule_model_to_json(const RuleModel& model) {
    json doc;
    doc["frame"] = model.frame->labels();
    doc["default_label"] = model.default_label;
    doc["rules"] = json::array();
    for (const KnowledgeRule& rule : model.rules) {
        json jrule;
        jrule["label"] = rule.label;
        jrule["conditions"] = json::array();
        for (const RuleCondition& c : rule.conditions) {
            json jc;
            jc["variable"] = c.variable;
            jc["comparator"] = comparator_text(c.comparator);
            if (c.comparator == Comparator::within_range)
                jc["threshold"] = json::array({c.threshold, c.threshold_high});
            else
                jc["threshold"] = c.threshold;
            jc["weight"] = c.weight;
            jrule["conditions"].push_back(std::move(jc));
        }
        doc["rules"].push_back(std::move(jrule));
    }
    return doc.dump(2) + "\n";
}

}  // namespace evifuse
