#pragma once

#include <map>
#include <string>
#include <vector>

#include "evifuse/bpa.hpp"
#include "evifuse/frame.hpp"
#include "evifuse/mass.hpp"

namespace evifuse {

enum class Comparator { less, less_equal, greater, greater_equal, equal, within_range };

/// One threshold test over a named process variable, carrying the expert's
/// confidence in the test.
struct RuleCondition {
    std::string variable;
    Comparator comparator = Comparator::greater;
    double threshold = 0.0;       // single-threshold comparators
    double threshold_high = 0.0;  // upper bound for within_range (low < high)
    double weight = 1.0;          // confidence in [0,1]
};

/// A conjunction of conditions concluding in one class label. The rule weight
/// is the mean of its condition weights.
struct KnowledgeRule {
    int label = 0;
    std::vector<RuleCondition> conditions;  // non-empty
    double weight() const;
};

/// Ordered first-match rule list with an explicit "otherwise" arm.
struct RuleModel {
    FramePtr frame;
    std::vector<KnowledgeRule> rules;
    int default_label = 0;
    SensitivityFactor k;
};

/// Observations feed the rule model as named variables.
using NamedObservation = std::map<std::string, double>;

/// Builds the named view of a dataset row from its feature names.
NamedObservation named_row(const std::vector<std::string>& names,
                           const std::vector<double>& row);

struct RuleEvalResult {
    int active_label = 0;
    double active_weight = 1.0;
    int rule_index = -1;  // -1 means the otherwise arm
};

/// First rule (in model order) whose conjunction holds wins; the otherwise
/// arm answers with the default label at weight 1.
/// @throws MissingVariableError
RuleEvalResult rule_eval(const RuleModel& model, const NamedObservation& obs);

/// Evidence construction for the active rule: identical shape to
/// prediction_to_mass with one scalar weight on every class.
/// @throws LabelNotInFrameError
MassFunction rule_to_mass(const RuleModel& model, int active_label, double active_weight);

struct RuleVerdict {
    int y_ke = 0;
    MassFunction mass;
    double u = 0.0;        // frame mass of `mass`
    int active_label = 0;  // y_ke == active_label whenever active_weight > 0
    double active_weight = 1.0;
    int rule_index = -1;
};

/// rule_eval then rule_to_mass; the decision is the argmax of the evidence.
/// @throws MissingVariableError
RuleVerdict klafate_infer(const RuleModel& model, const NamedObservation& obs);
RuleVerdict klafate_infer_row(const RuleModel& model,
                              const std::vector<std::string>& feature_names,
                              const std::vector<double>& row);

/// Loads a rule model from a JSON document of the shape
///   {"frame": [int...], "default_label": int,
///    "rules": [{"label": int,
///               "conditions": [{"variable": str, "comparator": str,
///                               "threshold": num | [low, high],
///                               "weight": num}...]}...]}
/// Comparators: "<", "<=", ">", ">=", "=", "within". Diagnostics name the
/// offending rule/condition index.
/// @throws FileNotFoundError, ParseError, UnknownLabelError, InvalidWeightError
RuleModel load_rule_model(const std::string& path,
                          int sensitivity_exponent = kDefaultSensitivityExponent);

/// Serializes a model back to the same schema (used by generators and tests).
std::string rule_model_to_json(const RuleModel& model);

}  // namespace evifuse
