#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evifuse/frame.hpp"

namespace evifuse {

/// Troubleshooting content linked to one diagnosable class label.
struct KnowledgeTuple {
    std::string process;
    std::string subprocess;
    std::string failure_mode;
    std::vector<std::string> causes;
    std::vector<std::string> effects;
    std::vector<std::string> recommendations;
    int rule_label = 0;   // unique across the knowledge base
    double weight = 1.0;  // expert confidence, reported but not re-fused
};

using KnowledgeBase = std::vector<KnowledgeTuple>;

inline constexpr const char* kKnowledgeBaseMagic = "EVIFUSE-KB-v1";

/// Loads a knowledge base from a JSON document of the shape
///   {"version": "EVIFUSE-KB-v1", "tuples": [{"process": str, "subprocess":
///    str, "failure_mode": str, "causes": [str...], "effects": [str...],
///    "recommendations": [str...], "label": int, "weight": num}...]}
/// The base may cover only part of the frame; uncovered labels simply have
/// no assessment.
/// @throws FileNotFoundError, ParseError, UnknownLabelError, DuplicateTupleError
KnowledgeBase kb_load(const std::string& path, const FramePtr& frame);

/// Serializes back to the same schema (generators, round-trip tests).
std::string kb_to_json(const KnowledgeBase& kb);

/// The tuple whose label equals the system decision; absence (an anomaly
/// label, an uncovered class, an empty base) is a value, not an error.
std::optional<KnowledgeTuple> match_assessment(const KnowledgeBase& kb, int y_sys);

}  // namespace evifuse
