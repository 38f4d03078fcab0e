#pragma once

#include <string>

#include "evifuse/ensemble.hpp"

namespace evifuse {

/// First line of every ensemble file; bump on breaking layout changes.
inline constexpr const char* kModelMagic = "EVIFUSE-MODEL-v1";

/// Serializes the whole trained ensemble (frame, specs, standardizers, fitted
/// parameters, per-class weights, sensitivity factor) to a self-describing
/// JSON document. Doubles keep enough digits to round-trip exactly, so a
/// reloaded ensemble reproduces every prediction bit for bit.
std::string ensemble_to_json(const EnsembleClassifier& ec);

/// Parses the document produced by ensemble_to_json.
/// @throws ParseError on malformed JSON, wrong magic, or any inconsistency
///         the validating constructors reject
EnsembleClassifier ensemble_from_json(const std::string& text);

/// @throws Error subtypes from ensemble_to_json plus filesystem failures
///         reported as FileNotFoundError
void save_ensemble(const EnsembleClassifier& ec, const std::string& path);

/// @throws FileNotFoundError, ParseError
EnsembleClassifier load_ensemble(const std::string& path);

}  // namespace evifuse
