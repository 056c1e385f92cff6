#pragma once
// Forest loading and trajectory encoding: turns raw place-name sequences
// into multi-level code sequences against a semantic forest.

#include "semtraj/model.hpp"

namespace semtraj {

// Raw forest rows before validation, e.g. as parsed from the TSV format.
struct ForestSource {
    std::vector<std::pair<std::string, std::vector<Code>>> rows;
};

// Validates the rows (non-empty, uniform component count, no duplicates) and
// builds the dictionary with per-level dense prefix ids.
SemanticForest load_forest(const ForestSource& source);

// Maps every place of `t` to its encoding, preserving order and repetitions.
// Names absent from the forest become the reserved unknown encoding; they
// never match anything downstream.
EncodedTrajectory encode_trajectory(const Trajectory& t, const SemanticForest& forest);

// The ordered prefix(h) sequence of an encoded trajectory; at h = levels this
// is the full encodings. Unknown places yield all-unknown prefixes.
std::vector<std::vector<Code>> level_view(const EncodedTrajectory& et, int h);

// Flat type-code sequence (level 1), the alphabet the shingler consumes.
std::vector<Code> type_view(const EncodedTrajectory& et);

} // namespace semtraj
