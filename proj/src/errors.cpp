// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include "mirror/errors.hpp"

namespace mirror {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::NotClosed: return "NotClosed";
    case Errc::NotConvex: return "NotConvex";
    case Errc::DegeneratePiece: return "DegeneratePiece";
    case Errc::JointPoint: return "JointPoint";
    case Errc::FlatMatch: return "FlatMatch";
    case Errc::NoIntersection: return "NoIntersection";
    case Errc::TangentLine: return "TangentLine";
    case Errc::RhoTooLarge: return "RhoTooLarge";
    case Errc::OnMirror: return "OnMirror";
    case Errc::MultipleIntersections: return "MultipleIntersections";
    case Errc::TangentialIntersection: return "TangentialIntersection";
    case Errc::NotAdmissible: return "NotAdmissible";
    case Errc::DegenerateChord: return "DegenerateChord";
    case Errc::OrientationViolated: return "OrientationViolated";
    case Errc::EmptyHingeFreeArc: return "EmptyHingeFreeArc";
    case Errc::FamilyViolation: return "FamilyViolation";
    case Errc::NoTermination: return "NoTermination";
    case Errc::OrderingViolated: return "OrderingViolated";
    case Errc::ArcsIntersect: return "ArcsIntersect";
    case Errc::ConnectorImpossible: return "ConnectorImpossible";
    case Errc::CoincidentPoints: return "CoincidentPoints";
    case Errc::StepTooLarge: return "StepTooLarge";
    case Errc::InsufficientSurvivors: return "InsufficientSurvivors";
    case Errc::MeshQualityFailure: return "MeshQualityFailure";
    case Errc::DegenerateTriangle: return "DegenerateTriangle";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::MultiplicityUnresolved: return "MultiplicityUnresolved";
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::UnknownArtifactKind: return "UnknownArtifactKind";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace mirror
