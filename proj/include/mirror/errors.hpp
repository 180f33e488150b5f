// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace mirror {

enum class Errc {
  NotClosed,
  NotConvex,
  DegeneratePiece,
  JointPoint,
  FlatMatch,
  NoIntersection,
  TangentLine,
  RhoTooLarge,
  OnMirror,
  MultipleIntersections,
  TangentialIntersection,
  NotAdmissible,
  DegenerateChord,
  OrientationViolated,
  EmptyHingeFreeArc,
  FamilyViolation,
  NoTermination,
  OrderingViolated,
  ArcsIntersect,
  ConnectorImpossible,
  CoincidentPoints,
  StepTooLarge,
  InsufficientSurvivors,
  MeshQualityFailure,
  DegenerateTriangle,
  NoConvergence,
  MultiplicityUnresolved,
  InvalidInput,
  UnknownArtifactKind,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mirror
