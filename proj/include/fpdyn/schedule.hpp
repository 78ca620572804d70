#pragma once

#include <cstdint>
#include <vector>

#include "fpdyn/trace.hpp"

namespace fpdyn {

/// A scripted execution for the n-by-n identity game, plus markers for
/// epoch starts and phase boundaries. Every generator in constructions.hpp
/// certifies each step against the tie sets while emitting, so a Schedule
/// is valid by construction; replaying it through the validator must never
/// report a violation.
struct Schedule {
  int n = 0;
  std::vector<Step> steps;
  std::vector<EpochMark> epoch_marks;
  std::vector<PhaseMark> phase_marks;
};

inline Trace to_trace(const Schedule& s) {
  Trace tr;
  tr.header.matrix = MatrixDescriptor::identity(s.n);
  tr.header.policy_name = "scripted";
  tr.steps = s.steps;
  tr.epoch_marks = s.epoch_marks;
  tr.phase_marks = s.phase_marks;
  return tr;
}

}  // namespace fpdyn
