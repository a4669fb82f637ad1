#pragma once

#include <stdexcept>
#include <string>

namespace plcalib {

// Base class for every failure this library reports. All error conditions are
// named, typed exceptions so callers (and the experiment harness, which records
// them per report row instead of aborting) can distinguish causes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PLCALIB_DEFINE_ERROR(NAME)            \
  class NAME : public Error {                 \
   public:                                    \
    using Error::Error;                       \
  }

// numeric-kernel
PLCALIB_DEFINE_ERROR(RankDeficient);        // least-squares matrix numerically rank deficient
PLCALIB_DEFINE_ERROR(NoConvergence);        // iterative scheme exhausted its iteration cap
PLCALIB_DEFINE_ERROR(Diverged);             // optimization step could not decrease the objective

// camera-model
PLCALIB_DEFINE_ERROR(BehindCamera);         // point with nonpositive depth cannot be projected

// scene-gen
PLCALIB_DEFINE_ERROR(InvalidDimensions);    // checkerboard smaller than 3x3 or nonpositive square
PLCALIB_DEFINE_ERROR(TooFewRemaining);      // skip width leaves fewer than 3 poses

// homography
PLCALIB_DEFINE_ERROR(TooFewPoints);         // fewer than 4 correspondences
PLCALIB_DEFINE_ERROR(DegenerateConfiguration);  // correspondences do not determine a rank-3 H

// principal-line
PLCALIB_DEFINE_ERROR(DegenerateFrontalPose);  // board parallel to the image plane: no line direction
PLCALIB_DEFINE_ERROR(IllConditioned);         // constraint system too close to degenerate to trust
PLCALIB_DEFINE_ERROR(NearParallelLines);      // line bundle does not pin down an intersection point
PLCALIB_DEFINE_ERROR(TooFewLines);            // fewer lines than the operation needs

// zhang-baseline
PLCALIB_DEFINE_ERROR(DegenerateSet);        // too few views or all board planes parallel

// experiments-cli
PLCALIB_DEFINE_ERROR(ParseError);           // malformed config or corner file (message carries location)
PLCALIB_DEFINE_ERROR(InconsistentBoard);    // corner ids differ between poses of one corner file
PLCALIB_DEFINE_ERROR(EmptySelection);       // plot requested for a report with no matching rows
PLCALIB_DEFINE_ERROR(IoError);              // file could not be opened or written

#undef PLCALIB_DEFINE_ERROR

}  // namespace plcalib
