#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geosurf {

enum class Errc {
  BadParameters,
  UnknownVertex,
  DisconnectedGraph,
  NonPositiveEdge,
  InvalidEmbedding,
  MissingOrigin,
  InvalidSpace,
  NegativeRadius,
  NoEmbedding,
  BallTouchesOuterFace,
  NotInjective,
  EmptyDomain,
  NonGeodesicSpace,
  UnboundedFactor,
  UnsupportedFamily,
  BadRegion,
  BadEpsilon,
  BadRadii,
  EmptyNormalizer,
  SupportOutsideDomain,
  ZeroMeasure,
  InsufficientScales,
  InsufficientSamples,
  InsufficientRadii,
  RegionTooSmall,
  ScalesTooLarge,
  InvalidCurve,
  EpsilonTooLarge,
  LoopMeetsTarget,
  NoSurroundingLoop,
  LayerEscapedRegion,
  NotFatEnough,
  NoBoundedComponent,
  RepeatedVertex,
  SigmaDoesNotSeparate,
  ZeroMeasureOnBall,
  ConfigInvalid,
  AnalysisFailed,
  MissingArtifacts,
  IoError,
};

std::string_view to_string(Errc code) noexcept;

/// Library failure tagged with an error code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, Errc code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace geosurf
