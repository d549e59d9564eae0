#include "geosurf/error.hpp"

namespace geosurf {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::BadParameters: return "BadParameters";
    case Errc::UnknownVertex: return "UnknownVertex";
    case Errc::DisconnectedGraph: return "DisconnectedGraph";
    case Errc::NonPositiveEdge: return "NonPositiveEdge";
    case Errc::InvalidEmbedding: return "InvalidEmbedding";
    case Errc::MissingOrigin: return "MissingOrigin";
    case Errc::InvalidSpace: return "InvalidSpace";
    case Errc::NegativeRadius: return "NegativeRadius";
    case Errc::NoEmbedding: return "NoEmbedding";
    case Errc::BallTouchesOuterFace: return "BallTouchesOuterFace";
    case Errc::NotInjective: return "NotInjective";
    case Errc::EmptyDomain: return "EmptyDomain";
    case Errc::NonGeodesicSpace: return "NonGeodesicSpace";
    case Errc::UnboundedFactor: return "UnboundedFactor";
    case Errc::UnsupportedFamily: return "UnsupportedFamily";
    case Errc::BadRegion: return "BadRegion";
    case Errc::BadEpsilon: return "BadEpsilon";
    case Errc::BadRadii: return "BadRadii";
    case Errc::EmptyNormalizer: return "EmptyNormalizer";
    case Errc::SupportOutsideDomain: return "SupportOutsideDomain";
    case Errc::ZeroMeasure: return "ZeroMeasure";
    case Errc::InsufficientScales: return "InsufficientScales";
    case Errc::InsufficientSamples: return "InsufficientSamples";
    case Errc::InsufficientRadii: return "InsufficientRadii";
    case Errc::RegionTooSmall: return "RegionTooSmall";
    case Errc::ScalesTooLarge: return "ScalesTooLarge";
    case Errc::InvalidCurve: return "InvalidCurve";
    case Errc::EpsilonTooLarge: return "EpsilonTooLarge";
    case Errc::LoopMeetsTarget: return "LoopMeetsTarget";
    case Errc::NoSurroundingLoop: return "NoSurroundingLoop";
    case Errc::LayerEscapedRegion: return "LayerEscapedRegion";
    case Errc::NotFatEnough: return "NotFatEnough";
    case Errc::NoBoundedComponent: return "NoBoundedComponent";
    case Errc::RepeatedVertex: return "RepeatedVertex";
    case Errc::SigmaDoesNotSeparate: return "SigmaDoesNotSeparate";
    case Errc::ZeroMeasureOnBall: return "ZeroMeasureOnBall";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::AnalysisFailed: return "AnalysisFailed";
    case Errc::MissingArtifacts: return "MissingArtifacts";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace geosurf
