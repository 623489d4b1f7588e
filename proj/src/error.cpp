#include "fkpp/error.hpp"

namespace fkpp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::NoPendant: return "NoPendant";
    case ErrorCode::NonpositiveLength: return "NonpositiveLength";
    case ErrorCode::MalformedGraph: return "MalformedGraph";
    case ErrorCode::InvalidDomain: return "InvalidDomain";
    case ErrorCode::OrbitNotClosed: return "OrbitNotClosed";
    case ErrorCode::LoopTooLong: return "LoopTooLong";
    case ErrorCode::MeshTooCoarse: return "MeshTooCoarse";
    case ErrorCode::BelowThreshold: return "BelowThreshold";
    case ErrorCode::OutsideRegion: return "OutsideRegion";
    case ErrorCode::NewtonStalled: return "NewtonStalled";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::LinearSolveFailure: return "LinearSolveFailure";
    case ErrorCode::NegativeInitialData: return "NegativeInitialData";
    case ErrorCode::ComparisonViolated: return "ComparisonViolated";
    case ErrorCode::NotAFlower: return "NotAFlower";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace fkpp
