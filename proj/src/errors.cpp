#include "utilgeo/errors.hpp"

namespace utilgeo {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndifferencePoint: return "IndifferencePoint";
    case ErrorCode::NonStrictOrder: return "NonStrictOrder";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::EmptyPopulation: return "EmptyPopulation";
    case ErrorCode::DegenerateMean: return "DegenerateMean";
    case ErrorCode::InfiniteRatio: return "InfiniteRatio";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace utilgeo
