#include "radial/error.hpp"

namespace radial {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kCentreInsideSupport: return "CentreInsideSupport";
    case ErrorCode::kSupportOverlap: return "SupportOverlap";
    case ErrorCode::kScheduleUnderflow: return "ScheduleUnderflow";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kSubResolutionTube: return "SubResolutionTube";
    case ErrorCode::kWitnessTooSmall: return "WitnessTooSmall";
    case ErrorCode::kParamsViolation: return "ParamsViolation";
    case ErrorCode::kViewpointInsideTube: return "ViewpointInsideTube";
    case ErrorCode::kResolutionExceeded: return "ResolutionExceeded";
    case ErrorCode::kCollinearE: return "CollinearE";
    case ErrorCode::kAdmissibility: return "Admissibility";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

}  // namespace radial
