#include "xplain/core/error.hpp"

namespace xplain {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::method_unavailable: return "method_unavailable";
    case ErrorCode::failed_precondition: return "failed_precondition";
    case ErrorCode::rank_deficient: return "rank_deficient";
    case ErrorCode::data_loss: return "data_loss";
    case ErrorCode::internal: return "internal";
  }
  return "internal";
}

}  // namespace xplain
