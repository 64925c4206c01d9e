#include "dtwin/error.hpp"

namespace dtwin {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::config: return "config";
    case ErrorKind::invalid_state: return "invalid-state";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::invalid_plan: return "invalid-plan";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::degenerate_reservoir: return "degenerate-reservoir";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::rank_deficiency: return "rank-deficiency";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace dtwin
