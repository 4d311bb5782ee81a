#include "qkdimg/errors.hpp"

namespace qkdimg {

std::string_view to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::parameter: return "parameter";
    case ErrorCategory::shape: return "shape";
    case ErrorCategory::key_length: return "key-length";
    case ErrorCategory::divergence: return "divergence";
    case ErrorCategory::cipher: return "cipher";
    case ErrorCategory::session: return "session";
    case ErrorCategory::insufficient_data: return "insufficient-data";
    case ErrorCategory::undefined_metric: return "undefined-metric";
    case ErrorCategory::format: return "format";
    case ErrorCategory::path: return "path";
    case ErrorCategory::dataset: return "dataset";
    case ErrorCategory::io: return "io";
    case ErrorCategory::usage: return "usage";
    case ErrorCategory::mismatch: return "mismatch";
  }
  return "unknown";
}

}  // namespace qkdimg
