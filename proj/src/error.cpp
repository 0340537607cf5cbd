#include "capharm/error.hpp"

namespace capharm {

Error::Error(ErrorCategory category, std::string kind, const std::string& message)
    : std::runtime_error(kind + ": " + message), category_(category), kind_(std::move(kind)) {}

}  // namespace capharm
