#include "mdich/errors.hpp"

namespace mdich {

Error::Error(std::string name, const std::string & message, ErrorCategory category)
    : std::runtime_error(name + ": " + message), name_(std::move(name)), category_(category)
{
}

}  // namespace mdich
