#pragma once

#include <functional>
#include <string>

namespace dqest {

using WarningHandler = std::function<void(const std::string&)>;

/// Routes a non-fatal diagnostic. Default handler prints to stderr.
void warn(const std::string& message);

/// Installs a handler and returns the previous one. An empty handler
/// discards warnings.
WarningHandler set_warning_handler(WarningHandler handler);

}  // namespace dqest
