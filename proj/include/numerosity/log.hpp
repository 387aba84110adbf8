#pragma once

#include <string_view>

namespace numerosity {

/// Warnings go to stderr unless silenced. Thread-safe.
void warn(std::string_view message);
void set_warnings_enabled(bool enabled);
bool warnings_enabled();

}  // namespace numerosity
