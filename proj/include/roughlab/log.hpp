#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace roughlab {

using LogSink = std::function<void(std::string_view level, std::string_view message)>;

/// Replaces the process-wide sink (stderr by default); returns the previous one.
LogSink set_log_sink(LogSink sink);
void log_warning(std::string_view message);
void log_info(std::string_view message);

}  // namespace roughlab
