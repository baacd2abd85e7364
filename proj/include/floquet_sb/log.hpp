#pragma once

#include <functional>
#include <string>

namespace floquet_sb::log {

using Sink = std::function<void(const std::string&)>;

/// Emit a warning. Identical messages are reported once per process.
void warn(const std::string& message);

/// Replace the sink (stderr by default). Returns the previous sink.
Sink set_sink(Sink sink);

/// Forget which messages were already reported.
void reset_seen();

}  // namespace floquet_sb::log
