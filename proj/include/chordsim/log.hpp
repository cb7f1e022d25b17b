#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace chordsim {

using WarningSink = std::function<void(std::string_view)>;

// Non-fatal diagnostics (boundary mass, validity guards). Defaults to stderr.
void warn(std::string_view message);

// Replaces the process-wide sink and returns the previous one. Passing an
// empty function silences warnings.
WarningSink set_warning_sink(WarningSink sink);

}  // namespace chordsim
