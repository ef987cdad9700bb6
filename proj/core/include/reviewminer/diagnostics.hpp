#pragma once

#include <functional>
#include <string_view>

namespace reviewminer {

using WarningSink = std::function<void(std::string_view)>;

/// Emits a non-fatal diagnostic. Defaults to stderr with a "warning: " prefix.
void warn(std::string_view message);

/// Replaces the process-wide warning sink and returns the previous one.
/// Passing an empty function restores the stderr default.
WarningSink set_warning_sink(WarningSink sink);

// Installs a sink for the lifetime of the object.
class ScopedWarningSink {
 public:
  explicit ScopedWarningSink(WarningSink sink) : previous_(set_warning_sink(std::move(sink))) {}
  ~ScopedWarningSink() { set_warning_sink(std::move(previous_)); }
  ScopedWarningSink(const ScopedWarningSink&) = delete;
  ScopedWarningSink& operator=(const ScopedWarningSink&) = delete;

 private:
  WarningSink previous_;
};

}  // namespace reviewminer
