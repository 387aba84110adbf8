#include "numerosity/error.hpp"

namespace numerosity {

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::io:
      return 1;
    case ErrorKind::input_format:
      return 2;
    case ErrorKind::insufficient_data:
      return 3;
    case ErrorKind::configuration:
    case ErrorKind::domain:
      return 4;
  }
  return 1;
}

}  // namespace numerosity

#include <atomic>
#include <iostream>
#include <mutex>

#include "numerosity/log.hpp"

namespace numerosity {
namespace {
std::atomic<bool> g_warnings{true};
std::mutex g_warn_mutex;
}  // namespace

void warn(std::string_view message) {
  if (!g_warnings.load(std::memory_order_relaxed)) return;
  std::lock_guard lock(g_warn_mutex);
  std::cerr << "warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { g_warnings.store(enabled); }
bool warnings_enabled() { return g_warnings.load(); }

}  // namespace numerosity
