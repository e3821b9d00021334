#pragma once

#include <atomic>
#include <csignal>

namespace tools {

inline std::atomic<bool> g_interrupted{false};

inline void on_signal(int) { g_interrupted = true; }

inline void install_signal_handlers() {
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::signal(SIGPIPE, SIG_IGN);
}

}  // namespace tools
