#pragma once

#include <iostream>
#include <string>

namespace lawshield::log {

enum class Level { Quiet = 0, Info = 1, Debug = 2 };

/// Verbosity from LAWSHIELD_LOG (quiet|info|debug), default info.
Level level();

inline bool enabled(Level want) { return static_cast<int>(level()) >= static_cast<int>(want); }

inline void info(const std::string& msg) {
  if (enabled(Level::Info)) std::cerr << "[lawshield] " << msg << "\n";
}

inline void debug(const std::string& msg) {
  if (enabled(Level::Debug)) std::cerr << "[lawshield:debug] " << msg << "\n";
}

}  // namespace lawshield::log
