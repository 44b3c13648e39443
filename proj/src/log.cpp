#include "lawshield/log.hpp"

#include <cstdlib>

namespace lawshield::log {

Level level() {
  static const Level cached = [] {
    const char* env = std::getenv("LAWSHIELD_LOG");
    if (!env) return Level::Info;
    std::string s(env);
    if (s == "quiet" || s == "0") return Level::Quiet;
    if (s == "debug" || s == "2") return Level::Debug;
    return Level::Info;
  }();
  return cached;
}

}  // namespace lawshield::log
