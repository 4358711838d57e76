#include "nonloc/log.hpp"

#include <cstdlib>

#include <spdlog/sinks/stdout_sinks.h>

namespace nonloc {

spdlog::logger& log() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto l = std::make_shared<spdlog::logger>("nonloc",
                                              std::make_shared<spdlog::sinks::stderr_sink_mt>());
    l->set_pattern("[%l] %v");
    auto level = spdlog::level::warn;
    if (const char* env = std::getenv("NONLOC_LOG")) level = spdlog::level::from_str(env);
    l->set_level(level);
    return l;
  }();
  return *instance;
}

}  // namespace nonloc
