#include "motr/log.hpp"

#include <cstdlib>
#include <string_view>

#include <spdlog/sinks/stdout_color_sinks.h>

namespace motr {

spdlog::logger& logger() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto l = spdlog::stderr_color_mt("motr");
    l->set_pattern("[%l] %v");
    const char* env = std::getenv("MOTR_LOG");
    const std::string_view level = env ? env : "info";
    if (level == "quiet") {
      l->set_level(spdlog::level::err);
    } else if (level == "debug") {
      l->set_level(spdlog::level::debug);
    } else {
      l->set_level(spdlog::level::info);
    }
    return l;
  }();
  return *instance;
}

}  // namespace motr
