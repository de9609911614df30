#pragma once

#include <memory>

#include <spdlog/spdlog.h>

namespace motr {

/// Shared stderr logger. The level comes from MOTR_LOG (quiet, info or
/// debug; default info).
spdlog::logger& logger();

}  // namespace motr
