#pragma once

namespace heraldshape {

inline constexpr const char* kVersion = "heraldshape 1.0.0";

}  // namespace heraldshape
