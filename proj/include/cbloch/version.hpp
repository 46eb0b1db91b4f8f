#pragma once

namespace cbloch {

inline constexpr char kToolkitVersion[] = "0.1.0";

}  // namespace cbloch
