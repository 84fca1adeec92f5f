// SPDX-License-Identifier: Apache-2.0

#ifndef PINCH_VERSION_HPP
#define PINCH_VERSION_HPP

namespace pinch {

inline constexpr const char* kVersion = "0.1.0";

} // namespace pinch

#endif // PINCH_VERSION_HPP
