#pragma once

#include <sodium.h>

#include "zkhawk/bytes.hpp"

namespace zkhawk::detail {

inline void ensure_sodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw Error("libsodium initialisation failed");
}

}  // namespace zkhawk::detail
