#pragma once

#include <string>

namespace wallstokes::io {

/// Round-trip decimal text with 17 significant digits, "." separator.
std::string num(double v);

}  // namespace wallstokes::io
