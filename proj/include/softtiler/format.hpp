#ifndef SOFTTILER_FORMAT_HPP_
#define SOFTTILER_FORMAT_HPP_

#include <cstdio>
#include <string>

namespace softtiler {

// Floating-point output pinned to 17 significant digits so repeated runs are
// byte-identical and values round-trip exactly.
inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace softtiler

#endif  // SOFTTILER_FORMAT_HPP_
