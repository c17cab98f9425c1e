#ifndef FOCKOPS_VERSION_HPP
#define FOCKOPS_VERSION_HPP

#define FOCKOPS_VERSION_MAJOR 0
#define FOCKOPS_VERSION_MINOR 1
#define FOCKOPS_VERSION_PATCH 0
#define FOCKOPS_VERSION "0.1.0"

namespace fockops {

inline constexpr const char* version() { return FOCKOPS_VERSION; }

}  // namespace fockops

#endif
