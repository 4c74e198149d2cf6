#ifndef OUA_VERSION_HPP
#define OUA_VERSION_HPP

#define OUA_VERSION_STRING "0.1.0"

namespace oua {

inline const char* version() { return OUA_VERSION_STRING; }

}  // namespace oua

#endif  // OUA_VERSION_HPP
