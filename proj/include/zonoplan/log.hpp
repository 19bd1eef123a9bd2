#pragma once

#include <iostream>
#include <string>

namespace zp {

inline bool& quiet_flag() {
    static bool q = false;
    return q;
}

inline void warn(const std::string& msg) {
    if (!quiet_flag()) std::cerr << "warning: " << msg << '\n';
}

inline void info(const std::string& msg) {
    if (!quiet_flag()) std::cerr << msg << '\n';
}

}  // namespace zp
