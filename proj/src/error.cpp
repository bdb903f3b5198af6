#include "cotravel/error.hpp"

namespace cotravel {

const char* to_string(error_kind kind) {
    switch (kind) {
    case error_kind::parse: return "parse";
    case error_kind::config: return "config";
    case error_kind::capacity: return "capacity";
    case error_kind::consistency: return "consistency";
    case error_kind::missing: return "missing";
    }
    return "unknown";
}

} // namespace cotravel
