#include "saturn/errors.hpp"

namespace saturn {

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::numeric: return 3;
        case ErrorKind::io: return 4;
        default: return 2;
    }
}

const char *to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::domain: return "domain error";
        case ErrorKind::parameter: return "parameter error";
        case ErrorKind::configuration: return "configuration error";
        case ErrorKind::numeric: return "numeric error";
        case ErrorKind::io: return "I/O error";
        case ErrorKind::unsupported: return "unsupported";
        case ErrorKind::fit: return "fit error";
        case ErrorKind::empty_data: return "empty data";
    }
    return "error";
}

}  // namespace saturn
