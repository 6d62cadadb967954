#include "vibroident/errors.hpp"

namespace vibroident {

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Config: return 2;
    case ErrorKind::Parse: return 3;
    case ErrorKind::Numeric: return 4;
    case ErrorKind::IO: return 5;
    }
    return 1;
}

} // namespace vibroident
