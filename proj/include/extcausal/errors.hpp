#pragma once

#include <stdexcept>

namespace extcausal {

/// Thrown when thresholds leave no usable data behind (empty index sets, a
/// bootstrap where every draw failed). Distinct from std::invalid_argument so
/// callers can tell statistical degeneracy apart from misuse.
class degeneracy_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace extcausal
