#pragma once

#include <stdexcept>
#include <string>

namespace pell {

// Bad caller input: out-of-range sizes, non-squarefree d, unsupported l, ...
struct InputError : std::invalid_argument {
    explicit InputError(const std::string &what) : std::invalid_argument(what) {}
};

// A checked mathematical invariant failed. Always a bug, never a "no" answer.
struct InvariantError : std::logic_error {
    explicit InvariantError(const std::string &what) : std::logic_error(what) {}
};

inline void require(bool ok, const std::string &what) {
    if (!ok) throw InputError(what);
}

inline void ensure(bool ok, const std::string &what) {
    if (!ok) throw InvariantError(what);
}

}  // namespace pell
