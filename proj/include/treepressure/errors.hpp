#pragma once

// Error taxonomy shared across the library. The CLI maps these onto its
// exit codes: invalid_input -> 1, hypothesis_violation -> 2,
// resource_limit -> 3.

#include <stdexcept>
#include <string>

namespace treepressure {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad dimensions, out-of-range parameters, malformed configs.
class invalid_input : public error {
public:
    using error::error;
};

// Exact backend requested for a spec that only has a real-valued view.
class backend_mismatch : public invalid_input {
public:
    using invalid_input::invalid_input;
};

// Input violates a mathematical hypothesis (e.g. a reducible restriction
// matrix where irreducibility is required).
class hypothesis_violation : public error {
public:
    using error::error;
};

// Every row sum of the interaction matrix is zero: log s = -inf and the
// labeled system is empty past depth 1.
class degenerate_interaction : public hypothesis_violation {
public:
    using hypothesis_violation::hypothesis_violation;
};

// Z_n = 0: no admissible labeling survives to depth n. Carries the first
// depth at which a generator type lost all admissible labels (or n itself
// when the partition sum died at the root).
class empty_system : public hypothesis_violation {
public:
    empty_system(const std::string& msg, int dead_depth)
        : hypothesis_violation(msg), dead_depth_(dead_depth) {}
    int dead_depth() const { return dead_depth_; }

private:
    int dead_depth_;
};

// A configured cap (vertex count, pattern count) was exceeded.
class resource_limit : public error {
public:
    using error::error;
};

}  // namespace treepressure
