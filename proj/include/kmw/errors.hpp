#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kmw {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed graph input (self-loop, duplicate edge, index out of range).
struct InvalidGraph : Error {
    using Error::Error;
};

/// A numeric parameter outside the admissible range (e.g. beta < 2(k+1)).
struct InvalidParameter : Error {
    using Error::Error;
};

struct NotBipartite : Error {
    NotBipartite() : Error("graph is not bipartite") {}
};

struct NotRegular : Error {
    NotRegular() : Error("graph is not regular") {}
};

struct DegreeMismatch : Error {
    DegreeMismatch(std::size_t a, std::size_t b)
        : Error("degree mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

struct EmptyGraph : Error {
    EmptyGraph() : Error("graph has no edges") {}
};

struct BoundViolated : Error {
    using Error::Error;
};

struct IterationLimit : Error {
    using Error::Error;
};

/// Thrown before an expensive construction whose estimated node count exceeds the cap.
struct SizeCapExceeded : Error {
    SizeCapExceeded(std::string estimate_, std::string cap_)
        : Error("estimated size " + estimate_ + " exceeds cap " + cap_),
          estimate(std::move(estimate_)),
          cap(std::move(cap_)) {}
    std::string estimate;  // decimal, may exceed 64 bits
    std::string cap;
};

struct GirthTooLow : Error {
    using Error::Error;
};

struct PairingFailure : Error {
    using Error::Error;
};

struct NotATree : Error {
    NotATree() : Error("subgraph is not a tree") {}
};

struct TooLarge : Error {
    using Error::Error;
};

}  // namespace kmw
