#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace raygeo {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct ZeroVectorError : Error { using Error::Error; };
struct InvariantError : Error { using Error::Error; };
struct MeshError : Error { using Error::Error; };
struct JunctionError : Error { using Error::Error; };
struct BoundaryError : Error { using Error::Error; };
struct SpecError : Error { using Error::Error; };
struct BaseError : Error { using Error::Error; };
struct PhaseError : Error { using Error::Error; };
struct MatrixError : Error { using Error::Error; };
struct QuadratureError : Error { using Error::Error; };
struct DegenerateError : Error { using Error::Error; };

// A pair of states that should overlap turned out (near-)orthogonal.
struct OrthogonalityError : Error {
    explicit OrthogonalityError(const std::string& msg, std::ptrdiff_t link = -1)
        : Error(msg), link_index(link) {}
    std::ptrdiff_t link_index;  // offending link/pair index when known
};

// Pairwise positivity condition violated by a sampled pair.
struct PositivityError : Error {
    PositivityError(const std::string& msg, std::ptrdiff_t i = -1, std::ptrdiff_t j = -1)
        : Error(msg), first(i), second(j) {}
    std::ptrdiff_t first;
    std::ptrdiff_t second;
};

}  // namespace raygeo
