// errors.hpp
// Exception types shared by the nogo library.

#pragma once

#include <stdexcept>
#include <string>

namespace nogo {

// Bad argument: out-of-range index, non-Hermitian matrix, undersized grid, ...
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Bloch vector outside the unit ball, i.e. not a physical state.
class BlochViolation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A response function produced a value outside the spectrum {+1, -1}.
class SpectrumViolation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// NaN or infinity showed up where a finite number was required.
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nogo
