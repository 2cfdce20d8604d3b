#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace prefattach {

// Base for failures of a sampling design on a given input. Argument
// validation failures use std::invalid_argument instead.
class SamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Some m*w_i/W exceeds 1, so no design can be strictly proportional to size.
class InfeasibleStrPips : public SamplingError {
public:
    using SamplingError::SamplingError;
};

// A systematic array entry is wider than the skip W/m and could be hit twice.
class DuplicateSelectionRisk : public SamplingError {
public:
    using SamplingError::SamplingError;
};

class RejectionBudgetExhausted : public SamplingError {
public:
    explicit RejectionBudgetExhausted(std::uint64_t rounds)
        : SamplingError("rejection budget exhausted after " + std::to_string(rounds) +
                        " rounds"),
          rounds_(rounds) {}

    std::uint64_t rounds() const noexcept { return rounds_; }

private:
    std::uint64_t rounds_;
};

class EnumerationTooLarge : public SamplingError {
public:
    using SamplingError::SamplingError;
};

// Every candidate sample has probability zero.
class DegenerateDesign : public SamplingError {
public:
    using SamplingError::SamplingError;
};

class InsufficientData : public SamplingError {
public:
    using SamplingError::SamplingError;
};

}  // namespace prefattach
