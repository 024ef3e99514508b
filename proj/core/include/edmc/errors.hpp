//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>

namespace edmc {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition or type invariant was violated by the caller.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Non-finite values or a failed factorization.
class NumericalError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Raised when a distance graph has more than one connected component.
class DisconnectedGraph : public Error {
public:
    DisconnectedGraph(long first, long second)
        : Error("graph is disconnected: vertices " + std::to_string(first) + " and " +
                std::to_string(second) + " lie in different components"),
          first_(first), second_(second) {}

    long first() const noexcept { return first_; }
    long second() const noexcept { return second_; }

private:
    long first_;
    long second_;
};

/// An iterative method hit its iteration cap before reaching its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_residual)
        : Error(what), best_residual_(best_residual) {}

    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

} // namespace edmc
