// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ldplab {

// Invalid parameters are reported with std::invalid_argument. The types
// below cover the remaining failure classes callers need to tell apart.

/// A lemma or probe was asked to run outside the region where its bound
/// applies. Distinct from a statistical failure.
class PreconditionViolation : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

/// Too few estimable points for a regression.
class InsufficientData : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace ldplab
