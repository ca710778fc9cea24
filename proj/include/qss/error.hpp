// Copyright 2026 The qss-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qss {

/// Base of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operand lengths or shapes disagree.
struct DimensionError : Error {
    using Error::Error;
};

/// An index (qubit, segment, share, party) is outside its valid range.
struct IndexError : Error {
    using Error::Error;
};

/// A size bound was exceeded (enumeration limit, qubit limit, field size).
struct CapacityError : Error {
    using Error::Error;
};

/// A documented precondition on state does not hold.
struct PreconditionError : Error {
    using Error::Error;
};

/// Records disagree with the data they describe, or duplicates were supplied.
struct IntegrityError : Error {
    using Error::Error;
};

struct InsufficientSharesError : Error {
    using Error::Error;
};

/// Several distinct secrets are supported by the same maximal number of shares.
struct AmbiguousDecodeError : Error {
    using Error::Error;
};

/// Invalid configuration value or key.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace qss
