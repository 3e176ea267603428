// Copyright 2026 The istfidf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace istfidf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (empty chunk, duplicate id, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Lookup of an unknown document or term.
class LookupError : public Error {
public:
    using Error::Error;
};

/// Malformed input file: corpus line, checkpoint, stoplist, synthetic spec.
class FormatError : public Error {
public:
    using Error::Error;
};

/// A similarity update was applied against a different corpus version.
class VersionMismatch : public Error {
public:
    using Error::Error;
};

} // namespace istfidf
