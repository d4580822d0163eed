// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace factfix {

/// Base of every error the toolkit throws. Data errors map to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed JSON on an input line.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Well-formed JSON that does not match a schema (missing field, unknown label).
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A span that does not fit its text.
class SpanError : public Error {
public:
    using Error::Error;
};

/// A corruption rule was asked to fire on a record that has no candidates for it.
class InapplicableError : public Error {
public:
    using Error::Error;
};

/// A corruption record does not match the summary it is applied to.
class MismatchError : public Error {
public:
    using Error::Error;
};

/// Bad evaluation input: length mismatch, missing or duplicate ids, empty sets.
class InputError : public Error {
public:
    using Error::Error;
};

/// The external corrector process failed.
class ExternalError : public Error {
public:
    using Error::Error;
};

/// The external corrector violated the batch protocol.
class ProtocolError : public Error {
public:
    using Error::Error;
};

/// Bad configuration file or flag value.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace factfix
