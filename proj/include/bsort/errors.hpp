// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace bsort {

// Exit-code buckets used by the CLI: 1 usage, 2 parse, 3 runtime.
enum class ErrorKind { Usage = 1, Parse = 2, Runtime = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

struct InsufficientCorrespondences : Error {
    explicit InsufficientCorrespondences(const std::string& msg)
        : Error(ErrorKind::Runtime, msg) {}
};

struct DegenerateGeometry : Error {
    explicit DegenerateGeometry(const std::string& msg)
        : Error(ErrorKind::Runtime, msg) {}
};

struct PointAtInfinity : Error {
    explicit PointAtInfinity(const std::string& msg)
        : Error(ErrorKind::Runtime, msg) {}
};

struct InvalidBBox : Error {
    explicit InvalidBBox(const std::string& msg)
        : Error(ErrorKind::Runtime, msg) {}
};

struct UndefinedCost : Error {
    explicit UndefinedCost(const std::string& msg)
        : Error(ErrorKind::Runtime, msg) {}
};

struct EmptyWindow : Error {
    explicit EmptyWindow(const std::string& msg)
        : Error(ErrorKind::Runtime, msg) {}
};

struct SequencingError : Error {
    explicit SequencingError(const std::string& msg)
        : Error(ErrorKind::Runtime, msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg)
        : Error(ErrorKind::Parse, msg) {}
};

struct SpecError : Error {
    explicit SpecError(const std::string& msg)
        : Error(ErrorKind::Runtime, msg) {}
};

} // namespace bsort
