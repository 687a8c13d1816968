#pragma once

#include <stdexcept>
#include <string>

namespace qsynth {

// Base of every exception the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller supplied an argument outside the operation's domain.
class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& what) : Error("parameter error: " + what) {}
};

// A request would exceed a fixed resource cap (qubit count, oracle size).
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& what) : Error("resource error: " + what) {}
};

// Network-level failure talking to a chat endpoint, after retries.
class TransportError : public Error {
public:
    explicit TransportError(const std::string& what) : Error("transport error: " + what) {}
};

// The endpoint answered, but not in the expected chat-completion shape.
class ProtocolError : public Error {
public:
    explicit ProtocolError(const std::string& what) : Error("protocol error: " + what) {}
};

// Run-file I/O or schema problems.
class RunStoreError : public Error {
public:
    explicit RunStoreError(const std::string& what) : Error("run store error: " + what) {}
};

class SchemaVersionError : public RunStoreError {
public:
    explicit SchemaVersionError(const std::string& what) : RunStoreError(what) {}
};

}  // namespace qsynth
