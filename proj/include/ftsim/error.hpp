#pragma once

#include <stdexcept>
#include <string>

namespace ftsim {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CycleDetected : public Error {
public:
    using Error::Error;
};

class UnknownDependency : public Error {
public:
    using Error::Error;
};

class DuplicateTaskId : public Error {
public:
    using Error::Error;
};

class MissingExecTime : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

// No replica host other than the primary device exists in the candidate set.
class NoCandidate : public Error {
public:
    using Error::Error;
};

// Two devices share no enabled interface with positive throughput.
class NoRoute : public Error {
public:
    using Error::Error;
};

class DeadlockDetected : public Error {
public:
    using Error::Error;
};

// Malformed input files, invalid config values, violated type invariants.
class InvalidInput : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace ftsim
