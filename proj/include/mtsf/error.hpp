#pragma once

#include <stdexcept>
#include <string>

namespace mtsf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file could not be opened, read, or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed input data (ragged rows, unparsable cells, bad shapes).
class DataError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration values or recipe/config documents.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A model failed to fit or produced a non-finite forecast.
class ModelError : public Error {
public:
    using Error::Error;
};

} // namespace mtsf
