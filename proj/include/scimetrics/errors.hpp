#pragma once

#include <stdexcept>
#include <string>

namespace scimetrics {

/// Input data violates a format or domain invariant (bad record, unknown id, degenerate sample).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or arguments.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A pipeline step ran before the artifact it depends on exists.
class MissingArtifact : public DataError {
public:
    explicit MissingArtifact(const std::string& path)
        : DataError("missing prerequisite artifact: " + path), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Design matrix lacks full column rank.
class RankDeficient : public DataError {
public:
    using DataError::DataError;
};

}  // namespace scimetrics
