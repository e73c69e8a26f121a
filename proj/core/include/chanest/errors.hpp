#pragma once

#include <stdexcept>
#include <string>

namespace chanest {

// Malformed or truncated on-disk data (dataset files, checkpoints, configs).
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::size_t byte_offset)
        : std::runtime_error(what + " (at byte offset " + std::to_string(byte_offset) + ")"),
          offset_(byte_offset) {}
    explicit FormatError(const std::string& what) : std::runtime_error(what), offset_(0) {}

    std::size_t byte_offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Numerical failure in a linear-algebra routine (e.g. SVD non-convergence).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Training diverged or otherwise failed; carries the epoch at which it happened.
class TrainingError : public std::runtime_error {
public:
    TrainingError(const std::string& what, int epoch)
        : std::runtime_error(what + " (epoch " + std::to_string(epoch) + ")"), epoch_(epoch) {}

    int epoch() const { return epoch_; }

private:
    int epoch_;
};

}  // namespace chanest
