#pragma once

#include <stdexcept>
#include <string>

namespace hirenet {

// Malformed or inconsistent input data (bad file rows, unknown ids, ...).
// Carries the file name and 1-based line number when known.
class load_error : public std::runtime_error {
public:
    load_error(const std::string& file, std::size_t line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
          file_(file),
          line_(line) {}

    explicit load_error(const std::string& what) : std::runtime_error(what), line_(0) {}

    const std::string& file() const { return file_; }
    std::size_t line() const { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

// Numeric routine could not produce a result (degenerate fit data, ...).
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hirenet
