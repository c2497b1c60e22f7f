#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace passguess {

enum class Errc {
    EmptyCorpus,
    EmptyTable,
    EmptyPhrase,
    BadArity,
    BadAlpha,
    ParseError,
    StoreMissing,
    Io,
    InvalidArgument,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message, std::optional<std::size_t> line = std::nullopt)
        : std::runtime_error(message), code_(code), line_(line) {}

    Errc code() const noexcept { return code_; }
    /// 1-based line number for ParseError raised while reading a file.
    std::optional<std::size_t> line() const noexcept { return line_; }

private:
    Errc code_;
    std::optional<std::size_t> line_;
};

}  // namespace passguess
