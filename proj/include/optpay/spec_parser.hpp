#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

#include "optpay/errors.hpp"

namespace optpay {

/// Malformed `name[:k=v,...]` text; position() is the 0-based offending column.
class SpecParseError : public DomainError {
public:
    SpecParseError(const std::string& what, std::size_t pos)
        : DomainError(what + " at position " + std::to_string(pos)), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

struct ParsedSpec {
    std::string name;
    std::map<std::string, std::string> args;

    bool has(const std::string& key) const { return args.count(key) != 0; }
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    std::string text_or(const std::string& key, std::string fallback) const;
};

/// Parses `name[:k=v,...]`. Names and keys take [A-Za-z0-9_-]; values run to
/// the next comma and must be non-empty. Duplicate keys are rejected.
ParsedSpec parse_spec(std::string_view text);

}  // namespace optpay
