#include "optpay/spec_parser.hpp"

#include <cctype>
#include <cstdlib>

namespace optpay {

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.'; }

}  // namespace

double ParsedSpec::number(const std::string& key) const {
    const auto it = args.find(key);
    if (it == args.end()) throw DomainError("'" + name + "' needs " + key + "=<number>");
    const char* begin = it->second.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') throw DomainError("'" + name + "': " + key + "=" + it->second + " is not a number");
    return v;
}

double ParsedSpec::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

std::string ParsedSpec::text_or(const std::string& key, std::string fallback) const {
    const auto it = args.find(key);
    return it == args.end() ? fallback : it->second;
}

ParsedSpec parse_spec(std::string_view text) {
    ParsedSpec out;
    std::size_t i = 0;
    while (i < text.size() && ident_char(text[i]) && text[i] != '.') ++i;
    if (i == 0) throw SpecParseError("expected a name", 0);
    out.name = std::string(text.substr(0, i));
    if (i == text.size()) return out;
    if (text[i] != ':') throw SpecParseError("unexpected character '" + std::string(1, text[i]) + "'", i);
    ++i;
    while (true) {
        const std::size_t key_start = i;
        while (i < text.size() && ident_char(text[i])) ++i;
        if (i == key_start) throw SpecParseError("expected a key", i);
        const std::string key(text.substr(key_start, i - key_start));
        if (i == text.size() || text[i] != '=') throw SpecParseError("expected '=' after '" + key + "'", i);
        ++i;
        const std::size_t value_start = i;
        while (i < text.size() && text[i] != ',') ++i;
        if (i == value_start) throw SpecParseError("empty value for '" + key + "'", i);
        if (!out.args.emplace(key, std::string(text.substr(value_start, i - value_start))).second) {
            throw SpecParseError("duplicate key '" + key + "'", key_start);
        }
        if (i == text.size()) return out;
        ++i;  // comma
        if (i == text.size()) throw SpecParseError("trailing comma", i);
    }
}

}  // namespace optpay
