#include "forge/decimal.hpp"

#include <cctype>

namespace forge::dataset {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::optional<FinalAnswer> FinalAnswer::parse(std::string_view text) {
    std::string cleaned;
    cleaned.reserve(text.size());
    for (char c : text) {
        if (c == '$' || c == '%' || c == ',') continue;
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        cleaned.push_back(c);
    }
    if (cleaned.empty()) return std::nullopt;

    std::size_t pos = 0;
    bool negative = false;
    if (cleaned[pos] == '+' || cleaned[pos] == '-') {
        negative = cleaned[pos] == '-';
        ++pos;
    }

    std::string int_part;
    while (pos < cleaned.size() && is_digit(cleaned[pos])) int_part.push_back(cleaned[pos++]);

    std::string frac_part;
    if (pos < cleaned.size() && cleaned[pos] == '.') {
        ++pos;
        while (pos < cleaned.size() && is_digit(cleaned[pos])) frac_part.push_back(cleaned[pos++]);
    }

    if (pos != cleaned.size()) return std::nullopt;        // trailing junk
    if (int_part.empty() && frac_part.empty()) return std::nullopt;

    // Canonicalize: drop leading zeros, drop trailing fraction zeros.
    std::size_t first = int_part.find_first_not_of('0');
    int_part = first == std::string::npos ? "0" : int_part.substr(first);
    std::size_t last = frac_part.find_last_not_of('0');
    frac_part = last == std::string::npos ? "" : frac_part.substr(0, last + 1);

    std::string canonical;
    if (negative && !(int_part == "0" && frac_part.empty())) canonical.push_back('-');
    canonical += int_part;
    if (!frac_part.empty()) {
        canonical.push_back('.');
        canonical += frac_part;
    }
    return FinalAnswer(std::move(canonical));
}

}  // namespace forge::dataset
