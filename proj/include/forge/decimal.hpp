#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace forge::dataset {

/// Exact decimal number for final answers. Values are kept in a canonical
/// text form (sign, integer digits without leading zeros, fraction digits
/// without trailing zeros) so that equality is exact string equality and
/// never goes through binary floating point.
class FinalAnswer {
public:
    FinalAnswer() = default;

    /// Parses a marker payload. Strips '$', '%', ',', and surrounding
    /// whitespace before reading the number. Returns nullopt when the
    /// remaining text is not a plain decimal number.
    static std::optional<FinalAnswer> parse(std::string_view text);

    /// Canonical form: "-"? digits ("." digits)?, no leading zeros in the
    /// integer part, no trailing zeros in the fraction, "-0" normalized to "0".
    const std::string& canonical() const { return canonical_; }

    bool is_integer() const { return canonical_.find('.') == std::string::npos; }

    bool operator==(const FinalAnswer& other) const { return canonical_ == other.canonical_; }
    bool operator!=(const FinalAnswer& other) const { return !(*this == other); }

private:
    explicit FinalAnswer(std::string canonical_text) : canonical_(std::move(canonical_text)) {}

    std::string canonical_ = "0";
};

}  // namespace forge::dataset
