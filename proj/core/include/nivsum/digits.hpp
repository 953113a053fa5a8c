#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nivsum {

// Base-g positional representation of a positive integer, least significant
// digit first (digits()[0] is the units digit). Invariants enforced on
// construction: base >= 2, at least one digit, every digit < base, and the
// most significant digit nonzero. Zero has no representation. Lengths in the
// tens of thousands of digits are routine; nothing here assumes the value
// fits a machine word.
class DigitString {
public:
    DigitString(uint32_t base, std::vector<uint32_t> digits);

    uint32_t base() const { return base_; }
    const std::vector<uint32_t>& digits() const { return digits_; }
    std::size_t length() const { return digits_.size(); }
    uint64_t digit_sum() const { return digit_sum_; }

    bool fits_u64() const;
    // Value as a machine word; throws std::overflow_error if it does not fit.
    uint64_t value() const;

    bool operator==(const DigitString&) const = default;

private:
    uint32_t base_;
    std::vector<uint32_t> digits_;
    uint64_t digit_sum_ = 0;
};

// Base-g digits of n (n >= 1, base >= 2).
DigitString to_digits(uint64_t n, uint32_t base);

// g^exponent as a DigitString.
DigitString power_of_base(uint32_t base, std::size_t exponent);

// Digit concatenation: value(result) = value(low) + g^length(low) * value(high).
// Both inputs must share a base. Digit sum and length are additive.
DigitString concat(const DigitString& low, const DigitString& high);

// Value of n modulo m (m >= 1), by Horner evaluation from the top digit.
// Never materializes the value.
uint64_t mod_eval(const DigitString& n, uint64_t m);

// Divisibility of the value by its base-g digit sum.
bool is_niven(const DigitString& n);

// Divisibility of n by its nonzero base-g digit product. A zero digit makes
// the product zero, which divides nothing: such n are never Zuckerman.
// Machine-size inputs only; the product is guarded against overflow.
bool is_zuckerman(uint64_t n, uint32_t base);

// n minus sum of g^j over j in positions. Positions must be distinct and each
// addressed digit nonzero (no borrows ever occur). High zero digits exposed by
// the subtraction are stripped; a zero result is rejected.
DigitString subtract_powers(const DigitString& n, const std::vector<std::size_t>& positions);

// Smallest window length that the substring scan inspects for a string of the
// given length: max(ceil(36 ln length), 1).
std::size_t s2_min_window(std::size_t length);

// Substring digit-sum scan: true iff every contiguous digit window of length
// k >= s2_min_window(length(n)) whose top digit is nonzero (i.e. the window is
// itself the representation of some integer) has digit sum > (g-1)k/3.
// Windows led by a zero digit are skipped; they represent no integer.
// Single pass over prefix sums, O(length).
bool s2_scan(const DigitString& n);
bool s2_scan(const std::vector<uint32_t>& digits, uint32_t base);

// Position of the single 1 digit if n is a power of the base (digit sum 1).
std::optional<std::size_t> power_exponent(const DigitString& n);

// Digits most-significant first, comma separated for bases > 10 — for
// diagnostics, not serialization.
std::string to_string(const DigitString& n);

}  // namespace nivsum
