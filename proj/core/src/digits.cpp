#include "nivsum/digits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nivsum {

DigitString::DigitString(uint32_t base, std::vector<uint32_t> digits)
    : base_(base), digits_(std::move(digits)) {
    if (base_ < 2)
        throw std::invalid_argument("DigitString: base must be >= 2");
    if (digits_.empty())
        throw std::invalid_argument("DigitString: zero has no representation");
    if (digits_.back() == 0)
        throw std::invalid_argument("DigitString: most significant digit is zero");
    for (uint32_t d : digits_) {
        if (d >= base_)
            throw std::invalid_argument("DigitString: digit out of range");
        digit_sum_ += d;
    }
}

bool DigitString::fits_u64() const {
    unsigned __int128 v = 0;
    const auto limit = std::numeric_limits<uint64_t>::max();
    for (std::size_t i = digits_.size(); i-- > 0;) {
        v = v * base_ + digits_[i];
        if (v > limit) return false;
    }
    return true;
}

uint64_t DigitString::value() const {
    unsigned __int128 v = 0;
    const auto limit = std::numeric_limits<uint64_t>::max();
    for (std::size_t i = digits_.size(); i-- > 0;) {
        v = v * base_ + digits_[i];
        if (v > limit) throw std::overflow_error("DigitString::value: exceeds 64 bits");
    }
    return static_cast<uint64_t>(v);
}

DigitString to_digits(uint64_t n, uint32_t base) {
    if (n == 0) throw std::invalid_argument("to_digits: n must be >= 1");
    if (base < 2) throw std::invalid_argument("to_digits: base must be >= 2");
    std::vector<uint32_t> ds;
    while (n > 0) {
        ds.push_back(static_cast<uint32_t>(n % base));
        n /= base;
    }
    return DigitString(base, std::move(ds));
}

DigitString power_of_base(uint32_t base, std::size_t exponent) {
    std::vector<uint32_t> ds(exponent + 1, 0);
    ds.back() = 1;
    return DigitString(base, std::move(ds));
}

DigitString concat(const DigitString& low, const DigitString& high) {
    if (low.base() != high.base())
        throw std::invalid_argument("concat: base mismatch");
    std::vector<uint32_t> ds;
    ds.reserve(low.length() + high.length());
    ds.insert(ds.end(), low.digits().begin(), low.digits().end());
    ds.insert(ds.end(), high.digits().begin(), high.digits().end());
    return DigitString(low.base(), std::move(ds));
}

uint64_t mod_eval(const DigitString& n, uint64_t m) {
    if (m == 0) throw std::invalid_argument("mod_eval: modulus must be >= 1");
    if (m == 1) return 0;
    const auto& d = n.digits();
    uint64_t r = 0;
    for (std::size_t i = d.size(); i-- > 0;)
        r = static_cast<uint64_t>((static_cast<unsigned __int128>(r) * n.base() + d[i]) % m);
    return r;
}

bool is_niven(const DigitString& n) {
    return mod_eval(n, n.digit_sum()) == 0;
}

bool is_zuckerman(uint64_t n, uint32_t base) {
    if (n == 0) throw std::invalid_argument("is_zuckerman: n must be >= 1");
    if (base < 2) throw std::invalid_argument("is_zuckerman: base must be >= 2");
    unsigned __int128 prod = 1;
    for (uint64_t rest = n; rest > 0; rest /= base) {
        uint64_t d = rest % base;
        if (d == 0) return false;
        prod *= d;
        if (prod > n) return false;  // a divisor of n cannot exceed n
    }
    return n % static_cast<uint64_t>(prod) == 0;
}

DigitString subtract_powers(const DigitString& n, const std::vector<std::size_t>& positions) {
    std::vector<std::size_t> ps = positions;
    std::sort(ps.begin(), ps.end());
    if (std::adjacent_find(ps.begin(), ps.end()) != ps.end())
        throw std::invalid_argument("subtract_powers: positions must be distinct");
    std::vector<uint32_t> ds = n.digits();
    for (std::size_t j : ps) {
        if (j >= ds.size())
            throw std::invalid_argument("subtract_powers: position beyond top digit");
        if (ds[j] == 0)
            throw std::invalid_argument("subtract_powers: digit at position is zero");
        --ds[j];
    }
    while (!ds.empty() && ds.back() == 0) ds.pop_back();
    if (ds.empty())
        throw std::invalid_argument("subtract_powers: result is zero");
    return DigitString(n.base(), std::move(ds));
}

std::size_t s2_min_window(std::size_t length) {
    if (length == 0) throw std::invalid_argument("s2_min_window: empty string");
    double k = std::ceil(36.0 * std::log(static_cast<double>(length)));
    return std::max<std::size_t>(static_cast<std::size_t>(k), 1);
}

bool s2_scan(const std::vector<uint32_t>& digits, uint32_t base) {
    const std::size_t len = digits.size();
    const std::size_t kmin = s2_min_window(len);
    if (kmin > len) return true;  // no window long enough to qualify

    // Window [i, e] has digit sum > (g-1)(e-i+1)/3 iff its sum of
    // t_j = 3 d_j - (g-1) is positive, i.e. P[e+1] > P[i] for the prefix sums
    // P. A window is checked only when its top digit d_e is nonzero, so the
    // scan keeps, per window end e, the running maximum of P over all start
    // indices far enough left.
    std::vector<int64_t> prefix(len + 1, 0);
    const int64_t gm1 = static_cast<int64_t>(base) - 1;
    for (std::size_t j = 0; j < len; ++j)
        prefix[j + 1] = prefix[j] + 3 * static_cast<int64_t>(digits[j]) - gm1;

    int64_t run_max = prefix[0];
    for (std::size_t e = kmin - 1; e < len; ++e) {
        const std::size_t limit = e + 1 - kmin;  // largest admissible start index
        if (e > kmin - 1) run_max = std::max(run_max, prefix[limit]);
        if (digits[e] != 0 && prefix[e + 1] <= run_max) return false;
    }
    return true;
}

bool s2_scan(const DigitString& n) {
    return s2_scan(n.digits(), n.base());
}

std::optional<std::size_t> power_exponent(const DigitString& n) {
    if (n.digit_sum() != 1) return std::nullopt;
    const auto& d = n.digits();
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] == 1) return i;
    return std::nullopt;  // unreachable: digit sum 1 implies a single 1 digit
}

std::string to_string(const DigitString& n) {
    std::string out;
    const auto& d = n.digits();
    const bool wide = n.base() > 10;
    for (std::size_t i = d.size(); i-- > 0;) {
        if (wide) {
            out += std::to_string(d[i]);
            if (i != 0) out += ',';
        } else {
            out += static_cast<char>('0' + d[i]);
        }
    }
    return out;
}

}  // namespace nivsum
