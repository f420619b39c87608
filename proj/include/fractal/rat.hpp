#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fractal {

// Arbitrary-precision signed integer, sign-magnitude with base-2^32 limbs.
// Magnitude is little-endian with no trailing zero limbs; zero has sign 0 and
// an empty magnitude.
class BigInt {
public:
    BigInt() = default;
    BigInt(long long v);

    static BigInt from_string(std::string_view s);
    std::string str() const;

    int sign() const { return sign_; }
    bool is_zero() const { return sign_ == 0; }
    bool is_one() const { return sign_ == 1 && mag_.size() == 1 && mag_[0] == 1; }

    BigInt operator-() const;
    BigInt abs() const;

    friend BigInt operator+(const BigInt& a, const BigInt& b);
    friend BigInt operator-(const BigInt& a, const BigInt& b);
    friend BigInt operator*(const BigInt& a, const BigInt& b);
    BigInt& operator+=(const BigInt& o) { return *this = *this + o; }
    BigInt& operator-=(const BigInt& o) { return *this = *this - o; }
    BigInt& operator*=(const BigInt& o) { return *this = *this * o; }

    // Truncated division: q rounds toward zero, remainder carries a's sign.
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);
    friend BigInt operator/(const BigInt& a, const BigInt& b);
    friend BigInt operator%(const BigInt& a, const BigInt& b);

    // Division known to be exact; throws InternalError on nonzero remainder.
    BigInt exact_div(const BigInt& d) const;

    static BigInt gcd(BigInt a, BigInt b);  // non-negative
    static BigInt lcm(const BigInt& a, const BigInt& b);
    static BigInt pow(const BigInt& base, unsigned e);

    // Integer square root of a non-negative value; returns false if a < 0.
    static bool isqrt(const BigInt& a, BigInt& root);
    // True iff a is a perfect square (a >= 0); root receives sqrt(a).
    static bool sqrt_exact(const BigInt& a, BigInt& root);

    int cmp(const BigInt& o) const;
    friend bool operator==(const BigInt& a, const BigInt& b) { return a.cmp(b) == 0; }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return a.cmp(b) != 0; }
    friend bool operator<(const BigInt& a, const BigInt& b) { return a.cmp(b) < 0; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return a.cmp(b) <= 0; }
    friend bool operator>(const BigInt& a, const BigInt& b) { return a.cmp(b) > 0; }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return a.cmp(b) >= 0; }

    double to_double() const;
    size_t bit_length() const;

    bool fits_int64() const;
    long long to_int64() const;

private:
    int sign_ = 0;
    std::vector<uint32_t> mag_;

    void trim();
    static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b);
    // Requires |a| >= |b|.
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b);
    static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b);
    static void divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                           std::vector<uint32_t>& q, std::vector<uint32_t>& r);
    // Top `bits` bits of the magnitude as a double m with value ~ m * 2^exp.
    double top_double(long& exp2) const;

    friend class Rat;
};

// Exact rational number. Canonical form: gcd(num, den) == 1, den > 0,
// zero is 0/1. Every operation returns canonical values; comparisons exact.
class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(long long n) : num_(n), den_(1) {}
    Rat(long long n, long long d);
    Rat(BigInt n, BigInt d);

    // Accepts "p", "p/q", and decimal strings like "-1.185" (exact).
    static Rat from_string(std::string_view s);
    std::string str() const;  // "p" when den == 1, else "p/q"

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_integer() const { return den_.is_one(); }
    int sign() const { return num_.sign(); }
    Rat abs() const;
    Rat operator-() const;

    friend Rat operator+(const Rat& a, const Rat& b);
    friend Rat operator-(const Rat& a, const Rat& b);
    friend Rat operator*(const Rat& a, const Rat& b);
    friend Rat operator/(const Rat& a, const Rat& b);  // throws on b == 0
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    Rat inv() const;
    Rat pow(int e) const;

    int cmp(const Rat& o) const;
    friend bool operator==(const Rat& a, const Rat& b) { return a.cmp(b) == 0; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.cmp(b) != 0; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.cmp(b) < 0; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.cmp(b) <= 0; }
    friend bool operator>(const Rat& a, const Rat& b) { return a.cmp(b) > 0; }
    friend bool operator>=(const Rat& a, const Rat& b) { return a.cmp(b) >= 0; }

    double to_double() const;

    // Exact square root when both num and den are perfect squares.
    bool sqrt_exact(Rat& root) const;

private:
    BigInt num_, den_;
    void normalize();
};

}  // namespace fractal
