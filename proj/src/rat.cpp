#include "fractal/rat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "fractal/errors.hpp"

namespace fractal {

namespace {
constexpr uint64_t kBase = 1ull << 32;
}

BigInt::BigInt(long long v) {
    if (v == 0) return;
    sign_ = v < 0 ? -1 : 1;
    unsigned long long m = v < 0 ? -static_cast<unsigned long long>(v) : static_cast<unsigned long long>(v);
    while (m != 0) {
        mag_.push_back(static_cast<uint32_t>(m & 0xffffffffull));
        m >>= 32;
    }
}

void BigInt::trim() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    if (mag_.empty()) sign_ = 0;
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
    const std::vector<uint32_t>& x = a.size() >= b.size() ? a : b;
    const std::vector<uint32_t>& y = a.size() >= b.size() ? b : a;
    std::vector<uint32_t> r(x.size() + 1, 0);
    uint64_t carry = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        uint64_t s = carry + x[i] + (i < y.size() ? y[i] : 0);
        r[i] = static_cast<uint32_t>(s);
        carry = s >> 32;
    }
    r[x.size()] = static_cast<uint32_t>(carry);
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
    std::vector<uint32_t> r(a.size(), 0);
    int64_t borrow = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        int64_t d = static_cast<int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0);
        if (d < 0) {
            d += kBase;
            borrow = 1;
        } else {
            borrow = 0;
        }
        r[i] = static_cast<uint32_t>(d);
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

std::vector<uint32_t> BigInt::mul_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<uint32_t> r(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        uint64_t carry = 0;
        uint64_t ai = a[i];
        if (ai == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            uint64_t cur = r[i + j] + ai * b[j] + carry;
            r[i + j] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        size_t k = i + b.size();
        while (carry != 0) {
            uint64_t cur = r[k] + carry;
            r[k] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
            ++k;
        }
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

// Knuth algorithm D, base 2^32.
void BigInt::divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                        std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
    if (b.empty()) throw InternalError("division by zero");
    if (cmp_mag(a, b) < 0) {
        q.clear();
        r = a;
        return;
    }
    if (b.size() == 1) {
        uint64_t d = b[0];
        q.assign(a.size(), 0);
        uint64_t rem = 0;
        for (size_t i = a.size(); i-- > 0;) {
            uint64_t cur = (rem << 32) | a[i];
            q[i] = static_cast<uint32_t>(cur / d);
            rem = cur % d;
        }
        while (!q.empty() && q.back() == 0) q.pop_back();
        r.clear();
        if (rem != 0) r.push_back(static_cast<uint32_t>(rem));
        return;
    }

    // Normalize so the top limb of the divisor has its high bit set.
    int shift = 0;
    uint32_t top = b.back();
    while ((top & 0x80000000u) == 0) {
        top <<= 1;
        ++shift;
    }
    size_t n = b.size(), m = a.size() - n;
    std::vector<uint32_t> u(a.size() + 1, 0), v(n, 0);
    for (size_t i = a.size(); i-- > 0;) {
        u[i] = (a[i] << shift);
        if (shift && i > 0) u[i] |= static_cast<uint32_t>(static_cast<uint64_t>(a[i - 1]) >> (32 - shift));
    }
    if (shift) u[a.size()] = static_cast<uint32_t>(static_cast<uint64_t>(a.back()) >> (32 - shift));
    for (size_t i = n; i-- > 0;) {
        v[i] = (b[i] << shift);
        if (shift && i > 0) v[i] |= static_cast<uint32_t>(static_cast<uint64_t>(b[i - 1]) >> (32 - shift));
    }

    q.assign(m + 1, 0);
    const uint64_t vn1 = v[n - 1], vn2 = v[n - 2];
    for (size_t j = m + 1; j-- > 0;) {
        uint64_t num = (static_cast<uint64_t>(u[j + n]) << 32) | u[j + n - 1];
        uint64_t qhat = num / vn1;
        uint64_t rhat = num % vn1;
        while (qhat >= kBase || qhat * vn2 > ((rhat << 32) | u[j + n - 2])) {
            --qhat;
            rhat += vn1;
            if (rhat >= kBase) break;
        }
        // Multiply-subtract qhat * v from u[j .. j+n].
        int64_t borrow = 0;
        uint64_t carry = 0;
        for (size_t i = 0; i < n; ++i) {
            uint64_t p = qhat * v[i] + carry;
            carry = p >> 32;
            int64_t t = static_cast<int64_t>(u[i + j]) - static_cast<int64_t>(p & 0xffffffffull) - borrow;
            if (t < 0) {
                t += kBase;
                borrow = 1;
            } else {
                borrow = 0;
            }
            u[i + j] = static_cast<uint32_t>(t);
        }
        int64_t t = static_cast<int64_t>(u[j + n]) - static_cast<int64_t>(carry) - borrow;
        if (t < 0) {
            // qhat was one too large: add back.
            t += static_cast<int64_t>(kBase);
            --qhat;
            uint64_t c = 0;
            for (size_t i = 0; i < n; ++i) {
                uint64_t s = static_cast<uint64_t>(u[i + j]) + v[i] + c;
                u[i + j] = static_cast<uint32_t>(s);
                c = s >> 32;
            }
            t += static_cast<int64_t>(c);
            t &= 0xffffffffll;
        }
        u[j + n] = static_cast<uint32_t>(t);
        q[j] = static_cast<uint32_t>(qhat);
    }
    while (!q.empty() && q.back() == 0) q.pop_back();

    r.assign(n, 0);
    for (size_t i = 0; i < n; ++i) {
        r[i] = u[i] >> shift;
        if (shift && i + 1 < u.size()) r[i] |= static_cast<uint32_t>(static_cast<uint64_t>(u[i + 1]) << (32 - shift));
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
}

BigInt BigInt::operator-() const {
    BigInt r = *this;
    r.sign_ = -r.sign_;
    return r;
}

BigInt BigInt::abs() const {
    BigInt r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
}

BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    BigInt r;
    if (a.sign_ == b.sign_) {
        r.mag_ = BigInt::add_mag(a.mag_, b.mag_);
        r.sign_ = a.sign_;
    } else {
        int c = BigInt::cmp_mag(a.mag_, b.mag_);
        if (c == 0) return BigInt();
        if (c > 0) {
            r.mag_ = BigInt::sub_mag(a.mag_, b.mag_);
            r.sign_ = a.sign_;
        } else {
            r.mag_ = BigInt::sub_mag(b.mag_, a.mag_);
            r.sign_ = b.sign_;
        }
    }
    r.trim();
    return r;
}

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return BigInt();
    BigInt r;
    r.mag_ = BigInt::mul_mag(a.mag_, b.mag_);
    r.sign_ = a.sign_ * b.sign_;
    r.trim();
    return r;
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.sign_ == 0) throw InternalError("BigInt division by zero");
    std::vector<uint32_t> qm, rm;
    divmod_mag(a.mag_, b.mag_, qm, rm);
    q = BigInt();
    r = BigInt();
    q.mag_ = std::move(qm);
    r.mag_ = std::move(rm);
    q.sign_ = q.mag_.empty() ? 0 : a.sign_ * b.sign_;
    r.sign_ = r.mag_.empty() ? 0 : a.sign_;
}

BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return q;
}

BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return r;
}

BigInt BigInt::exact_div(const BigInt& d) const {
    BigInt q, r;
    divmod(*this, d, q, r);
    if (!r.is_zero()) throw InternalError("exact_div: nonzero remainder");
    return q;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
    a.sign_ = a.mag_.empty() ? 0 : 1;
    b.sign_ = b.mag_.empty() ? 0 : 1;
    while (!b.is_zero()) {
        BigInt q, r;
        divmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

BigInt BigInt::lcm(const BigInt& a, const BigInt& b) {
    if (a.is_zero() || b.is_zero()) return BigInt();
    return (a * b).abs().exact_div(gcd(a, b));
}

BigInt BigInt::pow(const BigInt& base, unsigned e) {
    BigInt r(1), b = base;
    while (e != 0) {
        if (e & 1u) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

bool BigInt::isqrt(const BigInt& a, BigInt& root) {
    if (a.sign_ < 0) return false;
    if (a.is_zero()) {
        root = BigInt();
        return true;
    }
    // Newton iteration with a double-based initial guess.
    size_t bits = a.bit_length();
    BigInt x = BigInt(1);
    {
        long e;
        double m = a.top_double(e);  // value ~ m * 2^e
        double g = std::sqrt(m) * std::pow(2.0, static_cast<double>(e) / 2.0);
        if (std::isfinite(g) && g >= 1.0 && bits < 1000) {
            x = BigInt(static_cast<long long>(std::min(g, 9.0e18)));
        } else {
            x = pow(BigInt(2), static_cast<unsigned>(bits / 2 + 1));
        }
        // Guarantee x >= sqrt(a).
        while (x * x < a) x = x + x;
    }
    while (true) {
        BigInt y = (x + a / x) / BigInt(2);
        if (y >= x) break;
        x = std::move(y);
    }
    root = x;
    return true;
}

bool BigInt::sqrt_exact(const BigInt& a, BigInt& root) {
    if (!isqrt(a, root)) return false;
    return root * root == a;
}

int BigInt::cmp(const BigInt& o) const {
    if (sign_ != o.sign_) return sign_ < o.sign_ ? -1 : 1;
    int c = cmp_mag(mag_, o.mag_);
    return sign_ >= 0 ? c : -c;
}

size_t BigInt::bit_length() const {
    if (mag_.empty()) return 0;
    uint32_t t = mag_.back();
    size_t b = 0;
    while (t != 0) {
        t >>= 1;
        ++b;
    }
    return (mag_.size() - 1) * 32 + b;
}

double BigInt::top_double(long& exp2) const {
    // Returns m with |value| ~ m * 2^exp2, using the top two limbs.
    if (mag_.empty()) {
        exp2 = 0;
        return 0.0;
    }
    double m = 0.0;
    size_t n = mag_.size();
    m = static_cast<double>(mag_[n - 1]);
    if (n >= 2) m = m * 4294967296.0 + static_cast<double>(mag_[n - 2]);
    size_t used = n >= 2 ? 2 : 1;
    exp2 = static_cast<long>(32 * (n - used));
    return m;
}

double BigInt::to_double() const {
    long e;
    double m = top_double(e);
    double v = std::ldexp(m, static_cast<int>(e));
    return sign_ < 0 ? -v : v;
}

bool BigInt::fits_int64() const {
    if (mag_.size() > 2) return false;
    unsigned long long v = 0;
    if (mag_.size() == 2) v = (static_cast<unsigned long long>(mag_[1]) << 32) | mag_[0];
    else if (mag_.size() == 1) v = mag_[0];
    if (sign_ >= 0) return v <= 0x7fffffffffffffffull;
    return v <= 0x8000000000000000ull;
}

long long BigInt::to_int64() const {
    if (!fits_int64()) throw InternalError("BigInt does not fit int64");
    unsigned long long v = 0;
    if (mag_.size() == 2) v = (static_cast<unsigned long long>(mag_[1]) << 32) | mag_[0];
    else if (mag_.size() == 1) v = mag_[0];
    return sign_ < 0 ? -static_cast<long long>(v) : static_cast<long long>(v);
}

BigInt BigInt::from_string(std::string_view s) {
    if (s.empty()) throw InvalidArgument("empty integer literal");
    int sign = 1;
    size_t i = 0;
    if (s[0] == '+' || s[0] == '-') {
        sign = s[0] == '-' ? -1 : 1;
        i = 1;
    }
    if (i == s.size()) throw InvalidArgument("bad integer literal");
    static const long long p10[10] = {1,       10,       100,       1000,      10000,
                                      100000,  1000000,  10000000,  100000000, 1000000000};
    BigInt acc;
    size_t pos = i;
    while (pos < s.size()) {
        size_t take = std::min<size_t>(9, s.size() - pos);
        long long v = 0;
        for (size_t j = 0; j < take; ++j) {
            char c = s[pos + j];
            if (c < '0' || c > '9') throw InvalidArgument(std::string("bad digit in integer literal: ") + c);
            v = v * 10 + (c - '0');
        }
        acc = acc * BigInt(p10[take]) + BigInt(v);
        pos += take;
    }
    if (sign < 0) acc = -acc;
    return acc;
}

std::string BigInt::str() const {
    if (is_zero()) return "0";
    std::vector<uint32_t> m = mag_;
    std::string out;
    std::vector<uint32_t> q;
    while (!m.empty()) {
        // Divide by 10^9.
        q.assign(m.size(), 0);
        uint64_t rem = 0;
        for (size_t i = m.size(); i-- > 0;) {
            uint64_t cur = (rem << 32) | m[i];
            q[i] = static_cast<uint32_t>(cur / 1000000000ull);
            rem = cur % 1000000000ull;
        }
        while (!q.empty() && q.back() == 0) q.pop_back();
        char buf[16];
        if (q.empty()) {
            std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(rem));
        } else {
            std::snprintf(buf, sizeof buf, "%09llu", static_cast<unsigned long long>(rem));
        }
        out.insert(0, buf);
        m = std::move(q);
    }
    if (sign_ < 0) out.insert(0, "-");
    return out;
}

// ---------------------------------------------------------------------------

Rat::Rat(long long n, long long d) : num_(n), den_(d) { normalize(); }

Rat::Rat(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

void Rat::normalize() {
    if (den_.is_zero()) throw InternalError("Rat with zero denominator");
    if (num_.is_zero()) {
        den_ = BigInt(1);
        return;
    }
    if (den_.sign() < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (!g.is_one()) {
        num_ = num_.exact_div(g);
        den_ = den_.exact_div(g);
    }
}

Rat Rat::abs() const {
    Rat r = *this;
    if (r.num_.sign() < 0) r.num_ = -r.num_;
    return r;
}

Rat Rat::operator-() const {
    Rat r = *this;
    r.num_ = -r.num_;
    return r;
}

Rat operator+(const Rat& a, const Rat& b) {
    return Rat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rat operator-(const Rat& a, const Rat& b) {
    return Rat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rat operator*(const Rat& a, const Rat& b) { return Rat(a.num_ * b.num_, a.den_ * b.den_); }

Rat operator/(const Rat& a, const Rat& b) {
    if (b.is_zero()) throw InternalError("Rat division by zero");
    return Rat(a.num_ * b.den_, a.den_ * b.num_);
}

Rat Rat::inv() const {
    if (is_zero()) throw InternalError("Rat inverse of zero");
    return Rat(den_, num_);
}

Rat Rat::pow(int e) const {
    if (e < 0) return inv().pow(-e);
    Rat r(1), b = *this;
    unsigned u = static_cast<unsigned>(e);
    while (u != 0) {
        if (u & 1u) r *= b;
        b *= b;
        u >>= 1;
    }
    return r;
}

int Rat::cmp(const Rat& o) const { return (num_ * o.den_).cmp(o.num_ * den_); }

double Rat::to_double() const {
    if (num_.is_zero()) return 0.0;
    long en, ed;
    double mn = num_.top_double(en);
    double md = den_.top_double(ed);
    double v = std::ldexp(mn / md, static_cast<int>(en - ed));
    return num_.sign() < 0 ? -v : v;
}

bool Rat::sqrt_exact(Rat& root) const {
    if (sign() < 0) return false;
    BigInt rn, rd;
    if (!BigInt::sqrt_exact(num_, rn)) return false;
    if (!BigInt::sqrt_exact(den_, rd)) return false;
    root = Rat(std::move(rn), std::move(rd));
    return true;
}

Rat Rat::from_string(std::string_view s) {
    // Trim whitespace.
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (s.empty()) throw InvalidArgument("empty rational literal");
    size_t slash = s.find('/');
    if (slash != std::string_view::npos) {
        BigInt n = BigInt::from_string(s.substr(0, slash));
        BigInt d = BigInt::from_string(s.substr(slash + 1));
        if (d.is_zero()) throw InvalidArgument("rational with zero denominator");
        return Rat(std::move(n), std::move(d));
    }
    size_t dot = s.find('.');
    if (dot != std::string_view::npos) {
        std::string digits(s.substr(0, dot));
        std::string_view frac = s.substr(dot + 1);
        if (frac.empty() && digits.empty()) throw InvalidArgument("bad decimal literal");
        digits.append(frac);
        if (digits.empty() || digits == "-" || digits == "+") throw InvalidArgument("bad decimal literal");
        BigInt n = BigInt::from_string(digits);
        BigInt d = BigInt::pow(BigInt(10), static_cast<unsigned>(frac.size()));
        return Rat(std::move(n), std::move(d));
    }
    return Rat(BigInt::from_string(s), BigInt(1));
}

std::string Rat::str() const {
    if (den_.is_one()) return num_.str();
    return num_.str() + "/" + den_.str();
}

}  // namespace fractal
