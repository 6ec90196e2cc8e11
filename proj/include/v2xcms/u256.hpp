/*
 * Copyright 2026 The v2xcms Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef V2XCMS_U256_HPP
#define V2XCMS_U256_HPP

#include <array>
#include <cstdint>
#include <string_view>

#include "v2xcms/bytes.hpp"

namespace v2xcms {

// Unsigned 256-bit integer, four 64-bit limbs, least significant limb first.
struct U256 {
    uint64_t w[4] = {0, 0, 0, 0};

    static U256 zero() { return {}; }
    static U256 one() { return {{1, 0, 0, 0}}; }

    static U256 from_u64(uint64_t v) { return {{v, 0, 0, 0}}; }

    static U256 from_be_bytes(const std::array<uint8_t, 32>& b) {
        U256 r;
        for (int limb = 0; limb < 4; ++limb) {
            uint64_t v = 0;
            for (int i = 0; i < 8; ++i) v = v << 8 | b[size_t((3 - limb) * 8 + i)];
            r.w[limb] = v;
        }
        return r;
    }

    static U256 from_be_bytes(ByteView b) {
        std::array<uint8_t, 32> tmp{};
        if (b.size() != 32) throw std::invalid_argument("U256 expects 32 bytes");
        std::memcpy(tmp.data(), b.data(), 32);
        return from_be_bytes(tmp);
    }

    static U256 from_hex(std::string_view hex) { return from_be_bytes(hex_decode_fixed<32>(hex)); }

    std::array<uint8_t, 32> to_be_bytes() const {
        std::array<uint8_t, 32> b{};
        for (int limb = 0; limb < 4; ++limb) {
            uint64_t v = w[limb];
            for (int i = 7; i >= 0; --i) {
                b[size_t((3 - limb) * 8 + i)] = static_cast<uint8_t>(v);
                v >>= 8;
            }
        }
        return b;
    }

    std::string to_hex() const {
        auto b = to_be_bytes();
        return hex_encode(b);
    }

    bool is_zero() const { return (w[0] | w[1] | w[2] | w[3]) == 0; }

    bool bit(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }

    // Index of the highest set bit, or -1 for zero.
    int top_bit() const {
        for (int limb = 3; limb >= 0; --limb) {
            if (w[limb] != 0) return limb * 64 + 63 - __builtin_clzll(w[limb]);
        }
        return -1;
    }

    bool is_odd() const { return w[0] & 1; }

    friend bool operator==(const U256& a, const U256& b) {
        return a.w[0] == b.w[0] && a.w[1] == b.w[1] && a.w[2] == b.w[2] && a.w[3] == b.w[3];
    }
};

// -1, 0, +1 ordering of a vs b.
inline int u256_cmp(const U256& a, const U256& b) {
    for (int i = 3; i >= 0; --i) {
        if (a.w[i] < b.w[i]) return -1;
        if (a.w[i] > b.w[i]) return 1;
    }
    return 0;
}

// r = a + b, returns the carry out.
inline uint64_t u256_add(U256& r, const U256& a, const U256& b) {
    unsigned __int128 c = 0;
    for (int i = 0; i < 4; ++i) {
        c += static_cast<unsigned __int128>(a.w[i]) + b.w[i];
        r.w[i] = static_cast<uint64_t>(c);
        c >>= 64;
    }
    return static_cast<uint64_t>(c);
}

// r = a - b, returns the borrow out (1 if a < b).
inline uint64_t u256_sub(U256& r, const U256& a, const U256& b) {
    unsigned __int128 borrow = 0;
    for (int i = 0; i < 4; ++i) {
        unsigned __int128 d = static_cast<unsigned __int128>(a.w[i]) - b.w[i] - borrow;
        r.w[i] = static_cast<uint64_t>(d);
        borrow = (d >> 64) & 1;
    }
    return static_cast<uint64_t>(borrow);
}

inline U256 u256_shr1(const U256& a) {
    U256 r;
    for (int i = 0; i < 4; ++i) {
        r.w[i] = a.w[i] >> 1;
        if (i < 3) r.w[i] |= a.w[i + 1] << 63;
    }
    return r;
}

// Reduces x modulo m under the precondition x < 2m. Every modulus used by
// this library (all three field primes and group orders) exceeds 2^255, so a
// 256-bit value is always < 2m and one conditional subtraction is complete.
inline U256 u256_reduce_once(const U256& x, const U256& m) {
    if (u256_cmp(x, m) >= 0) {
        U256 r;
        u256_sub(r, x, m);
        return r;
    }
    return x;
}

inline U256 u256_add_mod(const U256& a, const U256& b, const U256& m) {
    U256 r;
    uint64_t carry = u256_add(r, a, b);
    if (carry || u256_cmp(r, m) >= 0) {
        U256 t;
        u256_sub(t, r, m);
        return t;
    }
    return r;
}

inline U256 u256_sub_mod(const U256& a, const U256& b, const U256& m) {
    U256 r;
    if (u256_sub(r, a, b)) {
        U256 t;
        u256_add(t, r, m);
        return t;
    }
    return r;
}

// Montgomery arithmetic context for one odd modulus. Values inside the
// context are kept in Montgomery form (x * 2^256 mod m); to_mont/from_mont
// convert at the boundary.
class MontCtx {
  public:
    explicit MontCtx(const U256& modulus) : m_(modulus) {
        // n0 = -m^{-1} mod 2^64, by Newton iteration on the odd low limb.
        uint64_t x = m_.w[0];
        uint64_t inv = x;
        for (int i = 0; i < 5; ++i) inv *= 2 - x * inv;
        n0_ = ~inv + 1;

        // R mod m via 256 modular doublings of 1, then R^2 mod m via 256 more.
        U256 r = U256::one();
        for (int i = 0; i < 256; ++i) r = u256_add_mod(r, r, m_);
        one_ = r;
        for (int i = 0; i < 256; ++i) r = u256_add_mod(r, r, m_);
        rr_ = r;
    }

    const U256& modulus() const { return m_; }
    const U256& one() const { return one_; }  // Montgomery form of 1

    U256 to_mont(const U256& x) const { return mul(x, rr_); }
    U256 from_mont(const U256& x) const { return mul(x, U256::one()); }

    // CIOS Montgomery multiplication: returns a*b*2^-256 mod m.
    U256 mul(const U256& a, const U256& b) const {
        uint64_t t[6] = {0, 0, 0, 0, 0, 0};
        for (int i = 0; i < 4; ++i) {
            uint64_t carry = 0;
            for (int j = 0; j < 4; ++j) {
                unsigned __int128 cur = static_cast<unsigned __int128>(a.w[i]) * b.w[j] + t[j] + carry;
                t[j] = static_cast<uint64_t>(cur);
                carry = static_cast<uint64_t>(cur >> 64);
            }
            unsigned __int128 cur = static_cast<unsigned __int128>(t[4]) + carry;
            t[4] = static_cast<uint64_t>(cur);
            t[5] = static_cast<uint64_t>(cur >> 64);

            uint64_t mfac = t[0] * n0_;
            cur = static_cast<unsigned __int128>(mfac) * m_.w[0] + t[0];
            carry = static_cast<uint64_t>(cur >> 64);
            for (int j = 1; j < 4; ++j) {
                cur = static_cast<unsigned __int128>(mfac) * m_.w[j] + t[j] + carry;
                t[j - 1] = static_cast<uint64_t>(cur);
                carry = static_cast<uint64_t>(cur >> 64);
            }
            cur = static_cast<unsigned __int128>(t[4]) + carry;
            t[3] = static_cast<uint64_t>(cur);
            t[4] = t[5] + static_cast<uint64_t>(cur >> 64);
        }
        U256 r{{t[0], t[1], t[2], t[3]}};
        if (t[4] != 0 || u256_cmp(r, m_) >= 0) {
            U256 s;
            u256_sub(s, r, m_);
            return s;
        }
        return r;
    }

    U256 sqr(const U256& a) const { return mul(a, a); }
    U256 add(const U256& a, const U256& b) const { return u256_add_mod(a, b, m_); }
    U256 sub(const U256& a, const U256& b) const { return u256_sub_mod(a, b, m_); }

    // base must be in Montgomery form; the exponent is a plain integer.
    U256 pow(const U256& base, const U256& exp) const {
        int top = exp.top_bit();
        if (top < 0) return one_;
        U256 acc = base;
        for (int i = top - 1; i >= 0; --i) {
            acc = sqr(acc);
            if (exp.bit(i)) acc = mul(acc, base);
        }
        return acc;
    }

    // Modular inverse via Fermat: valid because every modulus here is prime.
    U256 inv(const U256& a) const {
        U256 e;
        u256_sub(e, m_, U256::from_u64(2));
        return pow(a, e);
    }

    // Plain-domain product a*b mod m: mont-mul(a, R^2) lifts a, the second
    // mont-mul drops back down.
    U256 mul_plain(const U256& a, const U256& b) const { return mul(mul(a, rr_), b); }

    U256 inv_plain(const U256& a) const { return from_mont(inv(to_mont(a))); }

  private:
    U256 m_;
    uint64_t n0_;
    U256 rr_;
    U256 one_;
};

}  // namespace v2xcms

#endif
