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

#ifndef V2XCMS_EC_HPP
#define V2XCMS_EC_HPP

#include <array>
#include <cstdint>
#include <string>

#include "v2xcms/errors.hpp"
#include "v2xcms/u256.hpp"

namespace v2xcms {

// Counts scalar multiplications per thread. Verification-cost comparisons
// rely on this counter ticking exactly once per scalar_mul/base_mul call, so
// no multi-scalar shortcuts (Shamir's trick etc.) may be introduced in the
// verify paths.
inline thread_local uint64_t g_scalar_mul_count = 0;

inline uint64_t scalar_mul_count() { return g_scalar_mul_count; }
inline void reset_scalar_mul_count() { g_scalar_mul_count = 0; }

struct AffinePoint {
    U256 x, y;
    bool inf = false;

    static AffinePoint infinity() { return {U256::zero(), U256::zero(), true}; }

    friend bool operator==(const AffinePoint& a, const AffinePoint& b) {
        if (a.inf || b.inf) return a.inf == b.inf;
        return a.x == b.x && a.y == b.y;
    }
};

// Short Weierstrass curve y^2 = x^3 + ax + b over a 256-bit prime field.
// Doubling uses the general-a Jacobian formulas because brainpoolP256r1 has
// an arbitrary a. Every prime here is 3 mod 4, so decompression can take the
// (p+1)/4 square root.
class Curve {
  public:
    enum class Id : uint8_t { p256 = 0, brainpool256 = 1, sm2 = 2 };

    static const Curve& p256() {
        static const Curve c(Id::p256, "p256",
                             "ffffffff00000001000000000000000000000000ffffffffffffffffffffffff",
                             "ffffffff00000001000000000000000000000000fffffffffffffffffffffffc",
                             "5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b",
                             "ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551",
                             "6b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296",
                             "4fe342e2fe1a7f9b8ee7eb4a7c0f9e162bce33576b315ececbb6406837bf51f5");
        return c;
    }

    static const Curve& brainpool256() {
        static const Curve c(Id::brainpool256, "brainpool256r1",
                             "a9fb57dba1eea9bc3e660a909d838d726e3bf623d52620282013481d1f6e5377",
                             "7d5a0975fc2c3057eef67530417affe7fb8055c126dc5c6ce94a4b44f330b5d9",
                             "26dc5c6ce94a4b44f330b5d9bbd77cbf958416295cf7e1ce6bccdc18ff8c07b6",
                             "a9fb57dba1eea9bc3e660a909d838d718c397aa3b561a6f7901e0e82974856a7",
                             "8bd2aeb9cb7e57cb2c4b482ffc81b7afb9de27e1e3bd23c23a4453bd9ace3262",
                             "547ef835c3dac4fd97f8461a14611dc9c27745132ded8e545c1d54c72f046997");
        return c;
    }

    static const Curve& sm2() {
        static const Curve c(Id::sm2, "sm2p256",
                             "fffffffeffffffffffffffffffffffffffffffff00000000ffffffffffffffff",
                             "fffffffeffffffffffffffffffffffffffffffff00000000fffffffffffffffc",
                             "28e9fa9e9d9f5e344d5a9e4bcf6509a7f39789f515ab8f92ddbcbd414d940e93",
                             "fffffffeffffffffffffffffffffffff7203df6b21c6052b53bbf40939d54123",
                             "32c4ae2c1f1981195f9904466a39c9948fe30bbff2660be1715a4589334c74c7",
                             "bc3736a2f4f6779c59bdcee36b692153d0a9877cc62a474002df32e52139f0a0");
        return c;
    }

    static const Curve& by_id(Id id) {
        switch (id) {
            case Id::p256: return p256();
            case Id::brainpool256: return brainpool256();
            case Id::sm2: return sm2();
        }
        throw UnknownEnum("curve id", static_cast<unsigned>(id));
    }

    Id id() const { return id_; }
    const char* name() const { return name_; }
    const U256& p() const { return fp_.modulus(); }
    const U256& n() const { return fn_.modulus(); }
    const U256& a() const { return a_plain_; }
    const U256& b() const { return b_plain_; }
    const MontCtx& field() const { return fp_; }
    const MontCtx& order() const { return fn_; }
    AffinePoint generator() const { return gen_; }

    // ---- scalar arithmetic mod n -----------------------------------------

    // Interprets a 256-bit value as a scalar mod n. One conditional subtract
    // is complete because n > 2^255 on every supported curve.
    U256 scalar_from_bytes(const std::array<uint8_t, 32>& b) const {
        return u256_reduce_once(U256::from_be_bytes(b), n());
    }

    U256 scalar_add(const U256& a, const U256& b) const { return u256_add_mod(a, b, n()); }
    U256 scalar_sub(const U256& a, const U256& b) const { return u256_sub_mod(a, b, n()); }
    U256 scalar_mul_mod_n(const U256& a, const U256& b) const { return fn_.mul_plain(a, b); }
    U256 scalar_inv(const U256& a) const { return fn_.inv_plain(a); }

    // ---- point arithmetic ------------------------------------------------

    bool on_curve(const AffinePoint& pt) const {
        if (pt.inf) return true;
        if (u256_cmp(pt.x, p()) >= 0 || u256_cmp(pt.y, p()) >= 0) return false;
        U256 x = fp_.to_mont(pt.x), y = fp_.to_mont(pt.y);
        U256 lhs = fp_.sqr(y);
        U256 rhs = fp_.add(fp_.mul(fp_.add(fp_.sqr(x), a_), x), b_);
        return lhs == rhs;
    }

    AffinePoint add(const AffinePoint& a, const AffinePoint& b) const {
        return from_j(j_add(to_j(a), to_j(b)));
    }

    AffinePoint dbl(const AffinePoint& a) const { return from_j(j_dbl(to_j(a))); }

    AffinePoint negate(const AffinePoint& a) const {
        if (a.inf) return a;
        return {a.x, u256_sub_mod(U256::zero(), a.y, p()), false};
    }

    // Windowed-NAF multiplication, window 4. Bumps the per-thread counter.
    // The scalar is reduced mod n first; all three curves have cofactor 1,
    // so the result is unchanged and the recoding below never overflows.
    AffinePoint scalar_mul(const AffinePoint& pt, const U256& k) const {
        ++g_scalar_mul_count;
        U256 kr = u256_reduce_once(k, n());
        if (pt.inf || kr.is_zero()) return AffinePoint::infinity();

        int8_t digits[260];
        int len = wnaf4(kr, digits);

        JPoint tab[4];
        tab[0] = to_j(pt);
        JPoint twice = j_dbl(tab[0]);
        for (int i = 1; i < 4; ++i) tab[i] = j_add(tab[i - 1], twice);

        JPoint acc = j_infinity();
        for (int i = len - 1; i >= 0; --i) {
            acc = j_dbl(acc);
            int8_t d = digits[i];
            if (d > 0) acc = j_add(acc, tab[(d - 1) / 2]);
            else if (d < 0) acc = j_add(acc, j_neg(tab[(-d - 1) / 2]));
        }
        return from_j(acc);
    }

    AffinePoint base_mul(const U256& k) const { return scalar_mul(gen_, k); }

    // ---- SEC1 compressed encoding ----------------------------------------

    std::array<uint8_t, 33> compress(const AffinePoint& pt) const {
        if (pt.inf) throw InvariantViolation("cannot compress the point at infinity");
        std::array<uint8_t, 33> out{};
        out[0] = pt.y.is_odd() ? 0x03 : 0x02;
        auto xb = pt.x.to_be_bytes();
        std::memcpy(out.data() + 1, xb.data(), 32);
        return out;
    }

    AffinePoint decompress(const std::array<uint8_t, 33>& enc) const {
        if (enc[0] != 0x02 && enc[0] != 0x03) throw MalformedPoint("bad compression prefix");
        std::array<uint8_t, 32> xb{};
        std::memcpy(xb.data(), enc.data() + 1, 32);
        U256 x = U256::from_be_bytes(xb);
        if (u256_cmp(x, p()) >= 0) throw MalformedPoint("x not a field element");
        U256 xm = fp_.to_mont(x);
        U256 rhs = fp_.add(fp_.mul(fp_.add(fp_.sqr(xm), a_), xm), b_);
        U256 ym = fp_.pow(rhs, sqrt_exp_);
        if (!(fp_.sqr(ym) == rhs)) throw MalformedPoint("x has no square root on curve");
        U256 y = fp_.from_mont(ym);
        bool want_odd = enc[0] == 0x03;
        if (y.is_odd() != want_odd) y = u256_sub_mod(U256::zero(), y, p());
        return {x, y, false};
    }

  private:
    struct JPoint {
        U256 X, Y, Z;  // Montgomery-form Jacobian; Z == 0 marks infinity
    };

    Curve(Id id, const char* name, const char* p_hex, const char* a_hex, const char* b_hex,
          const char* n_hex, const char* gx_hex, const char* gy_hex)
        : id_(id),
          name_(name),
          fp_(U256::from_hex(p_hex)),
          fn_(U256::from_hex(n_hex)),
          a_plain_(U256::from_hex(a_hex)),
          b_plain_(U256::from_hex(b_hex)) {
        a_ = fp_.to_mont(a_plain_);
        b_ = fp_.to_mont(b_plain_);
        gen_ = {U256::from_hex(gx_hex), U256::from_hex(gy_hex), false};
        if (!on_curve(gen_)) throw InvariantViolation("generator is off curve");
        // (p+1)/4; p+1 never overflows 256 bits for the supported primes.
        U256 e;
        u256_add(e, fp_.modulus(), U256::one());
        sqrt_exp_ = u256_shr1(u256_shr1(e));
    }

    JPoint j_infinity() const { return {fp_.one(), fp_.one(), U256::zero()}; }

    static bool j_is_inf(const JPoint& a) { return a.Z.is_zero(); }

    JPoint to_j(const AffinePoint& a) const {
        if (a.inf) return j_infinity();
        return {fp_.to_mont(a.x), fp_.to_mont(a.y), fp_.one()};
    }

    AffinePoint from_j(const JPoint& a) const {
        if (j_is_inf(a)) return AffinePoint::infinity();
        U256 zi = fp_.inv(a.Z);
        U256 zi2 = fp_.sqr(zi);
        U256 x = fp_.mul(a.X, zi2);
        U256 y = fp_.mul(a.Y, fp_.mul(zi2, zi));
        return {fp_.from_mont(x), fp_.from_mont(y), false};
    }

    JPoint j_neg(const JPoint& a) const {
        if (j_is_inf(a)) return a;
        return {a.X, fp_.sub(U256::zero(), a.Y), a.Z};
    }

    // EFD dbl-2007-bl; correct for any a, and yields Z3 = 0 when Y1 = 0.
    JPoint j_dbl(const JPoint& pt) const {
        if (j_is_inf(pt)) return pt;
        U256 xx = fp_.sqr(pt.X);
        U256 yy = fp_.sqr(pt.Y);
        U256 yyyy = fp_.sqr(yy);
        U256 zz = fp_.sqr(pt.Z);
        U256 s = fp_.sub(fp_.sub(fp_.sqr(fp_.add(pt.X, yy)), xx), yyyy);
        s = fp_.add(s, s);
        U256 m = fp_.add(fp_.add(fp_.add(xx, xx), xx), fp_.mul(a_, fp_.sqr(zz)));
        U256 t = fp_.sub(fp_.sqr(m), fp_.add(s, s));
        U256 y8 = fp_.add(yyyy, yyyy);
        y8 = fp_.add(y8, y8);
        y8 = fp_.add(y8, y8);
        U256 z3 = fp_.sub(fp_.sub(fp_.sqr(fp_.add(pt.Y, pt.Z)), yy), zz);
        return {t, fp_.sub(fp_.mul(m, fp_.sub(s, t)), y8), z3};
    }

    // EFD add-2007-bl with the degenerate cases folded in.
    JPoint j_add(const JPoint& a, const JPoint& b) const {
        if (j_is_inf(a)) return b;
        if (j_is_inf(b)) return a;
        U256 z1z1 = fp_.sqr(a.Z);
        U256 z2z2 = fp_.sqr(b.Z);
        U256 u1 = fp_.mul(a.X, z2z2);
        U256 u2 = fp_.mul(b.X, z1z1);
        U256 s1 = fp_.mul(fp_.mul(a.Y, b.Z), z2z2);
        U256 s2 = fp_.mul(fp_.mul(b.Y, a.Z), z1z1);
        U256 h = fp_.sub(u2, u1);
        U256 rr = fp_.sub(s2, s1);
        if (h.is_zero()) {
            if (rr.is_zero()) return j_dbl(a);
            return j_infinity();
        }
        rr = fp_.add(rr, rr);
        U256 i = fp_.sqr(fp_.add(h, h));
        U256 j = fp_.mul(h, i);
        U256 v = fp_.mul(u1, i);
        U256 x3 = fp_.sub(fp_.sub(fp_.sqr(rr), j), fp_.add(v, v));
        U256 s1j = fp_.mul(s1, j);
        U256 y3 = fp_.sub(fp_.mul(rr, fp_.sub(v, x3)), fp_.add(s1j, s1j));
        U256 z3 = fp_.mul(fp_.sub(fp_.sub(fp_.sqr(fp_.add(a.Z, b.Z)), z1z1), z2z2), h);
        return {x3, y3, z3};
    }

    // Signed digits, window 4: odd values in [-7, 7] or 0.
    static int wnaf4(U256 k, int8_t digits[260]) {
        int len = 0;
        while (!k.is_zero()) {
            int8_t d = 0;
            if (k.is_odd()) {
                int low = static_cast<int>(k.w[0] & 15);
                d = static_cast<int8_t>(low >= 8 ? low - 16 : low);
                if (d > 0) sub_small(k, static_cast<uint64_t>(d));
                else add_small(k, static_cast<uint64_t>(-d));
            }
            digits[len++] = d;
            k = u256_shr1(k);
        }
        return len;
    }

    static void add_small(U256& a, uint64_t v) {
        unsigned __int128 c = v;
        for (int i = 0; i < 4 && c != 0; ++i) {
            c += a.w[i];
            a.w[i] = static_cast<uint64_t>(c);
            c >>= 64;
        }
    }

    static void sub_small(U256& a, uint64_t v) {
        uint64_t borrow = a.w[0] < v ? 1 : 0;
        a.w[0] -= v;
        for (int i = 1; i < 4 && borrow; ++i) {
            borrow = a.w[i] == 0 ? 1 : 0;
            a.w[i] -= 1;
        }
    }

    Id id_;
    const char* name_;
    MontCtx fp_;
    MontCtx fn_;
    U256 a_plain_, b_plain_;
    U256 a_, b_;  // Montgomery form
    AffinePoint gen_;
    U256 sqrt_exp_;
};

}  // namespace v2xcms

#endif
