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

#ifndef V2XCMS_CRYPTO_SUITE_HPP
#define V2XCMS_CRYPTO_SUITE_HPP

#include <array>
#include <optional>
#include <string_view>
#include <utility>

#include "v2xcms/aes128.hpp"
#include "v2xcms/ccm.hpp"
#include "v2xcms/ec.hpp"
#include "v2xcms/rng.hpp"
#include "v2xcms/sha256.hpp"
#include "v2xcms/sm3.hpp"
#include "v2xcms/sm4.hpp"

namespace v2xcms {

// The three credential-management profiles and their cipher suites:
//   scms  -> NIST P-256, SHA-256, AES-128-CCM (ECDSA)
//   ccms  -> brainpoolP256r1, SHA-256, AES-128-CCM (ECDSA)
//   cscms -> SM2-256, SM3, SM4-128-CCM (SM2 signatures)
enum class Profile : uint8_t { scms = 0, ccms = 1, cscms = 2 };

inline const char* profile_name(Profile p) {
    switch (p) {
        case Profile::scms: return "scms";
        case Profile::ccms: return "ccms";
        case Profile::cscms: return "cscms";
    }
    throw UnknownEnum("profile", static_cast<unsigned>(p));
}

inline Profile profile_from_name(std::string_view name) {
    if (name == "scms") return Profile::scms;
    if (name == "ccms") return Profile::ccms;
    if (name == "cscms") return Profile::cscms;
    throw Error("unknown profile name: " + std::string(name));
}

constexpr Profile kAllProfiles[] = {Profile::scms, Profile::ccms, Profile::cscms};

struct KeyPair {
    U256 d;
    AffinePoint pub;
};

struct Signature {
    U256 r, s;

    std::array<uint8_t, 64> to_bytes() const {
        std::array<uint8_t, 64> out;
        auto rb = r.to_be_bytes(), sb = s.to_be_bytes();
        std::memcpy(out.data(), rb.data(), 32);
        std::memcpy(out.data() + 32, sb.data(), 32);
        return out;
    }

    static Signature from_bytes(const std::array<uint8_t, 64>& b) {
        std::array<uint8_t, 32> rb{}, sb{};
        std::memcpy(rb.data(), b.data(), 32);
        std::memcpy(sb.data(), b.data() + 32, 32);
        return {U256::from_be_bytes(rb), U256::from_be_bytes(sb)};
    }

    friend bool operator==(const Signature& a, const Signature& b) { return a.r == b.r && a.s == b.s; }
};

struct KemCiphertext {
    std::array<uint8_t, 33> ephemeral_point;
    std::array<uint8_t, 16> wrapped_key;
    std::array<uint8_t, 16> tag;
};

using SymKey = std::array<uint8_t, 16>;

class CryptoSuite {
  public:
    static const CryptoSuite& get(Profile p) {
        static const CryptoSuite scms(Profile::scms, Curve::p256(), false, false);
        static const CryptoSuite ccms(Profile::ccms, Curve::brainpool256(), false, false);
        static const CryptoSuite cscms(Profile::cscms, Curve::sm2(), true, true);
        switch (p) {
            case Profile::scms: return scms;
            case Profile::ccms: return ccms;
            case Profile::cscms: return cscms;
        }
        throw UnknownEnum("profile", static_cast<unsigned>(p));
    }

    Profile profile() const { return profile_; }
    const Curve& curve() const { return curve_; }
    const char* name() const { return profile_name(profile_); }

    // ---- hashing ----------------------------------------------------------

    Digest32 digest(ByteView data) const { return use_sm3_ ? sm3(data) : sha256(data); }

    // ---- keys -------------------------------------------------------------

    KeyPair generate_keypair(RandomSource& rng) const {
        U256 d = random_scalar(curve_, rng);
        return {d, curve_.base_mul(d)};
    }

    KeyPair keypair_from_scalar(const U256& d) const {
        if (d.is_zero() || u256_cmp(d, curve_.n()) >= 0) throw OutOfRange("private scalar");
        return {d, curve_.base_mul(d)};
    }

    // ---- signatures -------------------------------------------------------

    Signature sign(const KeyPair& key, ByteView message, RandomSource& rng) const {
        for (;;) {
            U256 k = random_scalar(curve_, rng);
            if (auto sig = try_sign(key, message, k)) return *sig;
        }
    }

    // Nonce-injected variant for known-answer tests and replayable runs.
    // The caller owns nonce uniqueness; a degenerate nonce throws.
    Signature sign_with_nonce(const KeyPair& key, ByteView message, const U256& k) const {
        if (k.is_zero() || u256_cmp(k, curve_.n()) >= 0) throw OutOfRange("signature nonce");
        if (auto sig = try_sign(key, message, k)) return *sig;
        throw OutOfRange("degenerate signature nonce");
    }

    bool verify(const AffinePoint& pub, ByteView message, const Signature& sig) const {
        if (pub.inf || !curve_.on_curve(pub)) return false;
        const U256& n = curve_.n();
        if (sig.r.is_zero() || u256_cmp(sig.r, n) >= 0) return false;
        if (sig.s.is_zero() || u256_cmp(sig.s, n) >= 0) return false;
        // Both branches compute two separate scalar multiplications plus one
        // point addition; verification-cost accounting depends on this shape.
        if (use_sm2_sig_) {
            U256 t = curve_.scalar_add(sig.r, sig.s);
            if (t.is_zero()) return false;
            AffinePoint rp = curve_.add(curve_.base_mul(sig.s), curve_.scalar_mul(pub, t));
            if (rp.inf) return false;
            U256 e = sm2_message_scalar(pub, message);
            U256 v = curve_.scalar_add(e, u256_reduce_once(rp.x, n));
            return v == sig.r;
        }
        U256 e = curve_.scalar_from_bytes(digest(message));
        U256 sinv = curve_.scalar_inv(sig.s);
        U256 u1 = curve_.scalar_mul_mod_n(e, sinv);
        U256 u2 = curve_.scalar_mul_mod_n(sig.r, sinv);
        AffinePoint rp = curve_.add(curve_.base_mul(u1), curve_.scalar_mul(pub, u2));
        if (rp.inf) return false;
        return u256_reduce_once(rp.x, n) == sig.r;
    }

    // ---- KEM --------------------------------------------------------------

    KemCiphertext kem_encapsulate(const AffinePoint& recipient, const SymKey& key_to_wrap,
                                  RandomSource& rng) const {
        if (recipient.inf || !curve_.on_curve(recipient)) throw MalformedPoint("kem recipient");
        U256 k = random_scalar(curve_, rng);
        AffinePoint eph = curve_.base_mul(k);
        KemKeys keys = kem_kdf(curve_.scalar_mul(recipient, k));
        SymKey wrapped = xor_bytes(key_to_wrap, keys.k_enc);
        return {curve_.compress(eph), wrapped, kem_tag(keys.k_mac, wrapped)};
    }

    SymKey kem_decapsulate(const KeyPair& recipient, const KemCiphertext& ct) const {
        AffinePoint eph = curve_.decompress(ct.ephemeral_point);
        AffinePoint shared_pt = curve_.scalar_mul(eph, recipient.d);
        if (shared_pt.inf) throw MalformedPoint("kem ephemeral point has small order");
        KemKeys keys = kem_kdf(shared_pt);
        if (!equal16(kem_tag(keys.k_mac, ct.wrapped_key), ct.tag)) throw TagMismatch();
        return xor_bytes(ct.wrapped_key, keys.k_enc);
    }

    // ---- AEAD -------------------------------------------------------------

    Bytes aead_encrypt(const SymKey& key, const Nonce12& nonce, ByteView plaintext) const {
        if (use_sm4_) return ccm_seal(Sm4(key), nonce, plaintext);
        return ccm_seal(Aes128(key), nonce, plaintext);
    }

    Bytes aead_decrypt(const SymKey& key, const Nonce12& nonce, ByteView sealed) const {
        if (use_sm4_) return ccm_open(Sm4(key), nonce, sealed);
        return ccm_open(Aes128(key), nonce, sealed);
    }

    // Single forward block of the profile cipher; the key-expansion PRF and
    // the secure-channel framing build on this.
    std::array<uint8_t, 16> cipher_block(const SymKey& key, const std::array<uint8_t, 16>& block) const {
        if (use_sm4_) return Sm4(key).encrypt_block(block);
        return Aes128(key).encrypt_block(block);
    }

  private:
    CryptoSuite(Profile p, const Curve& curve, bool use_sm3, bool use_sm4)
        : profile_(p), curve_(curve), use_sm3_(use_sm3), use_sm4_(use_sm4), use_sm2_sig_(curve.id() == Curve::Id::sm2) {}

    static bool equal16(const std::array<uint8_t, 16>& a, const std::array<uint8_t, 16>& b) {
        uint8_t d = 0;
        for (size_t i = 0; i < 16; ++i) d |= static_cast<uint8_t>(a[i] ^ b[i]);
        return d == 0;
    }

    // Z identity hash over the fixed 16-byte user id "1234567812345678":
    // SM3(0x0080 ‖ id ‖ a ‖ b ‖ gx ‖ gy ‖ px ‖ py).
    U256 sm2_message_scalar(const AffinePoint& pub, ByteView message) const {
        Sm3 h;
        static constexpr uint8_t entl[2] = {0x00, 0x80};
        h.update(ByteView{entl, 2});
        h.update(as_bytes("1234567812345678"));
        auto put = [&h](const U256& v) {
            auto b = v.to_be_bytes();
            h.update(ByteView{b.data(), b.size()});
        };
        put(curve_.a());
        put(curve_.b());
        put(curve_.generator().x);
        put(curve_.generator().y);
        put(pub.x);
        put(pub.y);
        Digest32 za = h.finish();
        Sm3 h2;
        h2.update(ByteView{za.data(), za.size()});
        h2.update(message);
        return curve_.scalar_from_bytes(h2.finish());
    }

    std::optional<Signature> try_sign(const KeyPair& key, ByteView message, const U256& k) const {
        const U256& n = curve_.n();
        AffinePoint rp = curve_.base_mul(k);
        if (use_sm2_sig_) {
            U256 e = sm2_message_scalar(key.pub, message);
            U256 r = curve_.scalar_add(e, u256_reduce_once(rp.x, n));
            if (r.is_zero()) return std::nullopt;
            if (curve_.scalar_add(r, k).is_zero()) return std::nullopt;  // r + k = n
            U256 dinv = curve_.scalar_inv(curve_.scalar_add(U256::one(), key.d));
            U256 s = curve_.scalar_mul_mod_n(dinv, curve_.scalar_sub(k, curve_.scalar_mul_mod_n(r, key.d)));
            if (s.is_zero()) return std::nullopt;
            return Signature{r, s};
        }
        U256 e = curve_.scalar_from_bytes(digest(message));
        U256 r = u256_reduce_once(rp.x, n);
        if (r.is_zero()) return std::nullopt;
        U256 s = curve_.scalar_mul_mod_n(curve_.scalar_inv(k), curve_.scalar_add(e, curve_.scalar_mul_mod_n(r, key.d)));
        if (s.is_zero()) return std::nullopt;
        return Signature{r, s};
    }

    struct KemKeys {
        SymKey k_enc;
        Digest32 k_mac;
    };

    // Hash-counter KDF over the big-endian X of the shared point:
    // k_enc = first 16 bytes of digest(X ‖ 0x00000001),
    // k_mac = digest(X ‖ 0x00000002).
    KemKeys kem_kdf(const AffinePoint& shared_pt) const {
        auto shared = shared_pt.x.to_be_bytes();
        Bytes in(shared.begin(), shared.end());
        in.insert(in.end(), {0x00, 0x00, 0x00, 0x01});
        Digest32 d1 = digest(in);
        in[35] = 0x02;
        KemKeys keys;
        keys.k_mac = digest(in);
        std::memcpy(keys.k_enc.data(), d1.data(), 16);
        return keys;
    }

    std::array<uint8_t, 16> kem_tag(const Digest32& k_mac, const SymKey& wrapped) const {
        Bytes in(k_mac.begin(), k_mac.end());
        append(in, ByteView{wrapped.data(), wrapped.size()});
        Digest32 t = digest(in);
        std::array<uint8_t, 16> tag;
        std::memcpy(tag.data(), t.data(), 16);
        return tag;
    }

    Profile profile_;
    const Curve& curve_;
    bool use_sm3_;
    bool use_sm4_;
    bool use_sm2_sig_;
};

}  // namespace v2xcms

#endif
