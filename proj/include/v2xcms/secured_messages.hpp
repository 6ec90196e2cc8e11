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

#ifndef V2XCMS_SECURED_MESSAGES_HPP
#define V2XCMS_SECURED_MESSAGES_HPP

#include "v2xcms/cert_model.hpp"

namespace v2xcms {

enum class VerifyResult : uint8_t {
    Accept = 0,
    UnresolvedSigner = 1,
    ChainInvalid = 2,
    BadSignature = 3,
};

inline const char* verify_result_name(VerifyResult r) {
    switch (r) {
        case VerifyResult::Accept: return "Accept";
        case VerifyResult::UnresolvedSigner: return "UnresolvedSigner";
        case VerifyResult::ChainInvalid: return "ChainInvalid";
        case VerifyResult::BadSignature: return "BadSignature";
    }
    return "?";
}

// Which key-recovery path verification took; reconstruction costs one extra
// scalar multiplication and the distinction is what the cost comparison
// between explicit and implicit credentials measures.
enum class SignerKeyPath : uint8_t { None = 0, ContainedKey = 1, Reconstructed = 2 };

struct VerifyOutcome {
    VerifyResult result = VerifyResult::BadSignature;
    SignerKeyPath key_path = SignerKeyPath::None;
    std::string detail;

    bool accepted() const { return result == VerifyResult::Accept; }

    static VerifyOutcome accept(SignerKeyPath path) { return {VerifyResult::Accept, path, {}}; }
    static VerifyOutcome reject(VerifyResult r, std::string why) { return {r, SignerKeyPath::None, std::move(why)}; }
};

// Signs a payload into a Signed envelope. The declared hash id defaults to
// the profile hash; the override only changes the declared field, hashing
// itself always follows the profile (the field is authenticated but carries
// no dispatch weight, so producer and verifier cannot disagree about the
// actual computation).
inline SignedData sign_data(Profile profile, ByteView payload, uint32_t app_id, const Certificate& signer_cert,
                            const U256& signer_private, SignerKind signer_mode, Time64 generation_time,
                            RandomSource& rng, std::optional<HashAlgo> declared_hash = {}) {
    const auto& suite = CryptoSuite::get(profile);
    KeyPair key = suite.keypair_from_scalar(signer_private);
    // For explicit signer certificates the correspondence is checkable right
    // here. For implicit ones it involves the issuer key and is established
    // when the message verifies against the reconstructed key.
    if (signer_cert.is_explicit() && !(contained_key(suite, signer_cert) == key.pub)) throw KeyCertMismatch();

    SignedData msg;
    msg.hash_id = declared_hash.value_or(profile_hash(profile));
    msg.app_id = app_id;
    msg.generation_time = generation_time;
    msg.payload = Bytes(payload.begin(), payload.end());
    msg.signer_kind = signer_mode;
    if (signer_mode == SignerKind::Certificate) msg.signer_cert = signer_cert;
    else msg.signer_digest = hashed_id8(profile, signer_cert);

    Digest32 input = signature_input(suite, signed_data_sign_content(msg), encode_certificate(signer_cert));
    msg.signature = suite.sign(key, input, rng);
    return msg;
}

// Verification against a trust store that doubles as the digest resolver.
// Accepts iff the signer certificate resolves, sits correctly under the
// store's trust (store-resident certificates were chain-checked at insertion
// and only their validity window is rechecked here; an inline certificate
// unknown to the store is checked against its store-resident issuer), and
// the signature verifies under the signer's key. The key is the contained
// one for explicit certificates and is ECQV-reconstructed for implicit ones,
// so the implicit path performs exactly one extra scalar multiplication per
// call; reconstruction is never cached.
inline VerifyOutcome verify_signed_data(Profile profile, const SignedData& msg, const TrustStore& store,
                                        Time32 at_time) {
    const auto& suite = CryptoSuite::get(profile);

    const Certificate* signer = nullptr;
    bool trusted = false;
    if (msg.signer_kind == SignerKind::Digest) {
        signer = store.find(msg.signer_digest);
        if (signer == nullptr)
            return VerifyOutcome::reject(VerifyResult::UnresolvedSigner, "no certificate for signer digest");
        trusted = true;
    } else {
        if (!msg.signer_cert)
            return VerifyOutcome::reject(VerifyResult::UnresolvedSigner, "signer certificate absent");
        signer = &*msg.signer_cert;
        trusted = store.contains(hashed_id8(profile, *signer));
    }

    if (!signer->covers(at_time))
        return VerifyOutcome::reject(VerifyResult::ChainInvalid, "signer certificate expired");

    AffinePoint key;
    SignerKeyPath path = SignerKeyPath::None;
    try {
        if (signer->is_explicit()) {
            key = contained_key(suite, *signer);
            path = SignerKeyPath::ContainedKey;
            if (!trusted) {
                const Certificate* issuer =
                    signer->issuer_kind == IssuerKind::ByHashedId ? store.find(signer->issuer_id) : nullptr;
                if (issuer == nullptr)
                    return VerifyOutcome::reject(VerifyResult::ChainInvalid, "signer issuer not trusted");
                Digest32 link =
                    signature_input(suite, certificate_sign_content(*signer), encode_certificate(*issuer));
                if (!suite.verify(contained_key(suite, *issuer), link, *signer->signature))
                    return VerifyOutcome::reject(VerifyResult::ChainInvalid, "signer certificate signature invalid");
            }
        } else {
            const Certificate* issuer =
                signer->issuer_kind == IssuerKind::ByHashedId ? store.find(signer->issuer_id) : nullptr;
            if (issuer == nullptr)
                return VerifyOutcome::reject(VerifyResult::ChainInvalid, "signer issuer not trusted");
            // Reconstruction doubles as the link check: a certificate not
            // issued this way reconstructs to a key that fails the signature.
            key = ecqv_reconstruct_public(profile, *signer, contained_key(suite, *issuer));
            path = SignerKeyPath::Reconstructed;
        }
    } catch (const Error& e) {
        return VerifyOutcome::reject(VerifyResult::ChainInvalid, e.what());
    }

    Digest32 input = signature_input(suite, signed_data_sign_content(msg), encode_certificate(*signer));
    if (!suite.verify(key, input, msg.signature))
        return VerifyOutcome::reject(VerifyResult::BadSignature, "signature does not verify");
    return VerifyOutcome::accept(path);
}

// Sign-then-encrypt: the encoded Signed envelope is sealed to the recipient
// under a fresh content key wrapped by the KEM.
inline SignedEncryptedData encrypt_signed_to_key(Profile profile, const SignedData& inner,
                                                 const AffinePoint& recipient_public,
                                                 const HashedId8& recipient_id, RandomSource& rng) {
    const auto& suite = CryptoSuite::get(profile);
    SymKey content_key = rng.take16();
    SignedEncryptedData out;
    out.recipient = recipient_id;
    out.kem = suite.kem_encapsulate(recipient_public, content_key, rng);
    out.nonce = random_nonce(rng);
    out.ciphertext = suite.aead_encrypt(content_key, out.nonce, encode_signed_data(inner));
    // The ciphertext must still fit its 2-byte length prefix; fail here
    // rather than at encode time so no unencodable value escapes.
    if (out.ciphertext.size() > 0xFFFF) throw PayloadTooLarge(out.ciphertext.size());
    return out;
}

inline SignedEncryptedData encrypt_signed(Profile profile, const SignedData& inner,
                                          const Certificate& recipient_cert, RandomSource& rng) {
    const auto& suite = CryptoSuite::get(profile);
    return encrypt_signed_to_key(profile, inner, contained_key(suite, recipient_cert),
                                 hashed_id8(profile, recipient_cert), rng);
}

inline SignedData decrypt_signed(Profile profile, const SignedEncryptedData& msg, const KeyPair& recipient) {
    const auto& suite = CryptoSuite::get(profile);
    SymKey content_key = suite.kem_decapsulate(recipient, msg.kem);
    Bytes plain = suite.aead_decrypt(content_key, msg.nonce, msg.ciphertext);
    return decode_signed_data(plain);
}

}  // namespace v2xcms

#endif
