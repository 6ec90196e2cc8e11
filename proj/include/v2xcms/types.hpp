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

#ifndef V2XCMS_TYPES_HPP
#define V2XCMS_TYPES_HPP

#include <optional>
#include <string>
#include <vector>

#include "v2xcms/crypto_suite.hpp"

namespace v2xcms {

// Seconds since 2004-01-01T00:00:00Z (certificate validity resolution).
using Time32 = uint32_t;
// Microseconds since the same epoch (message generation time).
using Time64 = uint64_t;

constexpr int64_t kEpochUnixSeconds = 1072915200;  // 2004-01-01T00:00:00Z

struct HashedId8 {
    std::array<uint8_t, 8> id{};

    std::string hex() const { return hex_encode(ByteView{id.data(), id.size()}); }

    friend bool operator==(const HashedId8& a, const HashedId8& b) { return a.id == b.id; }
    friend bool operator<(const HashedId8& a, const HashedId8& b) { return a.id < b.id; }
};

enum class CertType : uint8_t { Explicit = 0, Implicit = 1 };
enum class IssuerKind : uint8_t { SelfSigned = 0, ByHashedId = 1 };
enum class KeyIndicator : uint8_t { VerificationKey = 0, ReconstructionValue = 1 };

// Application identifiers carried in app_permissions. Enrollment credentials
// and authority certificates use the management identifier; authorization
// (pseudonym) certificates use the basic-safety-message identifier.
constexpr uint32_t kAidManagement = 0x23;
constexpr uint32_t kAidBsm = 0x20;

enum class CertKind : uint8_t { Enrollment = 0, Authorization = 1 };

inline uint32_t aid_for(CertKind kind) {
    return kind == CertKind::Enrollment ? kAidManagement : kAidBsm;
}

struct ToBeSignedCertificate {
    Bytes id;  // subject name, at most 64 bytes
    Time32 validity_start = 0;
    uint32_t validity_duration_seconds = 0;
    std::vector<uint32_t> app_permissions;
    KeyIndicator key_indicator = KeyIndicator::VerificationKey;
    std::array<uint8_t, 33> public_key{};  // verification key or reconstruction value

    friend bool operator==(const ToBeSignedCertificate&, const ToBeSignedCertificate&) = default;
};

struct Certificate {
    uint8_t version = 3;
    CertType cert_type = CertType::Explicit;
    IssuerKind issuer_kind = IssuerKind::SelfSigned;
    HashedId8 issuer_id{};  // meaningful only when issuer_kind == ByHashedId
    ToBeSignedCertificate tbs;
    std::optional<Signature> signature;  // present exactly for explicit certs

    bool is_explicit() const { return cert_type == CertType::Explicit; }

    // Validity is the half-open window [start, start + duration).
    bool covers(Time32 t) const {
        return t >= tbs.validity_start &&
               static_cast<uint64_t>(t) - tbs.validity_start < tbs.validity_duration_seconds;
    }

    bool has_aid(uint32_t aid) const {
        for (uint32_t a : tbs.app_permissions)
            if (a == aid) return true;
        return false;
    }

    CertKind kind() const { return has_aid(kAidBsm) ? CertKind::Authorization : CertKind::Enrollment; }

    friend bool operator==(const Certificate& a, const Certificate& b) {
        if (a.version != b.version || a.cert_type != b.cert_type || a.issuer_kind != b.issuer_kind) return false;
        if (a.issuer_kind == IssuerKind::ByHashedId && !(a.issuer_id == b.issuer_id)) return false;
        if (!(a.tbs == b.tbs)) return false;
        if (a.signature.has_value() != b.signature.has_value()) return false;
        if (a.signature && !(*a.signature == *b.signature)) return false;
        return true;
    }
};

enum class HashAlgo : uint8_t { Sha256 = 0, Sm3 = 1 };

inline Digest32 digest_with(HashAlgo algo, ByteView data) {
    return algo == HashAlgo::Sm3 ? sm3(data) : sha256(data);
}

// The hash recorded in a message's hashId field; normally the profile hash.
inline HashAlgo profile_hash(Profile p) {
    return p == Profile::cscms ? HashAlgo::Sm3 : HashAlgo::Sha256;
}

enum class SignerKind : uint8_t { Digest = 0, Certificate = 1 };

struct SignedData {
    uint8_t version = 3;
    HashAlgo hash_id = HashAlgo::Sha256;
    uint32_t app_id = kAidBsm;
    Time64 generation_time = 0;
    Bytes payload;
    SignerKind signer_kind = SignerKind::Digest;
    HashedId8 signer_digest{};               // signer_kind == Digest
    std::optional<Certificate> signer_cert;  // signer_kind == Certificate
    Signature signature{};

    friend bool operator==(const SignedData& a, const SignedData& b) {
        if (a.version != b.version || a.hash_id != b.hash_id || a.app_id != b.app_id) return false;
        if (a.generation_time != b.generation_time || a.payload != b.payload) return false;
        if (a.signer_kind != b.signer_kind) return false;
        if (a.signer_kind == SignerKind::Digest && !(a.signer_digest == b.signer_digest)) return false;
        if (a.signer_kind == SignerKind::Certificate && !(*a.signer_cert == *b.signer_cert)) return false;
        return a.signature == b.signature;
    }
};

struct SignedEncryptedData {
    HashedId8 recipient;
    KemCiphertext kem;
    Nonce12 nonce{};
    Bytes ciphertext;  // sealed encoding of the inner SignedData
};

enum class ValidationFailure : uint8_t { Expired = 0, UnknownIssuer = 1, BadSignature = 2, BadReconstruction = 3 };

inline const char* validation_failure_name(ValidationFailure f) {
    switch (f) {
        case ValidationFailure::Expired: return "Expired";
        case ValidationFailure::UnknownIssuer: return "UnknownIssuer";
        case ValidationFailure::BadSignature: return "BadSignature";
        case ValidationFailure::BadReconstruction: return "BadReconstruction";
    }
    return "Unknown";
}

// Chain validation outcome; link 0 is the leaf, increasing toward the root.
struct ValidationReport {
    bool ok = true;
    int failing_link = -1;
    ValidationFailure reason = ValidationFailure::Expired;

    static ValidationReport pass() { return {}; }

    static ValidationReport fail(int link, ValidationFailure why) { return {false, link, why}; }

    std::string to_line() const {
        if (ok) return "OK";
        return "FAIL " + std::to_string(failing_link) + " " + validation_failure_name(reason);
    }
};

}  // namespace v2xcms

#endif
