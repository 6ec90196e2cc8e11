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

#ifndef V2XCMS_CERT_MODEL_HPP
#define V2XCMS_CERT_MODEL_HPP

#include <map>
#include <utility>

#include "v2xcms/codec.hpp"

namespace v2xcms {

// Two-hash signature input shared by certificates and messages:
// digest(digest(content) ‖ digest(signer_cert_bytes)), with empty signer
// bytes for self-signed roots. Keeping the signer certificate in the input
// (rather than in the signed bytes) is what lets implicit-signer
// verification pay its reconstruction cost separately.
inline Digest32 signature_input(const CryptoSuite& suite, ByteView content, ByteView signer_cert_bytes) {
    Digest32 hc = suite.digest(content);
    Digest32 hs = suite.digest(signer_cert_bytes);
    Bytes in(hc.begin(), hc.end());
    append(in, ByteView{hs.data(), hs.size()});
    return suite.digest(in);
}

// Certificate hash scalar e = int(digest(encoded cert)) mod n, with the
// measure-zero e = 0 case mapped to 1.
inline U256 cert_hash_scalar(const CryptoSuite& suite, const Certificate& cert) {
    U256 e = suite.curve().scalar_from_bytes(suite.digest(encode_certificate(cert)));
    if (e.is_zero()) return U256::one();
    return e;
}

// Decompressed verification key of an explicit certificate.
inline AffinePoint contained_key(const CryptoSuite& suite, const Certificate& cert) {
    if (!cert.is_explicit()) throw WrongCertType("implicit certificate carries no verification key");
    return suite.curve().decompress(cert.tbs.public_key);
}

struct EcqvIssuance {
    Certificate certificate;
    U256 private_key_contribution;  // scalar r in [0, n-1]
};

namespace cert_detail {

inline void check_issuer(const CryptoSuite& suite, const Certificate& issuer_cert, Time32 start,
                         uint32_t duration) {
    (void)suite;
    if (!issuer_cert.is_explicit()) throw WrongCertType("issuer certificate must be explicit");
    uint64_t subj_end = static_cast<uint64_t>(start) + duration;
    uint64_t iss_end = static_cast<uint64_t>(issuer_cert.tbs.validity_start) + issuer_cert.tbs.validity_duration_seconds;
    if (start < issuer_cert.tbs.validity_start || subj_end > iss_end) throw IssuerExpired();
}

inline ToBeSignedCertificate make_tbs(ByteView name, Time32 start, uint32_t duration, uint32_t aid,
                                      KeyIndicator indicator, const std::array<uint8_t, 33>& key) {
    if (name.size() > 64) throw InvariantViolation("certificate name exceeds 64 bytes");
    ToBeSignedCertificate tbs;
    tbs.id = Bytes(name.begin(), name.end());
    tbs.validity_start = start;
    tbs.validity_duration_seconds = duration;
    tbs.app_permissions = {aid};
    tbs.key_indicator = indicator;
    tbs.public_key = key;
    return tbs;
}

}  // namespace cert_detail

inline std::pair<Certificate, KeyPair> self_sign_root(Profile profile, ByteView name, Time32 start,
                                                      uint32_t duration, RandomSource& rng) {
    const auto& suite = CryptoSuite::get(profile);
    KeyPair key = suite.generate_keypair(rng);
    Certificate cert;
    cert.cert_type = CertType::Explicit;
    cert.issuer_kind = IssuerKind::SelfSigned;
    cert.tbs = cert_detail::make_tbs(name, start, duration, kAidManagement, KeyIndicator::VerificationKey,
                                     suite.curve().compress(key.pub));
    Digest32 input = signature_input(suite, certificate_sign_content(cert), {});
    cert.signature = suite.sign(key, input, rng);
    return {std::move(cert), key};
}

inline Certificate issue_explicit(Profile profile, const Certificate& issuer_cert, const KeyPair& issuer_key,
                                  const AffinePoint& subject_public, CertKind kind, ByteView name,
                                  Time32 start, uint32_t duration, RandomSource& rng) {
    const auto& suite = CryptoSuite::get(profile);
    cert_detail::check_issuer(suite, issuer_cert, start, duration);
    if (subject_public.inf || !suite.curve().on_curve(subject_public)) throw MalformedPoint("subject public key");

    Certificate cert;
    cert.cert_type = CertType::Explicit;
    cert.issuer_kind = IssuerKind::ByHashedId;
    cert.issuer_id = hashed_id8(profile, issuer_cert);
    cert.tbs = cert_detail::make_tbs(name, start, duration, aid_for(kind), KeyIndicator::VerificationKey,
                                     suite.curve().compress(subject_public));
    Digest32 input = signature_input(suite, certificate_sign_content(cert), encode_certificate(issuer_cert));
    cert.signature = suite.sign(issuer_key, input, rng);
    return cert;
}

// ECQV implicit issuance: P_u = R_u + k·G becomes the reconstruction value;
// the private contribution is r = e·k + d_issuer mod n where e hashes the
// finished certificate.
inline EcqvIssuance ecqv_issue(Profile profile, const Certificate& issuer_cert, const KeyPair& issuer_key,
                               const AffinePoint& request_public, CertKind kind, ByteView name, Time32 start,
                               uint32_t duration, RandomSource& rng) {
    const auto& suite = CryptoSuite::get(profile);
    const Curve& curve = suite.curve();
    cert_detail::check_issuer(suite, issuer_cert, start, duration);
    if (request_public.inf || !curve.on_curve(request_public)) throw MalformedPoint("ecqv request key");

    for (;;) {
        U256 k = random_scalar(curve, rng);
        AffinePoint pu = curve.add(request_public, curve.base_mul(k));
        if (pu.inf) continue;  // R_u = -k·G, astronomically unlikely

        Certificate cert;
        cert.cert_type = CertType::Implicit;
        cert.issuer_kind = IssuerKind::ByHashedId;
        cert.issuer_id = hashed_id8(profile, issuer_cert);
        cert.tbs = cert_detail::make_tbs(name, start, duration, aid_for(kind),
                                         KeyIndicator::ReconstructionValue, curve.compress(pu));

        U256 e = cert_hash_scalar(suite, cert);
        U256 r = curve.scalar_add(curve.scalar_mul_mod_n(e, k), issuer_key.d);
        return {std::move(cert), r};
    }
}

// Q_u = e·P_u + Q_issuer. Exactly one scalar multiplication; callers rely on
// that cost shape.
inline AffinePoint ecqv_reconstruct_public(Profile profile, const Certificate& implicit_cert,
                                           const AffinePoint& issuer_public) {
    if (implicit_cert.is_explicit()) throw WrongCertType("reconstruction requires an implicit certificate");
    const auto& suite = CryptoSuite::get(profile);
    const Curve& curve = suite.curve();
    AffinePoint pu = curve.decompress(implicit_cert.tbs.public_key);
    U256 e = cert_hash_scalar(suite, implicit_cert);
    return curve.add(curve.scalar_mul(pu, e), issuer_public);
}

// d_u = e·k_u + r mod n, the requester's side of the ECQV identity.
inline U256 ecqv_derive_private(Profile profile, const Certificate& implicit_cert, const U256& request_private,
                                const U256& contribution) {
    if (implicit_cert.is_explicit()) throw WrongCertType("derivation requires an implicit certificate");
    const auto& suite = CryptoSuite::get(profile);
    const Curve& curve = suite.curve();
    if (request_private.is_zero() || u256_cmp(request_private, curve.n()) >= 0)
        throw OutOfRange("ecqv request private scalar");
    if (u256_cmp(contribution, curve.n()) >= 0) throw OutOfRange("ecqv contribution");
    U256 e = cert_hash_scalar(suite, implicit_cert);
    return curve.scalar_add(curve.scalar_mul_mod_n(e, request_private), contribution);
}

// ---- chain validation -----------------------------------------------------

// Chain is leaf first, root last; link i is checked against link i+1.
inline ValidationReport validate_chain(Profile profile, const Certificate& leaf,
                                       const std::vector<Certificate>& intermediates, const Certificate& root,
                                       Time32 at_time) {
    const auto& suite = CryptoSuite::get(profile);
    std::vector<const Certificate*> chain;
    chain.push_back(&leaf);
    for (const auto& c : intermediates) chain.push_back(&c);
    // A root validated on its own arrives as both leaf and root; collapse the
    // chain to the single self-check link.
    if (!(intermediates.empty() && leaf == root)) chain.push_back(&root);
    int last = static_cast<int>(chain.size()) - 1;

    for (int i = 0; i <= last; ++i) {
        const Certificate& cert = *chain[size_t(i)];
        if (!cert.covers(at_time)) return ValidationReport::fail(i, ValidationFailure::Expired);

        if (i == last) {
            // Root: self-signed explicit, verified under its own key.
            if (cert.issuer_kind != IssuerKind::SelfSigned || !cert.is_explicit())
                return ValidationReport::fail(i, ValidationFailure::UnknownIssuer);
            try {
                AffinePoint key = contained_key(suite, cert);
                Digest32 input = signature_input(suite, certificate_sign_content(cert), {});
                if (!suite.verify(key, input, *cert.signature))
                    return ValidationReport::fail(i, ValidationFailure::BadSignature);
            } catch (const Error&) {
                return ValidationReport::fail(i, ValidationFailure::BadSignature);
            }
            continue;
        }

        const Certificate& issuer = *chain[size_t(i) + 1];
        if (cert.issuer_kind != IssuerKind::ByHashedId || !(cert.issuer_id == hashed_id8(profile, issuer)))
            return ValidationReport::fail(i, ValidationFailure::UnknownIssuer);

        if (cert.is_explicit()) {
            try {
                AffinePoint issuer_key = contained_key(suite, issuer);
                Digest32 input =
                    signature_input(suite, certificate_sign_content(cert), encode_certificate(issuer));
                if (!suite.verify(issuer_key, input, *cert.signature))
                    return ValidationReport::fail(i, ValidationFailure::BadSignature);
            } catch (const Error&) {
                return ValidationReport::fail(i, ValidationFailure::BadSignature);
            }
        } else {
            // Implicit link: the reconstruction value and issuer key must
            // combine to a real point. The key itself is authenticated the
            // first time a signature verifies under it.
            try {
                AffinePoint issuer_key = contained_key(suite, issuer);
                AffinePoint q = ecqv_reconstruct_public(profile, cert, issuer_key);
                if (q.inf) return ValidationReport::fail(i, ValidationFailure::BadReconstruction);
            } catch (const Error&) {
                return ValidationReport::fail(i, ValidationFailure::BadReconstruction);
            }
        }
    }
    return ValidationReport::pass();
}

// ---- trust store ----------------------------------------------------------

// Certificates validated once at insertion; lookups by HashedId8 afterwards
// are trusted without re-verification. Message verification relies on this:
// a signer certificate found here costs no extra chain work per message.
class TrustStore {
  public:
    TrustStore(Profile profile, Certificate root, Time32 at_time) : profile_(profile), root_(std::move(root)) {
        ValidationReport rep = validate_chain(profile_, root_, {}, root_, at_time);
        // A chain of just the root degenerates to the root self-check.
        if (!rep.ok) throw CertError("trust store rejected root: " + rep.to_line());
        root_id_ = hashed_id8(profile_, root_);
        by_id_.emplace(root_id_, root_);
    }

    Profile profile() const { return profile_; }
    const Certificate& root() const { return root_; }
    const HashedId8& root_id() const { return root_id_; }

    // Validates one link: the issuer must already be trusted.
    void add_trusted(const Certificate& cert, Time32 at_time) {
        if (cert.issuer_kind != IssuerKind::ByHashedId)
            throw CertError("trust store accepts only issuer-linked certificates");
        const Certificate* issuer = find(cert.issuer_id);
        if (issuer == nullptr) throw CertError("trust store has no issuer for certificate");
        ValidationReport rep = validate_single_link(cert, *issuer, at_time);
        if (!rep.ok) throw CertError("trust store rejected certificate: " + rep.to_line());
        by_id_.emplace(hashed_id8(profile_, cert), cert);
    }

    const Certificate* find(const HashedId8& id) const {
        auto it = by_id_.find(id);
        return it == by_id_.end() ? nullptr : &it->second;
    }

    bool contains(const HashedId8& id) const { return by_id_.count(id) != 0; }

  private:
    ValidationReport validate_single_link(const Certificate& cert, const Certificate& issuer,
                                          Time32 at_time) const {
        const auto& suite = CryptoSuite::get(profile_);
        if (!cert.covers(at_time)) return ValidationReport::fail(0, ValidationFailure::Expired);
        if (cert.is_explicit()) {
            try {
                AffinePoint issuer_key = contained_key(suite, issuer);
                Digest32 input =
                    signature_input(suite, certificate_sign_content(cert), encode_certificate(issuer));
                if (!suite.verify(issuer_key, input, *cert.signature))
                    return ValidationReport::fail(0, ValidationFailure::BadSignature);
            } catch (const Error&) {
                return ValidationReport::fail(0, ValidationFailure::BadSignature);
            }
        } else {
            try {
                AffinePoint issuer_key = contained_key(suite, issuer);
                if (ecqv_reconstruct_public(profile_, cert, issuer_key).inf)
                    return ValidationReport::fail(0, ValidationFailure::BadReconstruction);
            } catch (const Error&) {
                return ValidationReport::fail(0, ValidationFailure::BadReconstruction);
            }
        }
        return ValidationReport::pass();
    }

    Profile profile_;
    Certificate root_;
    HashedId8 root_id_;
    std::map<HashedId8, Certificate> by_id_;
};

}  // namespace v2xcms

#endif
