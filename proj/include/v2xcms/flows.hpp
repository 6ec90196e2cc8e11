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

#ifndef V2XCMS_FLOWS_HPP
#define V2XCMS_FLOWS_HPP

#include <functional>
#include <map>
#include <set>
#include <string>

#include "v2xcms/butterfly.hpp"
#include "v2xcms/secured_messages.hpp"

namespace v2xcms {

// Credential-management flows executed in-process: end entities and
// authorities exchange encoded envelopes over a recording message bus, so a
// flow run is fully determined by (actor states, rng seed, clock input) and
// its transcript can be frozen byte for byte.

constexpr uint32_t kEnrollmentValiditySeconds = 94608000;    // three years
constexpr uint32_t kAuthorizationValiditySeconds = 604800;   // one week
constexpr uint32_t kAuthorityValiditySeconds = 315360000;    // ten years
constexpr uint32_t kRootValiditySeconds = 630720000;         // twenty years

// ---- message bus ----------------------------------------------------------

// Delivers encoded messages between actors and records every crossing. The
// tamper hook, when set, may rewrite a message in flight; tests use it to
// show each flow rejects altered traffic.
class MessageBus {
  public:
    struct Delivery {
        std::string from;
        std::string to;
        Bytes bytes;
    };

    Bytes deliver(std::string from, std::string to, Bytes bytes) {
        if (tamper) tamper(log_.size(), bytes);
        log_.push_back({std::move(from), std::move(to), bytes});
        return bytes;
    }

    const std::vector<Delivery>& deliveries() const { return log_; }
    size_t size() const { return log_.size(); }
    void clear() { log_.clear(); }

    std::vector<std::string> transcript_lines() const {
        std::vector<std::string> lines;
        lines.reserve(log_.size());
        for (const auto& d : log_) lines.push_back("send " + d.from + "->" + d.to + " " + hex_encode(d.bytes));
        return lines;
    }

    std::function<void(size_t index, Bytes& bytes)> tamper;

  private:
    std::vector<Delivery> log_;
};

// ---- registered raw keys --------------------------------------------------

// Before any certificate exists, requests are signed by a bare pre-registered
// key. Such messages use the digest signer with an id derived from the key
// itself and the empty-signer signature input, the same shape a self-signed
// root uses.
inline HashedId8 raw_key_id(Profile profile, const std::array<uint8_t, 33>& compressed_key) {
    Digest32 d = CryptoSuite::get(profile).digest(compressed_key);
    HashedId8 out;
    std::memcpy(out.id.data(), d.data() + 24, 8);
    return out;
}

inline SignedData sign_with_raw_key(Profile profile, ByteView payload, uint32_t app_id, const KeyPair& key,
                                    Time64 generation_time, RandomSource& rng) {
    const auto& suite = CryptoSuite::get(profile);
    SignedData msg;
    msg.hash_id = profile_hash(profile);
    msg.app_id = app_id;
    msg.generation_time = generation_time;
    msg.payload = Bytes(payload.begin(), payload.end());
    msg.signer_kind = SignerKind::Digest;
    msg.signer_digest = raw_key_id(profile, suite.curve().compress(key.pub));
    Digest32 input = signature_input(suite, signed_data_sign_content(msg), {});
    msg.signature = suite.sign(key, input, rng);
    return msg;
}

inline bool verify_raw_key_signature(Profile profile, const SignedData& msg, const AffinePoint& key) {
    const auto& suite = CryptoSuite::get(profile);
    if (msg.signer_kind != SignerKind::Digest) return false;
    if (!(msg.signer_digest == raw_key_id(profile, suite.curve().compress(key)))) return false;
    Digest32 input = signature_input(suite, signed_data_sign_content(msg), {});
    return suite.verify(key, input, msg.signature);
}

// Id of an encoded message, used to pair acknowledgements and downloads with
// the request they answer.
inline HashedId8 message_id8(Profile profile, ByteView encoded) {
    Digest32 d = CryptoSuite::get(profile).digest(encoded);
    HashedId8 out;
    std::memcpy(out.id.data(), d.data() + 24, 8);
    return out;
}

// ---- pre-shared-secret channel --------------------------------------------

// Authenticated-encryption channel derived from a subscriber secret. Frames
// are `counter(8, big-endian) ‖ AEAD ciphertext`; the nonce binds direction
// and counter, the receiver accepts only the exact next counter, so replayed
// or reordered frames fail.
class SecureChannel {
  public:
    SecureChannel(Profile profile, const SymKey& session_key, bool initiator)
        : profile_(profile), key_(session_key), send_dir_(initiator ? 0x01 : 0x02),
          recv_dir_(initiator ? 0x02 : 0x01) {}

    Bytes seal(ByteView plain) {
        const auto& suite = CryptoSuite::get(profile_);
        Writer w;
        w.u64(send_counter_);
        Bytes frame = w.take();
        Bytes ct = suite.aead_encrypt(key_, nonce_for(send_dir_, send_counter_), plain);
        append(frame, ct);
        ++send_counter_;
        return frame;
    }

    Bytes open(ByteView frame) {
        const auto& suite = CryptoSuite::get(profile_);
        if (frame.size() < 8) throw ChannelAuthFailure();
        uint64_t counter = 0;
        for (int i = 0; i < 8; ++i) counter = counter << 8 | frame[size_t(i)];
        if (counter != recv_counter_) throw ChannelAuthFailure();
        try {
            Bytes plain = suite.aead_decrypt(key_, nonce_for(recv_dir_, counter), frame.subspan(8));
            ++recv_counter_;
            return plain;
        } catch (const TagMismatch&) {
            throw ChannelAuthFailure();
        }
    }

    uint64_t send_counter() const { return send_counter_; }
    uint64_t recv_counter() const { return recv_counter_; }

  private:
    static Nonce12 nonce_for(uint8_t dir, uint64_t counter) {
        Nonce12 n{};
        n[0] = dir;
        for (int i = 0; i < 8; ++i) n[size_t(4 + i)] = static_cast<uint8_t>(counter >> (8 * (7 - i)));
        return n;
    }

    Profile profile_;
    SymKey key_;
    uint8_t send_dir_;
    uint8_t recv_dir_;
    uint64_t send_counter_ = 0;
    uint64_t recv_counter_ = 0;
};

// ---- actor state ----------------------------------------------------------

struct EndEntityState {
    Profile profile;
    std::string name;
    KeyPair canonical;                       // pre-loaded at manufacture
    KeyPair enrollment_key;                  // request keypair for enrollment
    std::optional<Certificate> enrollment_cert;
    U256 enrollment_private{};               // signing scalar once enrolled
    std::optional<CaterpillarKey> caterpillar;
    std::vector<std::pair<Certificate, U256>> authorization_credentials;
    std::optional<SymKey> subscriber_secret;  // provisioned for channel auth
    TrustStore store;
};

struct AuthorityState {
    enum class Role : uint8_t { ECA, EA, RA, PRA, ACA, AA, GBA_AS };

    Role role;
    Profile profile;
    std::string actor_name;  // transcript label
    KeyPair keypair;
    Certificate certificate;
    TrustStore store;
    std::set<std::array<uint8_t, 33>> canonical_registry;
    std::vector<HashedId8> issued_log;
    std::map<std::string, SymKey> subscriber_secrets;

    struct PendingBatch {
        Certificate subscriber_cert;  // download bundle recipient
        Certificate issuer_cert;      // the authority that issued the batch
        uint32_t batch_size = 0;
        std::vector<uint32_t> indices;
        std::vector<Bytes> entries;   // per-index issuance bodies
    };
    std::map<HashedId8, PendingBatch> pending_batches;

    const std::array<uint8_t, 33>* find_registered(const HashedId8& key_id) const {
        for (const auto& k : canonical_registry) {
            if (raw_key_id(profile, k) == key_id) return &k;
        }
        return nullptr;
    }
};

inline const char* role_name(AuthorityState::Role r) {
    switch (r) {
        case AuthorityState::Role::ECA: return "ECA";
        case AuthorityState::Role::EA: return "EA";
        case AuthorityState::Role::RA: return "RA";
        case AuthorityState::Role::PRA: return "PRA";
        case AuthorityState::Role::ACA: return "ACA";
        case AuthorityState::Role::AA: return "AA";
        case AuthorityState::Role::GBA_AS: return "AS";
    }
    return "?";
}

// One profile's PKI: root plus the authorities its flows need. The root key
// stays here for setup and tests; production roots live offline.
struct Domain {
    Profile profile;
    Certificate root;
    KeyPair root_key;
    std::vector<AuthorityState> authorities;

    AuthorityState& authority(AuthorityState::Role role) {
        for (auto& a : authorities) {
            if (a.role == role) return a;
        }
        throw InvariantViolation("domain has no authority for requested role");
    }
};

inline std::vector<AuthorityState::Role> domain_roles(Profile profile) {
    switch (profile) {
        case Profile::scms:
            return {AuthorityState::Role::ECA, AuthorityState::Role::RA, AuthorityState::Role::ACA};
        case Profile::ccms: return {AuthorityState::Role::EA, AuthorityState::Role::AA};
        case Profile::cscms:
            return {AuthorityState::Role::ECA, AuthorityState::Role::PRA, AuthorityState::Role::ACA,
                    AuthorityState::Role::GBA_AS};
    }
    throw InvariantViolation("unhandled profile");
}

// The authority that keeps the canonical-key registry and receives
// enrollment requests.
inline AuthorityState::Role enrollment_authority_role(Profile profile) {
    return profile == Profile::ccms ? AuthorityState::Role::EA : AuthorityState::Role::ECA;
}

inline Domain make_domain(Profile profile, Time32 now, RandomSource& rng) {
    const auto& suite = CryptoSuite::get(profile);
    Domain d;
    d.profile = profile;
    std::tie(d.root, d.root_key) = self_sign_root(profile, as_bytes("root"), now, kRootValiditySeconds, rng);

    std::vector<AuthorityState::Role> roles = domain_roles(profile);

    std::vector<std::pair<AuthorityState::Role, std::pair<KeyPair, Certificate>>> issued;
    for (auto role : roles) {
        KeyPair key = suite.generate_keypair(rng);
        Certificate cert = issue_explicit(profile, d.root, d.root_key, key.pub, CertKind::Enrollment,
                                          as_bytes(role_name(role)), now, kAuthorityValiditySeconds, rng);
        issued.emplace_back(role, std::make_pair(key, std::move(cert)));
    }

    // Every authority trusts the root and its peers.
    for (auto& [role, kc] : issued) {
        TrustStore store(profile, d.root, now);
        for (auto& [other_role, other_kc] : issued) store.add_trusted(other_kc.second, now);
        d.authorities.push_back({role, profile, role_name(role), kc.first, kc.second, std::move(store),
                                 {}, {}, {}, {}});
    }
    return d;
}

// A factory-fresh end entity: canonical and enrollment keypairs plus the
// domain's certificate distribution (root and authority certificates).
inline EndEntityState make_end_entity(const Domain& domain, std::string name, Time32 now, RandomSource& rng) {
    const auto& suite = CryptoSuite::get(domain.profile);
    TrustStore store(domain.profile, domain.root, now);
    for (const auto& a : domain.authorities) store.add_trusted(a.certificate, now);
    return {domain.profile, std::move(name), suite.generate_keypair(rng), suite.generate_keypair(rng),
            std::nullopt, U256{}, std::nullopt, {}, std::nullopt, std::move(store)};
}

inline void register_canonical(AuthorityState& issuer, const EndEntityState& ee) {
    issuer.canonical_registry.insert(CryptoSuite::get(issuer.profile).curve().compress(ee.canonical.pub));
}

inline void provision_subscriber(AuthorityState& as_, EndEntityState& ee, RandomSource& rng) {
    SymKey secret = rng.take16();
    as_.subscriber_secrets[ee.name] = secret;
    ee.subscriber_secret = secret;
}

// ---- shared flow pieces ---------------------------------------------------

namespace flow_detail {

// Enrollment issuance body: presence-flagged private contribution (implicit
// certificates only) followed by the certificate.
inline Bytes encode_issuance(const Certificate& cert, const std::optional<U256>& contribution) {
    Writer w;
    w.u8(contribution ? 0x01 : 0x00);
    if (contribution) w.raw(contribution->to_be_bytes());
    w.var16(encode_certificate(cert));
    return w.take();
}

struct Issuance {
    Certificate cert;
    std::optional<U256> contribution;
};

inline Issuance decode_issuance(ByteView body) {
    Reader r(body);
    Issuance out;
    uint8_t has = r.u8("contribution presence");
    if (has > 1) throw UnknownEnum("contribution presence", has);
    if (has) out.contribution = U256::from_be_bytes(r.fixed<32>("private contribution"));
    out.cert = decode_certificate(r.var16("issued certificate"));
    r.expect_end();
    return out;
}

// Authority-side enrollment issuance over a request public key already
// verified against the canonical registry. Implicit for the SCMS profile,
// explicit otherwise.
inline Bytes issue_enrollment(AuthorityState& ca, const AffinePoint& request_public, const HashedId8& subject,
                              Time32 now, RandomSource& rng) {
    std::string name = subject.hex();
    Bytes body;
    if (ca.profile == Profile::scms) {
        EcqvIssuance iss = ecqv_issue(ca.profile, ca.certificate, ca.keypair, request_public,
                                      CertKind::Enrollment, as_bytes(name), now, kEnrollmentValiditySeconds, rng);
        ca.issued_log.push_back(hashed_id8(ca.profile, iss.certificate));
        body = encode_issuance(iss.certificate, iss.private_key_contribution);
    } else {
        Certificate cert = issue_explicit(ca.profile, ca.certificate, ca.keypair, request_public,
                                          CertKind::Enrollment, as_bytes(name), now, kEnrollmentValiditySeconds,
                                          rng);
        ca.issued_log.push_back(hashed_id8(ca.profile, cert));
        body = encode_issuance(cert, std::nullopt);
    }
    return body;
}

// End-entity side of an enrollment issuance: validate the chain, recover the
// private key, self-check the pair, store the credential.
inline Certificate accept_enrollment(EndEntityState& ee, const SignedData& response, Time32 now) {
    const auto& suite = CryptoSuite::get(ee.profile);
    const Curve& curve = suite.curve();

    VerifyOutcome out = verify_signed_data(ee.profile, response, ee.store, now);
    if (!out.accepted()) throw FlowError(std::string("issuer response rejected: ") + out.detail);
    if (!response.signer_cert) throw FlowError("issuer response lacks an inline certificate");

    Issuance iss = decode_issuance(response.payload);
    ValidationReport rep = validate_chain(ee.profile, iss.cert, {*response.signer_cert}, ee.store.root(), now);
    if (!rep.ok) throw FlowError("issued certificate does not validate: " + rep.to_line());

    U256 priv;
    if (iss.cert.is_explicit()) {
        if (iss.contribution) throw FlowError("explicit issuance carries a private contribution");
        priv = ee.enrollment_key.d;
        if (!(contained_key(suite, iss.cert) == ee.enrollment_key.pub))
            throw FlowError("issued certificate does not contain the requested key");
    } else {
        if (!iss.contribution) throw FlowError("implicit issuance lacks the private contribution");
        priv = ecqv_derive_private(ee.profile, iss.cert, ee.enrollment_key.d, *iss.contribution);
        AffinePoint issuer_key = contained_key(suite, *response.signer_cert);
        AffinePoint q = ecqv_reconstruct_public(ee.profile, iss.cert, issuer_key);
        if (!(curve.base_mul(priv) == q)) throw FlowError("derived enrollment key fails its self-check");
    }

    ee.enrollment_cert = iss.cert;
    ee.enrollment_private = priv;
    return iss.cert;
}

// Authority-side handling of one enrollment request SignedData (the object
// both the SCMS flow and its channel-transported C-SCMS variant use).
inline Bytes handle_enroll_request(AuthorityState& ca, ByteView request_bytes, Time32 now, RandomSource& rng) {
    const auto& suite = CryptoSuite::get(ca.profile);
    const Curve& curve = suite.curve();

    SignedData request = decode_signed_data(request_bytes);
    if (request.signer_kind != SignerKind::Digest) throw BadRequestSignature();
    const std::array<uint8_t, 33>* canonical = ca.find_registered(request.signer_digest);
    if (canonical == nullptr) throw UnregisteredCanonicalKey();
    if (!verify_raw_key_signature(ca.profile, request, curve.decompress(*canonical)))
        throw BadRequestSignature();

    Reader r(request.payload);
    AffinePoint request_public = curve.decompress(r.fixed<33>("enrollment request key"));
    r.expect_end();

    Bytes body = issue_enrollment(ca, request_public, request.signer_digest, now, rng);
    SignedData response = sign_data(ca.profile, body, kAidManagement, ca.certificate, ca.keypair.d,
                                    SignerKind::Certificate, now, rng);
    return encode_signed_data(response);
}

inline Bytes build_enroll_request(const EndEntityState& ee, Time32 now, RandomSource& rng) {
    const auto& suite = CryptoSuite::get(ee.profile);
    std::array<uint8_t, 33> request_pub = suite.curve().compress(ee.enrollment_key.pub);
    SignedData request = sign_with_raw_key(ee.profile, request_pub, kAidManagement, ee.canonical, now, rng);
    return encode_signed_data(request);
}

}  // namespace flow_detail

// ---- enrollment flows -----------------------------------------------------

// Two plain Signed envelopes: the request carries the enrollment request key
// under the canonical signature; the response carries the issued certificate
// (implicit under this profile) and its private contribution.
inline Certificate scms_enroll(EndEntityState& ee, AuthorityState& eca, MessageBus& bus, RandomSource& rng,
                               Time32 now) {
    Bytes request = flow_detail::build_enroll_request(ee, now, rng);
    Bytes delivered = bus.deliver("EE", eca.actor_name, std::move(request));

    Bytes response = flow_detail::handle_enroll_request(eca, delivered, now, rng);
    Bytes answered = bus.deliver(eca.actor_name, "EE", std::move(response));

    return flow_detail::accept_enrollment(ee, decode_signed_data(answered), now);
}

namespace flow_detail {

// Authority side of the sealed enrolment request. The outer signature must
// resolve to a registered canonical key, the inner one must prove possession
// of the requested enrolment key; the response is encrypted to that key.
inline Bytes handle_sealed_enrol_request(AuthorityState& ea, ByteView request_env_bytes, Time32 now,
                                         RandomSource& rng) {
    const Curve& curve = CryptoSuite::get(ea.profile).curve();

    SignedData got = decrypt_signed(ea.profile, decode_signed_encrypted(request_env_bytes), ea.keypair);
    if (got.signer_kind != SignerKind::Digest) throw BadRequestSignature();
    const std::array<uint8_t, 33>* canonical = ea.find_registered(got.signer_digest);
    if (canonical == nullptr) throw UnregisteredCanonicalKey();
    if (!verify_raw_key_signature(ea.profile, got, curve.decompress(*canonical))) throw BadRequestSignature();

    SignedData inner = decode_signed_data(got.payload);
    if (inner.payload.size() != 33) throw BadInnerPoP();
    std::array<uint8_t, 33> pt{};
    std::memcpy(pt.data(), inner.payload.data(), 33);
    AffinePoint request_public;
    try {
        request_public = curve.decompress(pt);
    } catch (const MalformedPoint&) {
        throw BadInnerPoP();
    }
    if (!verify_raw_key_signature(ea.profile, inner, request_public)) throw BadInnerPoP();

    Bytes body = issue_enrollment(ea, request_public, got.signer_digest, now, rng);
    SignedData response = sign_data(ea.profile, body, kAidManagement, ea.certificate, ea.keypair.d,
                                    SignerKind::Certificate, now, rng);
    SignedEncryptedData sealed =
        encrypt_signed_to_key(ea.profile, response, request_public, raw_key_id(ea.profile, pt), rng);
    return encode_signed_encrypted(sealed);
}

}  // namespace flow_detail

// Both legs are SignedEncrypted. The request nests two signatures: the outer
// envelope is signed by the canonical key, its payload is a second Signed
// envelope under the new enrolment key proving possession. The response is
// encrypted back to that enrolment key.
inline Certificate ccms_enrol(EndEntityState& its, AuthorityState& ea, MessageBus& bus, RandomSource& rng,
                              Time32 now) {
    const auto& suite = CryptoSuite::get(its.profile);
    const Curve& curve = suite.curve();

    std::array<uint8_t, 33> enrol_pub = curve.compress(its.enrollment_key.pub);
    SignedData pop = sign_with_raw_key(its.profile, enrol_pub, kAidManagement, its.enrollment_key, now, rng);
    SignedData outer =
        sign_with_raw_key(its.profile, encode_signed_data(pop), kAidManagement, its.canonical, now, rng);
    SignedEncryptedData request = encrypt_signed(its.profile, outer, ea.certificate, rng);
    Bytes delivered = bus.deliver("EE", ea.actor_name, encode_signed_encrypted(request));

    Bytes response_bytes = flow_detail::handle_sealed_enrol_request(ea, delivered, now, rng);
    Bytes answered = bus.deliver(ea.actor_name, "EE", std::move(response_bytes));

    SignedData response =
        decrypt_signed(its.profile, decode_signed_encrypted(answered), its.enrollment_key);
    return flow_detail::accept_enrollment(its, response, now);
}

// ---- pre-shared-secret channel establishment ------------------------------

// One challenge-response round over the subscriber secret; both sides derive
// session_key = first 16 bytes of digest(secret ‖ challenge ‖ 0x01). The
// handshake itself is authenticated by the secret, not by certificates; it
// is the one exchange that happens before any credential exists.
inline std::pair<SecureChannel, SecureChannel> establish_gba_channel(EndEntityState& ee, AuthorityState& as_,
                                                                     MessageBus& bus, RandomSource& rng) {
    const auto& suite = CryptoSuite::get(ee.profile);
    if (!ee.subscriber_secret) throw UnknownSubscriber();

    Bytes hello = bus.deliver("EE", as_.actor_name, to_bytes(ee.name));
    std::string name(hello.begin(), hello.end());
    auto it = as_.subscriber_secrets.find(name);
    if (it == as_.subscriber_secrets.end()) throw UnknownSubscriber();
    const SymKey& as_secret = it->second;

    SymKey challenge = rng.take16();
    Bytes challenge_msg = bus.deliver(as_.actor_name, "EE", Bytes(challenge.begin(), challenge.end()));
    if (challenge_msg.size() != 16) throw BadAuthResponse();

    // EE answers with the full digest of secret ‖ challenge.
    Bytes ee_input(ee.subscriber_secret->begin(), ee.subscriber_secret->end());
    append(ee_input, challenge_msg);
    Digest32 ee_response = suite.digest(ee_input);
    Bytes response_msg = bus.deliver("EE", as_.actor_name, Bytes(ee_response.begin(), ee_response.end()));

    Bytes as_input(as_secret.begin(), as_secret.end());
    append(as_input, challenge);
    Digest32 expected = suite.digest(as_input);
    if (response_msg.size() != 32 || !std::equal(expected.begin(), expected.end(), response_msg.begin()))
        throw BadAuthResponse();

    // AS confirms with a tag on a distinct suffix so EE authenticates it too.
    Bytes confirm_input = as_input;
    confirm_input.push_back(0x02);
    Digest32 confirm = suite.digest(confirm_input);
    Bytes confirm_msg = bus.deliver(as_.actor_name, "EE", Bytes(confirm.begin(), confirm.begin() + 16));

    Bytes ee_confirm_input = ee_input;
    ee_confirm_input.push_back(0x02);
    Digest32 ee_confirm = suite.digest(ee_confirm_input);
    if (confirm_msg.size() != 16 || !std::equal(confirm_msg.begin(), confirm_msg.end(), ee_confirm.begin()))
        throw BadAuthResponse();

    Bytes key_input = ee_input;
    key_input.push_back(0x01);
    Digest32 key_digest = suite.digest(key_input);
    SymKey session_key;
    std::memcpy(session_key.data(), key_digest.data(), 16);

    return {SecureChannel(ee.profile, session_key, true), SecureChannel(ee.profile, session_key, false)};
}

// Enrollment over the authenticated channel: the same request and response
// objects as the plain flow, carried inside sealed frames through the
// authentication server.
inline Certificate cscms_enroll(EndEntityState& ee, AuthorityState& as_, AuthorityState& eca, MessageBus& bus,
                                RandomSource& rng, Time32 now) {
    auto [ee_chan, as_chan] = establish_gba_channel(ee, as_, bus, rng);

    Bytes request = flow_detail::build_enroll_request(ee, now, rng);
    Bytes frame = bus.deliver("EE", as_.actor_name, ee_chan.seal(request));
    Bytes at_as = as_chan.open(frame);

    Bytes response = flow_detail::handle_enroll_request(eca, at_as, now, rng);
    Bytes back = bus.deliver(as_.actor_name, "EE", as_chan.seal(response));
    Bytes at_ee = ee_chan.open(back);

    return flow_detail::accept_enrollment(ee, decode_signed_data(at_ee), now);
}

// ---- authorization flows --------------------------------------------------

namespace flow_detail {

// Request body: caterpillar public key, expansion key, batch size.
inline Bytes encode_authz_request(const Curve& curve, const CaterpillarKey& cat, uint32_t batch_size) {
    Writer w;
    w.raw(curve.compress(cat.keypair.pub));
    w.raw(cat.expansion_key);
    w.u32(batch_size);
    return w.take();
}

struct AuthzRequest {
    AffinePoint caterpillar_public;
    SymKey expansion_key{};
    uint32_t batch_size = 0;
};

inline AuthzRequest decode_authz_request(const Curve& curve, ByteView body) {
    Reader r(body);
    AuthzRequest out;
    out.caterpillar_public = curve.decompress(r.fixed<33>("caterpillar public key"));
    out.expansion_key = r.fixed<16>("expansion key");
    out.batch_size = r.u32("batch size");
    r.expect_end();
    return out;
}

// Per-index issuance entry: index, then the same issuance body enrollment
// responses use.
inline Bytes encode_authz_entry(uint32_t index, const Certificate& cert, const std::optional<U256>& contribution) {
    Writer w;
    w.u32(index);
    w.raw(encode_issuance(cert, contribution));
    return w.take();
}

struct AuthzEntry {
    uint32_t index = 0;
    Issuance issuance;
};

inline AuthzEntry decode_authz_entry(ByteView body) {
    Reader r(body);
    AuthzEntry out;
    out.index = r.u32("entry index");
    uint8_t has = r.u8("contribution presence");
    if (has > 1) throw UnknownEnum("contribution presence", has);
    if (has) out.issuance.contribution = U256::from_be_bytes(r.fixed<32>("private contribution"));
    out.issuance.cert = decode_certificate(r.var16("issued certificate"));
    r.expect_end();
    return out;
}

// Certificate-authority side of one cocoon issuance request. Implicit for
// the SCMS profile, explicit for C-SCMS, both over the cocoon public key.
inline Bytes handle_cocoon_issuance(AuthorityState& aca, ByteView request_bytes, Time32 now, RandomSource& rng) {
    const auto& suite = CryptoSuite::get(aca.profile);
    const Curve& curve = suite.curve();

    SignedData request = decode_signed_data(request_bytes);
    if (!verify_signed_data(aca.profile, request, aca.store, now).accepted()) throw BadRequestSignature();

    Reader r(request.payload);
    uint32_t index = r.u32("cocoon index");
    AffinePoint cocoon = curve.decompress(r.fixed<33>("cocoon public key"));
    r.expect_end();

    Bytes entry;
    if (aca.profile == Profile::scms) {
        EcqvIssuance iss = ecqv_issue(aca.profile, aca.certificate, aca.keypair, cocoon,
                                      CertKind::Authorization, as_bytes("pseudonym"), now,
                                      kAuthorizationValiditySeconds, rng);
        aca.issued_log.push_back(hashed_id8(aca.profile, iss.certificate));
        entry = encode_authz_entry(index, iss.certificate, iss.private_key_contribution);
    } else {
        Certificate cert = issue_explicit(aca.profile, aca.certificate, aca.keypair, cocoon,
                                          CertKind::Authorization, as_bytes("pseudonym"), now,
                                          kAuthorizationValiditySeconds, rng);
        aca.issued_log.push_back(hashed_id8(aca.profile, cert));
        entry = encode_authz_entry(index, cert, std::nullopt);
    }

    SignedData response = sign_data(aca.profile, entry, kAidManagement, aca.certificate, aca.keypair.d,
                                    SignerKind::Digest, now, rng);
    return encode_signed_data(response);
}

// Registration-authority side of the certificate request: validate the
// subscriber's enrollment credential, expand the cocoons, run the per-index
// exchange with the issuing authority, park the results for download, and
// return the acknowledgement naming the request id.
inline Bytes handle_authz_request(AuthorityState& ra, AuthorityState& aca, ByteView request_env_bytes,
                                  MessageBus& bus, RandomSource& rng, Time32 now) {
    const auto& suite = CryptoSuite::get(ra.profile);
    const Curve& curve = suite.curve();

    SignedData request = decrypt_signed(ra.profile, decode_signed_encrypted(request_env_bytes), ra.keypair);
    VerifyOutcome out = verify_signed_data(ra.profile, request, ra.store, now);
    if (out.result == VerifyResult::BadSignature) throw BadRequestSignature();
    if (!out.accepted()) throw EnrollmentChainInvalid(out.detail);
    if (!request.signer_cert) throw EnrollmentChainInvalid("request carries no enrollment certificate");

    AuthzRequest req = decode_authz_request(curve, request.payload);
    if (req.batch_size == 0 || req.batch_size > 100) throw FlowError("batch size out of accepted range");

    HashedId8 request_id = message_id8(ra.profile, request_env_bytes);
    AuthorityState::PendingBatch batch;
    batch.subscriber_cert = *request.signer_cert;
    batch.issuer_cert = aca.certificate;
    batch.batch_size = req.batch_size;

    // The issuing authority sees only cocoon points: the caterpillar key and
    // expansion key stop here.
    for (uint32_t i = 0; i < req.batch_size; ++i) {
        CocoonPublic cocoon = expand_cocoon_public(suite, req.caterpillar_public, req.expansion_key, i);
        Writer w;
        w.u32(cocoon.index);
        w.raw(curve.compress(cocoon.point));
        SignedData issue_req = sign_data(ra.profile, w.take(), kAidManagement, ra.certificate, ra.keypair.d,
                                         SignerKind::Digest, now, rng);
        Bytes delivered = bus.deliver(ra.actor_name, aca.actor_name, encode_signed_data(issue_req));

        Bytes entry_bytes = handle_cocoon_issuance(aca, delivered, now, rng);
        Bytes answered = bus.deliver(aca.actor_name, ra.actor_name, std::move(entry_bytes));

        SignedData entry_msg = decode_signed_data(answered);
        if (!verify_signed_data(ra.profile, entry_msg, ra.store, now).accepted()) throw BadRequestSignature();
        batch.indices.push_back(i);
        batch.entries.push_back(entry_msg.payload);
    }
    ra.pending_batches.emplace(request_id, std::move(batch));

    SignedData ack = sign_data(ra.profile, ByteView{request_id.id.data(), 8}, kAidManagement, ra.certificate,
                               ra.keypair.d, SignerKind::Certificate, now, rng);
    return encode_signed_data(ack);
}

// Bundle body: batch info (id, size, indices), the issuing authority's
// certificate, then the per-index entries.
inline Bytes encode_bundle(const HashedId8& batch_id, const AuthorityState::PendingBatch& batch) {
    Writer w;
    w.raw(ByteView{batch_id.id.data(), 8});
    w.u32(batch.batch_size);
    if (batch.indices.size() > 0xFFFF) throw PayloadTooLarge(batch.indices.size());
    w.u16(static_cast<uint16_t>(batch.indices.size()));
    for (uint32_t idx : batch.indices) w.u32(idx);
    w.var16(encode_certificate(batch.issuer_cert));
    if (batch.entries.size() > 0xFFFF) throw PayloadTooLarge(batch.entries.size());
    w.u16(static_cast<uint16_t>(batch.entries.size()));
    for (const Bytes& e : batch.entries) w.var16(e);
    return w.take();
}

struct Bundle {
    HashedId8 batch_id;
    uint32_t batch_size = 0;
    std::vector<uint32_t> indices;
    Certificate issuer_cert;
    std::vector<Bytes> entries;
};

inline Bundle decode_bundle(ByteView body) {
    Reader r(body);
    Bundle out;
    out.batch_id.id = r.fixed<8>("batch id");
    out.batch_size = r.u32("batch size");
    uint16_t n_idx = r.u16("index count");
    for (uint16_t i = 0; i < n_idx; ++i) out.indices.push_back(r.u32("cocoon index"));
    out.issuer_cert = decode_certificate(r.var16("issuer certificate"));
    uint16_t n_entries = r.u16("entry count");
    for (uint16_t i = 0; i < n_entries; ++i) out.entries.push_back(r.var16("issuance entry"));
    r.expect_end();
    return out;
}

// Registration-authority side of the download: the request names a batch id
// that must have been acknowledged earlier; each batch downloads once.
inline Bytes handle_download_request(AuthorityState& ra, ByteView request_env_bytes, Time32 now,
                                     RandomSource& rng) {
    const auto& suite = CryptoSuite::get(ra.profile);

    SignedData request = decrypt_signed(ra.profile, decode_signed_encrypted(request_env_bytes), ra.keypair);
    VerifyOutcome out = verify_signed_data(ra.profile, request, ra.store, now);
    if (out.result == VerifyResult::BadSignature) throw BadRequestSignature();
    if (!out.accepted()) throw EnrollmentChainInvalid(out.detail);

    Reader r(request.payload);
    HashedId8 batch_id;
    batch_id.id = r.fixed<8>("batch id");
    r.expect_end();

    auto it = ra.pending_batches.find(batch_id);
    if (it == ra.pending_batches.end()) throw DownloadBeforeAck();

    Bytes body = encode_bundle(batch_id, it->second);
    SignedData response = sign_data(ra.profile, body, kAidManagement, ra.certificate, ra.keypair.d,
                                    SignerKind::Certificate, now, rng);

    const Certificate& subscriber = it->second.subscriber_cert;
    AffinePoint recipient_key;
    if (subscriber.is_explicit()) {
        recipient_key = contained_key(suite, subscriber);
    } else {
        const Certificate* issuer = ra.store.find(subscriber.issuer_id);
        if (issuer == nullptr) throw EnrollmentChainInvalid("subscriber issuer unknown at download");
        recipient_key = ecqv_reconstruct_public(ra.profile, subscriber, contained_key(suite, *issuer));
    }
    SignedEncryptedData sealed =
        encrypt_signed_to_key(ra.profile, response, recipient_key, hashed_id8(ra.profile, subscriber), rng);
    ra.pending_batches.erase(it);
    return encode_signed_encrypted(sealed);
}

// End-entity side of the download bundle: verify, then derive and self-check
// one credential per entry.
inline std::vector<std::pair<Certificate, U256>> accept_bundle(EndEntityState& ee, const SignedData& response,
                                                               const HashedId8& expected_batch_id, Time32 now) {
    const auto& suite = CryptoSuite::get(ee.profile);
    const Curve& curve = suite.curve();
    if (!ee.caterpillar) throw FlowError("no caterpillar key for this download");

    VerifyOutcome out = verify_signed_data(ee.profile, response, ee.store, now);
    if (!out.accepted()) throw FlowError(std::string("download response rejected: ") + out.detail);

    Bundle bundle = decode_bundle(response.payload);
    if (!(bundle.batch_id == expected_batch_id)) throw FlowError("download bundle answers a different batch");
    if (bundle.entries.size() != bundle.batch_size || bundle.indices.size() != bundle.batch_size)
        throw FlowError("download bundle is incomplete");

    ValidationReport issuer_rep = validate_chain(ee.profile, bundle.issuer_cert, {}, ee.store.root(), now);
    if (!issuer_rep.ok) {
        // Authority certificates hang directly off the root in this domain
        // model; reject anything else.
        throw FlowError("bundle issuer certificate does not validate: " + issuer_rep.to_line());
    }
    AffinePoint issuer_key = contained_key(suite, bundle.issuer_cert);

    std::vector<std::pair<Certificate, U256>> credentials;
    for (size_t i = 0; i < bundle.entries.size(); ++i) {
        AuthzEntry entry = decode_authz_entry(bundle.entries[i]);
        if (entry.index != bundle.indices[i]) throw FlowError("bundle entry order does not match its index list");

        ValidationReport rep =
            validate_chain(ee.profile, entry.issuance.cert, {bundle.issuer_cert}, ee.store.root(), now);
        if (!rep.ok) throw FlowError("issued credential does not validate: " + rep.to_line());

        U256 cocoon_priv = expand_cocoon_private(suite, ee.caterpillar->keypair.d,
                                                 ee.caterpillar->expansion_key, entry.index);
        U256 priv;
        if (entry.issuance.cert.is_explicit()) {
            if (entry.issuance.contribution) throw FlowError("explicit issuance carries a private contribution");
            priv = cocoon_priv;
            if (!(contained_key(suite, entry.issuance.cert) == curve.base_mul(priv)))
                throw FlowError("credential key pair fails its self-check");
        } else {
            if (!entry.issuance.contribution) throw FlowError("implicit issuance lacks the private contribution");
            priv = ecqv_derive_private(ee.profile, entry.issuance.cert, cocoon_priv,
                                       *entry.issuance.contribution);
            AffinePoint q = ecqv_reconstruct_public(ee.profile, entry.issuance.cert, issuer_key);
            if (!(curve.base_mul(priv) == q)) throw FlowError("credential key pair fails its self-check");
        }
        credentials.emplace_back(entry.issuance.cert, priv);
    }

    for (auto& c : credentials) ee.authorization_credentials.push_back(c);
    return credentials;
}

inline Bytes build_authz_request_env(EndEntityState& ee, const Certificate& ra_cert, uint32_t batch_size,
                                     RandomSource& rng, Time32 now) {
    const auto& suite = CryptoSuite::get(ee.profile);
    if (!ee.enrollment_cert) throw EnrollmentChainInvalid("end entity is not enrolled");
    ee.caterpillar = make_caterpillar(suite, rng);

    Bytes body = encode_authz_request(suite.curve(), *ee.caterpillar, batch_size);
    SignedData inner = sign_data(ee.profile, body, kAidManagement, *ee.enrollment_cert,
                                 ee.enrollment_private, SignerKind::Certificate, now, rng);
    SignedEncryptedData env = encrypt_signed(ee.profile, inner, ra_cert, rng);
    return encode_signed_encrypted(env);
}

inline Bytes build_download_request_env(EndEntityState& ee, const Certificate& ra_cert,
                                        const HashedId8& batch_id, RandomSource& rng, Time32 now) {
    if (!ee.enrollment_cert) throw EnrollmentChainInvalid("end entity is not enrolled");
    SignedData inner = sign_data(ee.profile, ByteView{batch_id.id.data(), 8}, kAidManagement,
                                 *ee.enrollment_cert, ee.enrollment_private, SignerKind::Certificate, now, rng);
    SignedEncryptedData env = encrypt_signed(ee.profile, inner, ra_cert, rng);
    return encode_signed_encrypted(env);
}

// Checks an acknowledgement against the request id it should name.
inline void check_ack(EndEntityState& ee, ByteView ack_bytes, const HashedId8& request_id, Time32 now) {
    SignedData ack = decode_signed_data(ack_bytes);
    VerifyOutcome out = verify_signed_data(ee.profile, ack, ee.store, now);
    if (!out.accepted()) throw FlowError(std::string("acknowledgement rejected: ") + out.detail);
    if (ack.payload.size() != 8 || std::memcmp(ack.payload.data(), request_id.id.data(), 8) != 0)
        throw FlowError("acknowledgement names a different request");
}

}  // namespace flow_detail

// Request stage: caterpillar handover, enrollment validation, cocoon
// expansion, per-index issuance, acknowledgement. Returns the batch id the
// acknowledgement named.
inline HashedId8 scms_request_batch(EndEntityState& ee, AuthorityState& ra, AuthorityState& aca,
                                    uint32_t batch_size, MessageBus& bus, RandomSource& rng, Time32 now) {
    Bytes env = flow_detail::build_authz_request_env(ee, ra.certificate, batch_size, rng, now);
    Bytes delivered = bus.deliver("EE", ra.actor_name, std::move(env));
    HashedId8 request_id = message_id8(ee.profile, delivered);

    Bytes ack = flow_detail::handle_authz_request(ra, aca, delivered, bus, rng, now);
    Bytes acked = bus.deliver(ra.actor_name, "EE", std::move(ack));
    flow_detail::check_ack(ee, acked, request_id, now);
    return request_id;
}

// Download stage: one SignedEncrypted request naming the batch, one bundle
// back. DownloadBeforeAck when the id was never acknowledged (or already
// consumed).
inline std::vector<std::pair<Certificate, U256>> scms_download_batch(EndEntityState& ee, AuthorityState& ra,
                                                                     const HashedId8& batch_id, MessageBus& bus,
                                                                     RandomSource& rng, Time32 now) {
    Bytes env = flow_detail::build_download_request_env(ee, ra.certificate, batch_id, rng, now);
    Bytes delivered = bus.deliver("EE", ra.actor_name, std::move(env));

    Bytes bundle = flow_detail::handle_download_request(ra, delivered, now, rng);
    Bytes answered = bus.deliver(ra.actor_name, "EE", std::move(bundle));

    SignedData response = decrypt_signed(ee.profile, decode_signed_encrypted(answered),
                                         CryptoSuite::get(ee.profile).keypair_from_scalar(ee.enrollment_private));
    return flow_detail::accept_bundle(ee, response, batch_id, now);
}

inline std::vector<std::pair<Certificate, U256>> scms_authorize(EndEntityState& ee, AuthorityState& ra,
                                                                AuthorityState& aca, uint32_t batch_size,
                                                                MessageBus& bus, RandomSource& rng, Time32 now) {
    HashedId8 batch_id = scms_request_batch(ee, ra, aca, batch_size, bus, rng, now);
    return scms_download_batch(ee, ra, batch_id, bus, rng, now);
}

namespace flow_detail {

// Enrolment-authority side of the validation round: judge the forwarded
// enrolment signature and always answer, ok carrying the bound key, reject
// carrying the reason.
inline Bytes handle_validation_request(AuthorityState& ea, ByteView validation_env_bytes,
                                       const Certificate& reply_to, Time32 now, RandomSource& rng) {
    SignedData got = decrypt_signed(ea.profile, decode_signed_encrypted(validation_env_bytes), ea.keypair);
    if (!verify_signed_data(ea.profile, got, ea.store, now).accepted()) throw BadRequestSignature();

    Writer verdict;
    try {
        SignedData forwarded = decode_signed_data(got.payload);
        VerifyOutcome out = verify_signed_data(ea.profile, forwarded, ea.store, now);
        if (out.accepted() && forwarded.payload.size() == 33) {
            verdict.u8(0x01);
            verdict.raw(forwarded.payload);
        } else {
            verdict.u8(0x00);
            verdict.var16(out.accepted() ? as_bytes("malformed key binding") : as_bytes(out.detail));
        }
    } catch (const Error& e) {
        verdict.u8(0x00);
        verdict.var16(as_bytes(e.what()));
    }
    SignedData response = sign_data(ea.profile, verdict.take(), kAidManagement, ea.certificate, ea.keypair.d,
                                    SignerKind::Digest, now, rng);
    SignedEncryptedData sealed = encrypt_signed(ea.profile, response, reply_to, rng);
    return encode_signed_encrypted(sealed);
}

// Authorization-authority side of the ticket request: possession check over
// the fresh ticket key, enrolment judgement delegated to the enrolment
// authority, explicit ticket on approval.
inline Bytes handle_ticket_request(AuthorityState& aa, AuthorityState& ea, ByteView request_env_bytes,
                                   MessageBus& bus, RandomSource& rng, Time32 now) {
    const Curve& curve = CryptoSuite::get(aa.profile).curve();

    SignedData got = decrypt_signed(aa.profile, decode_signed_encrypted(request_env_bytes), aa.keypair);
    Reader r(got.payload);
    std::array<uint8_t, 33> ticket_pub = r.fixed<33>("ticket public key");
    Bytes ec_sig_bytes = r.var16("enrolment signature");
    r.expect_end();
    AffinePoint request_ticket_key;
    try {
        request_ticket_key = curve.decompress(ticket_pub);
    } catch (const MalformedPoint&) {
        throw BadPoP();
    }
    if (!verify_raw_key_signature(aa.profile, got, request_ticket_key)) throw BadPoP();

    SignedData validation_req = sign_data(aa.profile, ec_sig_bytes, kAidManagement, aa.certificate,
                                          aa.keypair.d, SignerKind::Digest, now, rng);
    Bytes validation_env = encode_signed_encrypted(encrypt_signed(aa.profile, validation_req, ea.certificate, rng));
    Bytes validation_delivered = bus.deliver(aa.actor_name, ea.actor_name, std::move(validation_env));

    Bytes verdict_env = handle_validation_request(ea, validation_delivered, aa.certificate, now, rng);
    Bytes verdict_delivered = bus.deliver(ea.actor_name, aa.actor_name, std::move(verdict_env));

    SignedData verdict_msg = decrypt_signed(aa.profile, decode_signed_encrypted(verdict_delivered), aa.keypair);
    if (!verify_signed_data(aa.profile, verdict_msg, aa.store, now).accepted()) throw BadRequestSignature();
    Reader vr(verdict_msg.payload);
    uint8_t ok = vr.u8("validation verdict");
    if (ok != 0x01) {
        Bytes why = vr.var16("rejection reason");
        vr.expect_end();
        throw ValidationRejected(std::string(why.begin(), why.end()));
    }
    std::array<uint8_t, 33> approved = vr.fixed<33>("approved ticket key");
    vr.expect_end();
    if (!(curve.decompress(approved) == request_ticket_key))
        throw ValidationRejected("approved key differs from the requested one");

    Certificate ticket = issue_explicit(aa.profile, aa.certificate, aa.keypair, request_ticket_key,
                                        CertKind::Authorization, as_bytes("ticket"), now,
                                        kAuthorizationValiditySeconds, rng);
    aa.issued_log.push_back(hashed_id8(aa.profile, ticket));

    Writer body;
    body.var16(encode_certificate(ticket));
    SignedData response = sign_data(aa.profile, body.take(), kAidManagement, aa.certificate, aa.keypair.d,
                                    SignerKind::Certificate, now, rng);
    SignedEncryptedData sealed = encrypt_signed_to_key(aa.profile, response, request_ticket_key,
                                                       raw_key_id(aa.profile, ticket_pub), rng);
    return encode_signed_encrypted(sealed);
}

}  // namespace flow_detail

// Authorization ticket issuance without a registration authority: the AA
// checks only possession of the fresh ticket key, the EA vouches for the
// enrolment credential through the validation round, and the ticket returns
// encrypted to the ticket key.
inline std::pair<Certificate, U256> ccms_authorize(EndEntityState& its, AuthorityState& aa, AuthorityState& ea,
                                                   MessageBus& bus, RandomSource& rng, Time32 now) {
    const auto& suite = CryptoSuite::get(its.profile);
    const Curve& curve = suite.curve();
    if (!its.enrollment_cert) throw EnrollmentChainInvalid("end entity is not enrolled");

    KeyPair ticket_key = suite.generate_keypair(rng);
    std::array<uint8_t, 33> ticket_pub = curve.compress(ticket_key.pub);

    SignedData ec_sig = sign_data(its.profile, ticket_pub, kAidManagement, *its.enrollment_cert,
                                  its.enrollment_private, SignerKind::Certificate, now, rng);
    Writer w;
    w.raw(ticket_pub);
    w.var16(encode_signed_data(ec_sig));
    SignedData inner = sign_with_raw_key(its.profile, w.take(), kAidManagement, ticket_key, now, rng);
    SignedEncryptedData request = encrypt_signed(its.profile, inner, aa.certificate, rng);
    Bytes delivered = bus.deliver("EE", aa.actor_name, encode_signed_encrypted(request));

    Bytes response_env = flow_detail::handle_ticket_request(aa, ea, delivered, bus, rng, now);
    Bytes answered = bus.deliver(aa.actor_name, "EE", std::move(response_env));

    SignedData response = decrypt_signed(its.profile, decode_signed_encrypted(answered), ticket_key);
    VerifyOutcome out = verify_signed_data(its.profile, response, its.store, now);
    if (!out.accepted()) throw FlowError(std::string("ticket response rejected: ") + out.detail);
    Reader r(response.payload);
    Certificate ticket = decode_certificate(r.var16("ticket certificate"));
    r.expect_end();

    if (!response.signer_cert) throw FlowError("ticket response lacks an inline certificate");
    ValidationReport rep = validate_chain(its.profile, ticket, {*response.signer_cert}, its.store.root(), now);
    if (!rep.ok) throw FlowError("ticket does not validate: " + rep.to_line());
    if (!(contained_key(suite, ticket) == ticket_key.pub))
        throw FlowError("ticket does not contain the requested key");

    its.authorization_credentials.emplace_back(ticket, ticket_key.d);
    return {ticket, ticket_key.d};
}

// The SCMS authorization exchange carried over the authenticated channel,
// with the pseudonymous registration authority behind the authentication
// server; issued credentials are explicit under this profile but keep the
// cocoon structure.
inline std::vector<std::pair<Certificate, U256>> cscms_authorize(EndEntityState& ee, AuthorityState& as_,
                                                                 AuthorityState& pra, AuthorityState& aca,
                                                                 uint32_t batch_size, MessageBus& bus,
                                                                 RandomSource& rng, Time32 now) {
    auto [ee_chan, as_chan] = establish_gba_channel(ee, as_, bus, rng);

    Bytes env = flow_detail::build_authz_request_env(ee, pra.certificate, batch_size, rng, now);
    HashedId8 request_id = message_id8(ee.profile, env);
    Bytes frame = bus.deliver("EE", as_.actor_name, ee_chan.seal(env));
    Bytes at_as = as_chan.open(frame);

    Bytes ack = flow_detail::handle_authz_request(pra, aca, at_as, bus, rng, now);
    Bytes ack_frame = bus.deliver(as_.actor_name, "EE", as_chan.seal(ack));
    flow_detail::check_ack(ee, ee_chan.open(ack_frame), request_id, now);

    Bytes dl_env = flow_detail::build_download_request_env(ee, pra.certificate, request_id, rng, now);
    Bytes dl_frame = bus.deliver("EE", as_.actor_name, ee_chan.seal(dl_env));
    Bytes dl_at_as = as_chan.open(dl_frame);

    Bytes bundle = flow_detail::handle_download_request(pra, dl_at_as, now, rng);
    Bytes bundle_frame = bus.deliver(as_.actor_name, "EE", as_chan.seal(bundle));
    Bytes bundle_bytes = ee_chan.open(bundle_frame);

    SignedData response = decrypt_signed(ee.profile, decode_signed_encrypted(bundle_bytes),
                                         CryptoSuite::get(ee.profile).keypair_from_scalar(ee.enrollment_private));
    return flow_detail::accept_bundle(ee, response, request_id, now);
}

}  // namespace v2xcms

#endif
