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

#include <catch2/catch_amalgamated.hpp>

#include "v2xcms/flows.hpp"

using namespace v2xcms;

namespace {

using Role = AuthorityState::Role;

constexpr Time32 kT0 = 694310400;
constexpr Time32 kNow = kT0 + 3600;
constexpr Profile kProfiles[] = {Profile::scms, Profile::ccms, Profile::cscms};

// Bootstrap, enroll, and authorize one end entity under the given profile.
// Every run with the same seed sends the same byte sequence over the bus.
void run_full_flow(Profile p, uint64_t seed, MessageBus& bus, uint32_t batch_size = 2) {
    HashDrbg rng = HashDrbg::from_u64(seed);
    Domain d = make_domain(p, kT0, rng);
    EndEntityState ee = make_end_entity(d, "obu", kNow, rng);
    switch (p) {
        case Profile::scms:
            register_canonical(d.authority(Role::ECA), ee);
            scms_enroll(ee, d.authority(Role::ECA), bus, rng, kNow);
            scms_authorize(ee, d.authority(Role::RA), d.authority(Role::ACA), batch_size, bus, rng, kNow);
            break;
        case Profile::ccms:
            register_canonical(d.authority(Role::EA), ee);
            ccms_enrol(ee, d.authority(Role::EA), bus, rng, kNow);
            ccms_authorize(ee, d.authority(Role::AA), d.authority(Role::EA), bus, rng, kNow);
            break;
        case Profile::cscms:
            register_canonical(d.authority(Role::ECA), ee);
            provision_subscriber(d.authority(Role::GBA_AS), ee, rng);
            cscms_enroll(ee, d.authority(Role::GBA_AS), d.authority(Role::ECA), bus, rng, kNow);
            cscms_authorize(ee, d.authority(Role::GBA_AS), d.authority(Role::PRA), d.authority(Role::ACA),
                            batch_size, bus, rng, kNow);
            break;
    }
}

Bytes sample_bsm(size_t size) {
    Bytes payload(size);
    for (size_t i = 0; i < size; ++i) payload[i] = static_cast<uint8_t>(i * 33 + 7);
    return payload;
}

// Signs a basic safety message with the credential and verifies it through a
// second, independently bootstrapped receiver's trust store.
void exchange_bsm(Profile p, const Domain& domain, const std::pair<Certificate, U256>& credential,
                  SignerKeyPath expected_path, HashDrbg& rng) {
    EndEntityState receiver = make_end_entity(domain, "rsu", kNow, rng);
    Bytes payload = sample_bsm(200);
    SignedData bsm = sign_data(p, payload, kAidBsm, credential.first, credential.second,
                               SignerKind::Certificate, Time64(kNow) * 1000000, rng);
    Bytes wire = encode_signed_data(bsm);

    VerifyOutcome out = verify_signed_data(p, decode_signed_data(wire), receiver.store, kNow);
    REQUIRE(out.result == VerifyResult::Accept);
    REQUIRE(out.key_path == expected_path);
}

}  // namespace

TEST_CASE("scms flow: implicit enrollment then butterfly batch authorization") {
    HashDrbg rng = HashDrbg::from_u64(0x5c35);
    Domain d = make_domain(Profile::scms, kT0, rng);
    EndEntityState ee = make_end_entity(d, "obu-scms", kNow, rng);
    register_canonical(d.authority(Role::ECA), ee);
    MessageBus bus;

    Certificate ec = scms_enroll(ee, d.authority(Role::ECA), bus, rng, kNow);
    REQUIRE(bus.size() == 2);
    REQUIRE_FALSE(ec.is_explicit());
    REQUIRE(ec.kind() == CertKind::Enrollment);
    REQUIRE(ee.enrollment_cert.has_value());

    // The derived enrollment key matches the certificate's reconstruction.
    const auto& suite = CryptoSuite::get(Profile::scms);
    AffinePoint eca_key = contained_key(suite, d.authority(Role::ECA).certificate);
    REQUIRE(suite.curve().base_mul(ee.enrollment_private) ==
            ecqv_reconstruct_public(Profile::scms, ec, eca_key));

    auto creds = scms_authorize(ee, d.authority(Role::RA), d.authority(Role::ACA), 5, bus, rng, kNow);
    REQUIRE(bus.size() == 2 + 4 + 2 * 5);
    REQUIRE(creds.size() == 5);
    REQUIRE(ee.authorization_credentials.size() == 5);

    std::set<std::string> ids;
    for (const auto& [cert, priv] : creds) {
        REQUIRE_FALSE(cert.is_explicit());
        REQUIRE(cert.kind() == CertKind::Authorization);
        REQUIRE(cert.tbs.validity_duration_seconds == kAuthorizationValiditySeconds);
        // Pseudonyms share a subject name; only the key material differs.
        REQUIRE(cert.tbs.id == to_bytes("pseudonym"));
        ids.insert(hashed_id8(Profile::scms, cert).hex());
    }
    REQUIRE(ids.size() == 5);

    exchange_bsm(Profile::scms, d, creds[0], SignerKeyPath::Reconstructed, rng);
    exchange_bsm(Profile::scms, d, creds[4], SignerKeyPath::Reconstructed, rng);
}

TEST_CASE("ccms flow: explicit enrolment then single-ticket authorization") {
    HashDrbg rng = HashDrbg::from_u64(0xcc35);
    Domain d = make_domain(Profile::ccms, kT0, rng);
    EndEntityState its = make_end_entity(d, "its-s", kNow, rng);
    register_canonical(d.authority(Role::EA), its);
    MessageBus bus;

    Certificate ec = ccms_enrol(its, d.authority(Role::EA), bus, rng, kNow);
    REQUIRE(bus.size() == 2);
    REQUIRE(ec.is_explicit());
    REQUIRE(ec.kind() == CertKind::Enrollment);
    REQUIRE(contained_key(CryptoSuite::get(Profile::ccms), ec) == its.enrollment_key.pub);

    auto [ticket, ticket_priv] = ccms_authorize(its, d.authority(Role::AA), d.authority(Role::EA), bus, rng, kNow);
    REQUIRE(bus.size() == 6);
    REQUIRE(ticket.is_explicit());
    REQUIRE(ticket.kind() == CertKind::Authorization);
    REQUIRE(ticket.tbs.id == to_bytes("ticket"));
    REQUIRE(ticket.tbs.validity_duration_seconds == kAuthorizationValiditySeconds);
    REQUIRE(contained_key(CryptoSuite::get(Profile::ccms), ticket) ==
            CryptoSuite::get(Profile::ccms).curve().base_mul(ticket_priv));

    // The validation round runs between the two authorities.
    REQUIRE(bus.deliveries()[3].from == "AA");
    REQUIRE(bus.deliveries()[3].to == "EA");
    REQUIRE(bus.deliveries()[4].from == "EA");
    REQUIRE(bus.deliveries()[4].to == "AA");

    exchange_bsm(Profile::ccms, d, {ticket, ticket_priv}, SignerKeyPath::ContainedKey, rng);
}

TEST_CASE("cscms flow: channel-protected enrollment and explicit cocoon batch") {
    HashDrbg rng = HashDrbg::from_u64(0xc5c35);
    Domain d = make_domain(Profile::cscms, kT0, rng);
    EndEntityState ee = make_end_entity(d, "obu-cn", kNow, rng);
    register_canonical(d.authority(Role::ECA), ee);
    provision_subscriber(d.authority(Role::GBA_AS), ee, rng);
    MessageBus bus;

    Certificate ec = cscms_enroll(ee, d.authority(Role::GBA_AS), d.authority(Role::ECA), bus, rng, kNow);
    REQUIRE(bus.size() == 6);
    REQUIRE(ec.is_explicit());
    REQUIRE(ec.kind() == CertKind::Enrollment);

    // The handshake and the sealed legs all run between the end entity and
    // the authentication server; the enrollment authority never talks to the
    // end entity directly.
    for (const auto& del : bus.deliveries()) {
        REQUIRE(((del.from == "EE" && del.to == "AS") || (del.from == "AS" && del.to == "EE")));
    }

    auto creds = cscms_authorize(ee, d.authority(Role::GBA_AS), d.authority(Role::PRA),
                                 d.authority(Role::ACA), 4, bus, rng, kNow);
    REQUIRE(bus.size() == 6 + 8 + 2 * 4);
    REQUIRE(creds.size() == 4);

    size_t aca_legs = 0;
    for (const auto& del : bus.deliveries()) {
        if (del.from == "ACA" || del.to == "ACA") ++aca_legs;
    }
    REQUIRE(aca_legs == 2 * 4);

    for (const auto& [cert, priv] : creds) {
        REQUIRE(cert.is_explicit());
        REQUIRE(cert.kind() == CertKind::Authorization);
        REQUIRE(contained_key(CryptoSuite::get(Profile::cscms), cert) ==
                CryptoSuite::get(Profile::cscms).curve().base_mul(priv));
    }

    exchange_bsm(Profile::cscms, d, creds[0], SignerKeyPath::ContainedKey, rng);
}

TEST_CASE("certificate shapes by system: authorities explicit, end entities per profile") {
    for (Profile p : kProfiles) {
        HashDrbg rng = HashDrbg::from_u64(0x7a9 + uint64_t(p));
        Domain d = make_domain(p, kT0, rng);
        REQUIRE(d.root.is_explicit());
        for (const auto& a : d.authorities) REQUIRE(a.certificate.is_explicit());

        EndEntityState ee = make_end_entity(d, "shape", kNow, rng);
        MessageBus bus;
        bool ee_implicit = (p == Profile::scms);
        switch (p) {
            case Profile::scms: {
                register_canonical(d.authority(Role::ECA), ee);
                Certificate ec = scms_enroll(ee, d.authority(Role::ECA), bus, rng, kNow);
                auto creds = scms_authorize(ee, d.authority(Role::RA), d.authority(Role::ACA), 2, bus, rng, kNow);
                REQUIRE(ec.is_explicit() == !ee_implicit);
                for (const auto& c : creds) REQUIRE(c.first.is_explicit() == !ee_implicit);
                break;
            }
            case Profile::ccms: {
                register_canonical(d.authority(Role::EA), ee);
                Certificate ec = ccms_enrol(ee, d.authority(Role::EA), bus, rng, kNow);
                auto ticket = ccms_authorize(ee, d.authority(Role::AA), d.authority(Role::EA), bus, rng, kNow);
                REQUIRE(ec.is_explicit());
                REQUIRE(ticket.first.is_explicit());
                break;
            }
            case Profile::cscms: {
                register_canonical(d.authority(Role::ECA), ee);
                provision_subscriber(d.authority(Role::GBA_AS), ee, rng);
                Certificate ec = cscms_enroll(ee, d.authority(Role::GBA_AS), d.authority(Role::ECA), bus, rng, kNow);
                auto creds = cscms_authorize(ee, d.authority(Role::GBA_AS), d.authority(Role::PRA),
                                             d.authority(Role::ACA), 2, bus, rng, kNow);
                REQUIRE(ec.is_explicit());
                for (const auto& c : creds) REQUIRE(c.first.is_explicit());
                break;
            }
        }
    }
}

TEST_CASE("flows are deterministic under a fixed seed") {
    for (Profile p : kProfiles) {
        MessageBus a, b, c;
        run_full_flow(p, 909, a);
        run_full_flow(p, 909, b);
        run_full_flow(p, 910, c);
        REQUIRE(a.transcript_lines() == b.transcript_lines());
        REQUIRE(a.transcript_lines() != c.transcript_lines());
    }
}

TEST_CASE("every message leg rejects tampering") {
    for (Profile p : kProfiles) {
        MessageBus baseline;
        run_full_flow(p, 777, baseline);
        size_t legs = baseline.size();
        REQUIRE(legs >= 6);

        for (size_t target = 0; target < legs; ++target) {
            INFO("profile " << int(p) << " tampered leg " << target);
            MessageBus bus;
            bus.tamper = [target](size_t index, Bytes& bytes) {
                if (index == target && !bytes.empty()) bytes.back() ^= 0x01;
            };
            REQUIRE_THROWS_AS(run_full_flow(p, 777, bus), Error);
        }
    }
}

TEST_CASE("secure channel enforces frame order and authenticity") {
    SymKey key{};
    for (size_t i = 0; i < key.size(); ++i) key[i] = static_cast<uint8_t>(0x40 + i);
    SecureChannel ee(Profile::cscms, key, true);
    SecureChannel as_(Profile::cscms, key, false);

    Bytes first = ee.seal(as_bytes("frame-one"));
    REQUIRE(as_.open(first) == to_bytes("frame-one"));

    SECTION("replaying an accepted frame fails") {
        REQUIRE_THROWS_AS(as_.open(first), ChannelAuthFailure);
    }

    SECTION("frames cannot be reordered") {
        Bytes second = ee.seal(as_bytes("frame-two"));
        Bytes third = ee.seal(as_bytes("frame-three"));
        REQUIRE_THROWS_AS(as_.open(third), ChannelAuthFailure);
        REQUIRE(as_.open(second) == to_bytes("frame-two"));
        REQUIRE(as_.open(third) == to_bytes("frame-three"));
    }

    SECTION("a sender cannot open its own frames") {
        Bytes frame = ee.seal(as_bytes("loopback"));
        REQUIRE_THROWS_AS(ee.open(frame), ChannelAuthFailure);
    }

    SECTION("short and corrupted frames fail") {
        REQUIRE_THROWS_AS(as_.open(as_bytes("tiny")), ChannelAuthFailure);
        Bytes frame = ee.seal(as_bytes("payload"));
        frame[frame.size() - 1] ^= 0x80;
        REQUIRE_THROWS_AS(as_.open(frame), ChannelAuthFailure);
    }

    SECTION("responder frames authenticate the other direction") {
        Bytes reply = as_.seal(as_bytes("ack"));
        REQUIRE(ee.open(reply) == to_bytes("ack"));
        REQUIRE_THROWS_AS(ee.open(reply), ChannelAuthFailure);
    }
}

TEST_CASE("batch download requires a prior acknowledgement") {
    HashDrbg rng = HashDrbg::from_u64(0xd01);
    Domain d = make_domain(Profile::scms, kT0, rng);
    EndEntityState ee = make_end_entity(d, "dl", kNow, rng);
    register_canonical(d.authority(Role::ECA), ee);
    MessageBus bus;
    scms_enroll(ee, d.authority(Role::ECA), bus, rng, kNow);

    SECTION("a fabricated batch id is refused") {
        HashedId8 bogus = message_id8(Profile::scms, as_bytes("no such request"));
        REQUIRE_THROWS_AS(scms_download_batch(ee, d.authority(Role::RA), bogus, bus, rng, kNow),
                          DownloadBeforeAck);
    }

    SECTION("each acknowledged batch downloads exactly once") {
        HashedId8 id = scms_request_batch(ee, d.authority(Role::RA), d.authority(Role::ACA), 2, bus, rng, kNow);
        auto creds = scms_download_batch(ee, d.authority(Role::RA), id, bus, rng, kNow);
        REQUIRE(creds.size() == 2);
        REQUIRE_THROWS_AS(scms_download_batch(ee, d.authority(Role::RA), id, bus, rng, kNow),
                          DownloadBeforeAck);
    }
}

TEST_CASE("enrollment requires a registered canonical key") {
    for (Profile p : kProfiles) {
        HashDrbg rng = HashDrbg::from_u64(0xbad + uint64_t(p));
        Domain d = make_domain(p, kT0, rng);
        EndEntityState ee = make_end_entity(d, "stranger", kNow, rng);
        MessageBus bus;
        switch (p) {
            case Profile::scms:
                REQUIRE_THROWS_AS(scms_enroll(ee, d.authority(Role::ECA), bus, rng, kNow),
                                  UnregisteredCanonicalKey);
                break;
            case Profile::ccms:
                REQUIRE_THROWS_AS(ccms_enrol(ee, d.authority(Role::EA), bus, rng, kNow),
                                  UnregisteredCanonicalKey);
                break;
            case Profile::cscms:
                provision_subscriber(d.authority(Role::GBA_AS), ee, rng);
                REQUIRE_THROWS_AS(
                    cscms_enroll(ee, d.authority(Role::GBA_AS), d.authority(Role::ECA), bus, rng, kNow),
                    UnregisteredCanonicalKey);
                break;
        }
    }
}

TEST_CASE("enrollment request must be signed by the key it names") {
    HashDrbg rng = HashDrbg::from_u64(0x51f);
    const auto& suite = CryptoSuite::get(Profile::scms);
    Domain d = make_domain(Profile::scms, kT0, rng);
    EndEntityState ee = make_end_entity(d, "forger", kNow, rng);
    AuthorityState& eca = d.authority(Role::ECA);

    // Register a victim key, then submit a request naming it but signed by
    // the forger's own canonical key.
    KeyPair victim = suite.generate_keypair(rng);
    eca.canonical_registry.insert(suite.curve().compress(victim.pub));

    std::array<uint8_t, 33> request_pub = suite.curve().compress(ee.enrollment_key.pub);
    SignedData request =
        sign_with_raw_key(Profile::scms, request_pub, kAidManagement, ee.canonical, kNow, rng);
    request.signer_digest = raw_key_id(Profile::scms, suite.curve().compress(victim.pub));

    REQUIRE_THROWS_AS(flow_detail::handle_enroll_request(eca, encode_signed_data(request), kNow, rng),
                      BadRequestSignature);
}

TEST_CASE("ccms enrolment rejects a broken inner proof of possession") {
    HashDrbg rng = HashDrbg::from_u64(0x90b);
    const auto& suite = CryptoSuite::get(Profile::ccms);
    Domain d = make_domain(Profile::ccms, kT0, rng);
    EndEntityState its = make_end_entity(d, "its-pop", kNow, rng);
    AuthorityState& ea = d.authority(Role::EA);
    register_canonical(ea, its);

    // The inner envelope advertises the enrolment key but is signed by an
    // unrelated key.
    KeyPair unrelated = suite.generate_keypair(rng);
    std::array<uint8_t, 33> enrol_pub = suite.curve().compress(its.enrollment_key.pub);
    SignedData bad_pop = sign_with_raw_key(Profile::ccms, enrol_pub, kAidManagement, unrelated, kNow, rng);
    SignedData outer =
        sign_with_raw_key(Profile::ccms, encode_signed_data(bad_pop), kAidManagement, its.canonical, kNow, rng);
    Bytes env = encode_signed_encrypted(encrypt_signed(Profile::ccms, outer, ea.certificate, rng));

    REQUIRE_THROWS_AS(flow_detail::handle_sealed_enrol_request(ea, env, kNow, rng), BadInnerPoP);
}

TEST_CASE("ccms ticket request fails without possession of the ticket key") {
    HashDrbg rng = HashDrbg::from_u64(0xf0f);
    const auto& suite = CryptoSuite::get(Profile::ccms);
    Domain d = make_domain(Profile::ccms, kT0, rng);
    EndEntityState its = make_end_entity(d, "its-t", kNow, rng);
    AuthorityState& ea = d.authority(Role::EA);
    AuthorityState& aa = d.authority(Role::AA);
    register_canonical(ea, its);
    MessageBus bus;
    ccms_enrol(its, ea, bus, rng, kNow);

    KeyPair claimed = suite.generate_keypair(rng);
    KeyPair actual = suite.generate_keypair(rng);
    std::array<uint8_t, 33> claimed_pub = suite.curve().compress(claimed.pub);

    SignedData ec_sig = sign_data(Profile::ccms, claimed_pub, kAidManagement, *its.enrollment_cert,
                                  its.enrollment_private, SignerKind::Certificate, kNow, rng);
    Writer w;
    w.raw(claimed_pub);
    w.var16(encode_signed_data(ec_sig));
    SignedData inner = sign_with_raw_key(Profile::ccms, w.take(), kAidManagement, actual, kNow, rng);
    Bytes env = encode_signed_encrypted(encrypt_signed(Profile::ccms, inner, aa.certificate, rng));

    REQUIRE_THROWS_AS(flow_detail::handle_ticket_request(aa, ea, env, bus, rng, kNow), BadPoP);
}

TEST_CASE("expired enrollment credentials cannot authorize") {
    Time32 later = kNow + kEnrollmentValiditySeconds + 100;

    SECTION("ccms validation round reports the rejection") {
        HashDrbg rng = HashDrbg::from_u64(0xe1);
        Domain d = make_domain(Profile::ccms, kT0, rng);
        EndEntityState its = make_end_entity(d, "its-old", kNow, rng);
        register_canonical(d.authority(Role::EA), its);
        MessageBus bus;
        ccms_enrol(its, d.authority(Role::EA), bus, rng, kNow);
        REQUIRE_THROWS_AS(ccms_authorize(its, d.authority(Role::AA), d.authority(Role::EA), bus, rng, later),
                          ValidationRejected);
    }

    SECTION("scms registration authority refuses the request") {
        HashDrbg rng = HashDrbg::from_u64(0xe2);
        Domain d = make_domain(Profile::scms, kT0, rng);
        EndEntityState ee = make_end_entity(d, "obu-old", kNow, rng);
        register_canonical(d.authority(Role::ECA), ee);
        MessageBus bus;
        scms_enroll(ee, d.authority(Role::ECA), bus, rng, kNow);
        REQUIRE_THROWS_AS(
            scms_authorize(ee, d.authority(Role::RA), d.authority(Role::ACA), 2, bus, rng, later),
            EnrollmentChainInvalid);
    }
}

TEST_CASE("channel establishment authenticates both parties") {
    HashDrbg rng = HashDrbg::from_u64(0x6ba);
    Domain d = make_domain(Profile::cscms, kT0, rng);
    AuthorityState& as_ = d.authority(Role::GBA_AS);

    SECTION("an unprovisioned device cannot start") {
        EndEntityState ee = make_end_entity(d, "nobody", kNow, rng);
        MessageBus bus;
        REQUIRE_THROWS_AS(establish_gba_channel(ee, as_, bus, rng), UnknownSubscriber);
    }

    SECTION("an unknown subscriber name is refused") {
        EndEntityState ee = make_end_entity(d, "known", kNow, rng);
        provision_subscriber(as_, ee, rng);
        ee.name = "ghost";
        MessageBus bus;
        REQUIRE_THROWS_AS(establish_gba_channel(ee, as_, bus, rng), UnknownSubscriber);
    }

    SECTION("a wrong secret fails the response check") {
        EndEntityState ee = make_end_entity(d, "impostor", kNow, rng);
        provision_subscriber(as_, ee, rng);
        (*ee.subscriber_secret)[0] ^= 0xFF;
        MessageBus bus;
        REQUIRE_THROWS_AS(establish_gba_channel(ee, as_, bus, rng), BadAuthResponse);
    }
}

TEST_CASE("butterfly secrets never reach the issuing authority") {
    struct Case {
        Profile profile;
        Role issuer;
    };
    for (Case c : {Case{Profile::scms, Role::ACA}, Case{Profile::cscms, Role::ACA}}) {
        HashDrbg rng = HashDrbg::from_u64(0x9e7 + uint64_t(c.profile));
        const auto& suite = CryptoSuite::get(c.profile);
        Domain d = make_domain(c.profile, kT0, rng);
        EndEntityState ee = make_end_entity(d, "private", kNow, rng);
        register_canonical(d.authority(Role::ECA), ee);
        MessageBus bus;
        if (c.profile == Profile::scms) {
            scms_enroll(ee, d.authority(Role::ECA), bus, rng, kNow);
            scms_authorize(ee, d.authority(Role::RA), d.authority(Role::ACA), 5, bus, rng, kNow);
        } else {
            provision_subscriber(d.authority(Role::GBA_AS), ee, rng);
            cscms_enroll(ee, d.authority(Role::GBA_AS), d.authority(Role::ECA), bus, rng, kNow);
            cscms_authorize(ee, d.authority(Role::GBA_AS), d.authority(Role::PRA), d.authority(Role::ACA), 5,
                            bus, rng, kNow);
        }
        REQUIRE(ee.caterpillar.has_value());

        std::array<uint8_t, 32> caterpillar_private = ee.caterpillar->keypair.d.to_be_bytes();
        std::array<uint8_t, 33> caterpillar_public = suite.curve().compress(ee.caterpillar->keypair.pub);
        const SymKey& expansion_key = ee.caterpillar->expansion_key;

        const char* issuer_name = role_name(c.issuer);
        for (const auto& del : bus.deliveries()) {
            INFO("leg " << del.from << "->" << del.to);
            // The caterpillar scalar and the expansion key cross the bus only
            // inside authenticated encryption, never as plaintext.
            REQUIRE_FALSE(contains_subsequence(del.bytes, caterpillar_private));
            REQUIRE_FALSE(contains_subsequence(del.bytes, expansion_key));
            if (del.from == issuer_name || del.to == issuer_name) {
                // The issuer sees individual cocoon points only; the key that
                // links them stays with the registration side.
                REQUIRE_FALSE(contains_subsequence(del.bytes, caterpillar_public));
            }
        }
    }
}
