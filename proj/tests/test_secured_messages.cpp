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

#include "v2xcms/secured_messages.hpp"

using namespace v2xcms;

namespace {

constexpr Time32 kT0 = 694310400;
constexpr uint32_t kYear = 31536000;
constexpr Time32 kNow = kT0 + 3600;

struct World {
    Certificate root;
    KeyPair root_key;
    Certificate authority;
    KeyPair authority_key;
    Certificate explicit_ee;
    KeyPair explicit_ee_key;
    Certificate implicit_ee;
    U256 implicit_ee_priv;
    TrustStore store;

    static World make(Profile p, uint64_t seed, bool preload_leaves) {
        HashDrbg rng = HashDrbg::from_u64(seed);
        const auto& suite = CryptoSuite::get(p);
        auto [root, root_key] = self_sign_root(p, as_bytes("root"), kT0, 20 * kYear, rng);
        KeyPair authority_key = suite.generate_keypair(rng);
        Certificate authority = issue_explicit(p, root, root_key, authority_key.pub, CertKind::Enrollment,
                                               as_bytes("authority"), kT0, 10 * kYear, rng);

        KeyPair explicit_ee_key = suite.generate_keypair(rng);
        Certificate explicit_ee = issue_explicit(p, authority, authority_key, explicit_ee_key.pub,
                                                 CertKind::Authorization, as_bytes("x-ee"), kT0, kYear, rng);

        KeyPair request = suite.generate_keypair(rng);
        EcqvIssuance iss = ecqv_issue(p, authority, authority_key, request.pub, CertKind::Authorization,
                                      as_bytes("i-ee"), kT0, kYear, rng);
        U256 implicit_priv = ecqv_derive_private(p, iss.certificate, request.d, iss.private_key_contribution);

        TrustStore store(p, root, kNow);
        store.add_trusted(authority, kNow);
        if (preload_leaves) {
            store.add_trusted(explicit_ee, kNow);
            store.add_trusted(iss.certificate, kNow);
        }
        return {std::move(root),        root_key,      std::move(authority),      authority_key,
                std::move(explicit_ee), explicit_ee_key, std::move(iss.certificate), implicit_priv,
                std::move(store)};
    }
};

}  // namespace

TEST_CASE("sign and verify across profiles, signer modes, and certificate types") {
    Bytes bsm(200, 0x42);
    uint64_t seed = 700;
    for (Profile p : kAllProfiles) {
        World w = World::make(p, seed++, true);
        HashDrbg rng = HashDrbg::from_u64(seed * 31);

        struct Case {
            const Certificate* cert;
            const U256* priv;
            SignerKind mode;
            SignerKeyPath want_path;
        };
        const Case cases[] = {
            {&w.explicit_ee, &w.explicit_ee_key.d, SignerKind::Certificate, SignerKeyPath::ContainedKey},
            {&w.explicit_ee, &w.explicit_ee_key.d, SignerKind::Digest, SignerKeyPath::ContainedKey},
            {&w.implicit_ee, &w.implicit_ee_priv, SignerKind::Certificate, SignerKeyPath::Reconstructed},
            {&w.implicit_ee, &w.implicit_ee_priv, SignerKind::Digest, SignerKeyPath::Reconstructed},
        };
        for (const Case& c : cases) {
            SignedData msg = sign_data(p, bsm, kAidBsm, *c.cert, *c.priv, c.mode, 1000, rng);
            CHECK(msg.hash_id == profile_hash(p));
            VerifyOutcome out = verify_signed_data(p, msg, w.store, kNow);
            REQUIRE(out.accepted());
            CHECK(out.key_path == c.want_path);

            // The envelope survives its wire form.
            SignedData decoded = decode_signed_data(encode_signed_data(msg));
            CHECK(verify_signed_data(p, decoded, w.store, kNow).accepted());
        }
    }
}

TEST_CASE("any single corrupted byte of the envelope is rejected") {
    World w = World::make(Profile::scms, 801, true);
    HashDrbg rng = HashDrbg::from_u64(802);
    SignedData msg = sign_data(Profile::scms, as_bytes("payload under test"), kAidBsm, w.explicit_ee,
                               w.explicit_ee_key.d, SignerKind::Certificate, 5, rng);
    Bytes enc = encode_signed_data(msg);
    for (size_t i = 0; i < enc.size(); ++i) {
        Bytes bad = enc;
        bad[i] ^= 0x01;
        bool rejected;
        try {
            rejected = !verify_signed_data(Profile::scms, decode_signed_data(bad), w.store, kNow).accepted();
        } catch (const Error&) {
            rejected = true;  // decode-level rejection counts
        }
        INFO("corrupted byte index " << i);
        REQUIRE(rejected);
    }
}

TEST_CASE("verification failures carry their reason") {
    World w = World::make(Profile::ccms, 810, false);
    HashDrbg rng = HashDrbg::from_u64(811);

    SECTION("unknown digest signer") {
        SignedData msg = sign_data(Profile::ccms, as_bytes("m"), kAidBsm, w.explicit_ee, w.explicit_ee_key.d,
                                   SignerKind::Digest, 1, rng);
        VerifyOutcome out = verify_signed_data(Profile::ccms, msg, w.store, kNow);
        CHECK(out.result == VerifyResult::UnresolvedSigner);
    }

    SECTION("inline cert with issuer missing from the store") {
        HashDrbg rng2 = HashDrbg::from_u64(812);
        World stranger = World::make(Profile::ccms, 813, false);
        SignedData msg = sign_data(Profile::ccms, as_bytes("m"), kAidBsm, stranger.explicit_ee,
                                   stranger.explicit_ee_key.d, SignerKind::Certificate, 1, rng2);
        VerifyOutcome out = verify_signed_data(Profile::ccms, msg, w.store, kNow);
        CHECK(out.result == VerifyResult::ChainInvalid);
    }

    SECTION("expired signer certificate") {
        SignedData msg = sign_data(Profile::ccms, as_bytes("m"), kAidBsm, w.explicit_ee, w.explicit_ee_key.d,
                                   SignerKind::Certificate, 1, rng);
        VerifyOutcome out = verify_signed_data(Profile::ccms, msg, w.store, kT0 + 2 * kYear);
        CHECK(out.result == VerifyResult::ChainInvalid);
    }

    SECTION("payload mutation flips only the signature check") {
        SignedData msg = sign_data(Profile::ccms, as_bytes("m"), kAidBsm, w.explicit_ee, w.explicit_ee_key.d,
                                   SignerKind::Certificate, 1, rng);
        msg.payload.push_back('!');
        VerifyOutcome out = verify_signed_data(Profile::ccms, msg, w.store, kNow);
        CHECK(out.result == VerifyResult::BadSignature);
    }

    SECTION("forged inline certificate chain")  {
        // Reuse the authority's name but a different key; the inline link
        // check against the store-resident authority must fail.
        HashDrbg rng2 = HashDrbg::from_u64(814);
        const auto& suite = CryptoSuite::get(Profile::ccms);
        KeyPair rogue = suite.generate_keypair(rng2);
        Certificate forged = w.explicit_ee;
        forged.tbs.public_key = suite.curve().compress(rogue.pub);
        SignedData msg = sign_data(Profile::ccms, as_bytes("m"), kAidBsm, forged, rogue.d,
                                   SignerKind::Certificate, 1, rng2);
        VerifyOutcome out = verify_signed_data(Profile::ccms, msg, w.store, kNow);
        CHECK(out.result == VerifyResult::ChainInvalid);
    }
}

TEST_CASE("mismatched private key is caught at signing time") {
    World w = World::make(Profile::scms, 820, false);
    HashDrbg rng = HashDrbg::from_u64(821);
    CHECK_THROWS_AS(sign_data(Profile::scms, as_bytes("m"), kAidBsm, w.explicit_ee, w.authority_key.d,
                              SignerKind::Certificate, 1, rng),
                    KeyCertMismatch);
}

TEST_CASE("messages signed under one profile never verify under another") {
    World producer = World::make(Profile::cscms, 830, true);
    World consumer = World::make(Profile::scms, 831, true);
    HashDrbg rng = HashDrbg::from_u64(832);
    int accepted = 0;
    for (int i = 0; i < 100; ++i) {
        Bytes payload(32, static_cast<uint8_t>(i));
        SignedData msg = sign_data(Profile::cscms, payload, kAidBsm, producer.explicit_ee,
                                   producer.explicit_ee_key.d, SignerKind::Certificate, uint64_t(i), rng);
        try {
            if (verify_signed_data(Profile::scms, msg, consumer.store, kNow).accepted()) ++accepted;
        } catch (const Error&) {
        }
    }
    CHECK(accepted == 0);
}

TEST_CASE("implicit signer verification costs exactly one extra scalar multiplication") {
    for (Profile p : kAllProfiles) {
        World w = World::make(p, 840 + static_cast<uint64_t>(p), true);
        HashDrbg rng = HashDrbg::from_u64(841);
        SignedData exp_msg = sign_data(p, as_bytes("probe"), kAidBsm, w.explicit_ee, w.explicit_ee_key.d,
                                       SignerKind::Digest, 1, rng);
        SignedData imp_msg = sign_data(p, as_bytes("probe"), kAidBsm, w.implicit_ee, w.implicit_ee_priv,
                                       SignerKind::Digest, 1, rng);

        reset_scalar_mul_count();
        REQUIRE(verify_signed_data(p, exp_msg, w.store, kNow).accepted());
        uint64_t explicit_cost = scalar_mul_count();

        reset_scalar_mul_count();
        REQUIRE(verify_signed_data(p, imp_msg, w.store, kNow).accepted());
        uint64_t implicit_cost = scalar_mul_count();

        CHECK(explicit_cost == 2);
        CHECK(implicit_cost == explicit_cost + 1);
    }
}

TEST_CASE("declared hash id is recorded but does not change the computation") {
    World w = World::make(Profile::cscms, 850, true);
    HashDrbg rng = HashDrbg::from_u64(851);
    SignedData msg = sign_data(Profile::cscms, as_bytes("m"), kAidBsm, w.explicit_ee, w.explicit_ee_key.d,
                               SignerKind::Certificate, 1, rng, HashAlgo::Sha256);
    CHECK(msg.hash_id == HashAlgo::Sha256);
    // Still verifies: the field is covered by the signature but hashing
    // followed the profile either way.
    CHECK(verify_signed_data(Profile::cscms, msg, w.store, kNow).accepted());
    // Flipping the declared field after signing breaks the signature.
    msg.hash_id = HashAlgo::Sm3;
    CHECK(verify_signed_data(Profile::cscms, msg, w.store, kNow).result == VerifyResult::BadSignature);
}

TEST_CASE("sign then encrypt round trips to the recipient only") {
    for (Profile p : kAllProfiles) {
        World w = World::make(p, 860 + static_cast<uint64_t>(p), true);
        HashDrbg rng = HashDrbg::from_u64(861);
        SignedData inner = sign_data(p, as_bytes("confidential request"), kAidManagement, w.explicit_ee,
                                     w.explicit_ee_key.d, SignerKind::Certificate, 9, rng);
        SignedEncryptedData sealed = encrypt_signed(p, inner, w.authority, rng);
        CHECK(sealed.recipient == hashed_id8(p, w.authority));

        SignedData opened = decrypt_signed(p, sealed, w.authority_key);
        CHECK(opened == inner);
        CHECK(verify_signed_data(p, opened, w.store, kNow).accepted());

        CHECK_THROWS_AS(decrypt_signed(p, sealed, w.explicit_ee_key), TagMismatch);

        // Wire round trip of the outer envelope.
        SignedEncryptedData wire = decode_signed_encrypted(encode_signed_encrypted(sealed));
        CHECK(decrypt_signed(p, wire, w.authority_key) == inner);
    }
}

TEST_CASE("encrypting to an implicit certificate requires its reconstructed key") {
    World w = World::make(Profile::scms, 870, true);
    HashDrbg rng = HashDrbg::from_u64(871);
    SignedData inner = sign_data(Profile::scms, as_bytes("to implicit holder"), kAidManagement, w.authority,
                                 w.authority_key.d, SignerKind::Certificate, 2, rng);
    // The certificate alone carries no verification key.
    CHECK_THROWS_AS(encrypt_signed(Profile::scms, inner, w.implicit_ee, rng), WrongCertType);

    const auto& suite = CryptoSuite::get(Profile::scms);
    AffinePoint key = ecqv_reconstruct_public(Profile::scms, w.implicit_ee, w.authority_key.pub);
    SignedEncryptedData sealed = encrypt_signed_to_key(Profile::scms, inner, key,
                                                       hashed_id8(Profile::scms, w.implicit_ee), rng);
    KeyPair holder = suite.keypair_from_scalar(w.implicit_ee_priv);
    CHECK(decrypt_signed(Profile::scms, sealed, holder) == inner);
}

TEST_CASE("encrypt and decrypt agree up to the envelope size limit") {
    World w = World::make(Profile::ccms, 880, true);
    HashDrbg rng = HashDrbg::from_u64(881);
    for (size_t size : {size_t{0}, size_t{1}, size_t{4096}, size_t{65000}}) {
        Bytes payload(size, 0x5c);
        SignedData inner = sign_data(Profile::ccms, payload, kAidBsm, w.explicit_ee, w.explicit_ee_key.d,
                                     SignerKind::Digest, 3, rng);
        SignedEncryptedData sealed = encrypt_signed(Profile::ccms, inner, w.authority, rng);
        CHECK(decrypt_signed(Profile::ccms, sealed, w.authority_key) == inner);
    }
    // Past the limit the 2-byte ciphertext length cannot represent the
    // sealed envelope.
    Bytes payload(65535, 0x5c);
    SignedData inner = sign_data(Profile::ccms, payload, kAidBsm, w.explicit_ee, w.explicit_ee_key.d,
                                 SignerKind::Digest, 3, rng);
    CHECK_THROWS_AS(encrypt_signed(Profile::ccms, inner, w.authority, rng), PayloadTooLarge);
}

TEST_CASE("tampered sealed envelopes fail to open") {
    World w = World::make(Profile::scms, 890, true);
    HashDrbg rng = HashDrbg::from_u64(891);
    SignedData inner = sign_data(Profile::scms, as_bytes("tamper target"), kAidBsm, w.explicit_ee,
                                 w.explicit_ee_key.d, SignerKind::Digest, 4, rng);
    SignedEncryptedData sealed = encrypt_signed(Profile::scms, inner, w.authority, rng);

    SignedEncryptedData bad = sealed;
    bad.ciphertext[0] ^= 0x01;
    CHECK_THROWS_AS(decrypt_signed(Profile::scms, bad, w.authority_key), TagMismatch);

    bad = sealed;
    bad.kem.wrapped_key[5] ^= 0x10;
    CHECK_THROWS_AS(decrypt_signed(Profile::scms, bad, w.authority_key), TagMismatch);

    bad = sealed;
    bad.nonce[11] ^= 0x80;
    CHECK_THROWS_AS(decrypt_signed(Profile::scms, bad, w.authority_key), TagMismatch);
}
