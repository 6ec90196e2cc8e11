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

#ifndef V2XCMS_CODEC_HPP
#define V2XCMS_CODEC_HPP

#include "v2xcms/types.hpp"

namespace v2xcms {

// Canonical binary encoding: big-endian integers, 2-byte length prefixes,
// 1-byte enums and presence flags, 33-byte compressed points, 64-byte r‖s
// signatures, fields concatenated in declared order. Every well-formed value
// has exactly one encoding.

class Writer {
  public:
    void u8(uint8_t v) { out_.push_back(v); }

    void u16(uint16_t v) {
        out_.push_back(static_cast<uint8_t>(v >> 8));
        out_.push_back(static_cast<uint8_t>(v));
    }

    void u32(uint32_t v) {
        for (int i = 3; i >= 0; --i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }

    void u64(uint64_t v) {
        for (int i = 7; i >= 0; --i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }

    void raw(ByteView v) { append(out_, v); }

    void var16(ByteView v) {
        if (v.size() > 0xFFFF) throw PayloadTooLarge(v.size());
        u16(static_cast<uint16_t>(v.size()));
        raw(v);
    }

    const Bytes& bytes() const { return out_; }
    Bytes take() { return std::move(out_); }
    size_t size() const { return out_.size(); }

  private:
    Bytes out_;
};

class Reader {
  public:
    explicit Reader(ByteView data) : data_(data) {}

    uint8_t u8(const char* what) {
        need(1, what);
        return data_[pos_++];
    }

    uint16_t u16(const char* what) {
        need(2, what);
        uint16_t v = static_cast<uint16_t>(data_[pos_] << 8 | data_[pos_ + 1]);
        pos_ += 2;
        return v;
    }

    uint32_t u32(const char* what) {
        need(4, what);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = v << 8 | data_[pos_ + size_t(i)];
        pos_ += 4;
        return v;
    }

    uint64_t u64(const char* what) {
        need(8, what);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = v << 8 | data_[pos_ + size_t(i)];
        pos_ += 8;
        return v;
    }

    ByteView raw(size_t n, const char* what) {
        need(n, what);
        ByteView v = data_.subspan(pos_, n);
        pos_ += n;
        return v;
    }

    Bytes var16(const char* what) {
        uint16_t len = u16(what);
        ByteView v = raw(len, what);
        return Bytes(v.begin(), v.end());
    }

    template <size_t N>
    std::array<uint8_t, N> fixed(const char* what) {
        ByteView v = raw(N, what);
        std::array<uint8_t, N> out;
        std::memcpy(out.data(), v.data(), N);
        return out;
    }

    bool done() const { return pos_ == data_.size(); }
    size_t consumed() const { return pos_; }

    void expect_end() const {
        if (!done()) throw TrailingBytes();
    }

  private:
    void need(size_t n, const char* what) const {
        if (data_.size() - pos_ < n) throw Truncated(what);
    }

    ByteView data_;
    size_t pos_ = 0;
};

namespace codec_detail {

inline void check_point_prefix(const std::array<uint8_t, 33>& pt, const char* what) {
    if (pt[0] != 0x02 && pt[0] != 0x03) throw MalformedPoint(std::string(what) + ": bad compression prefix");
}

inline std::array<uint8_t, 33> read_point(Reader& r, const char* what) {
    auto pt = r.fixed<33>(what);
    check_point_prefix(pt, what);
    return pt;
}

inline Signature read_signature(Reader& r, const char* what) {
    return Signature::from_bytes(r.fixed<64>(what));
}

}  // namespace codec_detail

// ---- certificates ---------------------------------------------------------

// Everything that precedes the signature presence flag; this is also the
// content the certificate signature covers.
inline void write_certificate_prefix(Writer& w, const Certificate& cert) {
    if (cert.version != 3) throw InvariantViolation("certificate version must be 3");
    if (cert.tbs.id.size() > 64) throw InvariantViolation("certificate name exceeds 64 bytes");
    bool explicit_type = cert.cert_type == CertType::Explicit;
    if (explicit_type != (cert.tbs.key_indicator == KeyIndicator::VerificationKey))
        throw InvariantViolation("certificate type contradicts key indicator");
    codec_detail::check_point_prefix(cert.tbs.public_key, "certificate key");

    w.u8(cert.version);
    w.u8(static_cast<uint8_t>(cert.cert_type));
    w.u8(static_cast<uint8_t>(cert.issuer_kind));
    if (cert.issuer_kind == IssuerKind::ByHashedId) w.raw(ByteView{cert.issuer_id.id.data(), 8});
    w.var16(cert.tbs.id);
    w.u32(cert.tbs.validity_start);
    w.u32(cert.tbs.validity_duration_seconds);
    if (cert.tbs.app_permissions.size() > 0xFFFF) throw PayloadTooLarge(cert.tbs.app_permissions.size());
    w.u16(static_cast<uint16_t>(cert.tbs.app_permissions.size()));
    for (uint32_t aid : cert.tbs.app_permissions) w.u32(aid);
    w.u8(static_cast<uint8_t>(cert.tbs.key_indicator));
    w.raw(ByteView{cert.tbs.public_key.data(), 33});
}

inline Bytes encode_certificate(const Certificate& cert) {
    // Signing computes the prefix before the signature exists, so this
    // consistency requirement binds only finished certificates.
    if (cert.is_explicit() != cert.signature.has_value())
        throw InvariantViolation("certificate type contradicts signature presence");
    Writer w;
    write_certificate_prefix(w, cert);
    w.u8(cert.signature ? 0x01 : 0x00);
    if (cert.signature) w.raw(ByteView{cert.signature->to_bytes().data(), 64});
    return w.take();
}

// The bytes a certificate's signature is computed over.
inline Bytes certificate_sign_content(const Certificate& cert) {
    Writer w;
    write_certificate_prefix(w, cert);
    return w.take();
}

inline Certificate read_certificate(Reader& r) {
    Certificate cert;
    cert.version = r.u8("certificate version");
    if (cert.version != 3) throw UnknownEnum("certificate version", cert.version);

    uint8_t ct = r.u8("certificate type");
    if (ct > 1) throw UnknownEnum("certificate type", ct);
    cert.cert_type = static_cast<CertType>(ct);

    uint8_t ik = r.u8("issuer kind");
    if (ik > 1) throw UnknownEnum("issuer kind", ik);
    cert.issuer_kind = static_cast<IssuerKind>(ik);
    if (cert.issuer_kind == IssuerKind::ByHashedId) cert.issuer_id.id = r.fixed<8>("issuer id");

    cert.tbs.id = r.var16("certificate name");
    if (cert.tbs.id.size() > 64) throw DecodeError("certificate name exceeds 64 bytes");
    cert.tbs.validity_start = r.u32("validity start");
    cert.tbs.validity_duration_seconds = r.u32("validity duration");
    uint16_t n_aids = r.u16("app permission count");
    cert.tbs.app_permissions.reserve(n_aids);
    for (uint16_t i = 0; i < n_aids; ++i) cert.tbs.app_permissions.push_back(r.u32("app permission"));

    uint8_t ki = r.u8("key indicator");
    if (ki > 1) throw UnknownEnum("key indicator", ki);
    cert.tbs.key_indicator = static_cast<KeyIndicator>(ki);
    cert.tbs.public_key = codec_detail::read_point(r, "certificate key");

    uint8_t has_sig = r.u8("signature presence");
    if (has_sig > 1) throw UnknownEnum("signature presence", has_sig);
    if (has_sig) cert.signature = codec_detail::read_signature(r, "certificate signature");

    bool explicit_type = cert.cert_type == CertType::Explicit;
    if (explicit_type != cert.signature.has_value())
        throw DecodeError("certificate type contradicts signature presence");
    if (explicit_type != (cert.tbs.key_indicator == KeyIndicator::VerificationKey))
        throw DecodeError("certificate type contradicts key indicator");
    return cert;
}

inline Certificate decode_certificate(ByteView data) {
    Reader r(data);
    Certificate cert = read_certificate(r);
    r.expect_end();
    return cert;
}

inline HashedId8 hashed_id8(Profile profile, const Certificate& cert) {
    Digest32 d = CryptoSuite::get(profile).digest(encode_certificate(cert));
    HashedId8 out;
    std::memcpy(out.id.data(), d.data() + 24, 8);
    return out;
}

// ---- signed messages ------------------------------------------------------

// Fields before the signer: protocol version, hash id, header info (app id,
// generation time), length-prefixed payload. This prefix is the content the
// message signature covers; the signer identity enters the signature input
// through the certificate-digest construction, not through these bytes.
inline void write_signed_data_prefix(Writer& w, const SignedData& msg) {
    if (msg.version != 3) throw InvariantViolation("message version must be 3");
    w.u8(msg.version);
    w.u8(static_cast<uint8_t>(msg.hash_id));
    w.u32(msg.app_id);
    w.u64(msg.generation_time);
    w.var16(msg.payload);
}

inline Bytes signed_data_sign_content(const SignedData& msg) {
    Writer w;
    write_signed_data_prefix(w, msg);
    return w.take();
}

inline Bytes encode_signed_data(const SignedData& msg) {
    Writer w;
    write_signed_data_prefix(w, msg);
    w.u8(static_cast<uint8_t>(msg.signer_kind));
    if (msg.signer_kind == SignerKind::Digest) {
        w.raw(ByteView{msg.signer_digest.id.data(), 8});
    } else {
        if (!msg.signer_cert) throw InvariantViolation("signer certificate missing");
        w.raw(encode_certificate(*msg.signer_cert));
    }
    w.raw(ByteView{msg.signature.to_bytes().data(), 64});
    return w.take();
}

inline SignedData read_signed_data(Reader& r) {
    SignedData msg;
    msg.version = r.u8("message version");
    if (msg.version != 3) throw UnknownEnum("message version", msg.version);
    uint8_t ha = r.u8("hash id");
    if (ha > 1) throw UnknownEnum("hash id", ha);
    msg.hash_id = static_cast<HashAlgo>(ha);
    msg.app_id = r.u32("app id");
    msg.generation_time = r.u64("generation time");
    msg.payload = r.var16("payload");

    uint8_t sk = r.u8("signer kind");
    if (sk > 1) throw UnknownEnum("signer kind", sk);
    msg.signer_kind = static_cast<SignerKind>(sk);
    if (msg.signer_kind == SignerKind::Digest) msg.signer_digest.id = r.fixed<8>("signer digest");
    else msg.signer_cert = read_certificate(r);

    msg.signature = codec_detail::read_signature(r, "message signature");
    return msg;
}

inline SignedData decode_signed_data(ByteView data) {
    Reader r(data);
    SignedData msg = read_signed_data(r);
    r.expect_end();
    return msg;
}

// ---- signed-then-encrypted messages ---------------------------------------

inline Bytes encode_signed_encrypted(const SignedEncryptedData& msg) {
    codec_detail::check_point_prefix(msg.kem.ephemeral_point, "kem ephemeral point");
    Writer w;
    w.raw(ByteView{msg.recipient.id.data(), 8});
    w.raw(ByteView{msg.kem.ephemeral_point.data(), 33});
    w.raw(ByteView{msg.kem.wrapped_key.data(), 16});
    w.raw(ByteView{msg.kem.tag.data(), 16});
    w.raw(ByteView{msg.nonce.data(), 12});
    w.var16(msg.ciphertext);
    return w.take();
}

inline SignedEncryptedData decode_signed_encrypted(ByteView data) {
    Reader r(data);
    SignedEncryptedData msg;
    msg.recipient.id = r.fixed<8>("recipient id");
    msg.kem.ephemeral_point = codec_detail::read_point(r, "kem ephemeral point");
    msg.kem.wrapped_key = r.fixed<16>("kem wrapped key");
    msg.kem.tag = r.fixed<16>("kem tag");
    msg.nonce = r.fixed<12>("nonce");
    msg.ciphertext = r.var16("ciphertext");
    r.expect_end();
    return msg;
}

}  // namespace v2xcms

#endif
