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

#ifndef V2XCMS_CCM_HPP
#define V2XCMS_CCM_HPP

#include <array>
#include <cstring>

#include "v2xcms/bytes.hpp"
#include "v2xcms/errors.hpp"

namespace v2xcms {

using Nonce12 = std::array<uint8_t, 12>;

// CCM with a 12-byte nonce, 3-byte length field and a full 16-byte tag, over
// any 128-bit block cipher exposing encrypt_block. No associated data. The
// sealed form is ciphertext followed by the tag.
namespace ccm_detail {

constexpr size_t kTagLen = 16;
constexpr size_t kMaxPlaintext = (1u << 24) - 1;  // 3-byte length field

template <typename BlockCipher>
std::array<uint8_t, 16> cbc_mac(const BlockCipher& bc, const Nonce12& nonce, ByteView plaintext) {
    std::array<uint8_t, 16> block{};
    // B0: flags 0x3A = tag length (16-2)/2 in bits 5..3, length width 3-1 in
    // bits 2..0, no associated data bit.
    block[0] = 0x3A;
    std::memcpy(block.data() + 1, nonce.data(), 12);
    block[13] = static_cast<uint8_t>(plaintext.size() >> 16);
    block[14] = static_cast<uint8_t>(plaintext.size() >> 8);
    block[15] = static_cast<uint8_t>(plaintext.size());
    std::array<uint8_t, 16> mac = bc.encrypt_block(block);
    for (size_t off = 0; off < plaintext.size(); off += 16) {
        size_t n = std::min<size_t>(16, plaintext.size() - off);
        for (size_t i = 0; i < n; ++i) mac[i] ^= plaintext[off + i];
        mac = bc.encrypt_block(mac);
    }
    return mac;
}

template <typename BlockCipher>
std::array<uint8_t, 16> ctr_block(const BlockCipher& bc, const Nonce12& nonce, uint32_t counter) {
    std::array<uint8_t, 16> a{};
    a[0] = 0x02;  // flags: length width 3-1
    std::memcpy(a.data() + 1, nonce.data(), 12);
    a[13] = static_cast<uint8_t>(counter >> 16);
    a[14] = static_cast<uint8_t>(counter >> 8);
    a[15] = static_cast<uint8_t>(counter);
    return bc.encrypt_block(a);
}

}  // namespace ccm_detail

template <typename BlockCipher>
Bytes ccm_seal(const BlockCipher& bc, const Nonce12& nonce, ByteView plaintext) {
    if (plaintext.size() > ccm_detail::kMaxPlaintext) throw PayloadTooLarge(plaintext.size());
    auto mac = ccm_detail::cbc_mac(bc, nonce, plaintext);
    Bytes out(plaintext.size() + ccm_detail::kTagLen);
    for (size_t off = 0; off < plaintext.size(); off += 16) {
        auto ks = ccm_detail::ctr_block(bc, nonce, static_cast<uint32_t>(off / 16 + 1));
        size_t n = std::min<size_t>(16, plaintext.size() - off);
        for (size_t i = 0; i < n; ++i) out[off + i] = plaintext[off + i] ^ ks[i];
    }
    auto a0 = ccm_detail::ctr_block(bc, nonce, 0);
    for (size_t i = 0; i < ccm_detail::kTagLen; ++i) out[plaintext.size() + i] = mac[i] ^ a0[i];
    return out;
}

template <typename BlockCipher>
Bytes ccm_open(const BlockCipher& bc, const Nonce12& nonce, ByteView sealed) {
    if (sealed.size() < ccm_detail::kTagLen) throw Truncated("ccm tag");
    size_t ct_len = sealed.size() - ccm_detail::kTagLen;
    Bytes plain(ct_len);
    for (size_t off = 0; off < ct_len; off += 16) {
        auto ks = ccm_detail::ctr_block(bc, nonce, static_cast<uint32_t>(off / 16 + 1));
        size_t n = std::min<size_t>(16, ct_len - off);
        for (size_t i = 0; i < n; ++i) plain[off + i] = sealed[off + i] ^ ks[i];
    }
    auto mac = ccm_detail::cbc_mac(bc, nonce, plain);
    auto a0 = ccm_detail::ctr_block(bc, nonce, 0);
    uint8_t diff = 0;
    for (size_t i = 0; i < ccm_detail::kTagLen; ++i) diff |= static_cast<uint8_t>((mac[i] ^ a0[i]) ^ sealed[ct_len + i]);
    if (diff != 0) throw TagMismatch();
    return plain;
}

}  // namespace v2xcms

#endif
