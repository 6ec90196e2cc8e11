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

#ifndef V2XCMS_SM3_HPP
#define V2XCMS_SM3_HPP

#include <array>
#include <cstdint>
#include <cstring>

#include "v2xcms/bytes.hpp"
#include "v2xcms/sha256.hpp"  // Digest32

namespace v2xcms {

// GB/T 32905 hash. Same block/padding scheme as SHA-256, different
// compression function.
class Sm3 {
  public:
    Sm3() { reset(); }

    void reset() {
        static constexpr uint32_t init[8] = {0x7380166f, 0x4914b2b9, 0x172442d7, 0xda8a0600,
                                             0xa96f30bc, 0x163138aa, 0xe38dee4d, 0xb0fb0e4e};
        std::memcpy(state_, init, sizeof(state_));
        total_ = 0;
        buflen_ = 0;
    }

    void update(ByteView data) {
        total_ += data.size();
        size_t off = 0;
        if (buflen_ > 0) {
            size_t take = std::min<size_t>(64 - buflen_, data.size());
            std::memcpy(buf_ + buflen_, data.data(), take);
            buflen_ += take;
            off = take;
            if (buflen_ == 64) {
                compress(buf_);
                buflen_ = 0;
            }
        }
        while (off + 64 <= data.size()) {
            compress(data.data() + off);
            off += 64;
        }
        if (off < data.size()) {
            std::memcpy(buf_, data.data() + off, data.size() - off);
            buflen_ = data.size() - off;
        }
    }

    Digest32 finish() {
        uint64_t bitlen = total_ * 8;
        uint8_t pad[72];
        pad[0] = 0x80;
        size_t padlen = (buflen_ < 56) ? (56 - buflen_) : (120 - buflen_);
        std::memset(pad + 1, 0, padlen - 1);
        for (int i = 0; i < 8; ++i) pad[padlen + i] = static_cast<uint8_t>(bitlen >> (56 - 8 * i));
        update({pad, padlen + 8});
        Digest32 out;
        for (int i = 0; i < 8; ++i) {
            out[size_t(4 * i)] = static_cast<uint8_t>(state_[i] >> 24);
            out[size_t(4 * i + 1)] = static_cast<uint8_t>(state_[i] >> 16);
            out[size_t(4 * i + 2)] = static_cast<uint8_t>(state_[i] >> 8);
            out[size_t(4 * i + 3)] = static_cast<uint8_t>(state_[i]);
        }
        return out;
    }

  private:
    static uint32_t rotl(uint32_t x, int n) { return x << n | x >> (32 - n); }
    static uint32_t p0(uint32_t x) { return x ^ rotl(x, 9) ^ rotl(x, 17); }
    static uint32_t p1(uint32_t x) { return x ^ rotl(x, 15) ^ rotl(x, 23); }

    void compress(const uint8_t* block) {
        uint32_t w[68];
        for (int i = 0; i < 16; ++i) {
            w[i] = static_cast<uint32_t>(block[4 * i]) << 24 | static_cast<uint32_t>(block[4 * i + 1]) << 16 |
                   static_cast<uint32_t>(block[4 * i + 2]) << 8 | block[4 * i + 3];
        }
        for (int i = 16; i < 68; ++i) {
            w[i] = p1(w[i - 16] ^ w[i - 9] ^ rotl(w[i - 3], 15)) ^ rotl(w[i - 13], 7) ^ w[i - 6];
        }
        uint32_t a = state_[0], b = state_[1], c = state_[2], d = state_[3];
        uint32_t e = state_[4], f = state_[5], g = state_[6], h = state_[7];
        for (int i = 0; i < 64; ++i) {
            uint32_t t = (i < 16) ? 0x79cc4519u : 0x7a879d8au;
            uint32_t ss1 = rotl(rotl(a, 12) + e + rotl(t, i % 32), 7);
            uint32_t ss2 = ss1 ^ rotl(a, 12);
            uint32_t ff = (i < 16) ? (a ^ b ^ c) : ((a & b) | (a & c) | (b & c));
            uint32_t gg = (i < 16) ? (e ^ f ^ g) : ((e & f) | (~e & g));
            uint32_t tt1 = ff + d + ss2 + (w[i] ^ w[i + 4]);
            uint32_t tt2 = gg + h + ss1 + w[i];
            d = c;
            c = rotl(b, 9);
            b = a;
            a = tt1;
            h = g;
            g = rotl(f, 19);
            f = e;
            e = p0(tt2);
        }
        state_[0] ^= a;
        state_[1] ^= b;
        state_[2] ^= c;
        state_[3] ^= d;
        state_[4] ^= e;
        state_[5] ^= f;
        state_[6] ^= g;
        state_[7] ^= h;
    }

    uint32_t state_[8];
    uint64_t total_;
    uint8_t buf_[64];
    size_t buflen_;
};

inline Digest32 sm3(ByteView data) {
    Sm3 h;
    h.update(data);
    return h.finish();
}

}  // namespace v2xcms

#endif
