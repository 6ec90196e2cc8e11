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

#ifndef V2XCMS_RNG_HPP
#define V2XCMS_RNG_HPP

#include <array>
#include <cstring>
#include <random>

#include "v2xcms/ec.hpp"
#include "v2xcms/sha256.hpp"

namespace v2xcms {

// Injectable randomness. Each thread owns its source; implementations need
// no internal locking.
class RandomSource {
  public:
    virtual ~RandomSource() = default;
    virtual void fill(uint8_t* out, size_t len) = 0;

    std::array<uint8_t, 16> take16() {
        std::array<uint8_t, 16> b;
        fill(b.data(), b.size());
        return b;
    }

    std::array<uint8_t, 32> take32() {
        std::array<uint8_t, 32> b;
        fill(b.data(), b.size());
        return b;
    }
};

class SystemRandom final : public RandomSource {
  public:
    void fill(uint8_t* out, size_t len) override {
        size_t i = 0;
        while (i < len) {
            unsigned int r = dev_();
            size_t n = std::min(sizeof(r), len - i);
            std::memcpy(out + i, &r, n);
            i += n;
        }
    }

  private:
    std::random_device dev_;
};

// Deterministic generator for seeded runs: output block i is
// SHA-256(seed32 ‖ big-endian64(i)). The seed is itself a SHA-256 digest so
// arbitrary-length seed material can be supplied.
class HashDrbg final : public RandomSource {
  public:
    explicit HashDrbg(ByteView seed_material) : seed_(sha256(seed_material)) {}

    static HashDrbg from_u64(uint64_t seed) {
        std::array<uint8_t, 8> b;
        for (int i = 0; i < 8; ++i) b[size_t(i)] = static_cast<uint8_t>(seed >> (56 - 8 * i));
        return HashDrbg(ByteView{b.data(), b.size()});
    }

    void fill(uint8_t* out, size_t len) override {
        size_t i = 0;
        while (i < len) {
            if (avail_ == 0) refill();
            size_t n = std::min(avail_, len - i);
            std::memcpy(out + i, buf_.data() + (32 - avail_), n);
            avail_ -= n;
            i += n;
        }
    }

  private:
    void refill() {
        Sha256 h;
        h.update(ByteView{seed_.data(), seed_.size()});
        std::array<uint8_t, 8> ctr;
        for (int i = 0; i < 8; ++i) ctr[size_t(i)] = static_cast<uint8_t>(counter_ >> (56 - 8 * i));
        h.update(ByteView{ctr.data(), ctr.size()});
        buf_ = h.finish();
        ++counter_;
        avail_ = 32;
    }

    Digest32 seed_;
    uint64_t counter_ = 0;
    Digest32 buf_{};
    size_t avail_ = 0;
};

// Uniform scalar in [1, n-1] by rejection sampling full 256-bit draws.
inline U256 random_scalar(const Curve& curve, RandomSource& rng) {
    for (;;) {
        U256 k = U256::from_be_bytes(rng.take32());
        if (!k.is_zero() && u256_cmp(k, curve.n()) < 0) return k;
    }
}

inline std::array<uint8_t, 12> random_nonce(RandomSource& rng) {
    std::array<uint8_t, 12> n;
    rng.fill(n.data(), n.size());
    return n;
}

}  // namespace v2xcms

#endif
