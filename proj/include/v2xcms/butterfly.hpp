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

#ifndef V2XCMS_BUTTERFLY_HPP
#define V2XCMS_BUTTERFLY_HPP

#include "v2xcms/crypto_suite.hpp"

namespace v2xcms {

// Caterpillar to cocoon key expansion. A vehicle keeps one caterpillar pair
// (a, A = a·G) per batch and shares (A, expansion_key) with the registration
// side, which can then compute every per-index cocoon public key without ever
// holding a. The private counterpart b_i stays derivable only where a lives.

struct CaterpillarKey {
    KeyPair keypair;
    SymKey expansion_key{};  // fresh per batch, never reused
};

inline CaterpillarKey make_caterpillar(const CryptoSuite& suite, RandomSource& rng) {
    CaterpillarKey cat;
    cat.keypair = suite.generate_keypair(rng);
    cat.expansion_key = rng.take16();
    return cat;
}

struct CocoonPublic {
    uint32_t index = 0;
    AffinePoint point;
};

// Expansion function f(i) = int(E_k(block(i))) mod n where E is the profile
// block cipher and block(i) is the index as one big-endian 16-byte block.
// The cipher output is 128 bits, so the reduction never wraps and the result
// is zero only for an all-zero cipher output, which remaps to 1.
inline U256 prf_f(const CryptoSuite& suite, const SymKey& expansion_key, uint32_t index) {
    std::array<uint8_t, 16> block{};
    block[12] = static_cast<uint8_t>(index >> 24);
    block[13] = static_cast<uint8_t>(index >> 16);
    block[14] = static_cast<uint8_t>(index >> 8);
    block[15] = static_cast<uint8_t>(index);
    std::array<uint8_t, 16> out = suite.cipher_block(expansion_key, block);

    std::array<uint8_t, 32> wide{};
    std::copy(out.begin(), out.end(), wide.begin() + 16);
    U256 f = suite.curve().scalar_from_bytes(wide);
    if (f.is_zero()) return U256::one();
    return f;
}

// B_i = A + f(i)·G, from public inputs only.
inline CocoonPublic expand_cocoon_public(const CryptoSuite& suite, const AffinePoint& caterpillar_public,
                                         const SymKey& expansion_key, uint32_t index) {
    const Curve& curve = suite.curve();
    if (caterpillar_public.inf || !curve.on_curve(caterpillar_public))
        throw MalformedPoint("caterpillar public key");
    U256 f = prf_f(suite, expansion_key, index);
    return {index, curve.add(caterpillar_public, curve.base_mul(f))};
}

// b_i = (a + f(i)) mod n, satisfying b_i·G = B_i.
inline U256 expand_cocoon_private(const CryptoSuite& suite, const U256& caterpillar_private,
                                  const SymKey& expansion_key, uint32_t index) {
    const Curve& curve = suite.curve();
    if (caterpillar_private.is_zero() || u256_cmp(caterpillar_private, curve.n()) >= 0)
        throw OutOfRange("caterpillar private scalar");
    return curve.scalar_add(caterpillar_private, prf_f(suite, expansion_key, index));
}

// How many cocoons one authorization batch expands to by default. Kept small
// enough that a full end-to-end flow stays fast in tests.
constexpr uint32_t kDefaultBatchSize = 20;

inline std::vector<CocoonPublic> expand_cocoon_batch(const CryptoSuite& suite,
                                                     const AffinePoint& caterpillar_public,
                                                     const SymKey& expansion_key, uint32_t count) {
    std::vector<CocoonPublic> out;
    out.reserve(count);
    for (uint32_t i = 0; i < count; ++i)
        out.push_back(expand_cocoon_public(suite, caterpillar_public, expansion_key, i));
    return out;
}

}  // namespace v2xcms

#endif
