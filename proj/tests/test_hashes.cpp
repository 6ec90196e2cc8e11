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

#include <string>

#include "v2xcms/sha256.hpp"
#include "v2xcms/sm3.hpp"

using namespace v2xcms;

static std::string sha256_hex(std::string_view msg) { return hex_encode(sha256(as_bytes(msg))); }
static std::string sm3_hex(std::string_view msg) { return hex_encode(sm3(as_bytes(msg))); }

TEST_CASE("sha256 FIPS 180-4 vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("sha256 million a") {
    Sha256 h;
    std::string chunk(1000, 'a');
    for (int i = 0; i < 1000; ++i) h.update(as_bytes(chunk));
    CHECK(hex_encode(h.finish()) == "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("sha256 streaming equals one shot across split points") {
    std::string msg;
    for (int i = 0; i < 300; ++i) msg.push_back(static_cast<char>(i * 7 + 3));
    auto whole = sha256(as_bytes(msg));
    for (size_t split : {size_t(0), size_t(1), size_t(55), size_t(56), size_t(63), size_t(64), size_t(65), size_t(200)}) {
        Sha256 h;
        h.update(as_bytes(std::string_view(msg).substr(0, split)));
        h.update(as_bytes(std::string_view(msg).substr(split)));
        CHECK(h.finish() == whole);
    }
}

TEST_CASE("sm3 GB/T 32905 vectors") {
    CHECK(sm3_hex("abc") == "66c7f0f462eeedd9d1f2d46bdc10e4e24167c4875cf2f7a2297da02b8f4ba8e0");
    // 512-bit message from the standard: "abcd" sixteen times.
    std::string abcd16;
    for (int i = 0; i < 16; ++i) abcd16 += "abcd";
    CHECK(sm3_hex(abcd16) == "debe9ff92275b8a138604889c18e5a4d6fdb70e5387e5765293dcba39c0c5732");
}

TEST_CASE("sm3 streaming equals one shot") {
    std::string msg(517, '\x5a');
    auto whole = sm3(as_bytes(msg));
    Sm3 h;
    h.update(as_bytes(std::string_view(msg).substr(0, 64)));
    h.update(as_bytes(std::string_view(msg).substr(64, 1)));
    h.update(as_bytes(std::string_view(msg).substr(65)));
    CHECK(h.finish() == whole);
}
