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

// On-disk PKI state for the command-line tool. A state directory is fully
// self-contained: certificates as .cert blobs, private scalars as one-line
// lowercase hex .sk files, and a state.txt carrying profile, optional seed,
// and an operation counter. Every command derives its randomness from
// (seed, counter) and bumps the counter, so a given seed and command
// sequence reproduces every artifact byte for byte.

#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "v2xcms/flows.hpp"

namespace v2xcms {
namespace cli {

namespace fs = std::filesystem;

// All commands run at one fixed logical time. Wall-clock time would leak
// into validity windows and message timestamps and break reproducibility.
constexpr Time32 kFixedIssueTime = 694310400;
constexpr Time32 kFixedMessageTime = kFixedIssueTime + 3600;

struct StateMeta {
    Profile profile = Profile::scms;
    std::optional<uint64_t> seed;
    uint64_t counter = 0;
};

inline std::string lower_role_name(AuthorityState::Role r) {
    std::string s = role_name(r);
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

inline Profile parse_profile(const std::string& s) {
    if (s == "scms") return Profile::scms;
    if (s == "ccms") return Profile::ccms;
    if (s == "cscms") return Profile::cscms;
    throw Error("unknown profile: " + s);
}

inline std::string trimmed(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
    size_t i = 0;
    while (i < s.size() && s[i] == ' ') ++i;
    return s.substr(i);
}

inline std::optional<uint64_t> env_seed() {
    const char* v = std::getenv("V2XCMS_SEED");
    if (v == nullptr || *v == '\0') return std::nullopt;
    char* end = nullptr;
    unsigned long long parsed = std::strtoull(v, &end, 10);
    if (end == nullptr || *end != '\0') throw Error(std::string("V2XCMS_SEED is not a number: ") + v);
    return uint64_t(parsed);
}

// Seeded commands draw from a DRBG keyed by the seed and the per-directory
// operation counter; unseeded ones fall back to the system generator.
inline std::unique_ptr<RandomSource> command_rng(const std::optional<uint64_t>& seed, uint64_t counter) {
    if (!seed) return std::make_unique<SystemRandom>();
    std::array<uint8_t, 16> material;
    for (int i = 0; i < 8; ++i) material[size_t(i)] = static_cast<uint8_t>(*seed >> (56 - 8 * i));
    for (int i = 0; i < 8; ++i) material[size_t(8 + i)] = static_cast<uint8_t>(counter >> (56 - 8 * i));
    return std::make_unique<HashDrbg>(ByteView{material.data(), material.size()});
}

// ---- scalar and point files ------------------------------------------------

inline void write_scalar_file(const fs::path& path, const U256& d) {
    write_text_file(path.string(), d.to_hex() + "\n");
}

inline U256 read_scalar_file(const fs::path& path) {
    return U256::from_hex(trimmed(read_text_file(path.string())));
}

inline void write_point_file(const fs::path& path, Profile profile, const AffinePoint& p) {
    auto compressed = CryptoSuite::get(profile).curve().compress(p);
    write_text_file(path.string(), hex_encode(ByteView{compressed.data(), compressed.size()}) + "\n");
}

inline AffinePoint read_point_file(const fs::path& path, Profile profile) {
    auto bytes = hex_decode_fixed<33>(trimmed(read_text_file(path.string())));
    return CryptoSuite::get(profile).curve().decompress(bytes);
}

// ---- state.txt -------------------------------------------------------------

inline void save_meta(const fs::path& dir, const StateMeta& meta) {
    std::string text = std::string("profile ") + profile_name(meta.profile) + "\n";
    if (meta.seed) text += "seed " + std::to_string(*meta.seed) + "\n";
    text += "counter " + std::to_string(meta.counter) + "\n";
    write_text_file((dir / "state.txt").string(), text);
}

inline StateMeta load_meta(const fs::path& dir) {
    fs::path file = dir / "state.txt";
    if (!fs::exists(file)) throw MissingPkiState("no state.txt in " + dir.string() + "; run init first");
    StateMeta meta;
    std::istringstream in(read_text_file(file.string()));
    std::string key, value;
    while (in >> key >> value) {
        if (key == "profile") meta.profile = parse_profile(value);
        else if (key == "seed") meta.seed = std::stoull(value);
        else if (key == "counter") meta.counter = std::stoull(value);
        else throw Error("unknown state.txt entry: " + key);
    }
    return meta;
}

// ---- domain ----------------------------------------------------------------

inline void save_domain(const fs::path& dir, const Domain& d) {
    write_file((dir / "root.cert").string(), encode_certificate(d.root));
    write_scalar_file(dir / "root.sk", d.root_key.d);
    for (const auto& a : d.authorities) {
        std::string base = lower_role_name(a.role);
        write_file((dir / (base + ".cert")).string(), encode_certificate(a.certificate));
        write_scalar_file(dir / (base + ".sk"), a.keypair.d);
    }
}

inline Domain load_domain(const fs::path& dir, Profile profile) {
    const auto& suite = CryptoSuite::get(profile);
    Domain d;
    d.profile = profile;
    d.root = decode_certificate(read_file((dir / "root.cert").string()));
    d.root_key = suite.keypair_from_scalar(read_scalar_file(dir / "root.sk"));

    std::vector<std::pair<AuthorityState::Role, std::pair<KeyPair, Certificate>>> loaded;
    for (auto role : domain_roles(profile)) {
        std::string base = lower_role_name(role);
        KeyPair key = suite.keypair_from_scalar(read_scalar_file(dir / (base + ".sk")));
        Certificate cert = decode_certificate(read_file((dir / (base + ".cert")).string()));
        loaded.emplace_back(role, std::make_pair(key, std::move(cert)));
    }
    for (auto& [role, kc] : loaded) {
        TrustStore store(profile, d.root, kFixedIssueTime);
        for (auto& [other_role, other_kc] : loaded) store.add_trusted(other_kc.second, kFixedIssueTime);
        d.authorities.push_back({role, profile, role_name(role), kc.first, kc.second, std::move(store),
                                 {}, {}, {}, {}});
    }

    fs::path registry = dir / "registry.txt";
    if (fs::exists(registry)) {
        AuthorityState& enroller = d.authority(enrollment_authority_role(profile));
        std::istringstream in(read_text_file(registry.string()));
        std::string line;
        while (std::getline(in, line)) {
            line = trimmed(line);
            if (!line.empty()) enroller.canonical_registry.insert(hex_decode_fixed<33>(line));
        }
    }
    fs::path subscribers = dir / "subscribers.txt";
    if (profile == Profile::cscms && fs::exists(subscribers)) {
        AuthorityState& as_ = d.authority(AuthorityState::Role::GBA_AS);
        std::istringstream in(read_text_file(subscribers.string()));
        std::string name, hex;
        while (in >> name >> hex) as_.subscriber_secrets[name] = hex_decode_fixed<16>(hex);
    }
    return d;
}

inline void append_line(const fs::path& file, const std::string& line) {
    std::string text = fs::exists(file) ? read_text_file(file.string()) : std::string();
    write_text_file(file.string(), text + line + "\n");
}

// ---- end entities ----------------------------------------------------------

inline fs::path ee_dir(const fs::path& dir, const std::string& name) { return dir / "ee" / name; }

inline void save_end_entity(const fs::path& dir, const EndEntityState& ee) {
    fs::path base = ee_dir(dir, ee.name);
    fs::create_directories(base);
    write_scalar_file(base / "canonical.sk", ee.canonical.d);
    write_point_file(base / "canonical.pk", ee.profile, ee.canonical.pub);
    if (ee.enrollment_cert) {
        write_file((base / "enrollment.cert").string(), encode_certificate(*ee.enrollment_cert));
        write_scalar_file(base / "enrollment.sk", ee.enrollment_private);
    }
    if (ee.subscriber_secret) {
        write_text_file((base / "subscriber.key").string(),
                        hex_encode(ByteView{ee.subscriber_secret->data(), ee.subscriber_secret->size()}) + "\n");
    }
    for (size_t i = 0; i < ee.authorization_credentials.size(); ++i) {
        char stem[16];
        std::snprintf(stem, sizeof(stem), "cred_%03zu", i);
        write_file((base / (std::string(stem) + ".cert")).string(),
                   encode_certificate(ee.authorization_credentials[i].first));
        write_scalar_file(base / (std::string(stem) + ".sk"), ee.authorization_credentials[i].second);
    }
}

inline EndEntityState load_end_entity(const fs::path& dir, const Domain& domain, const std::string& name) {
    fs::path base = ee_dir(dir, name);
    if (!fs::exists(base / "canonical.sk")) {
        throw MissingPkiState("no end entity named " + name + "; run bootstrap first");
    }
    const auto& suite = CryptoSuite::get(domain.profile);
    TrustStore store(domain.profile, domain.root, kFixedIssueTime);
    for (const auto& a : domain.authorities) store.add_trusted(a.certificate, kFixedIssueTime);

    EndEntityState ee{domain.profile, name, suite.keypair_from_scalar(read_scalar_file(base / "canonical.sk")),
                      KeyPair{}, std::nullopt, U256{}, std::nullopt, {}, std::nullopt, std::move(store)};
    if (!(ee.canonical.pub == read_point_file(base / "canonical.pk", domain.profile))) {
        throw MissingPkiState("canonical.pk does not match canonical.sk for " + name);
    }
    if (fs::exists(base / "enrollment.cert")) {
        ee.enrollment_cert = decode_certificate(read_file((base / "enrollment.cert").string()));
        ee.enrollment_private = read_scalar_file(base / "enrollment.sk");
    }
    if (fs::exists(base / "subscriber.key")) {
        ee.subscriber_secret = hex_decode_fixed<16>(trimmed(read_text_file((base / "subscriber.key").string())));
    }
    for (size_t i = 0;; ++i) {
        char stem[16];
        std::snprintf(stem, sizeof(stem), "cred_%03zu", i);
        fs::path cert_file = base / (std::string(stem) + ".cert");
        if (!fs::exists(cert_file)) break;
        ee.authorization_credentials.emplace_back(
            decode_certificate(read_file(cert_file.string())),
            read_scalar_file(base / (std::string(stem) + ".sk")));
    }
    return ee;
}

}  // namespace cli
}  // namespace v2xcms
