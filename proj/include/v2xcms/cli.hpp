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

// Command-line front end: PKI lifecycle commands over a state directory,
// the benchmark harness, and the golden-fixture generator. Exit codes:
// 0 success, 1 operational or verification failure, 2 usage error.

#pragma once

#include <initializer_list>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "v2xcms/bench.hpp"
#include "v2xcms/state_dir.hpp"

namespace v2xcms {
namespace cli {

class UsageError : public Error {
  public:
    explicit UsageError(const std::string& what) : Error(what) {}
};

inline void print_usage(std::ostream& err) {
    err << "usage: v2xcms <command> [flags]\n"
        << "  init      --profile {scms|ccms|cscms} --dir D [--seed N]\n"
        << "  bootstrap --dir D --name NAME\n"
        << "  enroll    --dir D --name NAME [--transcript F]\n"
        << "  authorize --dir D --name NAME [--batch N] [--transcript F]\n"
        << "  sign      --dir D --name NAME --payload FILE --out M.msg\n"
        << "            [--signer cert|digest] [--hash-id profile|sha256]\n"
        << "  verify    --dir D --msg M.msg\n"
        << "  bench crypto [--iters N] [--format json|csv] [--out F]\n"
        << "  bench e2e [--profile all|scms|ccms|cscms] [--iters N] [--format json|csv] [--out F]\n"
        << "  fixtures  --regen [--dir D]\n"
        << "V2XCMS_SEED in the environment forces deterministic randomness.\n";
}

namespace cli_detail {

struct FlagSpec {
    const char* name;
    bool takes_value;
};

inline std::map<std::string, std::string> parse_flags(const std::vector<std::string>& args, size_t start,
                                                      std::initializer_list<FlagSpec> specs) {
    std::map<std::string, std::string> out;
    for (size_t i = start; i < args.size(); ++i) {
        const FlagSpec* spec = nullptr;
        for (const auto& s : specs) {
            if (args[i] == s.name) spec = &s;
        }
        if (spec == nullptr) throw UsageError("unknown flag: " + args[i]);
        if (!spec->takes_value) {
            out[args[i]] = "1";
            continue;
        }
        if (i + 1 >= args.size()) throw UsageError(args[i] + " needs a value");
        out[args[i]] = args[i + 1];
        ++i;
    }
    return out;
}

inline const std::string& require(const std::map<std::string, std::string>& flags, const char* name) {
    auto it = flags.find(name);
    if (it == flags.end()) throw UsageError(std::string(name) + " is required");
    return it->second;
}

inline std::string get_or(const std::map<std::string, std::string>& flags, const char* name,
                          const std::string& fallback) {
    auto it = flags.find(name);
    return it == flags.end() ? fallback : it->second;
}

inline uint64_t parse_u64(const char* flag, const std::string& value) {
    char* end = nullptr;
    unsigned long long parsed = std::strtoull(value.c_str(), &end, 10);
    if (value.empty() || end == nullptr || *end != '\0') {
        throw UsageError(std::string(flag) + " is not a number: " + value);
    }
    return uint64_t(parsed);
}

inline Profile parse_profile_flag(const std::string& value) {
    try {
        return parse_profile(value);
    } catch (const Error&) {
        throw UsageError("--profile must be scms, ccms, or cscms, not " + value);
    }
}

inline void write_transcript(const std::map<std::string, std::string>& flags, const MessageBus& bus) {
    auto it = flags.find("--transcript");
    if (it == flags.end()) return;
    std::string text;
    for (const auto& line : bus.transcript_lines()) text += line + "\n";
    write_text_file(it->second, text);
}

// A state-dir command rolls its DRBG off the stored seed and the operation
// counter, then bumps the counter so the next command draws fresh bytes.
struct CommandContext {
    fs::path dir;
    StateMeta meta;
    Domain domain;
    std::unique_ptr<RandomSource> rng;

    static CommandContext open(const std::string& dir_flag) {
        CommandContext ctx;
        ctx.dir = dir_flag;
        ctx.meta = load_meta(ctx.dir);
        ctx.domain = load_domain(ctx.dir, ctx.meta.profile);
        std::optional<uint64_t> seed = ctx.meta.seed ? ctx.meta.seed : env_seed();
        ctx.rng = command_rng(seed, ctx.meta.counter);
        return ctx;
    }

    void commit() {
        meta.counter += 1;
        save_meta(dir, meta);
    }
};

inline const char* key_path_name(SignerKeyPath path) {
    switch (path) {
        case SignerKeyPath::ContainedKey: return "contained-key";
        case SignerKeyPath::Reconstructed: return "reconstructed";
        case SignerKeyPath::None: break;
    }
    return "none";
}

inline Bytes pattern_payload(size_t size) {
    Bytes payload(size);
    for (size_t i = 0; i < size; ++i) payload[i] = static_cast<uint8_t>(i * 33 + 7);
    return payload;
}

// ---- lifecycle commands ----------------------------------------------------

inline int cmd_init(const std::vector<std::string>& args, std::ostream& out) {
    auto flags = parse_flags(args, 1, {{"--profile", true}, {"--dir", true}, {"--seed", true}});
    Profile profile = parse_profile_flag(require(flags, "--profile"));
    fs::path dir = require(flags, "--dir");
    if (fs::exists(dir / "state.txt")) {
        throw Error(dir.string() + " is already initialized; delete it to start over");
    }

    StateMeta meta;
    meta.profile = profile;
    if (auto it = flags.find("--seed"); it != flags.end()) meta.seed = parse_u64("--seed", it->second);
    else meta.seed = env_seed();

    auto rng = command_rng(meta.seed, meta.counter);
    Domain domain = make_domain(profile, kFixedIssueTime, *rng);

    fs::create_directories(dir / "ee");
    save_domain(dir, domain);
    write_text_file((dir / "registry.txt").string(), "");
    if (profile == Profile::cscms) write_text_file((dir / "subscribers.txt").string(), "");
    meta.counter = 1;
    save_meta(dir, meta);

    out << "initialized " << profile_name(profile) << " domain in " << dir.string() << "\n";
    out << "  root " << hashed_id8(profile, domain.root).hex() << "\n";
    for (const auto& a : domain.authorities) {
        out << "  " << a.actor_name << " " << hashed_id8(profile, a.certificate).hex() << "\n";
    }
    return 0;
}

inline int cmd_bootstrap(const std::vector<std::string>& args, std::ostream& out) {
    auto flags = parse_flags(args, 1, {{"--dir", true}, {"--name", true}});
    auto ctx = CommandContext::open(require(flags, "--dir"));
    const std::string& name = require(flags, "--name");
    if (fs::exists(ee_dir(ctx.dir, name))) throw Error("end entity " + name + " already exists");

    EndEntityState ee = make_end_entity(ctx.domain, name, kFixedIssueTime, *ctx.rng);
    const auto& suite = CryptoSuite::get(ee.profile);
    auto canonical = suite.curve().compress(ee.canonical.pub);

    register_canonical(ctx.domain.authority(enrollment_authority_role(ee.profile)), ee);
    append_line(ctx.dir / "registry.txt", hex_encode(ByteView{canonical.data(), canonical.size()}));
    if (ee.profile == Profile::cscms) {
        provision_subscriber(ctx.domain.authority(AuthorityState::Role::GBA_AS), ee, *ctx.rng);
        append_line(ctx.dir / "subscribers.txt",
                    name + " " + hex_encode(ByteView{ee.subscriber_secret->data(), 16}));
    }
    save_end_entity(ctx.dir, ee);
    ctx.commit();
    out << "bootstrapped " << name << "; canonical key " << raw_key_id(ee.profile, canonical).hex() << "\n";
    return 0;
}

inline int cmd_enroll(const std::vector<std::string>& args, std::ostream& out) {
    auto flags = parse_flags(args, 1, {{"--dir", true}, {"--name", true}, {"--transcript", true}});
    auto ctx = CommandContext::open(require(flags, "--dir"));
    EndEntityState ee = load_end_entity(ctx.dir, ctx.domain, require(flags, "--name"));
    if (ee.enrollment_cert) throw Error(ee.name + " is already enrolled");

    ee.enrollment_key = CryptoSuite::get(ee.profile).generate_keypair(*ctx.rng);
    MessageBus bus;
    using Role = AuthorityState::Role;
    switch (ee.profile) {
        case Profile::scms:
            scms_enroll(ee, ctx.domain.authority(Role::ECA), bus, *ctx.rng, kFixedIssueTime);
            break;
        case Profile::ccms:
            ccms_enrol(ee, ctx.domain.authority(Role::EA), bus, *ctx.rng, kFixedIssueTime);
            break;
        case Profile::cscms:
            cscms_enroll(ee, ctx.domain.authority(Role::GBA_AS), ctx.domain.authority(Role::ECA), bus,
                         *ctx.rng, kFixedIssueTime);
            break;
    }
    write_transcript(flags, bus);
    save_end_entity(ctx.dir, ee);
    ctx.commit();
    out << "enrolled " << ee.name << "; certificate " << hashed_id8(ee.profile, *ee.enrollment_cert).hex()
        << " (" << bus.size() << " messages)\n";
    return 0;
}

inline int cmd_authorize(const std::vector<std::string>& args, std::ostream& out) {
    auto flags = parse_flags(args, 1,
                             {{"--dir", true}, {"--name", true}, {"--batch", true}, {"--transcript", true}});
    auto ctx = CommandContext::open(require(flags, "--dir"));
    EndEntityState ee = load_end_entity(ctx.dir, ctx.domain, require(flags, "--name"));
    if (!ee.enrollment_cert) throw Error(ee.name + " is not enrolled yet");

    uint32_t batch = ee.profile == Profile::ccms ? 1 : kDefaultBatchSize;
    if (auto it = flags.find("--batch"); it != flags.end()) {
        batch = uint32_t(parse_u64("--batch", it->second));
    }
    if (ee.profile == Profile::ccms && batch != 1) {
        throw UsageError("the ccms flow issues exactly one ticket; --batch must be 1");
    }
    if (batch < 1 || batch > 100) throw UsageError("--batch must be between 1 and 100");

    size_t before = ee.authorization_credentials.size();
    MessageBus bus;
    using Role = AuthorityState::Role;
    switch (ee.profile) {
        case Profile::scms:
            scms_authorize(ee, ctx.domain.authority(Role::RA), ctx.domain.authority(Role::ACA), batch, bus,
                           *ctx.rng, kFixedIssueTime);
            break;
        case Profile::ccms:
            ccms_authorize(ee, ctx.domain.authority(Role::AA), ctx.domain.authority(Role::EA), bus, *ctx.rng,
                           kFixedIssueTime);
            break;
        case Profile::cscms:
            cscms_authorize(ee, ctx.domain.authority(Role::GBA_AS), ctx.domain.authority(Role::PRA),
                            ctx.domain.authority(Role::ACA), batch, bus, *ctx.rng, kFixedIssueTime);
            break;
    }
    write_transcript(flags, bus);
    save_end_entity(ctx.dir, ee);
    ctx.commit();
    size_t issued = ee.authorization_credentials.size() - before;
    out << "issued " << issued << (issued == 1 ? " credential to " : " credentials to ") << ee.name << " ("
        << bus.size() << " messages)\n";
    return 0;
}

inline int cmd_sign(const std::vector<std::string>& args, std::ostream& out) {
    auto flags = parse_flags(args, 1,
                             {{"--dir", true},
                              {"--name", true},
                              {"--payload", true},
                              {"--out", true},
                              {"--signer", true},
                              {"--hash-id", true}});
    auto ctx = CommandContext::open(require(flags, "--dir"));
    EndEntityState ee = load_end_entity(ctx.dir, ctx.domain, require(flags, "--name"));
    if (ee.authorization_credentials.empty()) {
        throw Error(ee.name + " has no authorization credential; run authorize first");
    }

    std::string signer_flag = get_or(flags, "--signer", "cert");
    SignerKind signer_kind;
    if (signer_flag == "cert") signer_kind = SignerKind::Certificate;
    else if (signer_flag == "digest") signer_kind = SignerKind::Digest;
    else throw UsageError("--signer must be cert or digest, not " + signer_flag);

    std::string hash_flag = get_or(flags, "--hash-id", "profile");
    std::optional<HashAlgo> declared;
    if (hash_flag == "sha256") declared = HashAlgo::Sha256;
    else if (hash_flag != "profile") throw UsageError("--hash-id must be profile or sha256, not " + hash_flag);

    Bytes payload = read_file(require(flags, "--payload"));
    const auto& [cert, priv] = ee.authorization_credentials.front();
    SignedData msg = sign_data(ee.profile, payload, kAidBsm, cert, priv, signer_kind,
                               Time64(kFixedMessageTime) * 1000000, *ctx.rng, declared);
    Bytes wire = encode_signed_data(msg);
    const std::string& out_file = require(flags, "--out");
    write_file(out_file, wire);
    ctx.commit();
    out << "wrote " << out_file << " (" << wire.size() << " bytes), signer "
        << hashed_id8(ee.profile, cert).hex() << "\n";
    return 0;
}

inline int cmd_verify(const std::vector<std::string>& args, std::ostream& out) {
    auto flags = parse_flags(args, 1, {{"--dir", true}, {"--msg", true}});
    fs::path dir = require(flags, "--dir");
    StateMeta meta = load_meta(dir);
    Domain domain = load_domain(dir, meta.profile);

    // The verifier's store holds the domain certificates plus every locally
    // known end-entity certificate, so digest-referenced signers resolve.
    TrustStore store(meta.profile, domain.root, kFixedIssueTime);
    for (const auto& a : domain.authorities) store.add_trusted(a.certificate, kFixedIssueTime);
    if (fs::exists(dir / "ee")) {
        std::vector<fs::path> cert_files;
        for (const auto& entry : fs::recursive_directory_iterator(dir / "ee")) {
            if (entry.is_regular_file() && entry.path().extension() == ".cert") {
                cert_files.push_back(entry.path());
            }
        }
        std::sort(cert_files.begin(), cert_files.end());
        for (const auto& f : cert_files) {
            store.add_trusted(decode_certificate(read_file(f.string())), kFixedIssueTime);
        }
    }

    SignedData msg = decode_signed_data(read_file(require(flags, "--msg")));
    VerifyOutcome outcome =
        verify_signed_data(meta.profile, msg, store, Time32(msg.generation_time / 1000000));
    if (outcome.accepted()) {
        out << "OK " << key_path_name(outcome.key_path) << "\n";
        return 0;
    }
    out << "FAIL " << verify_result_name(outcome.result)
        << (outcome.detail.empty() ? "" : " " + outcome.detail) << "\n";
    return 1;
}

// ---- benchmarks ------------------------------------------------------------

inline void emit_bench_output(const std::vector<BenchReport>& reports,
                              const std::map<std::string, std::string>& flags, std::ostream& out,
                              std::ostream& err) {
    std::string format = get_or(flags, "--format", "csv");
    std::string serialized;
    if (format == "csv") serialized = emit_csv(reports);
    else if (format == "json") serialized = emit_json(reports);
    else throw UsageError("--format must be json or csv, not " + format);

    if (auto it = flags.find("--out"); it != flags.end()) {
        write_text_file(it->second, serialized);
        out << "wrote " << reports.size() << " reports to " << it->second << "\n";
    } else {
        out << serialized;
    }
    // Verdicts go to stderr so stdout stays machine-readable.
    err << ordering_lines(ordering_claims(reports));
}

inline int cmd_bench_crypto(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto flags = parse_flags(args, 2, {{"--iters", true}, {"--format", true}, {"--out", true}});
    size_t iters = size_t(parse_u64("--iters", get_or(flags, "--iters", "3000")));
    if (iters < kMinBenchIterations) throw UsageError("--iters must be at least 30");
    size_t warmup = std::min<size_t>(kDefaultWarmup, iters);

    HashDrbg rng = HashDrbg::from_u64(env_seed().value_or(0x76327863));
    BenchClock clock = steady_bench_clock();
    const BenchTarget targets[] = {BenchTarget::Keygen,     BenchTarget::Sign,
                                   BenchTarget::Verify,     BenchTarget::KemKeygen,
                                   BenchTarget::KemEncap,   BenchTarget::KemDecap,
                                   BenchTarget::Hash,       BenchTarget::SymEncrypt,
                                   BenchTarget::SymDecrypt};
    std::vector<BenchReport> reports;
    for (Profile p : {Profile::scms, Profile::ccms, Profile::cscms}) {
        for (BenchTarget t : targets) {
            reports.push_back(run_micro_bench(micro_spec(t, p, iters, warmup), rng, clock));
        }
    }
    emit_bench_output(reports, flags, out, err);
    return 0;
}

inline int cmd_bench_e2e(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto flags = parse_flags(
        args, 2, {{"--profile", true}, {"--iters", true}, {"--format", true}, {"--out", true}});
    size_t iters = size_t(parse_u64("--iters", get_or(flags, "--iters", "1000")));
    if (iters < kMinBenchIterations) throw UsageError("--iters must be at least 30");
    size_t warmup = std::min<size_t>(kDefaultWarmup, iters);

    std::vector<Profile> profiles;
    std::string which = get_or(flags, "--profile", "all");
    if (which == "all") profiles = {Profile::scms, Profile::ccms, Profile::cscms};
    else profiles = {parse_profile_flag(which)};

    HashDrbg rng = HashDrbg::from_u64(env_seed().value_or(0x76327863));
    BenchClock clock = steady_bench_clock();
    std::vector<BenchReport> reports;
    for (Profile p : profiles) {
        E2eContext ctx = make_e2e_context(p, rng);
        reports.push_back(run_e2e_bench(ctx, BenchTarget::E2eSign, iters, warmup, rng, clock));
        reports.push_back(run_e2e_bench(ctx, BenchTarget::E2eVerify, iters, warmup, rng, clock));
    }
    emit_bench_output(reports, flags, out, err);
    return 0;
}

// ---- golden fixtures -------------------------------------------------------

// Regenerates the fixtures directory from fixed seeds, the fixed logical
// time, and the ramp clock. Two consecutive runs produce identical bytes.
inline int cmd_fixtures(const std::vector<std::string>& args, std::ostream& out) {
    auto flags = parse_flags(args, 1, {{"--regen", false}, {"--dir", true}});
    if (flags.find("--regen") == flags.end()) throw UsageError("fixtures requires --regen");
    fs::path dir = get_or(flags, "--dir", "fixtures");
    fs::create_directories(dir);
    size_t files = 0;

    std::string hashed_ids;
    std::string cocoons;
    const Profile all[] = {Profile::scms, Profile::ccms, Profile::cscms};
    for (size_t pi = 0; pi < 3; ++pi) {
        Profile p = all[pi];
        const auto& suite = CryptoSuite::get(p);
        std::string prefix = profile_name(p);
        HashDrbg rng = HashDrbg::from_u64(1000 + pi);

        Domain domain = make_domain(p, kFixedIssueTime, rng);
        EndEntityState ee = make_end_entity(domain, "obu", kFixedIssueTime, rng);
        using Role = AuthorityState::Role;
        register_canonical(domain.authority(enrollment_authority_role(p)), ee);

        MessageBus enroll_bus;
        MessageBus authz_bus;
        switch (p) {
            case Profile::scms:
                scms_enroll(ee, domain.authority(Role::ECA), enroll_bus, rng, kFixedIssueTime);
                scms_authorize(ee, domain.authority(Role::RA), domain.authority(Role::ACA), 3, authz_bus,
                               rng, kFixedIssueTime);
                break;
            case Profile::ccms:
                ccms_enrol(ee, domain.authority(Role::EA), enroll_bus, rng, kFixedIssueTime);
                ccms_authorize(ee, domain.authority(Role::AA), domain.authority(Role::EA), authz_bus, rng,
                               kFixedIssueTime);
                break;
            case Profile::cscms:
                provision_subscriber(domain.authority(Role::GBA_AS), ee, rng);
                cscms_enroll(ee, domain.authority(Role::GBA_AS), domain.authority(Role::ECA), enroll_bus,
                             rng, kFixedIssueTime);
                cscms_authorize(ee, domain.authority(Role::GBA_AS), domain.authority(Role::PRA),
                                domain.authority(Role::ACA), 3, authz_bus, rng, kFixedIssueTime);
                break;
        }

        write_file((dir / (prefix + "_root.cert")).string(), encode_certificate(domain.root));
        ++files;
        for (const MessageBus* bus : {&enroll_bus, &authz_bus}) {
            std::string text;
            for (const auto& line : bus->transcript_lines()) text += line + "\n";
            std::string leg = bus == &enroll_bus ? "_enroll.transcript" : "_authorize.transcript";
            write_text_file((dir / (prefix + leg)).string(), text);
            ++files;
        }

        const auto& [cred_cert, cred_priv] = ee.authorization_credentials.front();
        SignedData bsm = sign_data(p, pattern_payload(200), kAidBsm, cred_cert, cred_priv,
                                   SignerKind::Certificate, Time64(kFixedMessageTime) * 1000000, rng);
        write_file((dir / (prefix + "_bsm.msg")).string(), encode_signed_data(bsm));
        ++files;
        if (p == Profile::scms) {
            SignedEncryptedData sealed =
                encrypt_signed(p, bsm, domain.authority(Role::ACA).certificate, rng);
            write_file((dir / "scms_encrypted.msg").string(), encode_signed_encrypted(sealed));
            ++files;
        }

        hashed_ids += prefix + " root " + hashed_id8(p, domain.root).hex() + "\n";
        for (const auto& a : domain.authorities) {
            hashed_ids += prefix + " " + a.actor_name + " " + hashed_id8(p, a.certificate).hex() + "\n";
        }
        hashed_ids += prefix + " enrollment " + hashed_id8(p, *ee.enrollment_cert).hex() + "\n";
        hashed_ids += prefix + " credential " + hashed_id8(p, cred_cert).hex() + "\n";

        CaterpillarKey cat = make_caterpillar(suite, rng);
        auto cat_pub = suite.curve().compress(cat.keypair.pub);
        cocoons += prefix + " caterpillar_public " + hex_encode(ByteView{cat_pub.data(), 33}) + "\n";
        cocoons += prefix + " expansion_key " + hex_encode(ByteView{cat.expansion_key.data(), 16}) + "\n";
        for (uint32_t i = 0; i < 5; ++i) {
            CocoonPublic c = expand_cocoon_public(suite, cat.keypair.pub, cat.expansion_key, i);
            auto pt = suite.curve().compress(c.point);
            cocoons += prefix + " cocoon " + std::to_string(i) + " " + hex_encode(ByteView{pt.data(), 33}) +
                       "\n";
        }
    }
    write_text_file((dir / "hashed_ids.txt").string(), hashed_ids);
    ++files;
    write_text_file((dir / "cocoon_batch.txt").string(), cocoons);
    ++files;

    // Benchmark golden file under the ramp clock, so the numbers depend only
    // on iteration counts.
    HashDrbg bench_rng = HashDrbg::from_u64(2026);
    std::vector<BenchReport> reports;
    for (Profile p : all) {
        reports.push_back(run_micro_bench(micro_spec(BenchTarget::Sign, p, 40, 2), bench_rng,
                                          ramp_bench_clock()));
        reports.push_back(run_micro_bench(micro_spec(BenchTarget::Verify, p, 36, 2), bench_rng,
                                          ramp_bench_clock()));
        reports.push_back(run_micro_bench(micro_spec(BenchTarget::Hash, p, 32, 2), bench_rng,
                                          ramp_bench_clock()));
    }
    write_text_file((dir / "bench_golden.csv").string(), emit_csv(reports));
    ++files;

    out << "regenerated " << files << " fixture files in " << dir.string() << "\n";
    return 0;
}

}  // namespace cli_detail

inline int cli_main(const std::vector<std::string>& args, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
    using namespace cli_detail;
    try {
        if (args.empty()) {
            print_usage(err);
            return 2;
        }
        const std::string& cmd = args[0];
        if (cmd == "init") return cmd_init(args, out);
        if (cmd == "bootstrap") return cmd_bootstrap(args, out);
        if (cmd == "enroll") return cmd_enroll(args, out);
        if (cmd == "authorize") return cmd_authorize(args, out);
        if (cmd == "sign") return cmd_sign(args, out);
        if (cmd == "verify") return cmd_verify(args, out);
        if (cmd == "fixtures") return cmd_fixtures(args, out);
        if (cmd == "bench") {
            if (args.size() < 2) throw UsageError("bench needs a target: crypto or e2e");
            if (args[1] == "crypto") return cmd_bench_crypto(args, out, err);
            if (args[1] == "e2e") return cmd_bench_e2e(args, out, err);
            throw UsageError("unknown bench target: " + args[1]);
        }
        throw UsageError("unknown command: " + cmd);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        print_usage(err);
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace cli
}  // namespace v2xcms
