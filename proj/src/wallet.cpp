#include "liquid/wallet.hpp"

#include <sodium.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "liquid/commitment.hpp"
#include "liquid/errors.hpp"

namespace liquid::wallet {

namespace {
constexpr std::string_view kWalletFormat = "LLV1-WALLET";

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::array<Byte, crypto_aead_xchacha20poly1305_ietf_KEYBYTES> derive_file_key(std::string_view passphrase,
                                                                             ByteView salt,
                                                                             unsigned long long ops,
                                                                             std::size_t mem) {
    std::array<Byte, crypto_aead_xchacha20poly1305_ietf_KEYBYTES> key;
    if (crypto_pwhash(key.data(), key.size(), passphrase.data(), passphrase.size(), salt.data(), ops, mem,
                      crypto_pwhash_ALG_ARGON2ID13) != 0)
        throw Error("passphrase key derivation ran out of memory");
    return key;
}
}  // namespace

Wallet Wallet::create(crypto::NonceSource source) {
    crypto::Seed seed(source.next_bytes());
    return Wallet(seed, std::move(source));
}

Wallet Wallet::from_seed(const crypto::Seed& seed, crypto::NonceSource source) {
    return Wallet(seed, std::move(source));
}

std::vector<PublicKey> Wallet::public_keys() const {
    std::vector<PublicKey> out;
    out.reserve(next_key_index_);
    for (std::uint64_t i = 0; i < next_key_index_; ++i) out.push_back(key(i).public_key);
    return out;
}

std::pair<PendingOffer, crypto::KeyPair> Wallet::fresh_stage(std::optional<UnitId> prev) {
    PendingOffer p{source_.next(), next_key_index_++, prev};
    auto kp = key(p.key_index);
    pending_.push_back(p);
    return {p, kp};
}

GenesisRegistration Wallet::make_registration() {
    auto [p, kp] = fresh_stage(commitment::genesis_placeholder());
    auto stage = commitment::compute_stage(p.nonce, kp.public_key, commitment::genesis_placeholder());
    GenesisRegistration g{stage.secrets.nonce_hash, kp.public_key, stage.id, {}};
    sign_entry(g, kp.secret_key);
    return g;
}

DelegationOffer Wallet::make_delegation_offer() {
    auto [p, kp] = fresh_stage(std::nullopt);
    return {crypto::hash(p.nonce.view()), crypto::hash(kp.public_key.view())};
}

TransferOffer Wallet::make_transfer_offer(const InputAnnounce& announce) {
    auto [p, kp] = fresh_stage(announce.input_unit);
    return {commitment::compute_stage(p.nonce, kp.public_key, announce.input_unit).id};
}

OwnershipRecord& Wallet::owned(const UnitId& unit) {
    auto it = std::find_if(records_.begin(), records_.end(), [&](const auto& r) { return r.unit == unit; });
    if (it == records_.end()) throw StateError("wallet does not own unit " + unit.hex());
    return *it;
}

const OwnershipRecord& Wallet::owned(const UnitId& unit) const {
    return const_cast<Wallet*>(this)->owned(unit);
}

InputAnnounce Wallet::announce(const UnitId& unit) const {
    const auto& rec = owned(unit);
    if (rec.spent) throw StateError("unit already spent: " + unit.hex());
    return {unit};
}

std::pair<Transition, DelegationStub> Wallet::accept_delegation_offer(const UnitId& unit,
                                                                      const DelegationOffer& offer) {
    const auto& rec = owned(unit);
    if (rec.spent) throw StateError("unit already spent: " + unit.hex());
    UnitId output = commitment::unit_id(commitment::inner_commitment(offer.h_n, offer.h_p), unit);
    auto kp = key(rec.key_index);
    Transition t = build_transition(rec, output, kp.secret_key);
    DelegationStub stub{offer.h_n, offer.h_p, unit, output, rec.key_index};
    stubs_.push_back(stub);
    return {t, stub};
}

Transition Wallet::accept_transfer_offer(const UnitId& unit, const TransferOffer& offer) {
    const auto& rec = owned(unit);
    if (rec.spent) throw StateError("unit already spent: " + unit.hex());
    return build_transition(rec, offer.output_unit, key(rec.key_index).secret_key);
}

Reversal Wallet::reverse(const DelegationStub& stub, const Ledger& ledger) {
    if (!ledger.index().contains(stub.delegated_output))
        throw StateError("delegated unit not on ledger: " + stub.delegated_output.hex());
    auto descendant = live_descendant(ledger.index(), ledger.state(), stub.delegated_output);
    if (!descendant) throw StateError("lineage has no reclaimable live unit");
    auto [p, kp] = fresh_stage(*descendant);
    UnitId new_output = commitment::compute_stage(p.nonce, kp.public_key, *descendant).id;
    return build_reversal(stub, new_output, key(stub.sender_key_index).secret_key);
}

const DelegationStub* Wallet::find_stub(const UnitId& delegated_output) const {
    for (const auto& s : stubs_)
        if (s.delegated_output == delegated_output) return &s;
    return nullptr;
}

IncomingScan Wallet::detect_incoming(const State& state, const LineageIndex& index) {
    IncomingScan scan;

    struct Candidate {
        std::size_t pending_pos;
        InnerCommitment inner;
    };
    std::vector<Candidate> delegations;
    std::vector<bool> resolved(pending_.size(), false);

    for (std::size_t i = 0; i < pending_.size(); ++i) {
        const auto& p = pending_[i];
        const PublicKey pk = key(p.key_index).public_key;
        if (!p.prev_unit) {
            delegations.push_back({i, commitment::inner_commitment(crypto::hash(p.nonce.view()),
                                                                   crypto::hash(pk.view()))});
            continue;
        }
        UnitId expected = commitment::compute_stage(p.nonce, pk, *p.prev_unit).id;
        if (!index.contains(expected)) continue;
        resolved[i] = true;
        if (index.parent_of(expected) != p.prev_unit) {
            scan.unclaimable.push_back(expected);
            continue;
        }
        OwnershipRecord rec{p.nonce, p.key_index, *p.prev_unit, expected, !state.is_live(expected)};
        records_.push_back(rec);
        scan.received.push_back(rec);
    }

    if (!delegations.empty()) {
        for (const auto& u : state.live) {
            auto parent = index.parent_of(u);
            if (!parent) continue;
            for (const auto& c : delegations) {
                if (resolved[c.pending_pos] || commitment::unit_id(c.inner, *parent) != u) continue;
                resolved[c.pending_pos] = true;
                const auto& p = pending_[c.pending_pos];
                OwnershipRecord rec{p.nonce, p.key_index, *parent, u, false};
                records_.push_back(rec);
                scan.received.push_back(rec);
            }
        }
    }

    std::vector<PendingOffer> still_pending;
    for (std::size_t i = 0; i < pending_.size(); ++i)
        if (!resolved[i]) still_pending.push_back(pending_[i]);
    pending_ = std::move(still_pending);

    for (auto& rec : records_)
        if (!rec.spent && !state.is_live(rec.unit) && index.contains(rec.unit)) rec.spent = true;
    return scan;
}

std::vector<OwnershipRecord> Wallet::spendable_units(const State& state) const {
    std::vector<OwnershipRecord> out;
    for (const auto& r : records_)
        if (!r.spent && state.is_live(r.unit)) out.push_back(r);
    return out;
}

// ---- persistence ----------------------------------------------------------

std::string Wallet::to_plaintext_json() const {
    codec::Json records = codec::Json::array();
    for (const auto& r : records_) records.push_back(codec::to_json(r));
    codec::Json stubs = codec::Json::array();
    for (const auto& s : stubs_) stubs.push_back(codec::to_json(s));
    codec::Json pending = codec::Json::array();
    for (const auto& p : pending_) {
        codec::Json j{{"nonce", p.nonce.hex()}, {"key_index", p.key_index}};
        if (p.prev_unit) j["prev_unit"] = p.prev_unit->hex();
        pending.push_back(j);
    }
    codec::Json j{{"seed", to_hex(seed_.entropy())},
                  {"profile", std::string(profile().name)},
                  {"next_key_index", next_key_index_},
                  {"records", records},
                  {"stubs", stubs},
                  {"pending", pending}};
    return j.dump();
}

Wallet Wallet::from_plaintext_json(std::string_view text, crypto::NonceSource source) {
    try {
        auto j = codec::parse(text);
        auto seed_bytes = from_hex(j.at("seed").get<std::string>());
        if (seed_bytes.size() != 32) throw EncodingError("wallet seed must be 32 bytes");
        std::array<Byte, 32> entropy;
        std::copy(seed_bytes.begin(), seed_bytes.end(), entropy.begin());
        Wallet w(crypto::Seed(entropy), std::move(source));
        w.next_key_index_ = j.at("next_key_index").get<std::uint64_t>();
        for (const auto& r : j.at("records")) w.records_.push_back(codec::record_from_json(r));
        for (const auto& s : j.at("stubs")) w.stubs_.push_back(codec::stub_from_json(s));
        for (const auto& p : j.at("pending")) {
            PendingOffer po{codec::hex_field<Nonce>(p, "nonce"), p.at("key_index").get<std::uint64_t>(), {}};
            if (p.contains("prev_unit")) po.prev_unit = codec::hex_field<UnitId>(p, "prev_unit");
            w.pending_.push_back(po);
        }
        return w;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("corrupt wallet contents: ") + e.what());
    }
}

void Wallet::persist(const std::filesystem::path& path, std::string_view passphrase) const {
    if (!profile().persistable()) throw StateError("toy-profile wallets cannot be persisted");
    crypto::ensure_initialized();

    const unsigned long long ops = crypto_pwhash_OPSLIMIT_INTERACTIVE;
    const std::size_t mem = crypto_pwhash_MEMLIMIT_INTERACTIVE;
    std::array<Byte, crypto_pwhash_SALTBYTES> salt;
    std::array<Byte, crypto_aead_xchacha20poly1305_ietf_NPUBBYTES> nonce;
    randombytes_buf(salt.data(), salt.size());
    randombytes_buf(nonce.data(), nonce.size());
    auto key = derive_file_key(passphrase, salt, ops, mem);

    std::string plain = to_plaintext_json();
    Bytes cipher(plain.size() + crypto_aead_xchacha20poly1305_ietf_ABYTES);
    unsigned long long cipher_len = 0;
    crypto_aead_xchacha20poly1305_ietf_encrypt(
        cipher.data(), &cipher_len, reinterpret_cast<const Byte*>(plain.data()), plain.size(),
        reinterpret_cast<const Byte*>(kWalletFormat.data()), kWalletFormat.size(), nullptr, nonce.data(),
        key.data());
    sodium_memzero(plain.data(), plain.size());
    sodium_memzero(key.data(), key.size());
    cipher.resize(cipher_len);

    codec::Json file{{"format", std::string(kWalletFormat)},
                     {"kdf", "argon2id13"},
                     {"opslimit", ops},
                     {"memlimit", mem},
                     {"salt", to_hex(salt)},
                     {"nonce", to_hex(nonce)},
                     {"ciphertext", to_hex(cipher)}};
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot write " + tmp.string());
        std::filesystem::permissions(tmp, std::filesystem::perms::owner_read | std::filesystem::perms::owner_write);
        out << file.dump() << '\n';
        if (!out) throw FormatError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Wallet Wallet::restore(const std::filesystem::path& path, std::string_view passphrase, crypto::NonceSource source) {
    crypto::ensure_initialized();
    codec::Json file;
    Bytes salt, nonce, cipher;
    unsigned long long ops = 0;
    std::size_t mem = 0;
    try {
        file = codec::parse(read_file(path));
        if (file.value("format", "") != kWalletFormat) throw FormatError("not an LLV1 wallet file");
        ops = file.at("opslimit").get<unsigned long long>();
        mem = file.at("memlimit").get<std::size_t>();
        salt = from_hex(file.at("salt").get<std::string>());
        nonce = from_hex(file.at("nonce").get<std::string>());
        cipher = from_hex(file.at("ciphertext").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("corrupt wallet file: ") + e.what());
    } catch (const EncodingError& e) {
        throw FormatError(std::string("corrupt wallet file: ") + e.what());
    }
    if (salt.size() != crypto_pwhash_SALTBYTES || nonce.size() != crypto_aead_xchacha20poly1305_ietf_NPUBBYTES ||
        cipher.size() < crypto_aead_xchacha20poly1305_ietf_ABYTES)
        throw FormatError("corrupt wallet file: bad field sizes");

    auto key = derive_file_key(passphrase, salt, ops, mem);
    std::string plain(cipher.size() - crypto_aead_xchacha20poly1305_ietf_ABYTES, '\0');
    unsigned long long plain_len = 0;
    int rc = crypto_aead_xchacha20poly1305_ietf_decrypt(
        reinterpret_cast<Byte*>(plain.data()), &plain_len, nullptr, cipher.data(), cipher.size(),
        reinterpret_cast<const Byte*>(kWalletFormat.data()), kWalletFormat.size(), nonce.data(), key.data());
    sodium_memzero(key.data(), key.size());
    if (rc != 0) throw DecryptionError("wallet decryption failed: wrong passphrase or tampered file");
    plain.resize(plain_len);
    Wallet w = from_plaintext_json(plain, std::move(source));
    sodium_memzero(plain.data(), plain.size());
    return w;
}

// ---- wire messages --------------------------------------------------------

codec::Json to_json(const DelegationOffer& m) {
    return {{"kind", "delegation_offer"}, {"h_n", m.h_n.hex()}, {"h_p", m.h_p.hex()}};
}

codec::Json to_json(const TransferOffer& m) {
    return {{"kind", "transfer_offer"}, {"output_unit", m.output_unit.hex()}};
}

codec::Json to_json(const InputAnnounce& m) {
    return {{"kind", "input_announce"}, {"input_unit", m.input_unit.hex()}};
}

namespace {
void expect_kind(const codec::Json& j, std::string_view kind) {
    if (!j.is_object() || j.value("kind", "") != kind)
        throw EncodingError("expected a " + std::string(kind) + " message");
}
}  // namespace

DelegationOffer delegation_offer_from_json(const codec::Json& j) {
    expect_kind(j, "delegation_offer");
    return {codec::hex_field<Hash256>(j, "h_n"), codec::hex_field<Hash256>(j, "h_p")};
}

TransferOffer transfer_offer_from_json(const codec::Json& j) {
    expect_kind(j, "transfer_offer");
    return {codec::hex_field<UnitId>(j, "output_unit")};
}

InputAnnounce input_announce_from_json(const codec::Json& j) {
    expect_kind(j, "input_announce");
    return {codec::hex_field<UnitId>(j, "input_unit")};
}

}  // namespace liquid::wallet
