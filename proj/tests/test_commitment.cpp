#include <set>

#include "support.hpp"

using namespace lt;

TEST_CASE("genesis placeholder has two derivations") {
    const auto& g = goldens();
    CHECK(commitment::genesis_placeholder().hex() == g["placeholder"].get<std::string>());
    std::vector<Bytes> zero{Bytes{0x00}};
    CHECK(commitment::merkle_root(zero).bytes == commitment::genesis_placeholder().bytes);
    auto h0 = crypto::hash(ByteView(zero[0]));
    CHECK(commitment::unit_id(commitment::inner_commitment(h0, h0), UnitId{}) != commitment::genesis_placeholder());
}

TEST_CASE("merkle root") {
    const auto& g = goldens()["merkle"];
    std::vector<Bytes> abc{{'a'}, {'b'}, {'c'}};
    CHECK(commitment::merkle_root(abc).hex() == g["abc"].get<std::string>());
    std::vector<Bytes> abcd{{'a'}, {'b'}, {'c'}, {'d'}};
    CHECK(commitment::merkle_root(abcd).hex() == g["abcd"].get<std::string>());
    CHECK_THROWS_AS(commitment::merkle_root(std::vector<Bytes>{}), StateError);
}

TEST_CASE("three-stage chain matches the oracle") {
    for (const auto& c : goldens()["chain"]) {
        auto seed_bytes = from_hex(c["seed"].get<std::string>());
        std::array<Byte, 32> e;
        std::copy(seed_bytes.begin(), seed_bytes.end(), e.begin());
        auto kp = crypto::derive_keypair(crypto::Seed(e), 0);
        REQUIRE(kp.public_key.hex() == c["pk"].get<std::string>());
        auto st = commitment::compute_stage(hx<Nonce>(c["nonce"]), kp.public_key, hx<UnitId>(c["prev"]));
        CHECK(st.secrets.nonce_hash.hex() == c["h_n"].get<std::string>());
        CHECK(st.secrets.pubkey_hash.hex() == c["h_p"].get<std::string>());
        CHECK(st.inner.hex() == c["inner"].get<std::string>());
        CHECK(st.id.hex() == c["id"].get<std::string>());
        CHECK(commitment::verify_stage(st.secrets.nonce_hash, kp.public_key, hx<UnitId>(c["prev"]), st.id));
    }
}

TEST_CASE("verify_stage rejects any single change") {
    auto src = crypto::NonceSource::seeded(9);
    auto kp = crypto::derive_keypair(crypto::Seed(src.next_bytes()), 0);
    auto other = crypto::derive_keypair(crypto::Seed(src.next_bytes()), 0);
    UnitId prev(src.next_bytes());
    auto nonce = src.next();
    auto st = commitment::compute_stage(nonce, kp.public_key, prev);
    auto h_n = st.secrets.nonce_hash;

    CHECK(commitment::verify_stage(h_n, kp.public_key, prev, st.id));
    CHECK_FALSE(commitment::verify_stage(h_n, other.public_key, prev, st.id));
    auto h_n2 = h_n;
    h_n2.bytes[31] ^= 0x80;
    CHECK_FALSE(commitment::verify_stage(h_n2, kp.public_key, prev, st.id));
    auto prev2 = prev;
    prev2.bytes[0] ^= 1;
    CHECK_FALSE(commitment::verify_stage(h_n, kp.public_key, prev2, st.id));
    auto id2 = st.id;
    id2.bytes[10] ^= 4;
    CHECK_FALSE(commitment::verify_stage(h_n, kp.public_key, prev, id2));
}

TEST_CASE("the placeholder is never a valid stage") {
    auto src = crypto::NonceSource::seeded(10);
    auto kp = crypto::derive_keypair(crypto::Seed(src.next_bytes()), 0);
    CHECK_FALSE(commitment::verify_stage(Hash256{}, kp.public_key, UnitId{}, commitment::genesis_placeholder()));
}

TEST_CASE("inner commitment is ordered") {
    auto a = crypto::hash(std::string_view("a"));
    auto b = crypto::hash(std::string_view("b"));
    CHECK(commitment::inner_commitment(a, b) != commitment::inner_commitment(b, a));
}

TEST_CASE("property: distinct stages give distinct ids") {
    auto src = crypto::NonceSource::seeded(12);
    auto seed = crypto::Seed(src.next_bytes());
    std::set<UnitId> ids;
    UnitId prev = commitment::genesis_placeholder();
    for (std::uint64_t j = 0; j < 500; ++j) {
        auto kp = crypto::derive_keypair(seed, j % 7);
        auto st = commitment::compute_stage(src.next(), kp.public_key, prev);
        CHECK(ids.insert(st.id).second);
        if (j % 3 == 0) prev = st.id;
    }
}
