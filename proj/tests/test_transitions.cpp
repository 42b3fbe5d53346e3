#include "support.hpp"

using namespace lt;

namespace {

crypto::KeyPair chain_key(std::size_t i) {
    auto b = from_hex(goldens()["chain"][i]["seed"].get<std::string>());
    std::array<Byte, 32> e;
    std::copy(b.begin(), b.end(), e.begin());
    return crypto::derive_keypair(crypto::Seed(e), 0);
}

}  // namespace

TEST_CASE("signing payloads and signatures match the oracle") {
    const auto& g = goldens();
    const auto& c0 = g["chain"][0];
    const auto& c1 = g["chain"][1];
    auto kp = chain_key(0);

    Transition t{hx<Hash256>(c0["h_n"]), kp.public_key, commitment::genesis_placeholder(), hx<UnitId>(c0["id"]),
                 hx<UnitId>(c1["id"]), {}};
    CHECK(to_hex(signing_payload(t)) == g["signing"]["transition_payload"].get<std::string>());
    sign_entry(t, kp.secret_key);
    CHECK(t.signature.hex() == g["signing"]["transition_signature"].get<std::string>());

    Reversal r{hx<Hash256>(c1["h_n"]), hx<Hash256>(c1["h_p"]), kp.public_key, hx<UnitId>(c0["id"]),
               hx<UnitId>(c1["id"]), hx<UnitId>(g["signing"]["reversal_new_output"]), {}};
    CHECK(to_hex(signing_payload(r)) == g["signing"]["reversal_payload"].get<std::string>());
    sign_entry(r, kp.secret_key);
    CHECK(r.signature.hex() == g["signing"]["reversal_signature"].get<std::string>());

    GenesisRegistration reg{hx<Hash256>(c0["h_n"]), kp.public_key, hx<UnitId>(c0["id"]), {}};
    CHECK(to_hex(signing_payload(reg)) == g["signing"]["genesis_payload"].get<std::string>());
    sign_entry(reg, kp.secret_key);
    CHECK(reg.signature.hex() == g["signing"]["genesis_signature"].get<std::string>());
}

TEST_CASE("rejection names round trip") {
    for (int i = 0; i <= static_cast<int>(Rejection::StateFrozen); ++i) {
        auto r = static_cast<Rejection>(i);
        CHECK(rejection_from_string(to_string(r)) == r);
    }
    CHECK(to_string(Rejection::UnknownInput) == "UnknownInput");
    CHECK_THROWS_AS(rejection_from_string("Nope"), EncodingError);
}

TEST_CASE("transition validation") {
    World w(3, 2, 21);
    const auto& st = w.ledger.state();
    const auto& idx = w.ledger.index();
    const auto& reg = w.ledger.options();

    SUBCASE("honest delegation is accepted") {
        auto [t, stub] = w.delegation(0, 1);
        CHECK(validate_transition(t, st, idx, reg).accepted());
        CHECK(stub.consistent());
    }
    SUBCASE("unknown input") {
        auto t = w.transfer(0, 1);
        t.input_unit = random_unit(w.rng);
        // Re-sign so the only fault is the input; the stage no longer matches
        // either, and stage reconstruction is checked first.
        CHECK(validate_transition(t, st, idx, reg).reason == Rejection::StageMismatch);

        // A consistent stage over an input that was never on the ledger.
        auto kp = w.wallets[0].key(0);
        auto nonce = w.rng.next();
        UnitId fake_prev = random_unit(w.rng);
        auto stage = commitment::compute_stage(nonce, kp.public_key, fake_prev);
        Transition u{crypto::hash(nonce.view()), kp.public_key, fake_prev, stage.id, random_unit(w.rng), {}};
        sign_entry(u, kp.secret_key);
        CHECK(validate_transition(u, st, idx, reg).reason == Rejection::UnknownInput);
    }
    SUBCASE("spent input") {
        auto first = w.transfer(0, 1);
        auto unit = first.input_unit;
        REQUIRE(w.submit(first).accepted());
        // Rebuild a second spend of the same unit from the sender's record.
        auto rec = std::find_if(w.wallets[0].records().begin(), w.wallets[0].records().end(),
                                [&](const auto& r) { return r.unit == unit; });
        REQUIRE(rec != w.wallets[0].records().end());
        auto again = build_transition(*rec, random_unit(w.rng), w.wallets[0].key(rec->key_index).secret_key);
        CHECK(w.ledger.check(again).reason == Rejection::SpentInput);
    }
    SUBCASE("stage mismatch from a swapped key") {
        auto t = w.transfer(0, 1);
        auto other = w.wallets[0].key(1);
        t.sender_pk = other.public_key;
        sign_entry(t, other.secret_key);
        CHECK(validate_transition(t, st, idx, reg).reason == Rejection::StageMismatch);
    }
    SUBCASE("stage mismatch when prev is not the recorded parent") {
        // A record whose claimed predecessor differs from the lineage: the
        // unit id cannot be reproduced under a different prev, so this also
        // covers the never-claimable transfer-offer case.
        auto t = w.transfer(0, 1);
        t.prev_unit = w.unit_of(1);
        sign_entry(t, w.wallets[0].key(0).secret_key);
        CHECK(validate_transition(t, st, idx, reg).reason == Rejection::StageMismatch);
    }
    SUBCASE("duplicate output") {
        auto rec = w.wallets[0].records()[0];
        auto sk = w.wallets[0].key(rec.key_index).secret_key;
        auto to_existing = build_transition(rec, w.unit_of(2), sk);
        CHECK(validate_transition(to_existing, st, idx, reg).reason == Rejection::DuplicateOutput);
        auto to_self = build_transition(rec, rec.unit, sk);
        CHECK(validate_transition(to_self, st, idx, reg).reason == Rejection::DuplicateOutput);
        auto to_placeholder = build_transition(rec, commitment::genesis_placeholder(), sk);
        CHECK(validate_transition(to_placeholder, st, idx, reg).reason == Rejection::DuplicateOutput);
    }
    SUBCASE("bad signature") {
        auto t = w.transfer(0, 1);
        t.signature.bytes[0] ^= 1;
        CHECK(validate_transition(t, st, idx, reg).reason == Rejection::BadSignature);
        auto u = w.transfer(0, 1);
        u.output_unit = random_unit(w.rng);  // redirected in flight
        CHECK(validate_transition(u, st, idx, reg).reason == Rejection::BadSignature);
    }
    SUBCASE("frozen state") {
        auto t = w.transfer(0, 1);
        State frozen = st;
        frozen.frozen = true;
        CHECK(validate_transition(t, frozen, idx, reg).reason == Rejection::StateFrozen);
        // Structural failures are reported ahead of the freeze by the pure
        // validator; the ledger reports the freeze first.
        t.signature.bytes[0] ^= 1;
        CHECK(validate_transition(t, frozen, idx, reg).reason == Rejection::BadSignature);
        w.ledger.finalize();
        CHECK(w.ledger.check(t).reason == Rejection::StateFrozen);
    }
}

TEST_CASE("option keys cannot spend") {
    auto src = crypto::NonceSource::seeded(77);
    crypto::Seed opt_seed(src.next_bytes());
    auto opt = tally::OptionEntity::from_seed("yes", opt_seed, src.fork("yes"));
    auto voter = wallet::Wallet::create(src.fork("voter"));
    OptionRegistry reg;
    reg.add("yes", opt.public_key());
    auto l = Ledger::genesis({voter.make_registration()}, reg);
    voter.detect_incoming(l);
    auto unit = voter.spendable_units(l.state()).at(0).unit;
    auto offer = opt.request_vote_offer(voter.announce(unit));
    REQUIRE(l.append_slot({voter.accept_transfer_offer(unit, offer)}).at(0).accepted());

    const auto& claim = opt.claims().at(0);
    auto kp = crypto::derive_keypair(opt_seed, 0);
    OwnershipRecord rec{claim.nonce, 0, claim.prev_unit, claim.unit, false};
    auto spend = build_transition(rec, UnitId(src.next_bytes()), kp.secret_key);
    CHECK(l.check(spend).reason == Rejection::OptionKeySpend);
    CHECK(validate_transition(spend, l.state(), l.index(), OptionRegistry{}).accepted());
}

TEST_CASE("construction guards") {
    World w(2, 1, 22);
    auto rec = w.wallets[0].records()[0];
    CHECK_THROWS_AS(build_transition(rec, random_unit(w.rng), w.wallets[1].key(0).secret_key), ConstructionError);
    auto [t, stub] = w.delegation(0, 1);
    auto bad = stub;
    bad.h_n.bytes[0] ^= 1;
    CHECK_FALSE(bad.consistent());
    CHECK_THROWS_AS(build_reversal(bad, random_unit(w.rng), w.wallets[0].key(0).secret_key), ConstructionError);
}

TEST_CASE("reversal validation") {
    World w(4, 1, 23);
    auto stub = w.delegate(0, 1);
    const auto sender_key = w.wallets[0].key(stub.sender_key_index);

    auto forge = [&](const crypto::KeyPair& kp, Hash256 h_n, Hash256 h_p, UnitId in, UnitId out) {
        Reversal r{h_n, h_p, kp.public_key, in, out, random_unit(w.rng), {}};
        sign_entry(r, kp.secret_key);
        return r;
    };

    SUBCASE("original sender is accepted") {
        auto r = w.wallets[0].reverse(stub, w.ledger);
        CHECK(w.ledger.check(r).accepted());
        CHECK(w.submit(r).accepted());
        CHECK(w.owns_live(0, r.new_output));
        CHECK_FALSE(w.ledger.state().is_live(stub.delegated_output));
        CHECK(w.wallets[1].spendable_units(w.ledger.state()).size() == 1);
        CHECK(w.ledger.index().reversal_of.at(r.new_output) == stub.delegated_output);
    }
    SUBCASE("wrong hashes are a stage mismatch") {
        auto r = forge(sender_key, Hash256(w.rng.next_bytes()), stub.h_p, stub.delegated_input, stub.delegated_output);
        CHECK(w.ledger.check(r).reason == Rejection::StageMismatch);
    }
    SUBCASE("unknown units") {
        UnitId in = random_unit(w.rng);
        auto out = commitment::unit_id(commitment::inner_commitment(stub.h_n, stub.h_p), in);
        auto r = forge(sender_key, stub.h_n, stub.h_p, in, out);
        CHECK(w.ledger.check(r).reason == Rejection::UnknownInput);
    }
    SUBCASE("receiver and third party are not the original sender") {
        auto recv = w.wallets[1].key(w.wallets[1].next_key_index() - 1);
        CHECK(w.ledger.check(forge(recv, stub.h_n, stub.h_p, stub.delegated_input, stub.delegated_output)).reason ==
              Rejection::NotOriginalSender);
        auto third = w.wallets[2].key(0);
        CHECK(w.ledger.check(forge(third, stub.h_n, stub.h_p, stub.delegated_input, stub.delegated_output)).reason ==
              Rejection::NotOriginalSender);
    }
    SUBCASE("genesis edges cannot be reversed") {
        auto rec = w.wallets[2].records()[0];
        auto kp = w.wallets[2].key(rec.key_index);
        auto r = forge(kp, crypto::hash(rec.nonce.view()), crypto::hash(kp.public_key.view()),
                       commitment::genesis_placeholder(), rec.unit);
        CHECK(w.ledger.check(r).reason == Rejection::NotOriginalSender);
    }
    SUBCASE("transfer sender cannot reverse") {
        auto t = w.transfer(2, 3);
        REQUIRE(w.submit(t).accepted());
        auto kp = w.wallets[2].key(0);
        auto r = forge(kp, Hash256(w.rng.next_bytes()), Hash256(w.rng.next_bytes()), t.input_unit, t.output_unit);
        CHECK(w.ledger.check(r).reason == Rejection::StageMismatch);
    }
    SUBCASE("downstream reversal after an upstream reclaim has no live descendant") {
        auto stub2 = w.delegate_unit(1, 2, stub.delegated_output);
        REQUIRE(w.reverse(0, stub).accepted());
        CHECK_THROWS_AS(w.wallets[1].reverse(stub2, w.ledger), StateError);
        Reversal r{stub2.h_n, stub2.h_p, w.wallets[1].key(stub2.sender_key_index).public_key,
                   stub2.delegated_input, stub2.delegated_output, random_unit(w.rng), {}};
        sign_entry(r, w.wallets[1].key(stub2.sender_key_index).secret_key);
        CHECK(w.ledger.check(r).reason == Rejection::NoLiveDescendant);
    }
    SUBCASE("upstream sender may reverse again after a downstream reclaim") {
        auto stub2 = w.delegate_unit(1, 2, stub.delegated_output);
        REQUIRE(w.reverse(1, stub2).accepted());
        REQUIRE(w.reverse(0, stub).accepted());
        CHECK(w.wallets[1].spendable_units(w.ledger.state()).size() == 1);
        CHECK(w.wallets[0].spendable_units(w.ledger.state()).size() == 1);
    }
    SUBCASE("reclaims the live end of a longer chain") {
        auto u2 = w.give_unit(1, 2, stub.delegated_output);
        auto stub3 = w.delegate_unit(2, 3, u2);
        REQUIRE(w.reverse(0, stub).accepted());
        CHECK_FALSE(w.ledger.state().is_live(stub3.delegated_output));
        CHECK(w.wallets[3].spendable_units(w.ledger.state()).size() == 1);
        CHECK(w.wallets[0].spendable_units(w.ledger.state()).size() == 1);
        CHECK(w.ledger.index().depth(w.wallets[0].spendable_units(w.ledger.state())[0].unit) == 5);
        CHECK(w.ledger.state().live.size() == 4);
    }
    SUBCASE("duplicate new output") {
        auto r = w.wallets[0].reverse(stub, w.ledger);
        r.new_output = w.unit_of(2);
        sign_entry(r, sender_key.secret_key);
        CHECK(w.ledger.check(r).reason == Rejection::DuplicateOutput);
    }
    SUBCASE("bad signature") {
        auto r = w.wallets[0].reverse(stub, w.ledger);
        r.signature.bytes[63] ^= 2;
        CHECK(w.ledger.check(r).reason == Rejection::BadSignature);
        auto r2 = w.wallets[0].reverse(stub, w.ledger);
        r2.new_output = random_unit(w.rng);  // front-run with an attacker-chosen output
        CHECK(w.ledger.check(r2).reason == Rejection::BadSignature);
    }
    SUBCASE("frozen") {
        auto r = w.wallets[0].reverse(stub, w.ledger);
        w.ledger.finalize();
        CHECK(w.ledger.check(r).reason == Rejection::StateFrozen);
    }
}

TEST_CASE("genesis validation") {
    auto src = crypto::NonceSource::seeded(30);
    auto wal = wallet::Wallet::create(src.fork("a"));
    auto g = wal.make_registration();
    LineageIndex idx;
    idx.all_ids.insert(commitment::genesis_placeholder());
    CHECK(validate_genesis(g, idx).accepted());
    auto bad = g;
    bad.signature.bytes[1] ^= 1;
    CHECK(validate_genesis(bad, idx).reason == Rejection::BadSignature);
    auto mismatch = g;
    mismatch.unit.bytes[0] ^= 1;
    CHECK(validate_genesis(mismatch, idx).reason == Rejection::StageMismatch);
    idx.all_ids.insert(g.unit);
    CHECK(validate_genesis(g, idx).reason == Rejection::DuplicateOutput);
}
