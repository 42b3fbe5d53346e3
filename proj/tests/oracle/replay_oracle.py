#!/usr/bin/env python3
"""Independent replay of LLV1 ledger files.

Re-validates every genesis registration, transition and reversal from the
JSON Lines file with hashlib and the `cryptography` package only, then prints
the expected facts for each fixture:

    python3 tests/oracle/replay_oracle.py tests/fixtures/*.jsonl > tests/fixtures/fixtures.json
"""

import hashlib
import json
import sys
from pathlib import Path

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PublicKey


def H(*parts: bytes) -> bytes:
    return hashlib.sha256(b"".join(parts)).digest()


PLACEHOLDER = H(H(b"\x00"), H(b"\x00"))


def verify(pk: bytes, payload: bytes, sig: bytes) -> bool:
    try:
        Ed25519PublicKey.from_public_bytes(pk).verify(sig, payload)
        return True
    except InvalidSignature:
        return False


class Replay:
    def __init__(self, options):
        self.live = set()
        self.parent = {}
        self.child = {}
        self.consumed_by = {}
        self.reversal_of = {}
        self.depth = {PLACEHOLDER: 0}
        self.seen = {PLACEHOLDER}
        self.option_keys = set(options.values())
        self.frozen = False

    def produce(self, consumed, produced):
        self.live.discard(consumed)
        self.live.add(produced)
        self.seen.add(produced)
        self.parent[produced] = consumed
        self.child[consumed] = produced
        self.depth[produced] = self.depth[consumed] + 1

    def live_descendant(self, unit):
        walked, cur = {unit}, unit
        while cur not in self.live:
            nxt = self.child.get(cur)
            if nxt is None:
                return None
            undone = self.reversal_of.get(nxt)
            if undone is not None and undone not in walked:
                return None
            cur = nxt
            walked.add(cur)
        return cur

    def genesis(self, e):
        h_n, pk, unit, sig = (bytes.fromhex(e[k]) for k in ("nonce_hash", "owner_pk", "unit", "signature"))
        assert H(H(h_n, H(pk)), PLACEHOLDER) == unit, "genesis stage"
        assert unit not in self.seen, "duplicate genesis unit"
        assert verify(pk, b"LLV1-GENESIS" + h_n + pk + unit, sig), "genesis signature"
        self.seen.add(unit)
        self.live.add(unit)
        self.parent[unit] = PLACEHOLDER
        self.depth[unit] = 1

    def transition(self, e):
        h_n, pk, prev, inp, out, sig = (bytes.fromhex(e[k]) for k in (
            "nonce_hash", "sender_pk", "prev_unit", "input_unit", "output_unit", "signature"))
        assert H(H(h_n, H(pk)), prev) == inp and self.parent.get(inp) == prev, "stage"
        assert inp in self.live, "input not live"
        assert out not in self.seen, "duplicate output"
        assert verify(pk, b"LLV1-TRANSITION" + h_n + pk + prev + inp + out, sig), "signature"
        assert pk not in self.option_keys, "option key spend"
        assert not self.frozen, "frozen"
        self.consumed_by[inp] = pk
        self.produce(inp, out)

    def reversal(self, e):
        h_n, h_p, pk, d_in, d_out, new, sig = (bytes.fromhex(e[k]) for k in (
            "delegated_nonce_hash", "delegated_pk_hash", "sender_pk", "delegated_input",
            "delegated_output", "new_output", "signature"))
        assert H(H(h_n, h_p), d_in) == d_out, "stage"
        assert d_in in self.seen and d_out in self.seen, "unknown"
        assert self.parent.get(d_out) == d_in and d_out not in self.reversal_of, "edge"
        assert self.consumed_by.get(d_in) == pk, "not original sender"
        target = self.live_descendant(d_out)
        assert target is not None, "no live descendant"
        assert new not in self.seen, "duplicate output"
        assert verify(pk, b"LLV1-REVERSAL" + h_n + h_p + pk + d_in + d_out + new, sig), "signature"
        assert not self.frozen, "frozen"
        self.reversal_of[new] = d_out
        self.produce(target, new)


def replay_file(path: Path):
    lines = [l for l in path.read_text().splitlines() if l.strip()]
    header = json.loads(lines[0])
    assert header["version"] == "LLV1"
    r = Replay({k: bytes.fromhex(v) for k, v in header.get("options", {}).items()})
    genesis_count = entries = 0
    slot_sizes = []
    for expected_t, line in enumerate(lines[1:]):
        slot = json.loads(line)
        assert slot["t"] == expected_t
        if slot.get("finalized"):
            assert not slot["entries"] and not r.frozen
            r.frozen = True
        for e in slot["entries"]:
            kind = e["type"]
            if kind == "genesis":
                assert expected_t == 0
                r.genesis(e)
                genesis_count += 1
            else:
                assert expected_t > 0
                (r.transition if kind == "transition" else r.reversal)(e)
                entries += 1
        assert len(r.live) == genesis_count, "conservation"
        slot_sizes.append(len(slot["entries"]))
    assert genesis_count == header["genesis_count"]
    live = sorted(r.live)
    return {
        "slots": len(slot_sizes),
        "genesis_count": genesis_count,
        "entries": entries,
        "live": len(live),
        "frozen": r.frozen,
        "max_depth": max(r.depth[u] for u in live) if live else 0,
        "snapshot_hash": H(*live).hex(),
        "first_live": live[0].hex() if live else None,
    }


def main():
    out = {Path(p).stem: replay_file(Path(p)) for p in sorted(sys.argv[1:])}
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
