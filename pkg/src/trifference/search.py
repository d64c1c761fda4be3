"""Exact maximum trifferent code search with an independent exhaustive oracle.

The branch-and-bound engine walks candidate codewords in lexicographic order,
keeps the incumbent, and prunes subtrees that cannot beat it, so the returned
optimum is the lexicographically smallest one.  The oracle re-solves small
instances as a plain maximum independent set in the bad-triple hypergraph and
shares no code path with the engine.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass

import numpy as np

from .core import Code, Codeword, format_triff, is_trifferent_triple

__all__ = [
    "SearchCertificate",
    "BadTripleOracleInstance",
    "full_universe",
    "a_r_universe",
    "enumerate_bad_triples",
    "oracle_max",
    "max_trifferent",
    "max_r_bounded",
    "certificate_to_json",
    "load_results_table",
    "save_results_table",
    "record_certificate",
]

OPTIMAL = "optimal"
LOWER_BOUND = "lower-bound"

DEFAULT_N_CAP = 4
DEFAULT_UNIVERSE_CAP = 512
DEFAULT_ORACLE_CAP = 30


def full_universe(n: int) -> list[Codeword]:
    """All 3^n words of length n in lexicographic order."""
    if n < 1:
        raise ValueError("n must be positive")
    return [
        Codeword.from_string("".join(t))
        for t in itertools.product("012", repeat=n)
    ]


def a_r_universe(n: int, r: int) -> list[Codeword]:
    """All words with exactly r twos, lexicographically ordered."""
    if not 0 <= r <= n:
        raise ValueError(f"r must lie in [0, {n}], got {r}")
    out = []
    for locs in itertools.combinations(range(n), r):
        two_mask = 0
        for i in locs:
            two_mask |= 1 << i
        rest = [i for i in range(n) if not (two_mask >> i) & 1]
        for bits in range(1 << (n - r)):
            m1 = 0
            for pos, i in enumerate(rest):
                if (bits >> pos) & 1:
                    m1 |= 1 << i
            full = (1 << n) - 1
            out.append(
                Codeword(n=n, mask0=full ^ two_mask ^ m1, mask1=m1, mask2=two_mask)
            )
    out.sort(key=lambda w: w.string)
    return out


@dataclass(frozen=True)
class BadTripleOracleInstance:
    """A candidate universe plus the set of its non-trifferent index triples."""

    universe: tuple[Codeword, ...]
    bad_triples: frozenset

    @property
    def bad_count(self) -> int:
        return len(self.bad_triples)


def enumerate_bad_triples(universe) -> BadTripleOracleInstance:
    words = tuple(universe)
    if len(set(w.string for w in words)) != len(words):
        raise ValueError("universe must be duplicate-free")
    bad = frozenset(
        (i, j, k)
        for i, j, k in itertools.combinations(range(len(words)), 3)
        if not is_trifferent_triple(words[i], words[j], words[k])
    )
    return BadTripleOracleInstance(universe=words, bad_triples=bad)


def oracle_max(instance: BadTripleOracleInstance, cap: int = DEFAULT_ORACLE_CAP) -> int:
    """Maximum independent set size in the bad-triple hypergraph, by full recursion.

    No bounding, no symmetry breaking, no shared state with the search engine:
    every triple-free subset is visited.  Only usable on small universes.
    """
    m = len(instance.universe)
    if m > cap:
        raise ValueError(f"oracle universe size {m} exceeds cap {cap}")
    bad = instance.bad_triples
    best = 0

    def extend(chosen: list[int], start: int) -> None:
        nonlocal best
        if len(chosen) > best:
            best = len(chosen)
        for c in range(start, m):
            ok = True
            for ai in range(len(chosen)):
                a = chosen[ai]
                for bi in range(ai + 1, len(chosen)):
                    if (a, chosen[bi], c) in bad:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                chosen.append(c)
                extend(chosen, c + 1)
                chosen.pop()

    extend([], 0)
    return best


@dataclass(frozen=True)
class SearchCertificate:
    """Outcome of one exact search run.

    status is "optimal" when the tree was exhausted, "lower-bound" when the
    node budget ran out first.  best_code is the lexicographically smallest
    optimum for completed runs.
    """

    n: int
    r: int | None
    best_size: int
    best_code: Code
    status: str
    nodes_explored: int
    oracle_checked: bool
    config_hash: str


def _config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True).encode("ascii")
    return hashlib.sha256(blob).hexdigest()[:16]


def _pair_compat_masks(universe: list[Codeword]) -> list[list[int]]:
    """compat[i][j] = bitmask of w such that the triple (i, j, w) is trifferent.

    Positions i and j themselves are never set (a triple needs distinct words).
    """
    m = len(universe)
    U = np.stack(
        [np.frombuffer(w.string.encode("ascii"), dtype=np.uint8) for w in universe]
    )
    compat: list[list[int]] = [[0] * m for _ in range(m)]
    for i in range(m):
        ui = U[i]
        for j in range(i + 1, m):
            cols = np.nonzero(ui != U[j])[0]
            sub = U[:, cols]
            ok = ((sub != ui[cols]) & (sub != U[j, cols])).any(axis=1)
            mask = int.from_bytes(
                np.packbits(ok, bitorder="little").tobytes(), "little"
            )
            compat[i][j] = mask
            compat[j][i] = mask
    return compat


def _branch_and_bound(
    universe: list[Codeword],
    symmetry: bool,
    bound: str,
    budget: int | None,
):
    """Returns (best_size, best_indices, nodes, completed)."""
    m = len(universe)
    if m == 0:
        return 0, [], 0, True
    compat = _pair_compat_masks(universe)

    support_of = None
    used: dict = {}
    if bound == "support":
        keys = {}
        support_of = []
        for w in universe:
            key = w.two_locations()
            keys.setdefault(key, len(keys))
            support_of.append(keys[key])
        used = {sid: 0 for sid in range(len(keys))}
    elif bound != "size":
        raise ValueError(f"unknown bound rule {bound!r}")

    best_size = 0
    best: list[int] = []
    nodes = 0
    exhausted = False

    def support_bound(pool: int) -> int:
        # every exact 2-location set admits at most 2 codewords in total
        counts: dict = {}
        p = pool
        while p:
            lsb = p & -p
            w = lsb.bit_length() - 1
            p ^= lsb
            sid = support_of[w]
            counts[sid] = counts.get(sid, 0) + 1
        return sum(min(2 - used[sid], c) for sid, c in counts.items())

    def rec(chosen: list[int], pool: int) -> None:
        nonlocal best_size, best, nodes, exhausted
        nodes += 1
        if budget is not None and nodes > budget:
            exhausted = True
            return
        if len(chosen) > best_size:
            best_size = len(chosen)
            best = chosen.copy()
        rem = pool
        while rem:
            if len(chosen) + rem.bit_count() <= best_size:
                break
            lsb = rem & -rem
            c = lsb.bit_length() - 1
            rem ^= lsb
            new_pool = rem
            for x in chosen:
                new_pool &= compat[x][c]
                if not new_pool:
                    break
            if bound == "support":
                slack = support_bound(new_pool)
            else:
                slack = new_pool.bit_count()
            if len(chosen) + 1 + slack > best_size:
                chosen.append(c)
                if support_of is not None:
                    used[support_of[c]] += 1
                rec(chosen, new_pool)
                if support_of is not None:
                    used[support_of[c]] -= 1
                chosen.pop()
            if exhausted:
                return

    full = (1 << m) - 1
    if symmetry:
        if support_of is not None:
            used[support_of[0]] += 1
        rec([0], full & ~1)
    else:
        rec([], full)
    return best_size, best, nodes, not exhausted


def _certify(
    universe: list[Codeword],
    n: int,
    r: int | None,
    symmetry: bool,
    bound: str,
    budget: int | None,
    oracle_check: bool,
    oracle_cap: int,
    config: dict,
) -> SearchCertificate:
    best_size, best, nodes, completed = _branch_and_bound(
        universe, symmetry, bound, budget
    )
    oracle_checked = False
    if oracle_check:
        instance = enumerate_bad_triples(universe)
        oracle_size = oracle_max(instance, cap=oracle_cap)
        if completed and oracle_size != best_size:
            raise RuntimeError(
                f"oracle disagrees with search: {oracle_size} vs {best_size}"
            )
        if not completed and best_size > oracle_size:
            raise RuntimeError("budgeted search exceeded the oracle optimum")
        oracle_checked = True
    code = Code(n, tuple(universe[i] for i in best))
    return SearchCertificate(
        n=n,
        r=r,
        best_size=best_size,
        best_code=code,
        status=OPTIMAL if completed else LOWER_BOUND,
        nodes_explored=nodes,
        oracle_checked=oracle_checked,
        config_hash=_config_hash(config),
    )


def max_trifferent(
    n: int,
    budget: int | None = None,
    cap: int = DEFAULT_N_CAP,
    symmetry: bool = True,
    bound: str = "size",
    oracle_check: bool = False,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> SearchCertificate:
    """Exact maximum trifferent code over all of {0,1,2}^n.

    With symmetry on, the first codeword is pinned to the all-zeros word:
    per-coordinate symbol permutations act transitively on words and preserve
    trifference, and the all-zeros word is the lexicographic minimum, so the
    lexicographically smallest optimum survives the restriction.  Raise cap
    explicitly to search beyond n = 4.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise ValueError(
            f"n={n} exceeds the search cap {cap}; pass a larger cap explicitly"
        )
    universe = full_universe(n)
    config = {
        "kind": "max",
        "n": n,
        "budget": budget,
        "symmetry": symmetry,
        "bound": bound,
        "oracle": oracle_check,
        "universe": len(universe),
    }
    return _certify(
        universe, n, None, symmetry, bound, budget, oracle_check, oracle_cap, config
    )


def max_r_bounded(
    n: int,
    r: int,
    budget: int | None = None,
    universe_cap: int = DEFAULT_UNIVERSE_CAP,
    symmetry: bool = True,
    bound: str = "support",
    oracle_check: bool = False,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> SearchCertificate:
    """Exact maximum trifferent code among words with exactly r twos.

    r = 0 leaves a binary universe where no triple is ever trifferent, so the
    answer is 2 immediately; r = n leaves the single all-twos word.  The
    symmetry pin is the lexicographic minimum of the layer, justified by
    coordinate permutations combined with 0/1 swaps.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not 0 <= r <= n:
        raise ValueError(f"r must lie in [0, {n}], got {r}")
    config = {
        "kind": "max-r",
        "n": n,
        "r": r,
        "budget": budget,
        "symmetry": symmetry,
        "bound": bound,
        "oracle": oracle_check,
    }
    if r == 0:
        # binary words never give a coordinate all three symbols, so any two
        # distinct words are optimal and no search is needed
        words = (
            Codeword.from_string("0" * n),
            Codeword.from_string("0" * (n - 1) + "1"),
        )
        oracle_checked = False
        if oracle_check:
            oracle_size = oracle_max(
                enumerate_bad_triples(a_r_universe(n, 0)), cap=oracle_cap
            )
            if oracle_size != 2:
                raise RuntimeError("oracle disagrees on the binary layer")
            oracle_checked = True
        return SearchCertificate(
            n=n,
            r=0,
            best_size=2,
            best_code=Code(n, words),
            status=OPTIMAL,
            nodes_explored=0,
            oracle_checked=oracle_checked,
            config_hash=_config_hash(dict(config, universe=2**n)),
        )
    if r == n:
        universe = [Codeword.from_string("2" * n)]
        oracle_checked = False
        if oracle_check:
            if oracle_max(enumerate_bad_triples(universe), cap=oracle_cap) != 1:
                raise RuntimeError("oracle disagrees on the all-twos layer")
            oracle_checked = True
        return SearchCertificate(
            n=n,
            r=n,
            best_size=1,
            best_code=Code(n, tuple(universe)),
            status=OPTIMAL,
            nodes_explored=0,
            oracle_checked=oracle_checked,
            config_hash=_config_hash(dict(config, universe=1)),
        )
    universe = a_r_universe(n, r)
    if len(universe) > universe_cap:
        raise ValueError(
            f"universe size {len(universe)} exceeds cap {universe_cap}; "
            "pass a larger universe_cap explicitly"
        )
    config["universe"] = len(universe)
    return _certify(
        universe, n, r, symmetry, bound, budget, oracle_check, oracle_cap, config
    )


def certificate_to_json(cert: SearchCertificate) -> dict:
    return {
        "schema": 1,
        "n": cert.n,
        "r": cert.r,
        "best_size": cert.best_size,
        "status": cert.status,
        "nodes_explored": cert.nodes_explored,
        "oracle_checked": cert.oracle_checked,
        "config_hash": cert.config_hash,
        "best_code_triff": format_triff(cert.best_code),
    }


# ---------------------------------------------------------------------------
# Results table: exact sizes accumulated across runs, consumed by bounds.
# Keys are (n, r) with r None for the unrestricted maximum.
# ---------------------------------------------------------------------------


def load_results_table(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if data.get("schema") != 1:
        raise ValueError("unsupported results table schema")
    table = {}
    for entry in data["entries"]:
        r = entry["r"]
        table[(entry["n"], r)] = entry["size"]
    return table


def save_results_table(path, table: dict) -> None:
    entries = [
        {"n": n, "r": r, "size": size, "status": OPTIMAL}
        for (n, r), size in sorted(
            table.items(), key=lambda kv: (kv[0][0], -1 if kv[0][1] is None else kv[0][1])
        )
    ]
    payload = {"schema": 1, "entries": entries}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def record_certificate(table: dict, cert: SearchCertificate) -> None:
    """Insert an optimal certificate into the table; budgeted runs are skipped."""
    if cert.status != OPTIMAL:
        return
    key = (cert.n, cert.r)
    if key in table and table[key] != cert.best_size:
        raise ValueError(
            f"conflicting exact value for {key}: {table[key]} vs {cert.best_size}"
        )
    table[key] = cert.best_size
