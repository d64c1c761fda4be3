"""Ternary codewords held as bitplanes, trifference checks, and code transforms.

A code C over {0,1,2} is trifferent when every triple of distinct codewords
has a coordinate at which the three words take all three symbols.  Everything
here is exact integer arithmetic on per-symbol bitmasks; the only floating
point lives in the bounds module.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from random import Random

import numpy as np

__all__ = [
    "Codeword",
    "Code",
    "VerificationResult",
    "ShiftSampleStats",
    "TriffParseError",
    "NotTrifferentError",
    "TRIFFERENT",
    "NOT_TRIFFERENT",
    "is_trifferent_triple",
    "naive_trifferent_triple",
    "verify_trifferent",
    "count_A_r",
    "add_codewords",
    "shift",
    "shift_density_sample",
    "prune",
    "project",
    "best_project",
    "support_multiplicities",
    "parse_triff",
    "format_triff",
    "read_triff",
    "write_triff",
]

TRIFFERENT = "trifferent"
NOT_TRIFFERENT = "not_trifferent"

# str.translate tables mapping a ternary string to the binary indicator
# string of one symbol plane.
_PLANE_TABLES = (
    str.maketrans("012", "100"),
    str.maketrans("012", "010"),
    str.maketrans("012", "001"),
)

_VALID_SYMBOLS = frozenset("012")


class TriffParseError(ValueError):
    """Malformed .triff input.  Carries the offending 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class NotTrifferentError(ValueError):
    """Raised when an operation requires a trifferent code but the input is not one."""


@dataclass(frozen=True)
class Codeword:
    """A length-n word over {0,1,2} stored as one bitmask per symbol.

    Bit i of mask_s is set iff coordinate i holds symbol s.  The three masks
    partition the coordinate set; this is validated at construction so that
    downstream mask arithmetic never has to re-check it.
    """

    n: int
    mask0: int
    mask1: int
    mask2: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("codeword length must be positive")
        if min(self.mask0, self.mask1, self.mask2) < 0:
            raise ValueError("bitplanes must be nonnegative")
        full = (1 << self.n) - 1
        if (self.mask0 | self.mask1 | self.mask2) != full or (
            self.mask0 + self.mask1 + self.mask2
        ) != full:
            # equality of OR and sum forces pairwise disjointness
            raise ValueError("bitplanes must partition the coordinate set")

    @classmethod
    def from_string(cls, s: str) -> "Codeword":
        if not s:
            raise ValueError("codeword string must be nonempty")
        if set(s) - _VALID_SYMBOLS:
            raise ValueError(f"invalid symbols in codeword {s!r}")
        rev = s[::-1]  # bit i of each mask is coordinate i (leftmost char)
        return cls(
            n=len(s),
            mask0=int(rev.translate(_PLANE_TABLES[0]), 2),
            mask1=int(rev.translate(_PLANE_TABLES[1]), 2),
            mask2=int(rev.translate(_PLANE_TABLES[2]), 2),
        )

    @classmethod
    def from_symbols(cls, symbols) -> "Codeword":
        return cls.from_string("".join(str(s) for s in symbols))

    @cached_property
    def string(self) -> str:
        chars = []
        for i in range(self.n):
            if (self.mask2 >> i) & 1:
                chars.append("2")
            elif (self.mask1 >> i) & 1:
                chars.append("1")
            else:
                chars.append("0")
        return "".join(chars)

    def __str__(self) -> str:
        return self.string

    def symbol(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise ValueError(f"coordinate {i} out of range for length {self.n}")
        return ((self.mask1 >> i) & 1) + 2 * ((self.mask2 >> i) & 1)

    def symbols(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.string)

    @property
    def count_twos(self) -> int:
        return self.mask2.bit_count()

    def two_locations(self) -> tuple[int, ...]:
        """Sorted coordinates where the word has symbol 2."""
        locs = []
        m = self.mask2
        while m:
            lsb = m & -m
            locs.append(lsb.bit_length() - 1)
            m ^= lsb
        return tuple(locs)


@dataclass(frozen=True)
class Code:
    """A duplicate-free set of equal-length codewords, stored lexicographically.

    r_bound is derived at construction: it is set to r exactly when every
    codeword has r twos, and is None otherwise (including the empty code).
    Comment lines (leading '#') survive .triff round trips.
    """

    n: int
    codewords: tuple[Codeword, ...]
    comments: tuple[str, ...] = ()
    r_bound: int | None = field(init=False, default=None)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("block length must be positive")
        words = sorted(self.codewords, key=lambda w: w.string)
        for w in words:
            if w.n != self.n:
                raise ValueError(
                    f"codeword {w} has length {w.n}, expected {self.n}"
                )
        for a, b in zip(words, words[1:]):
            if a == b:
                raise ValueError(f"duplicate codeword {a}")
        comments = tuple(self.comments)
        for c in comments:
            if not c.startswith("#"):
                raise ValueError("comment lines must start with '#'")
        object.__setattr__(self, "codewords", tuple(words))
        object.__setattr__(self, "comments", comments)
        two_counts = {w.count_twos for w in words}
        object.__setattr__(
            self, "r_bound", two_counts.pop() if len(two_counts) == 1 else None
        )

    @classmethod
    def from_strings(cls, strings, n: int | None = None, comments=()) -> "Code":
        words = [Codeword.from_string(s) for s in strings]
        if n is None:
            if not words:
                raise ValueError("cannot infer block length from an empty code")
            n = words[0].n
        return cls(n=n, codewords=tuple(words), comments=tuple(comments))

    def __len__(self) -> int:
        return len(self.codewords)

    def __iter__(self):
        return iter(self.codewords)

    def strings(self) -> tuple[str, ...]:
        return tuple(w.string for w in self.codewords)


@dataclass(frozen=True)
class VerificationResult:
    """Outcome of verify_trifferent; witness is the lex-smallest violating triple."""

    status: str
    witness: tuple[int, int, int] | None = None

    @property
    def ok(self) -> bool:
        return self.status == TRIFFERENT


def _check_triple_args(x: Codeword, y: Codeword, z: Codeword) -> None:
    if not (x.n == y.n == z.n):
        raise ValueError("codewords in a triple must share one length")
    if x == y or y == z or x == z:
        raise ValueError("triple check requires three distinct codewords")


def is_trifferent_triple(x: Codeword, y: Codeword, z: Codeword) -> bool:
    """True iff some coordinate sees all three symbols across x, y, z.

    Pure mask arithmetic: OR over the six symbol assignments of the
    coordinatewise AND of the matching bitplanes.
    """
    _check_triple_args(x, y, z)
    acc = (
        x.mask0 & ((y.mask1 & z.mask2) | (y.mask2 & z.mask1))
        | x.mask1 & ((y.mask0 & z.mask2) | (y.mask2 & z.mask0))
        | x.mask2 & ((y.mask0 & z.mask1) | (y.mask1 & z.mask0))
    )
    return acc != 0


def naive_trifferent_triple(x: Codeword, y: Codeword, z: Codeword) -> bool:
    """Reference check walking coordinates symbol by symbol.

    Kept deliberately independent of the bitplane path; the two must agree
    on every input.
    """
    _check_triple_args(x, y, z)
    return any(
        a != b and b != c and a != c
        for a, b, c in zip(x.string, y.string, z.string)
    )


def _symbol_matrix(code: Code) -> np.ndarray:
    rows = [np.frombuffer(w.string.encode("ascii"), dtype=np.uint8) for w in code]
    return np.stack(rows) - ord("0")


def _scan_pair_range(
    U: np.ndarray, i_lo: int, i_hi: int
) -> tuple[int, int, int] | None:
    """Lex-smallest violating triple (i, j, k) with i in [i_lo, i_hi), else None.

    A triple violates trifference iff no coordinate separates all three words
    pairwise, i.e. the AND of the three pairwise disagreement masks is zero.
    """
    m = U.shape[0]
    diff = np.packbits(U[:, None, :] != U[None, :, :], axis=2)
    for i in range(i_lo, min(i_hi, m - 2)):
        di = diff[i]
        for j in range(i + 1, m - 1):
            rows = di[j + 1 :] & diff[j, j + 1 :] & di[j]
            bad = ~rows.any(axis=1)
            if bad.any():
                k = j + 1 + int(np.argmax(bad))
                return (i, j, k)
    return None


def verify_trifferent(code: Code, workers: int = 1) -> VerificationResult:
    """Check every codeword triple; codes of size at most 2 pass vacuously.

    The scan precomputes pairwise disagreement masks, so each triple costs two
    word-ANDs; the witness, when present, is the lexicographically smallest
    violating index triple into the sorted codeword list regardless of the
    worker count.
    """
    m = len(code)
    if m <= 2:
        return VerificationResult(TRIFFERENT, None)
    U = _symbol_matrix(code)
    if workers <= 1:
        witness = _scan_pair_range(U, 0, m - 2)
    else:
        bounds = [round(t * (m - 2) / workers) for t in range(workers + 1)]
        chunks = [
            (U, lo, hi) for lo, hi in zip(bounds, bounds[1:]) if lo < hi
        ]
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            found = [w for w in pool.map(_scan_pair_range, *zip(*chunks)) if w]
        witness = min(found) if found else None
    if witness is None:
        return VerificationResult(TRIFFERENT, None)
    return VerificationResult(NOT_TRIFFERENT, witness)


def count_A_r(n: int, r: int) -> int:
    """Size of the layer of length-n words with exactly r twos: C(n,r) * 2^(n-r)."""
    if n < 1:
        raise ValueError("n must be positive")
    if not 0 <= r <= n:
        raise ValueError(f"r must lie in [0, {n}], got {r}")
    return math.comb(n, r) * 2 ** (n - r)


def add_codewords(x: Codeword, v: Codeword) -> Codeword:
    """Coordinatewise sum mod 3, expressed as bitplane shuffles."""
    if x.n != v.n:
        raise ValueError("length mismatch in codeword addition")
    return Codeword(
        n=x.n,
        mask0=(x.mask0 & v.mask0) | (x.mask1 & v.mask2) | (x.mask2 & v.mask1),
        mask1=(x.mask0 & v.mask1) | (x.mask1 & v.mask0) | (x.mask2 & v.mask2),
        mask2=(x.mask0 & v.mask2) | (x.mask1 & v.mask1) | (x.mask2 & v.mask0),
    )


def shift(code: Code, v: Codeword) -> Code:
    """Translate every codeword by v (mod 3).  Preserves size and trifference."""
    if v.n != code.n:
        raise ValueError("shift vector length must match the block length")
    return Code(code.n, tuple(add_codewords(x, v) for x in code))


def _shifted_two_count(x: Codeword, v: Codeword) -> int:
    # two-plane of (x + v) without building the shifted word
    return ((x.mask0 & v.mask2) | (x.mask1 & v.mask1) | (x.mask2 & v.mask0)).bit_count()


def _all_words(n: int):
    for tup in itertools.product("012", repeat=n):
        yield Codeword.from_string("".join(tup))


@dataclass(frozen=True)
class ShiftSampleStats:
    """Counts of |(C+v) ∩ A_r| over sampled (or all) shift vectors v.

    max_count is a certified lower bound on the largest r-bounded trifferent
    code of this length, because each intersection is itself one.
    """

    n: int
    r: int
    code_size: int
    trials: int
    seed: int | None
    exhaustive: bool
    mean_fraction: Fraction
    max_count: int
    expectation: Fraction

    @property
    def mean(self) -> float:
        return float(self.mean_fraction)


def shift_density_sample(
    code: Code,
    r: int,
    trials: int = 10000,
    seed: int | None = None,
    exhaustive: bool = False,
) -> ShiftSampleStats:
    """Sample shifts v and count codewords of C+v with exactly r twos.

    The exact expectation over a uniform v is count_A_r(n, r) * |C| / 3^n;
    exhaustive mode averages over all 3^n shifts and reproduces it exactly.
    Requires a trifferent input and, in sampling mode, an explicit seed.
    """
    n = code.n
    if not 0 <= r <= n:
        raise ValueError(f"r must lie in [0, {n}], got {r}")
    result = verify_trifferent(code)
    if not result.ok:
        raise NotTrifferentError(
            f"input is not trifferent (witness {result.witness})"
        )
    expectation = Fraction(count_A_r(n, r) * len(code), 3**n)
    if exhaustive:
        total = 0
        max_count = 0
        n_shifts = 3**n
        for v in _all_words(n):
            c = sum(1 for x in code if _shifted_two_count(x, v) == r)
            total += c
            max_count = max(max_count, c)
        return ShiftSampleStats(
            n=n,
            r=r,
            code_size=len(code),
            trials=n_shifts,
            seed=None,
            exhaustive=True,
            mean_fraction=Fraction(total, n_shifts),
            max_count=max_count,
            expectation=expectation,
        )
    if trials < 1:
        raise ValueError("trials must be positive")
    if seed is None:
        raise ValueError("sampling mode requires an explicit seed")
    rng = Random(seed)
    total = 0
    max_count = 0
    for _ in range(trials):
        v = Codeword.from_string("".join(rng.choices("012", k=n)))
        c = sum(1 for x in code if _shifted_two_count(x, v) == r)
        total += c
        max_count = max(max_count, c)
    return ShiftSampleStats(
        n=n,
        r=r,
        code_size=len(code),
        trials=trials,
        seed=seed,
        exhaustive=False,
        mean_fraction=Fraction(total, trials),
        max_count=max_count,
        expectation=expectation,
    )


def prune(code: Code) -> list[Code]:
    """Coordinate-by-coordinate pruning chain C_0 ⊇ C_1 ⊇ ... ⊇ C_n.

    Step k deletes every codeword whose symbol at coordinate k-1 occurs least
    often there (ties broken toward the smallest symbol), so each step keeps
    at least |C| - floor(|C|/3) codewords.  A trifferent input always ends
    with at most 2 codewords; ending larger proves the input was not
    trifferent and raises NotTrifferentError.
    """
    chain = [Code(code.n, code.codewords)]
    current = list(code.codewords)
    for coord in range(code.n):
        counts = [0, 0, 0]
        for w in current:
            counts[w.symbol(coord)] += 1
        least = counts.index(min(counts))  # index() takes the smallest symbol on ties
        current = [w for w in current if w.symbol(coord) != least]
        chain.append(Code(code.n, tuple(current)))
    if len(current) > 2:
        raise NotTrifferentError(
            f"pruning left {len(current)} codewords; a trifferent code ends with at most 2"
        )
    return chain


def project(code: Code, i: int) -> Code:
    """Keep codewords with symbol 2 at coordinate i, then delete coordinate i.

    The input must be exactly r-bounded for some r >= 1; the output is then
    (r-1)-bounded with block length n-1.
    """
    if code.r_bound is None:
        raise ValueError("projection requires an exactly r-bounded code")
    if code.r_bound == 0:
        raise ValueError("cannot project a 0-bounded code (no symbol 2 anywhere)")
    if code.n == 1:
        raise ValueError("cannot project a code of block length 1")
    if not 0 <= i < code.n:
        raise ValueError(f"coordinate {i} out of range for length {code.n}")
    low = (1 << i) - 1
    words = []
    for w in code:
        if not (w.mask2 >> i) & 1:
            continue
        words.append(
            Codeword(
                n=code.n - 1,
                mask0=(w.mask0 & low) | ((w.mask0 >> (i + 1)) << i),
                mask1=(w.mask1 & low) | ((w.mask1 >> (i + 1)) << i),
                mask2=(w.mask2 & low) | ((w.mask2 >> (i + 1)) << i),
            )
        )
    return Code(code.n - 1, tuple(words))


def best_project(code: Code) -> int:
    """Coordinate whose projection keeps the most codewords (smallest on ties).

    Summed over all coordinates the kept sizes equal r * |C|, so the best
    coordinate keeps at least r/n * |C| codewords.
    """
    if code.r_bound is None:
        raise ValueError("projection requires an exactly r-bounded code")
    if code.r_bound == 0:
        raise ValueError("cannot project a 0-bounded code (no symbol 2 anywhere)")
    counts = [0] * code.n
    for w in code:
        for i in w.two_locations():
            counts[i] += 1
    best = 0
    for i in range(1, code.n):
        if counts[i] > counts[best]:
            best = i
    return best


def support_multiplicities(code: Code) -> dict[tuple[int, ...], int]:
    """How many codewords share each exact set of 2-locations.

    In a trifferent code no value exceeds 2: three codewords with the same
    2-set would need a separating coordinate outside it, where only symbols
    0 and 1 remain.
    """
    out: dict[tuple[int, ...], int] = {}
    for w in code:
        key = w.two_locations()
        out[key] = out.get(key, 0) + 1
    return out


# ---------------------------------------------------------------------------
# .triff file format
#
#   n=<int>         first line, block length
#   r=<int>         optional, before any codeword: every word has exactly r twos
#   # ...           comment lines, preserved on round trip
#   <codeword>      one word over 012 per line, no duplicates
#
# A trailing newline is required.  Parse errors carry 1-based line numbers.
# ---------------------------------------------------------------------------


def format_triff(code: Code) -> str:
    lines = [f"n={code.n}"]
    if code.r_bound is not None:
        lines.append(f"r={code.r_bound}")
    lines.extend(code.comments)
    lines.extend(w.string for w in code)
    return "\n".join(lines) + "\n"


def parse_triff(text: str) -> Code:
    if not text:
        raise TriffParseError(1, "empty input")
    if not text.endswith("\n"):
        raise TriffParseError(text.count("\n") + 1, "missing trailing newline")
    lines = text.split("\n")[:-1]
    first = lines[0]
    if not first.startswith("n=") or not first[2:].isdigit():
        raise TriffParseError(1, "first line must be 'n=<int>'")
    n = int(first[2:])
    if n < 1:
        raise TriffParseError(1, "block length must be positive")
    r_declared: int | None = None
    comments: list[str] = []
    words: list[Codeword] = []
    seen: set[str] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        if line.startswith("#"):
            comments.append(line)
            continue
        if not line:
            raise TriffParseError(lineno, "blank line")
        if line.startswith("n="):
            raise TriffParseError(lineno, "duplicate n= line")
        if line.startswith("r="):
            if words:
                raise TriffParseError(lineno, "r= must precede all codewords")
            if r_declared is not None:
                raise TriffParseError(lineno, "duplicate r= line")
            if not line[2:].isdigit():
                raise TriffParseError(lineno, "r= must carry a nonnegative integer")
            r_declared = int(line[2:])
            if r_declared > n:
                raise TriffParseError(lineno, f"r={r_declared} exceeds block length {n}")
            continue
        if len(line) != n:
            raise TriffParseError(
                lineno, f"expected {n} symbols, got {len(line)}"
            )
        if set(line) - _VALID_SYMBOLS:
            raise TriffParseError(lineno, "codeword symbols must be 0, 1, or 2")
        if line in seen:
            raise TriffParseError(lineno, f"duplicate codeword {line}")
        seen.add(line)
        w = Codeword.from_string(line)
        if r_declared is not None and w.count_twos != r_declared:
            raise TriffParseError(
                lineno,
                f"codeword has {w.count_twos} twos but the file declares r={r_declared}",
            )
        words.append(w)
    return Code(n, tuple(words), comments=tuple(comments))


def read_triff(path) -> Code:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_triff(fh.read())


def write_triff(code: Code, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_triff(code))
