"""Combinatorial codes over ``n`` neurons.

Codewords are stored as integer bitmasks: neuron ``i`` (1-based, as printed)
lives in bit ``i - 1``.  All public types are immutable.
"""

from __future__ import annotations

import json
import re
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

MAX_NEURONS = 63


class CodeError(ValueError):
    """Malformed code input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MissingEmptyCodeword(CodeError):
    pass


def bit(i: int) -> int:
    return 1 << i


def bits(mask: int) -> Iterator[int]:
    """Yield the 0-based positions set in ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


def full_mask(n: int) -> int:
    return (1 << n) - 1


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def compress_mask(mask: int, keep: int) -> int:
    """Re-index ``mask`` onto the positions of ``keep``, order-preservingly."""
    out = 0
    for new, old in enumerate(bits(keep)):
        if mask >> old & 1:
            out |= 1 << new
    return out


def expand_mask(mask: int, keep: int) -> int:
    """Inverse of :func:`compress_mask`."""
    out = 0
    for new, old in enumerate(bits(keep)):
        if mask >> new & 1:
            out |= 1 << old
    return out


def mask_from_labels(labels: Iterable[int]) -> int:
    out = 0
    for label in labels:
        out |= 1 << (label - 1)
    return out


def labels(mask: int) -> list[int]:
    return [i + 1 for i in bits(mask)]


def format_set(mask: int, n: int | None = None) -> str:
    """Compact label string: ``123`` for small labels, ``1.3.10`` otherwise."""
    labs = labels(mask)
    if not labs:
        return "∅"
    if (n if n is not None else max(labs)) > 9:
        return ".".join(map(str, labs))
    return "".join(map(str, labs))


def format_braced(mask: int) -> str:
    return "{" + ",".join(map(str, labels(mask))) + "}"


@dataclass(frozen=True)
class Code:
    n: int
    words: frozenset[int]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_NEURONS:
            raise CodeError(f"n={self.n} outside supported range 0..{MAX_NEURONS}")
        limit = 1 << self.n
        for w in self.words:
            if not 0 <= w < limit:
                raise CodeError(f"codeword mask {w} uses neurons beyond n={self.n}")

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> Code:
        """Build from 1-based label collections."""
        words = set()
        for s in sets:
            s = list(s)
            for label in s:
                if not 1 <= label <= n:
                    raise CodeError(f"neuron {label} out of range 1..{n}")
            words.add(mask_from_labels(s))
        return cls(n, frozenset(words))

    @classmethod
    def from_strings(cls, n: int, words: Iterable[str]) -> Code:
        """``Code.from_strings(3, ["12", "1", ""])`` for the usual shorthand."""
        return cls.from_sets(n, (_parse_word(w, n, None) for w in words))

    @classmethod
    def power_set(cls, n: int) -> Code:
        return cls(n, frozenset(range(1 << n)))

    def __contains__(self, word: int) -> bool:
        return word in self.words

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.words))

    def __len__(self) -> int:
        return len(self.words)

    def neuron_support(self, i: int) -> frozenset[int]:
        """Codewords containing neuron ``i`` (0-based)."""
        return frozenset(w for w in self.words if w >> i & 1)

    def to_sets(self) -> list[list[int]]:
        return [labels(w) for w in sorted(self.words, key=lambda w: (popcount(w), w))]

    def __str__(self) -> str:
        ordered = sorted(self.words, key=lambda w: (-popcount(w), w))
        return "{" + ", ".join(format_set(w, self.n) for w in ordered) + "}"


@dataclass(frozen=True)
class Interval:
    """The interval ``[sigma, tau]`` of all sets between two neuron masks."""

    sigma: int
    tau: int

    def __post_init__(self):
        if self.sigma & ~self.tau:
            raise ValueError("interval requires sigma ⊆ tau")

    @property
    def rank(self) -> int:
        return popcount(self.tau & ~self.sigma)

    @property
    def free(self) -> int:
        return self.tau & ~self.sigma

    def members(self) -> Iterator[int]:
        for sub in submasks(self.free):
            yield self.sigma | sub

    def __str__(self) -> str:
        return f"[{format_braced(self.sigma)}, {format_braced(self.tau)}]"


@dataclass(frozen=True)
class NeuronMap:
    """How raw neuron labels were renumbered by :func:`canonicalize`.

    ``kept`` maps original label to new label; ``merged`` maps a discarded
    label to the original label whose behaviour it duplicated.
    """

    kept: dict[int, int] = field(default_factory=dict)
    dropped: frozenset[int] = frozenset()
    merged: dict[int, int] = field(default_factory=dict)

    @property
    def is_identity(self) -> bool:
        return not self.dropped and not self.merged and all(k == v for k, v in self.kept.items())

    def describe(self) -> list[str]:
        lines = []
        for old in sorted(self.dropped):
            lines.append(f"neuron {old}: dropped (appears in no codeword)")
        for old, rep in sorted(self.merged.items()):
            lines.append(f"neuron {old}: merged into {rep} (identical codewords)")
        for old, new in sorted(self.kept.items()):
            if old != new:
                lines.append(f"neuron {old}: relabeled {new}")
        return lines


# --- parsing -----------------------------------------------------------------

_N_LINE = re.compile(r"^\s*n\s*=\s*(\d+)\s*$")


def _parse_word(token: str, n: int, line: int | None) -> list[int]:
    token = token.strip()
    if not token or token == "∅":
        return []
    if "." in token:
        parts = token.split(".")
    elif n > 9:
        parts = [token]
    else:
        parts = list(token)
    out = []
    for part in parts:
        part = part.strip()
        if not part.isdigit():
            raise CodeError(f"malformed token {token!r}", line)
        label = int(part)
        if not 1 <= label <= n:
            raise CodeError(f"neuron index {label} out of range 1..{n} in {token!r}", line)
        out.append(label)
    return out


def parse_code(text: str, n: int | None = None) -> Code:
    """Parse a code from either the text or the structured (JSON) format.

    Text format::

        n=5
        123,45,12,1,2,4,5,;

    The codeword line may end with an optional ``;``; an empty entry is the
    empty codeword.  Labels above 9 require ``.`` separators (``1.3.10``).
    ``n`` may also be passed in directly when the text has no ``n=`` line.
    Lines starting with ``#`` are comments.  Conventions are not enforced.
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_structured(stripped)

    lines = [(no, ln) for no, ln in enumerate(text.splitlines(), 1) if ln.strip() and not ln.lstrip().startswith("#")]
    body = []
    for no, ln in lines:
        m = _N_LINE.match(ln)
        if m:
            if n is not None and int(m.group(1)) != n:
                raise CodeError(f"conflicting n: file says {m.group(1)}, caller says {n}", no)
            n = int(m.group(1))
        else:
            body.append((no, ln))
    if n is None:
        raise CodeError("n missing (expected a line 'n=<int>')")
    if len(body) > 1:
        raise CodeError("expected a single codeword line", body[1][0])
    if not body:
        raise CodeError("codeword line missing")
    no, ln = body[0]
    ln = ln.strip()
    ln = ln.removesuffix(";")
    if ";" in ln:
        raise CodeError("';' may only terminate the codeword list", no)
    return Code.from_sets(n, (_parse_word(tok, n, no) for tok in ln.split(",")))


def _parse_structured(text: str) -> Code:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CodeError(f"invalid structured code document: {exc.msg}", exc.lineno) from exc
    if not isinstance(doc, dict) or "n" not in doc:
        raise CodeError("n missing from structured code document")
    n = doc["n"]
    words = doc.get("codewords")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise CodeError(f"n must be a nonnegative integer, got {n!r}")
    if not isinstance(words, list) or not all(isinstance(w, list) for w in words):
        raise CodeError("codewords must be a list of integer lists")
    for w in words:
        for label in w:
            if not isinstance(label, int) or isinstance(label, bool):
                raise CodeError(f"malformed neuron label {label!r}")
    return Code.from_sets(n, words)


def format_code(code: Code, structured: bool = False) -> str:
    if structured:
        return json.dumps({"n": code.n, "codewords": code.to_sets()}) + "\n"
    ordered = sorted(code.words, key=lambda w: (-popcount(w), w))
    entries = ["" if w == 0 else format_set(w, code.n) for w in ordered]
    return f"n={code.n}\n" + ",".join(entries) + ";\n"


# --- operations --------------------------------------------------------------

def canonicalize(raw: Code) -> tuple[Code, NeuronMap]:
    """Enforce the standing conventions by dropping and merging neurons.

    Unused neurons are dropped; neurons firing in exactly the same codewords
    are merged into the lowest label; survivors are renumbered in order.
    Raises :class:`MissingEmptyCodeword` if the empty set is not a codeword.
    """
    if 0 not in raw.words:
        raise MissingEmptyCodeword("the empty set must be a codeword")
    dropped = set()
    merged = {}
    seen: dict[frozenset[int], int] = {}
    keep = 0
    for i in range(raw.n):
        support = raw.neuron_support(i)
        if not support:
            dropped.add(i + 1)
        elif support in seen:
            merged[i + 1] = seen[support] + 1
        else:
            seen[support] = i
            keep |= bit(i)
    kept = {old + 1: new + 1 for new, old in enumerate(bits(keep))}
    words = frozenset(compress_mask(w, keep) for w in raw.words)
    return Code(len(kept), words), NeuronMap(kept, frozenset(dropped), merged)


def delete_neurons(c: Code, s: int) -> Code:
    """Remove the neurons in mask ``s`` and renumber the rest in order."""
    keep = full_mask(c.n) & ~s
    return Code(popcount(keep), frozenset(compress_mask(w, keep) for w in c.words))


def interval_contained(c: Code, iv: Interval) -> bool:
    return all(w in c.words for w in iv.members())


def is_full_power_set_on(c: Code, s: int) -> bool:
    """Whether the restriction of ``c`` to the neurons in ``s`` is all of 2^s."""
    restricted = delete_neurons(c, full_mask(c.n) & ~s)
    return len(restricted.words) == 1 << restricted.n


def satisfies_conventions(c: Code) -> bool:
    if 0 not in c.words:
        return False
    supports = [c.neuron_support(i) for i in range(c.n)]
    return all(supports) and len(set(supports)) == c.n
