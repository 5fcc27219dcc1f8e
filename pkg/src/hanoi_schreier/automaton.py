"""Tree words and the move generators of the Hanoi Towers group.

A word ``x_1 x_2 ... x_n`` over ``{0, ..., k-1}`` encodes the configuration
of ``n`` disks on ``k`` pegs in which disk ``i`` sits on peg ``x_i``.  The
generator ``a_(ij)`` moves the smallest disk found on peg ``i`` or peg ``j``
to the other peg, i.e. it flips the leftmost letter in ``{i, j}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Sequence

__all__ = [
    "Word",
    "MoveLabel",
    "apply_move",
    "is_fixed",
    "move_labels",
    "all_words",
    "describe_configuration",
]

# k = 3 shorthand: a = (01), b = (02), c = (12)
_K3_NAMES = {(0, 1): "a", (0, 2): "b", (1, 2): "c"}


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...]
    k: int = 3

    def __post_init__(self) -> None:
        if self.k < 3:
            raise ValueError(f"alphabet size must be >= 3, got {self.k}")
        letters = tuple(int(x) for x in self.letters)
        for x in letters:
            if not 0 <= x < self.k:
                raise ValueError(f"letter {x} outside alphabet [0, {self.k - 1}]")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def parse(cls, text: str, k: int = 3) -> Word:
        """Inverse of ``str``: digits such as ``"0120"``, or comma-separated
        letters when ``k > 10``."""
        if k > 10:
            parts = text.split(",") if text else []
            if not all(p.isdigit() for p in parts):
                raise ValueError(f"not a comma-separated word: {text!r}")
            return cls(tuple(int(p) for p in parts), k)
        if not all(ch.isdigit() for ch in text):
            raise ValueError(f"not a digit string: {text!r}")
        return cls(tuple(int(ch) for ch in text), k)

    @classmethod
    def constant(cls, letter: int, n: int, k: int = 3) -> Word:
        return cls((letter,) * n, k)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if self.k <= 10:
            return "".join(map(str, self.letters))
        return ",".join(map(str, self.letters))

    def index(self) -> int:
        """Base-k value with the first letter most significant."""
        idx = 0
        for x in self.letters:
            idx = idx * self.k + x
        return idx

    @classmethod
    def from_index(cls, idx: int, n: int, k: int = 3) -> Word:
        if not 0 <= idx < k**n:
            raise ValueError(f"index {idx} out of range for k={k}, n={n}")
        letters = []
        for _ in range(n):
            idx, r = divmod(idx, k)
            letters.append(r)
        return cls(tuple(reversed(letters)), k)


@dataclass(frozen=True, order=True)
class MoveLabel:
    """Unordered peg pair ``{i, j}``, stored with ``i < j``."""

    i: int
    j: int

    def __post_init__(self) -> None:
        i, j = int(self.i), int(self.j)
        if i == j:
            raise ValueError("a move needs two distinct pegs")
        if i < 0 or j < 0:
            raise ValueError(f"negative peg index in ({i} {j})")
        if i > j:
            i, j = j, i
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "j", j)

    def check(self, k: int) -> None:
        if self.j >= k:
            raise ValueError(f"move ({self.i} {self.j}) uses a peg outside [0, {k - 1}]")

    def name(self, k: int) -> str:
        """``a``/``b``/``c`` for three pegs, ``(i j)`` otherwise."""
        if k == 3:
            return _K3_NAMES[(self.i, self.j)]
        return f"({self.i} {self.j})"

    @classmethod
    def from_name(cls, name: str) -> MoveLabel:
        if name in ("a", "b", "c"):
            return cls(*{v: p for p, v in _K3_NAMES.items()}[name])
        inner = name.strip().strip("()").split()
        if len(inner) != 2:
            raise ValueError(f"cannot parse move label {name!r}")
        return cls(int(inner[0]), int(inner[1]))


def move_labels(k: int) -> list[MoveLabel]:
    """All ``k(k-1)/2`` generators in lexicographic order of ``(i, j)``."""
    if k < 3:
        raise ValueError(f"alphabet size must be >= 3, got {k}")
    return [MoveLabel(i, j) for i, j in combinations(range(k), 2)]


def _first_hit(w: Word, m: MoveLabel) -> int:
    m.check(w.k)
    for pos, x in enumerate(w.letters):
        if x == m.i or x == m.j:
            return pos
    return -1


def apply_move(w: Word, m: MoveLabel) -> Word:
    pos = _first_hit(w, m)
    if pos < 0:
        return w
    letters = list(w.letters)
    letters[pos] = m.j if letters[pos] == m.i else m.i
    return Word(tuple(letters), w.k)


def is_fixed(w: Word, m: MoveLabel) -> bool:
    """True iff both pegs of ``m`` are empty, so the move does nothing."""
    return _first_hit(w, m) < 0


def all_words(n: int, k: int = 3) -> Iterator[Word]:
    """Words of length ``n`` in vertex-index order."""
    for letters in product(range(k), repeat=n):
        yield Word(letters, k)


def describe_configuration(w: Word | Sequence[int], k: int = 3) -> dict:
    """Disk placement encoded by ``w``.

    Returns ``{"disks": [(disk, peg), ...], "pegs": {peg: [disks bottom to top]}}``
    with disks numbered from 1 (the smallest).
    """
    if not isinstance(w, Word):
        w = Word(tuple(w), k)
    disks = [(d + 1, peg) for d, peg in enumerate(w.letters)]
    pegs: dict[int, list[int]] = {p: [] for p in range(w.k)}
    for disk, peg in reversed(disks):
        pegs[peg].append(disk)
    return {"disks": disks, "pegs": pegs}


def format_configuration(w: Word) -> str:
    desc = describe_configuration(w)
    if not desc["disks"]:
        return "no disks"
    lines = [", ".join(f"disk{d}->peg{p}" for d, p in desc["disks"])]
    for peg, stack in desc["pegs"].items():
        lines.append(f"peg {peg}: " + (" ".join(map(str, stack)) if stack else "-"))
    return "\n".join(lines)
