"""Code specifications: frozen structure, serialization, message assembly.

A code is the transform restricted to inputs whose frozen symbols satisfy
linear constraints on earlier symbols.  A static frozen symbol is pinned to
zero; a dynamic one equals the XOR of the listed earlier positions.

Text format (whitespace-separated, '#' comments allowed)::

    CVPS <n> <k>
    SEED <u64>
    <i>                     # static frozen symbol
    <i> : <j1> <j2> ...     # dynamic frozen symbol, all j < i

with exactly n-k frozen lines in ascending order of i.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["CodeSpec", "parse_codespec", "serialize_codespec"]


@dataclass(frozen=True)
class CodeSpec:
    """Block length, dimension, seed and frozen-symbol constraints."""

    n: int
    k: int
    seed: int
    frozen: tuple[tuple[int, tuple[int, ...]], ...]
    info_set: tuple[int, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        n, k = self.n, self.k
        if n < 2 or n & (n - 1):
            raise ValueError(f"n must be a power of two >= 2, got {n}")
        if not 1 <= k <= n:
            raise ValueError(f"k must be in 1..{n}, got {k}")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must fit in 64 bits")
        if len(self.frozen) != n - k:
            raise ValueError(f"expected {n - k} frozen symbols, got {len(self.frozen)}")
        last = -1
        for i, parts in self.frozen:
            if not last < i < n:
                raise ValueError(f"frozen index {i} out of order or out of range")
            last = i
            prev = -1
            for j in parts:
                if not prev < j < i:
                    raise ValueError(
                        f"constraint position {j} for frozen symbol {i} must be "
                        f"ascending and < {i}"
                    )
                prev = j
        frozen_ids = {i for i, _ in self.frozen}
        info = tuple(i for i in range(n) if i not in frozen_ids)
        object.__setattr__(self, "info_set", info)

    @property
    def frozen_set(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.frozen)

    @property
    def rate(self) -> float:
        return self.k / self.n

    def constraint(self, i: int) -> tuple[int, ...]:
        for idx, parts in self.frozen:
            if idx == i:
                return parts
        raise KeyError(f"symbol {i} is not frozen")

    def assemble(self, info_bits) -> np.ndarray:
        """Full input block(s) from info bits of shape (..., k)."""
        msg = np.asarray(info_bits, dtype=np.uint8)
        if msg.shape[-1] != self.k:
            raise ValueError(f"expected {self.k} info bits, got {msg.shape[-1]}")
        if not np.all(msg <= 1):
            raise ValueError("info bits must be 0/1")
        u = np.zeros(msg.shape[:-1] + (self.n,), dtype=np.uint8)
        u[..., list(self.info_set)] = msg
        for i, parts in self.frozen:
            if parts:
                u[..., i] = np.bitwise_xor.reduce(u[..., list(parts)], axis=-1)
        return u


def serialize_codespec(spec: CodeSpec) -> str:
    lines = [f"CVPS {spec.n} {spec.k}", f"SEED {spec.seed}"]
    for i, parts in spec.frozen:
        if parts:
            lines.append(f"{i} : " + " ".join(str(j) for j in parts))
        else:
            lines.append(str(i))
    return "\n".join(lines) + "\n"


def _fail(lineno: int, msg: str) -> ValueError:
    return ValueError(f"line {lineno}: {msg}")


def parse_codespec(text: str) -> CodeSpec:
    """Parse the text format, reporting 1-based line numbers on errors."""
    rows: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line))
    if len(rows) < 2:
        raise ValueError("file must start with CVPS and SEED lines")

    lineno, header = rows[0]
    fields = header.split()
    if len(fields) != 3 or fields[0] != "CVPS":
        raise _fail(lineno, f"expected 'CVPS <n> <k>', got {header!r}")
    try:
        n, k = int(fields[1]), int(fields[2])
    except ValueError:
        raise _fail(lineno, f"bad integers in {header!r}") from None

    lineno, seed_line = rows[1]
    fields = seed_line.split()
    if len(fields) != 2 or fields[0] != "SEED":
        raise _fail(lineno, f"expected 'SEED <u64>', got {seed_line!r}")
    try:
        seed = int(fields[1])
    except ValueError:
        raise _fail(lineno, f"bad seed in {seed_line!r}") from None
    if not 0 <= seed < 1 << 64:
        raise _fail(lineno, "seed must fit in 64 bits")

    frozen: list[tuple[int, tuple[int, ...]]] = []
    for lineno, line in rows[2:]:
        head, sep, tail = line.partition(":")
        try:
            i = int(head)
            parts = tuple(int(t) for t in tail.split()) if sep else ()
        except ValueError:
            raise _fail(lineno, f"bad frozen-symbol line {line!r}") from None
        if sep and not parts:
            raise _fail(lineno, "dynamic line must list at least one position")
        for j in parts:
            if j >= i:
                raise _fail(lineno, f"constraint position {j} must be < {i}")
        frozen.append((i, parts))

    try:
        return CodeSpec(n=n, k=k, seed=seed, frozen=tuple(frozen))
    except ValueError as exc:
        raise ValueError(f"inconsistent spec: {exc}") from None
