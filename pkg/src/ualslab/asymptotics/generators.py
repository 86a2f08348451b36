"""Sequence generators: rules (i, n) -> FinVec in a fixed ambient space."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from ..core import DYADIC, NATURAL, FinVec
from ..spaces.james import james_example_pair
from .levelblock import LevelBlockFamily, build_level_block_family
from .oracles import JAMES, JT, Oracle, lp_oracle


@dataclass
class SequenceGenerator:
    name: str
    l: int
    oracle: Oracle
    rule: Callable[[int, int], FinVec]
    normalized: bool = False
    n_max: int | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __call__(self, i, n) -> FinVec:
        key = (i, n)
        if key not in self._cache:
            if not 1 <= i <= self.l:
                raise IndexError(f"sequence index {i} outside 1..{self.l}")
            if self.n_max is not None and not 1 <= n <= self.n_max:
                raise IndexError(f"{self.name} only provides n in 1..{self.n_max}")
            v = self.rule(i, n)
            if v.scheme != self.oracle.scheme:
                raise ValueError(f"generator {self.name} produced a vector over {v.scheme.kind}, "
                                 f"ambient space is {self.oracle.scheme.kind}")
            self._cache[key] = v
        return self._cache[key]

    def check_normalized(self, pairs, tol=1e-12):
        """Largest deviation of ||x|| from 1 over the given (i, n) pairs."""
        worst = 0.0
        for i, n in pairs:
            v = self.oracle(self(i, n))
            if v.exact:
                if v.sq != 1:
                    worst = max(worst, abs(float(v) - 1.0) or 1e-300)
            else:
                worst = max(worst, abs(float(v) - 1.0))
        return worst <= tol, worst


def _pos(l, i, n):
    return l * (n - 1) + i


def lp_basis(p, l):
    """x^i_n = e_{l(n-1)+i} in l_p."""
    return SequenceGenerator(f"lp_basis(p={p},l={l})", l, lp_oracle(p),
                             lambda i, n: FinVec(NATURAL, {_pos(l, i, n): 1}), normalized=True)


def lp_blocks(p, l, size=2):
    """Disjoint consecutive blocks of equal coefficients; exact unit norm for p in {1, 2}."""
    if p == 1:
        c = Fraction(1, size)
    elif p == 2:
        r = int(round(size ** 0.5))
        if r * r != size:
            raise ValueError("l2 blocks need a square block size for exact normalization")
        c = Fraction(1, r)
    else:
        c = Fraction(1)

    def rule(i, n):
        start = (_pos(l, i, n) - 1) * size + 1
        return FinVec(NATURAL, {start + t: c for t in range(size)})

    return SequenceGenerator(f"lp_blocks(p={p},l={l},size={size})", l, lp_oracle(p), rule,
                             normalized=p in (1, 2))


def james_pair():
    """x^1_n = e_{2n} + e_1, x^2_n = e_{2n+1} - e_1 in J."""
    table = {}

    def rule(i, n):
        if (i, n) not in table:
            table.update(james_example_pair(max(n, 1)))
        return table[(i, n)]

    return SequenceGenerator("james_pair", 2, JAMES, rule)


def jt_nodes(l, kind="antichain"):
    """Unit vectors at JT nodes: an antichain (1^(m-1)0) or a single branch (0^m)."""
    if kind == "antichain":
        node = lambda m: "1" * (m - 1) + "0"
    elif kind == "branch":
        node = lambda m: "0" * m
    else:
        raise ValueError(f"unknown node layout {kind!r}")
    return SequenceGenerator(f"jt_nodes({kind},l={l})", l, JT,
                             lambda i, n: FinVec(DYADIC, {node(_pos(l, i, n)): 1}), normalized=True)


def jt_level_blocks(fam: LevelBlockFamily | None = None, l=2, n_bands=5, seed=0):
    """x^i_n = i-th vector of the n-th set of a level block family."""
    if fam is None:
        fam = build_level_block_family(2 * n_bands + 1, n_bands, l, seed=seed)
    width = len(fam.F[0])
    if any(len(fs) != width for fs in fam.F):
        raise ValueError("level block generator needs the same number of vectors per band")
    return SequenceGenerator(f"jt_level_blocks(l={width},bands={fam.n})", width, JT,
                             lambda i, n: fam.F[n - 1][i - 1], normalized=True, n_max=fam.n)


def from_lists(vectors, oracle: Oracle, name="user"):
    """vectors[i-1][n-1] is x^i_n."""
    l = len(vectors)
    n_max = min(len(v) for v in vectors)
    return SequenceGenerator(name, l, oracle, lambda i, n: vectors[i - 1][n - 1], n_max=n_max)


def builtin(name, l=2, p=2, **kw):
    """Look up a built-in generator by CLI name."""
    if name == "lp":
        return lp_basis(p, l)
    if name == "lp-blocks":
        return lp_blocks(p, l, kw.get("size", 2 if p == 1 else 4))
    if name == "james-pair":
        return james_pair()
    if name == "jt-antichain":
        return jt_nodes(l, "antichain")
    if name == "jt-branch":
        return jt_nodes(l, "branch")
    if name == "jt-level":
        return jt_level_blocks(l=l, n_bands=kw.get("n_bands", 5), seed=kw.get("seed", 0))
    raise KeyError(f"unknown generator {name!r}")


BUILTIN_NAMES = ("lp", "lp-blocks", "james-pair", "jt-antichain", "jt-branch", "jt-level")
