"""Exact decomposition oracle via Kazhdan-Lusztig polynomials.

Multisegments with a fixed support are encoded as maximal-length double
coset representatives in a symmetric group; the change of basis between
standard modules and irreducibles is given by KL polynomial values at 1
between those permutations.  The encoding places segment multiplicities
in the diagonal-and-above blocks of a 0-1 block matrix and "segment
continues" counts on the subdiagonal, then picks the longest permutation
with those block counts.

The KL engine memoizes aggressively and persists values to a small
checksummed cache file, since deep symmetric-group recursions dominate
the runtime.
"""

from __future__ import annotations

import os
import zlib
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, ResourceBoundError, UsageError
from .ring import Basis, RingElement
from .segments import (
    Multisegment,
    Segment,
    SupportVector,
    multisegments_with_support,
    precedes,
    support,
)

__all__ = [
    "KLPolynomial",
    "TransitionMatrix",
    "KLOracle",
    "bruhat_leq",
    "inversions",
    "move_neighbors_up",
    "move_filter_above",
]

Perm = tuple[int, ...]  # one-line notation, images of 1..n

DEFAULT_SUPPORT_BOUND = 8
CACHE_ENV_VAR = "MULTISEG_CACHE_DIR"
CACHE_VERSION = "kl-v1"


@dataclass(frozen=True)
class KLPolynomial:
    """Coefficients in ascending powers of q."""

    coefficients: tuple[int, ...]

    def __call__(self, value: int) -> int:
        return sum(c * value**k for k, c in enumerate(self.coefficients))

    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        parts = []
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            parts.append(f"{c}" if k == 0 else (f"q^{k}" if c == 1 else f"{c}*q^{k}"))
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class TransitionMatrix:
    """Multiplicities of irreducibles in standard modules, one support class."""

    support: SupportVector
    index: tuple[Multisegment, ...]
    entries: tuple[tuple[int, ...], ...]  # entries[m][n] = m(L(n), std(m))


# ---------------------------------------------------------------------------
# permutation basics


def inversions(w: Perm) -> int:
    return sum(
        1 for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j]
    )


def _rank_matrix(w: Perm) -> tuple[tuple[int, ...], ...]:
    """R[i][j] = #{t <= i : w(t) <= j}, 1-based indices into a padded table."""
    n = len(w)
    table = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        row_prev = table[i - 1]
        row = table[i]
        wi = w[i - 1]
        for j in range(1, n + 1):
            row[j] = row_prev[j] + (1 if wi <= j else 0)
    return tuple(tuple(r) for r in table)


def bruhat_leq(u: Perm, v: Perm) -> bool:
    """Standard Bruhat order via rank-matrix dominance."""
    if len(u) != len(v):
        raise UsageError("Bruhat comparison requires equal degrees")
    ru, rv = _rank_matrix(u), _rank_matrix(v)
    n = len(u)
    for i in range(1, n + 1):
        rui, rvi = ru[i], rv[i]
        for j in range(1, n + 1):
            if rui[j] < rvi[j]:
                return False
    return True


def _right_descents(w: Perm) -> list[int]:
    return [i for i in range(len(w) - 1) if w[i] > w[i + 1]]


def _swap(w: Perm, i: int, j: int) -> Perm:
    lst = list(w)
    lst[i], lst[j] = lst[j], lst[i]
    return tuple(lst)


def _coatoms(w: Perm) -> list[Perm]:
    """All y covered by w (length drops by exactly one)."""
    out = []
    n = len(w)
    for i in range(n):
        for j in range(i + 1, n):
            if w[i] > w[j] and not any(w[i] > w[k] > w[j] for k in range(i + 1, j)):
                out.append(_swap(w, i, j))
    return out


# ---------------------------------------------------------------------------
# polynomial helpers (dense ascending coefficient lists)


def _ptrim(p: list[int]) -> tuple[int, ...]:
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _padd(a: Sequence[int], b: Sequence[int], shift_b: int = 0, scale_b: int = 1) -> list[int]:
    out = list(a) + [0] * max(0, len(b) + shift_b - len(a))
    for k, c in enumerate(b):
        out[k + shift_b] += scale_b * c
    return out


def _pmul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return _ptrim(out)


# ---------------------------------------------------------------------------
# multisegment <-> permutation dictionary


def multiseg_to_perm(m: Multisegment, s: SupportVector) -> Perm:
    """The maximal-length block permutation encoding m inside its support
    class.  Blocks follow the sorted support points; entries above the
    diagonal count segments with those endpoints, the subdiagonal counts
    segments continuing across consecutive points."""
    if support(m) != s:
        raise DomainError(f"support of {m} does not match {s}")
    points = s.points()
    k = len(points)
    sizes = [s[x] for x in points]
    counts = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            counts[i][j] = m.multiplicity(Segment(points[i], points[j]))
    for i in range(1, k):
        if points[i] == points[i - 1] + 1:
            counts[i][i - 1] = sum(
                1 for d in m if d.begin <= points[i - 1] and points[i] <= d.end
            )
    for i in range(k):
        if sum(counts[i]) != sizes[i]:
            raise DomainError("inconsistent block counts (not a valid support)")
    # rows top to bottom take column blocks in descending order; inside a
    # column block, earlier requests take larger columns: the unique
    # longest permutation with these block counts
    col_start = [0] * k
    acc = 0
    for j in range(k):
        col_start[j] = acc
        acc += sizes[j]
    next_col = [col_start[j] + sizes[j] for j in range(k)]  # high-water mark
    images: list[int] = []
    for i in range(k):
        targets: list[int] = []
        for j in range(k - 1, -1, -1):
            targets.extend([j] * counts[i][j])
        for j in targets:
            next_col[j] -= 1
            images.append(next_col[j] + 1)  # 1-based
    return tuple(images)


def move_neighbors_up(m: Multisegment) -> set[Multisegment]:
    """All multisegments one elementary union/intersection move above m."""
    out: set[Multisegment] = set()
    segs = m.entries
    for i in range(len(segs)):
        for j in range(len(segs)):
            if i == j or not precedes(segs[i], segs[j]):
                continue
            d1, d2 = segs[i], segs[j]
            rest = [d for t, d in enumerate(segs) if t not in (i, j)]
            rest.append(Segment(d1.begin, d2.end))
            inter = Segment(d2.begin, d1.end)
            if not inter.is_trivial:
                rest.append(inter)
            out.add(Multisegment(tuple(rest)))
    return out


def move_filter_above(m: Multisegment) -> set[Multisegment]:
    """Closure of {m} under elementary moves (all more generic parameters)."""
    seen = {m}
    frontier = [m]
    while frontier:
        nxt = []
        for x in frontier:
            for y in move_neighbors_up(x):
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _genericity_key(m: Multisegment) -> tuple:
    # moves strictly increase the sum of squared lengths
    return (-sum(len(d) ** 2 for d in m), m.entries)


# ---------------------------------------------------------------------------
# the oracle


class KLOracle:
    """KL polynomials plus the standard/irreducible change of basis.

    One instance owns an in-memory memo table and, optionally, a
    persistent cache directory (overridable via MULTISEG_CACHE_DIR).
    """

    def __init__(
        self,
        cache_dir: str | None = None,
        support_bound: int | None = None,
    ):
        if cache_dir is None:
            cache_dir = os.environ.get(CACHE_ENV_VAR) or None
        self.cache_dir = cache_dir
        self.support_bound = (
            DEFAULT_SUPPORT_BOUND if support_bound is None else support_bound
        )
        self._kl_memo: dict[tuple[Perm, Perm], tuple[int, ...]] = {}
        self._r_memo: dict[tuple[Perm, Perm], tuple[int, ...]] = {}
        self._len_memo: dict[Perm, int] = {}
        self._loaded_degrees: set[int] = set()
        self._dirty: list[tuple[Perm, Perm, tuple[int, ...]]] = []
        self._std_memo: dict[Multisegment, dict[Multisegment, int]] = {}
        self._irr_memo: dict[Multisegment, dict[Multisegment, int]] = {}

    # -- lengths -----------------------------------------------------------

    def _length(self, w: Perm) -> int:
        if w not in self._len_memo:
            self._len_memo[w] = inversions(w)
        return self._len_memo[w]

    # -- persistent cache --------------------------------------------------

    def _cache_path(self, n: int) -> str | None:
        if not self.cache_dir:
            return None
        return os.path.join(self.cache_dir, f"{CACHE_VERSION}-S{n}.txt")

    def _load_cache(self, n: int) -> None:
        if n in self._loaded_degrees:
            return
        self._loaded_degrees.add(n)
        path = self._cache_path(n)
        if path is None or not os.path.exists(path):
            return
        with open(path, "r", encoding="ascii") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    u_s, v_s, c_s, crc_s = line.split(";")
                    payload = f"{u_s};{v_s};{c_s}"
                    if int(crc_s, 16) != zlib.crc32(payload.encode("ascii")):
                        raise ValueError("checksum mismatch")
                    u = tuple(int(t) for t in u_s.split(","))
                    v = tuple(int(t) for t in v_s.split(","))
                    coeffs = (
                        tuple(int(t) for t in c_s.split(",")) if c_s else ()
                    )
                except ValueError as exc:
                    raise UsageError(
                        f"corrupt KL cache {path}:{lineno}: {exc}"
                    ) from exc
                self._kl_memo[(u, v)] = coeffs

    def flush_cache(self) -> None:
        """Append newly computed values to the per-degree cache files."""
        if not self.cache_dir or not self._dirty:
            self._dirty.clear()
            return
        os.makedirs(self.cache_dir, exist_ok=True)
        by_degree: dict[int, list[tuple[Perm, Perm, tuple[int, ...]]]] = {}
        for u, v, coeffs in self._dirty:
            by_degree.setdefault(len(u), []).append((u, v, coeffs))
        for n, items in by_degree.items():
            path = self._cache_path(n)
            assert path is not None
            with open(path, "a", encoding="ascii") as fh:
                for u, v, coeffs in items:
                    u_s = ",".join(map(str, u))
                    v_s = ",".join(map(str, v))
                    c_s = ",".join(map(str, coeffs))
                    payload = f"{u_s};{v_s};{c_s}"
                    crc = zlib.crc32(payload.encode("ascii"))
                    fh.write(f"{payload};{crc:08x}\n")
        self._dirty.clear()

    # -- KL polynomials ----------------------------------------------------

    def kl_polynomial(self, u: Perm, v: Perm) -> KLPolynomial:
        if len(u) != len(v):
            raise UsageError("KL polynomial requires equal degrees")
        coeffs = self._kl(u, v)
        poly = KLPolynomial(coeffs)
        if coeffs:
            lu, lv = self._length(u), self._length(v)
            if any(c < 0 for c in coeffs) or (
                u != v and 2 * poly.degree() > lv - lu - 1
            ):
                from .errors import InvariantViolation

                raise InvariantViolation(
                    "KL polynomial violates positivity or degree bound",
                    repro={"u": list(u), "v": list(v), "coeffs": list(coeffs)},
                )
        return poly

    def _kl(self, u: Perm, v: Perm) -> tuple[int, ...]:
        if u == v:
            return (1,)
        # canonicalize: descents of v shared by u do not change the value
        u = self._normalize_u(u, v)
        if u == v:
            return (1,)
        key = (u, v)
        if key in self._kl_memo:
            return self._kl_memo[key]
        self._load_cache(len(u))
        if key in self._kl_memo:
            return self._kl_memo[key]
        if not bruhat_leq(u, v):
            result: tuple[int, ...] = ()
        elif self._length(v) - self._length(u) <= 2:
            result = (1,)
        else:
            result = self._kl_recurse(u, v)
        self._kl_memo[key] = result
        self._dirty.append((u, v, result))
        if len(self._dirty) >= 2000:
            self.flush_cache()
        return result

    def _normalize_u(self, u: Perm, v: Perm) -> Perm:
        changed = True
        while changed:
            changed = False
            for i in _right_descents(v):
                if u[i] > u[i + 1]:
                    u = _swap(u, i, i + 1)
                    changed = True
            ui, vi = _invert(u), _invert(v)
            for i in _right_descents(vi):  # left descents of v
                if ui[i] > ui[i + 1]:
                    ui = _swap(ui, i, i + 1)
                    changed = True
            u = _invert(ui)
        return u

    def _kl_recurse(self, u: Perm, v: Perm) -> tuple[int, ...]:
        s = _right_descents(v)[0]
        vp = _swap(v, s, s + 1)
        us = _swap(u, s, s + 1)
        # u is normalized, so us > u here
        acc = _padd(self._kl(u, vp), self._kl(us, vp), shift_b=1)
        lv = self._length(v)
        for z in self._mu_candidates(u, vp, s):
            pz = self._kl(z, vp)
            lz = self._length(z)
            gap = self._length(vp) - lz
            if gap % 2 == 0 or len(pz) - 1 != (gap - 1) // 2:
                continue
            mu = pz[-1]
            acc = _padd(acc, self._kl(u, z), shift_b=(lv - lz) // 2, scale_b=-mu)
        return _ptrim(acc)

    def _mu_candidates(self, u: Perm, vp: Perm, s: int) -> list[Perm]:
        """Elements z with u <= z < vp and zs < z (BFS down the interval)."""
        seen = {vp}
        frontier = [vp]
        out = []
        while frontier:
            nxt = []
            for y in frontier:
                for z in _coatoms(y):
                    if z in seen:
                        continue
                    seen.add(z)
                    if bruhat_leq(u, z):
                        nxt.append(z)
                        if z[s] > z[s + 1]:
                            out.append(z)
            frontier = nxt
        return out

    # -- R polynomials and the inversion-based independent computation ----

    def r_polynomial(self, u: Perm, v: Perm) -> tuple[int, ...]:
        if u == v:
            return (1,)
        key = (u, v)
        if key in self._r_memo:
            return self._r_memo[key]
        if not bruhat_leq(u, v):
            result: tuple[int, ...] = ()
        else:
            s = _right_descents(v)[0]
            vp = _swap(v, s, s + 1)
            us = _swap(u, s, s + 1)
            if u[s] > u[s + 1]:  # us < u
                result = self.r_polynomial(us, vp)
            else:
                result = _ptrim(
                    _padd(
                        list(_pmul((-1, 1), self.r_polynomial(u, vp))),
                        self.r_polynomial(us, vp),
                        shift_b=1,
                    )
                )
        self._r_memo[key] = result
        return result

    def kl_via_inversion(self, u: Perm, v: Perm) -> KLPolynomial:
        """Independent KL computation from R-polynomials and the
        triangular inversion identity; used to cross-check the engine."""
        if not bruhat_leq(u, v):
            return KLPolynomial(())
        interval = self._interval(u, v)
        by_len = sorted(interval, key=lambda z: -self._length(z))
        table: dict[Perm, tuple[int, ...]] = {v: (1,)}
        for z in by_len:
            if z == v:
                continue
            gap = self._length(v) - self._length(z)
            acc: list[int] = []
            for y in interval:
                if y == z or not bruhat_leq(z, y):
                    continue
                acc = _padd(acc, _pmul(self.r_polynomial(z, y), table[y]))
            # q^gap * P(1/q) - P = sum; P is the low-degree tail, negated
            cut = (gap - 1) // 2 if gap >= 1 else 0
            low = [-c for c in acc[: cut + 1]]
            table[z] = _ptrim(low)
        return KLPolynomial(table[u])

    def _interval(self, u: Perm, v: Perm) -> list[Perm]:
        seen = {v}
        frontier = [v]
        out = [v]
        while frontier:
            nxt = []
            for y in frontier:
                for z in _coatoms(y):
                    if z not in seen and bruhat_leq(u, z):
                        seen.add(z)
                        nxt.append(z)
                        out.append(z)
            frontier = nxt
        return out

    # -- change of basis ---------------------------------------------------

    def _check_bound(self, s: SupportVector) -> None:
        if s.total() > self.support_bound:
            raise ResourceBoundError(
                f"support size {s.total()} exceeds oracle bound {self.support_bound}"
            )

    def standard_decomposition(self, m: Multisegment) -> dict[Multisegment, int]:
        """Multiplicities of all irreducibles in the standard module of m."""
        self._check_bound(support(m))
        if m in self._std_memo:
            return dict(self._std_memo[m])
        parts = _support_components(m)
        if len(parts) > 1:
            result: dict[Multisegment, int] = {Multisegment.empty(): 1}
            for part in parts:
                part_dec = self._standard_connected(part)
                result = {
                    acc_m + n: acc_c * c
                    for acc_m, acc_c in result.items()
                    for n, c in part_dec.items()
                }
        else:
            result = self._standard_connected(m)
        self._std_memo[m] = dict(result)
        return result

    def _standard_connected(self, m: Multisegment) -> dict[Multisegment, int]:
        if not m:
            return {m: 1}
        shift, m0 = _normalize_translation(m)
        s = support(m0)
        w_m = multiseg_to_perm(m0, s)
        out: dict[Multisegment, int] = {}
        for n in move_filter_above(m0):
            w_n = multiseg_to_perm(n, s)
            value = self.kl_polynomial(w_m, w_n)(1)
            if value:
                out[_translate(n, shift)] = value
        return out

    def irreducible_to_standard(self, m: Multisegment) -> dict[Multisegment, int]:
        """The standard-basis expansion of one irreducible, by Moebius
        inversion over the move filter above m."""
        self._check_bound(support(m))
        if m in self._irr_memo:
            return dict(self._irr_memo[m])
        # [std(m)] = sum_n M[m][n] [L(n)]  =>  [L(m)] = [std(m)] - sum_{n>m} ...
        expansion: dict[Multisegment, int] = {m: 1}
        dec = self.standard_decomposition(m)
        for n, coeff in dec.items():
            if n == m:
                assert coeff == 1
                continue
            for p, c in self.irreducible_to_standard(n).items():
                expansion[p] = expansion.get(p, 0) - coeff * c
        expansion = {p: c for p, c in expansion.items() if c != 0}
        self._irr_memo[m] = dict(expansion)
        return expansion

    def transition_matrix(self, s: SupportVector) -> TransitionMatrix:
        """The full multiplicity matrix of one support class, indexed from
        most generic to most degenerate."""
        self._check_bound(s)
        index = sorted(multisegments_with_support(s), key=_genericity_key)
        pos = {m: i for i, m in enumerate(index)}
        entries = []
        for m in index:
            row = [0] * len(index)
            for n, value in self.standard_decomposition(m).items():
                row[pos[n]] = value
            entries.append(tuple(row))
        return TransitionMatrix(s, tuple(index), tuple(entries))

    def to_irreducible_basis(self, x: RingElement) -> RingElement:
        if x.basis != Basis.STANDARD:
            raise UsageError("to_irreducible_basis expects the standard basis")
        terms: dict[Multisegment, int] = {}
        for m, c in x.terms:
            for n, value in self.standard_decomposition(m).items():
                terms[n] = terms.get(n, 0) + c * value
        return RingElement(Basis.IRREDUCIBLE, tuple(terms.items()))

    def to_standard_basis(self, x: RingElement) -> RingElement:
        if x.basis != Basis.IRREDUCIBLE:
            raise UsageError("to_standard_basis expects the irreducible basis")
        terms: dict[Multisegment, int] = {}
        for m, c in x.terms:
            for n, value in self.irreducible_to_standard(m).items():
                terms[n] = terms.get(n, 0) + c * value
        return RingElement(Basis.STANDARD, tuple(terms.items()))

    def multiply_irreducibles(self, m1: Multisegment, m2: Multisegment) -> RingElement:
        """Exact decomposition of L(m1) x L(m2) in the irreducible basis."""
        self._check_bound(support(m1 + m2))
        x1 = self.irreducible_to_standard(m1)
        x2 = self.irreducible_to_standard(m2)
        product: dict[Multisegment, int] = {}
        for a, ca in x1.items():
            for b, cb in x2.items():
                key = a + b
                product[key] = product.get(key, 0) + ca * cb
        return self.to_irreducible_basis(
            RingElement(Basis.STANDARD, tuple(product.items()))
        )


def _invert(w: Perm) -> Perm:
    inv = [0] * len(w)
    for i, x in enumerate(w):
        inv[x - 1] = i + 1
    return tuple(inv)


def _support_components(m: Multisegment) -> list[Multisegment]:
    """Split by gaps in the support; no segment can cross a gap."""
    if not m:
        return [m]
    pts = support(m).points()
    runs: list[tuple[int, int]] = []
    start = prev = pts[0]
    for x in pts[1:]:
        if x != prev + 1:
            runs.append((start, prev))
            start = x
        prev = x
    runs.append((start, prev))
    if len(runs) == 1:
        return [m]
    return [
        Multisegment(tuple(d for d in m if lo <= d.begin <= hi))
        for lo, hi in runs
    ]


def _normalize_translation(m: Multisegment) -> tuple[int, Multisegment]:
    if not m:
        return 0, m
    shift = m.entries[0].begin
    return shift, _translate(m, -shift)


def _translate(m: Multisegment, offset: int) -> Multisegment:
    return Multisegment(
        tuple(Segment(d.begin + offset, d.end + offset) for d in m)
    )
