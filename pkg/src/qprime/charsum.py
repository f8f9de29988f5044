"""Jacobi-type symbols on ideal numbers, the multiplicative identity probe,
Hecke-type coefficients and character-sum oscillation measurements."""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Iterable

import gmpy2
import numpy as np

from .classfield import (
    ClassGroup,
    CompositionEntry,
    IdealClassRep,
    QElt,
    _elements_of_norm_upto,
    class_group,
)
from .sieve import Arith, arith, factorint, primes_upto

Vec = tuple[int, int]
Mat = tuple[tuple[int, int], tuple[int, int]]


# ---------------------------------------------------------------- symbols


def jacobi(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"Jacobi modulus must be odd and positive, got {n}")
    return int(gmpy2.jacobi(a, n))


def jacobi_ext(a: int, b: int) -> int:
    """(a/|b|), times -1 when a and b are both negative."""
    if b % 2 == 0:
        raise ValueError(f"modulus must be odd, got {b}")
    s = jacobi(a, abs(b))
    return -s if a < 0 and b < 0 else s


_I_POW = (1, 1j, -1, -1j)


def spin_symbol(z: Vec) -> complex:
    """i^((z1 - 1)/2) (z2/|z1|) for odd z1."""
    z1, z2 = z
    if z1 % 2 == 0:
        raise ValueError("spin symbol needs odd z1")
    return _I_POW[((z1 - 1) // 2) % 4] * jacobi(z2, abs(z1))


# ---------------------------------------------------------------- contexts


def _bil(M: Mat, x: Vec, y: Vec) -> int:
    return M[0][0] * x[0] * y[0] + M[0][1] * x[0] * y[1] + M[1][0] * x[1] * y[0] + M[1][1] * x[1] * y[1]


def _det(M: Mat) -> int:
    return M[0][0] * M[1][1] - M[0][1] * M[1][0]


def _lin(a: int, M: Mat, b: int, N: Mat) -> Mat:
    return tuple(tuple(a * M[i][j] + b * N[i][j] for j in range(2)) for i in range(2))  # type: ignore[return-value]


def _matmul(M: Mat, N: Mat) -> Mat:
    return tuple(tuple(sum(M[i][k] * N[k][j] for k in range(2)) for j in range(2)) for i in range(2))  # type: ignore[return-value]


def _transpose(M: Mat) -> Mat:
    return ((M[0][0], M[1][0]), (M[0][1], M[1][1]))


def _unimodular_inverse(M: Mat) -> Mat:
    d = _det(M)
    return ((M[1][1] * d, -M[0][1] * d), (-M[1][0] * d, M[0][0] * d))


def _rebase(basis: tuple[QElt, QElt], M: Mat) -> tuple[QElt, QElt]:
    """New basis w'_j = sum_i w_i M[i][j]."""
    w1, w2 = basis
    return (w1 * M[0][0] + w2 * M[1][0], w1 * M[0][1] + w2 * M[1][1])


def _norm_form(basis: tuple[QElt, QElt], ideal_norm: int) -> tuple[int, int, int]:
    w1, w2 = basis
    a = w1.norm() / ideal_norm
    c = w2.norm() / ideal_norm
    b = (w1 + w2).norm() / ideal_norm - a - c
    if any(t.denominator != 1 for t in (a, b, c)):
        raise ArithmeticError("norm form is not integral")
    return int(a), int(b), int(c)


@dataclass(frozen=True)
class SymbolContext:
    """Classes A, B with explicit bases and the composition data for A*B.

    w_A(x) w_B(y) = mu (R(x, y) gamma_1 + Q(x, y) gamma_2), and g is the
    quadratic form g(z) = Q(z_perp, z) on B-coordinates, where z_perp spans
    the solutions x of R(x, z) = 0. With R the dot product z_perp is
    (z2, -z1). g is a constant multiple of the norm form of B.
    """

    group: ClassGroup
    A: IdealClassRep
    B: IdealClassRep
    C_basis: tuple[QElt, QElt]
    entry: CompositionEntry
    dot: bool
    g_form: tuple[int, int, int]
    g_scale: int

    @property
    def disc(self) -> int:
        return self.group.field.disc_form

    def R(self, x: Vec, y: Vec) -> int:
        return _bil(self.entry.R, x, y)

    def Q(self, x: Vec, y: Vec) -> int:
        return _bil(self.entry.Q, x, y)

    def g(self, z: Vec) -> int:
        a, b, c = self.g_form
        return a * z[0] * z[0] + b * z[0] * z[1] + c * z[1] * z[1]

    def product(self, x: Vec, y: Vec) -> Vec:
        return self.entry.apply(x, y)


def _find_dot_combination(R: Mat, Q: Mat, bound: int = 12) -> tuple[int, int] | None:
    """Primitive (s, t) with det(s R + t Q) = +-1, smallest first."""
    cands = [(s, t) for s in range(-bound, bound + 1) for t in range(-bound, bound + 1) if math.gcd(s, t) == 1]
    cands.sort(key=lambda v: (abs(v[0]) + abs(v[1]), v))
    for s, t in cands:
        if abs(_det(_lin(s, R, t, Q))) == 1:
            return s, t
    return None


def symbol_context(disc: int, a_class: int = 0, b_class: int | None = None, dot: bool = True) -> SymbolContext:
    """Build the context for classes a_class, b_class of the given field.

    With dot=True the A and C bases are changed so that R is the dot product
    x1 y1 + x2 y2 when a suitable unimodular combination exists; otherwise the
    class-group bases are kept and dot is False.
    """
    G = class_group(disc)
    b_class = a_class if b_class is None else b_class
    A, B = G.classes[a_class], G.classes[b_class]
    T = G.table[(a_class, b_class)]
    C_basis = G.classes[T.target].basis
    made_dot = False
    if dot:
        st = _find_dot_combination(T.R, T.Q)
        if st is not None:
            s, t = st
            _, u, v = _xgcd(s, t)
            # [[s, t], [-v, u]] has det s u + t v = 1
            P: Mat = ((s, t), (-v, u))
            S = _lin(s, T.R, t, T.Q)
            Qn = _lin(-v, T.R, u, T.Q)
            MA = _transpose(_unimodular_inverse(S))
            newA = _rebase(A.basis, MA)
            A = IdealClassRep(A.index, _norm_form(newA, A.norm), newA, A.order)
            C_basis = _rebase(C_basis, _unimodular_inverse(P))
            R = _matmul(_transpose(MA), S)
            Qm = _matmul(_transpose(MA), Qn)
            T = CompositionEntry(T.target, T.mu, R, Qm)
            made_dot = True
    # g(z) = Q(z_perp, z) with R(x, z) = x1 r1(z) + x2 r2(z), z_perp = (r2, -r1)
    R, Qm = T.R, T.Q

    def g_at(z: Vec) -> int:
        r1 = R[0][0] * z[0] + R[0][1] * z[1]
        r2 = R[1][0] * z[0] + R[1][1] * z[1]
        return _bil(Qm, (r2, -r1), z)

    ga, gc = g_at((1, 0)), g_at((0, 1))
    gb = g_at((1, 1)) - ga - gc
    a, b, c = B.form
    scale = ga // a if a and ga % a == 0 else 0
    if scale == 0 or (scale * a, scale * b, scale * c) != (ga, gb, gc):
        raise ArithmeticError("g is not a multiple of the B norm form")
    return SymbolContext(G, A, B, C_basis, T, made_dot, (ga, gb, gc), scale)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def gaussian_context() -> SymbolContext:
    """Z[i] with A = B = principal and R the dot product, so g = x^2 + y^2."""
    return symbol_context(-4)


def xi(ctx: SymbolContext, w: Vec, z: Vec) -> int:
    """((w1 z1 + w2 z2) / g(w1, w2)) in the extended Jacobi sense."""
    gw = ctx.g(w)
    if gw % 2 == 0:
        raise ValueError(f"g({w}) = {gw} is even")
    return jacobi_ext(w[0] * z[0] + w[1] * z[1], gw)


# ---------------------------------------------------------------- probe


@dataclass
class ProbeResult:
    modulus: int | None
    identity: str
    samples: int
    cells: dict[tuple, int] = field(default_factory=dict)
    witness: tuple | None = None
    tried: tuple[int, ...] = ()

    @property
    def constant(self) -> bool:
        return self.modulus is not None and self.samples > 0

    @property
    def mean_per_cell(self) -> float:
        return self.samples / len(self.cells) if self.cells else 0.0


def _probe_vectors(radius: int) -> list[Vec]:
    return [
        (x, y)
        for x in range(-radius, radius + 1)
        for y in range(-radius, radius + 1)
        if x % 2 == 1 and math.gcd(x, y) == 1
    ]


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def multi_identity_probe(
    ctx: SymbolContext,
    radius: int = 60,
    samples: int = 200_000,
    moduli: Iterable[int] | None = None,
    identity: str = "multi",
    g_of: str = "own",
    seed: int = 0,
) -> ProbeResult:
    """Tabulate the sign relating the two sides of a Jacobi identity over
    cells and return the smallest modulus M for which every cell has a
    single sign.

    A cell is the sign pattern of w1, w2, z1, z2, R(w,z), Q(w,z), w.z
    together with w and z mod M. Pairs are drawn with a seeded generator
    from primitive vectors with odd first coordinate and odd g in the box
    [-radius, radius]^2.

    identity="multi": (Q(w,z)/|R(w,z)|) against (w2/|w1|)(z2/|z1|) xi_z(w).
    identity="symmetry": xi_w(z) against xi_z(w).
    g_of="own" builds the modulus of xi_z from the B side; "other" builds it
    from the A side (the two agree when the bases coincide).
    """
    if identity not in ("multi", "symmetry"):
        raise ValueError(f"unknown identity {identity!r}")
    if moduli is None:
        moduli = (8, 16, 24, 8 * abs(ctx.disc))
    moduli = tuple(sorted(set(moduli)))
    g = ctx.g
    if g_of == "other":
        R, Qm = ctx.entry.R, ctx.entry.Q

        def g(z: Vec) -> int:
            c1 = R[0][0] * z[0] + R[1][0] * z[1]
            c2 = R[0][1] * z[0] + R[1][1] * z[1]
            return _bil(Qm, z, (c2, -c1))

    elif g_of != "own":
        raise ValueError(f"unknown g_of {g_of!r}")
    vecs = [v for v in _probe_vectors(radius) if g(v) % 2 != 0]
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, len(vecs), size=(samples, 2)) if vecs else np.zeros((0, 2), dtype=np.int64)
    drawn: list[tuple[Vec, Vec, tuple[int, int, int], int]] = []
    for i, j in picks.tolist():
        w, z = vecs[i], vecs[j]
        r, q = ctx.R(w, z), ctx.Q(w, z)
        dot = w[0] * z[0] + w[1] * z[1]
        if identity == "multi":
            if r % 2 == 0:
                continue
            lhs = jacobi(q, abs(r))
            rhs = jacobi(w[1], abs(w[0])) * jacobi(z[1], abs(z[0])) * jacobi_ext(dot, g(z))
        else:
            lhs = jacobi_ext(dot, g(w))
            rhs = jacobi_ext(dot, g(z))
        if lhs == 0 or rhs == 0:
            continue
        drawn.append((w, z, (_sign(r), _sign(q), _sign(dot)), lhs * rhs))
    result = ProbeResult(None, identity, len(drawn), tried=moduli)
    if not drawn:
        return result
    for M in moduli:
        cells: dict[tuple, int] = {}
        witness = None
        for w, z, signs, eps in drawn:
            key = (_sign(w[0]), _sign(w[1]), _sign(z[0]), _sign(z[1])) + signs
            key += (w[0] % M, w[1] % M, z[0] % M, z[1] % M)
            prev = cells.setdefault(key, eps)
            if prev != eps:
                witness = (M, key, w, z)
                break
        if witness is None:
            result.modulus = M
            result.cells = cells
            result.witness = None
            return result
        result.witness = witness
    return result


# ---------------------------------------------------------------- pair sums


def _jacobi_table(q: int) -> np.ndarray:
    return np.array([jacobi(r, q) for r in range(q)], dtype=np.int64)


def xi_pair_sum_direct(ctx: SymbolContext, w: Vec, v: Vec) -> int:
    """sum over z mod q of xi_w(z) xi_v(z) with q = |g(w) g(v)|, by a double loop
    over z1 with the z2 loop vectorized."""
    gw, gv = ctx.g(w), ctx.g(v)
    if gw % 2 == 0 or gv % 2 == 0:
        raise ValueError("g values must be odd")
    aw, av = abs(gw), abs(gv)
    q = aw * av
    if q > 10**4:
        raise ValueError(f"q = {q} exceeds 10^4")
    tw, tv = _jacobi_table(aw), _jacobi_table(av)
    # the sign twist of xi for negative g is not periodic in z, so the sum
    # runs over the periodic part (w.z / |g(w)|)
    z2 = np.arange(q, dtype=np.int64)
    total = 0
    for z1 in range(q):
        sw = tw[(w[0] * z1 + w[1] * z2) % aw]
        sv = tv[(v[0] * z1 + v[1] * z2) % av]
        total += int(np.dot(sw, sv))
    return total


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def _phi(n: int) -> int:
    return int(arith(n, Arith.PHI))


def xi_pair_sum_closed(ctx: SymbolContext, w: Vec, v: Vec) -> int:
    """q phi(d) phi(q/d) when q and d = gcd(g(w), g(v)) are squares, else 0."""
    gw, gv = abs(ctx.g(w)), abs(ctx.g(v))
    q, d = gw * gv, math.gcd(gw, gv)
    if _is_square(q) and _is_square(d):
        return q * _phi(d) * _phi(q // d)
    return 0


def non_proportional(ctx: SymbolContext, w: Vec, v: Vec) -> bool:
    """w and v are independent modulo every prime dividing gcd(g(w), g(v))."""
    d = math.gcd(ctx.g(w), ctx.g(v))
    det = w[0] * v[1] - w[1] * v[0]
    return all(det % p != 0 for p in factorint(abs(d)))


def xi_pair_sum(ctx: SymbolContext, w: Vec, v: Vec) -> tuple[int, int]:
    """(direct, closed form). They agree for non-proportional pairs; the
    direct value is authoritative."""
    return xi_pair_sum_direct(ctx, w, v), xi_pair_sum_closed(ctx, w, v)


# ---------------------------------------------------------------- hecke coefficients


def dirichlet_character(modulus: int, kind: str | int = "principal") -> np.ndarray:
    """Values on residues mod `modulus`: "principal", or an integer D for the
    Kronecker character (D/n) restricted to gcd(n, modulus) = 1."""
    n = np.arange(modulus)
    coprime = np.array([math.gcd(int(r), modulus) == 1 for r in n])
    if kind == "principal":
        return coprime.astype(np.int64)
    D = int(kind)
    vals = np.array([int(gmpy2.kronecker(D, int(r))) if coprime[r] else 0 for r in n], dtype=np.int64)
    return vals


@dataclass(frozen=True)
class HeckeCharSpec:
    """psi(z) = chi(z1) (z/|z|)^k, z the coordinate vector read as a complex
    number, chi given by its table modulo 4 d."""

    d: int
    k: int
    chi: tuple[int, ...]

    @classmethod
    def principal(cls, d: int = 1, k: int = 0) -> HeckeCharSpec:
        return cls(d, k, tuple(dirichlet_character(4 * d).tolist()))

    def __post_init__(self) -> None:
        if len(self.chi) != 4 * self.d:
            raise ValueError("chi must be tabulated modulo 4 d")

    def __call__(self, z: Vec) -> complex:
        c = self.chi[z[0] % (4 * self.d)]
        if c == 0:
            return 0j
        if self.k == 0:
            return complex(c)
        return c * cmath.exp(1j * self.k * math.atan2(z[1], z[0]))


def _spin_or_zero(z: Vec) -> complex:
    return spin_symbol(z) if z[0] % 2 else 0j


class HeckeTable:
    """lambda(n) = sum over normalized primitive ideal numbers z of norm n in
    class B of psi(z)[z], for all n <= nmax at once."""

    def __init__(self, ctx: SymbolContext, spec: HeckeCharSpec, nmax: int) -> None:
        self.ctx, self.spec, self.nmax = ctx, spec, nmax
        self.elements = _elements_of_norm_upto(ctx.B, nmax, True)
        lam = np.zeros(nmax + 1, dtype=np.complex128)
        for n, zs in self.elements.items():
            lam[n] = sum(spec(z) * _spin_or_zero(z) for z in zs)
        self.values = lam

    def __getitem__(self, n: int) -> complex:
        if not 1 <= n <= self.nmax:
            raise ValueError(f"n = {n} outside [1, {self.nmax}]")
        return complex(self.values[n])


def hecke_lambda(ctx: SymbolContext, spec: HeckeCharSpec, n: int) -> complex:
    if n < 1 or n > 10**6:
        raise ValueError("need 1 <= n <= 10^6")
    return HeckeTable(ctx, spec, n)[n]


# ---------------------------------------------------------------- oscillation


class OscMode(enum.Enum):
    K = "k"
    K_STAR = "kstar"
    LMN = "lmn"
    LN = "ln"
    TWISTED = "twisted"


OSC_COLUMNS = ("mode", "scale", "raw_sum_re", "raw_sum_im", "bound_shape", "ratio")

DEFAULT_GRIDS = {
    OscMode.K: (10**3, 3 * 10**3, 10**4, 3 * 10**4),
    OscMode.K_STAR: (10**3, 3 * 10**3, 10**4, 3 * 10**4),
    OscMode.LMN: (10, 20, 40, 80, 160),
    OscMode.LN: (10**3, 3 * 10**3, 10**4, 3 * 10**4, 10**5),
    OscMode.TWISTED: (10**3, 3 * 10**3, 10**4, 3 * 10**4, 10**5),
}


@dataclass(frozen=True)
class OscRow:
    mode: str
    scale: float
    raw_sum_re: float
    raw_sum_im: float
    bound_shape: float
    ratio: float


def _pm_signs(n: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).choice(np.array([-1, 1]), size=n + 1)


def oscillation_suite(
    disc: int,
    mode: OscMode | str,
    grid: Iterable[int] | None = None,
    spec: HeckeCharSpec | None = None,
    w: Vec = (1, 2),
    m: int = 1,
    c: int = 1,
    seed: int = 0,
) -> list[OscRow]:
    """Raw sums and their ratio to the expected bound shape at each scale.

    k/kstar: sum of psi(z)[w z] over normalized z in B with N(z) <= N (kstar
    also needs gcd(N(z), N(w)) = 1); lmn: sum of a(m) b(n) lambda(c m n) with
    seeded random signs and M = N; ln: sum_{n <= N} lambda(m n); twisted:
    sum_{n <= X} Lambda(n) lambda(c n).
    """
    mode = OscMode(mode)
    ctx = symbol_context(disc)
    spec = spec or HeckeCharSpec.principal()
    grid = tuple(grid) if grid is not None else DEFAULT_GRIDS[mode]
    kfac = spec.d * (abs(spec.k) + 1)
    rows: list[OscRow] = []
    if mode in (OscMode.K, OscMode.K_STAR):
        top = max(grid)
        elems = _elements_of_norm_upto(ctx.B, top, True)
        nw = ctx.A.norm_value(w)
        wabs = math.sqrt(abs(nw) * ctx.A.norm) if nw else 1.0
        norms = sorted(elems)
        terms = []
        for n in norms:
            if mode is OscMode.K_STAR and math.gcd(n, abs(nw)) != 1:
                continue
            for z in elems[n]:
                terms.append((n, spec(z) * _spin_or_zero(ctx.product(w, z))))
        for N in grid:
            s = sum(t for n, t in terms if n <= N)
            bound = kfac * wabs * N**0.75 * math.log(max(wabs * N, 3.0))
            if mode is OscMode.K_STAR:
                bound *= arith(max(abs(nw), 1), Arith.TAU)
            rows.append(OscRow(mode.value, float(N), s.real, s.imag, bound, abs(s) / bound))
        return rows
    if mode is OscMode.LMN:
        top = max(grid)
        table = HeckeTable(ctx, spec, c * top * top)
        for M in grid:
            a = _pm_signs(M, seed)
            b = _pm_signs(M, seed + 1)
            idx = c * np.outer(np.arange(1, M + 1), np.arange(1, M + 1))
            s = complex(np.sum(a[1:, None] * b[None, 1:] * table.values[idx]))
            bound = kfac * arith(c, Arith.TAU) * (2 * M) ** (1 / 12) * (M * M) ** (11 / 12)
            rows.append(OscRow(mode.value, float(M), s.real, s.imag, bound, abs(s) / bound))
        return rows
    if mode is OscMode.LN:
        top = max(grid)
        table = HeckeTable(ctx, spec, m * top)
        cums = np.cumsum(table.values[m :: m][:top])
        for N in grid:
            s = complex(cums[N - 1])
            bound = kfac * arith(m, Arith.TAU) ** 4 * math.sqrt(m) * N**0.75 * math.log(max(m * N, 3))
            rows.append(OscRow(mode.value, float(N), s.real, s.imag, bound, abs(s) / bound))
        return rows
    top = max(grid)
    table = HeckeTable(ctx, spec, c * top)
    vm = np.zeros(top + 1)
    for p in primes_upto(top).tolist():
        q = p
        while q <= top:
            vm[q] = math.log(p)
            q *= p
    cums = np.cumsum(vm[1:] * table.values[c : c * top + 1 : c])
    for X in grid:
        s = complex(cums[X - 1])
        bound = c * kfac * X ** (76 / 77)
        rows.append(OscRow(mode.value, float(X), s.real, s.imag, bound, abs(s) / bound))
    return rows


def tau_bound_holds(table: HeckeTable) -> bool:
    """|lambda(n)| <= tau(n) for every tabulated n."""
    tau = np.array([0] + [arith(n, Arith.TAU) for n in range(1, table.nmax + 1)])
    return bool(np.all(np.abs(table.values) <= tau + 1e-9))


__all__ = [
    "HeckeCharSpec",
    "HeckeTable",
    "OSC_COLUMNS",
    "OscMode",
    "OscRow",
    "ProbeResult",
    "SymbolContext",
    "dirichlet_character",
    "gaussian_context",
    "hecke_lambda",
    "jacobi",
    "jacobi_ext",
    "multi_identity_probe",
    "non_proportional",
    "oscillation_suite",
    "spin_symbol",
    "symbol_context",
    "tau_bound_holds",
    "xi",
    "xi_pair_sum",
    "xi_pair_sum_closed",
    "xi_pair_sum_direct",
]
