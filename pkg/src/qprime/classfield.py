"""Quadratic field arithmetic through forms and lattices: the form class
group, fundamental units, ideal-number classes with explicit bases,
composition bilinear forms, unit normalization and representation counts.

Field elements are p + q*sqrt(D) with rational p, q, where D is the form
discriminant. Classes are proper (SL2) equivalence classes of primitive
forms, i.e. the narrow class group when D > 0. The representative ideal of
the class of (a, b, c) with a > 0 is [a, (b + sqrt(D))/2], whose norm form
divided by a is (a, b, c) itself.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator

from .qform import QuadForm, classify
from .sieve import factorint

Form = tuple[int, int, int]
Mat = tuple[tuple[int, int], tuple[int, int]]
Interval = tuple[float, float]

_ID: Mat = ((1, 0), (0, 1))
CF_LIMIT = 2**127


# ---------------------------------------------------------------- elements


@dataclass(frozen=True)
class QElt:
    """p + q*sqrt(D)."""

    D: int
    p: Fraction
    q: Fraction

    @classmethod
    def of(cls, D: int, p, q=0) -> QElt:
        return cls(D, Fraction(p), Fraction(q))

    def __add__(self, o: QElt) -> QElt:
        return QElt(self.D, self.p + o.p, self.q + o.q)

    def __sub__(self, o: QElt) -> QElt:
        return QElt(self.D, self.p - o.p, self.q - o.q)

    def __neg__(self) -> QElt:
        return QElt(self.D, -self.p, -self.q)

    def __mul__(self, o) -> QElt:
        if isinstance(o, QElt):
            return QElt(self.D, self.p * o.p + self.D * self.q * o.q, self.p * o.q + self.q * o.p)
        o = Fraction(o)
        return QElt(self.D, self.p * o, self.q * o)

    __rmul__ = __mul__

    def conj(self) -> QElt:
        return QElt(self.D, self.p, -self.q)

    def norm(self) -> Fraction:
        return self.p * self.p - self.D * self.q * self.q

    def trace(self) -> Fraction:
        return 2 * self.p

    def inverse(self) -> QElt:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero element")
        return QElt(self.D, self.p / n, -self.q / n)

    def __truediv__(self, o) -> QElt:
        if isinstance(o, QElt):
            return self * o.inverse()
        o = Fraction(o)
        return QElt(self.D, self.p / o, self.q / o)

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    def embeddings(self) -> tuple[complex, complex]:
        """(sigma_1, sigma_2); real for D > 0, complex conjugates for D < 0."""
        r = cmath.sqrt(self.D)
        a = float(self.p) + float(self.q) * r
        b = float(self.p) - float(self.q) * r
        return a, b

    def real(self) -> float:
        """The embedding with +sqrt(D) as a float (D > 0)."""
        return float(self.p) + float(self.q) * math.sqrt(self.D)

    def coords(self) -> tuple[Fraction, Fraction]:
        """Coordinates (s, t) in the order basis (1, omega), omega = (D + sqrt(D))/2."""
        t = 2 * self.q
        return self.p - self.q * self.D, t


def _omega(D: int) -> QElt:
    return QElt(D, Fraction(D, 2), Fraction(1, 2))


# ---------------------------------------------------------------- forms


def _disc(f: Form) -> int:
    return f[1] * f[1] - 4 * f[0] * f[2]


def _apply(f: Form, M: Mat) -> Form:
    """f(M (x, y)^T)."""
    (a, b), (c, d) = M
    f2, f1, f0 = f
    return (
        f2 * a * a + f1 * a * c + f0 * c * c,
        2 * f2 * a * b + f1 * (a * d + b * c) + 2 * f0 * c * d,
        f2 * b * b + f1 * b * d + f0 * d * d,
    )


def _mul(M: Mat, N: Mat) -> Mat:
    return (
        (M[0][0] * N[0][0] + M[0][1] * N[1][0], M[0][0] * N[0][1] + M[0][1] * N[1][1]),
        (M[1][0] * N[0][0] + M[1][1] * N[1][0], M[1][0] * N[0][1] + M[1][1] * N[1][1]),
    )


def _lt_sqrt(x: int, D: int) -> bool:
    """x < sqrt(D) for non-square D > 0."""
    return x < 0 or x * x < D


def is_reduced(f: Form) -> bool:
    a, b, c = f
    D = _disc(f)
    if D < 0:
        if a <= 0 or abs(b) > a or a > c:
            return False
        return not ((abs(b) == a or a == c) and b < 0)
    # |sqrt(D) - 2|a|| < b < sqrt(D)
    if b <= 0 or not _lt_sqrt(b, D):
        return False
    t = 2 * abs(a)
    return (t - b < 0 or (t - b) ** 2 < D) and (t + b) ** 2 > D


def _rho(f: Form) -> tuple[Form, Mat]:
    """One reduction step for an indefinite form, with its SL2 matrix."""
    a, b, c = f
    D = _disc(f)
    ac = abs(c)
    r = math.isqrt(D)
    if ac * ac > D:
        t = (-b) % (2 * ac)
        if t > ac:
            t -= 2 * ac
        nb = t
    else:
        nb = r - ((r + b) % (2 * ac))
    s = (nb + b) // (2 * c)
    M = ((0, -1), (1, s))
    g = (c, nb, (nb * nb - D) // (4 * c))
    return g, M


def reduce_form(f: Form) -> tuple[Form, Mat]:
    """A reduced form properly equivalent to f, and M in SL2 with f(M v) = g(v)."""
    D = _disc(f)
    if D >= 0 and math.isqrt(D) ** 2 == D:
        raise ValueError("square discriminant")
    M = _ID
    if D < 0:
        if f[0] < 0:
            raise ValueError("negative definite form")
        a, b, c = f
        while True:
            k = (a - b) // (2 * a)
            if k:
                T = ((1, k), (0, 1))
                a, b, c = _apply((a, b, c), T)
                M = _mul(M, T)
            if a > c or (a == c and b < 0):
                S = ((0, -1), (1, 0))
                a, b, c = c, -b, a
                M = _mul(M, S)
                if a == c:
                    break
                continue
            break
        return (a, b, c), M
    g = f
    for _ in range(10_000):
        if is_reduced(g):
            return g, M
        g, R = _rho(g)
        M = _mul(M, R)
    raise RuntimeError("reduction did not terminate")


def cycle(f: Form) -> list[tuple[Form, Mat]]:
    """The rho-cycle of a reduced indefinite form, with matrices from f."""
    out = [(f, _ID)]
    g, M = f, _ID
    while True:
        g, R = _rho(g)
        M = _mul(M, R)
        if g == f:
            return out
        out.append((g, M))
        if len(out) > 100_000:
            raise RuntimeError("cycle too long")


@lru_cache(maxsize=1 << 16)
def canonical(f: Form) -> Form:
    """Canonical representative of the proper class of f: the reduced form
    when definite, the smallest cycle member with a > 0 when indefinite."""
    g, _ = reduce_form(f)
    if _disc(g) < 0:
        return g
    return min(h for h, _ in cycle(g) if h[0] > 0)


def compose(f: Form, g: Form) -> Form:
    """Dirichlet composition of two primitive forms of the same discriminant."""
    a1, b1, c1 = f
    a2, b2, c2 = g
    D = _disc(f)
    if _disc(g) != D:
        raise ValueError("discriminants differ")
    beta = (b1 + b2) // 2
    e1, u1, v1 = _xgcd(a1, a2)
    e, u2, w = _xgcd(e1, beta)
    u, v = u2 * u1, u2 * v1
    A = a1 * a2 // (e * e)
    num = u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + D) // 2
    if num % e:
        raise ArithmeticError("composition failed")
    B = (num // e) % (2 * abs(A))
    if B > abs(A):
        B -= 2 * abs(A)
    C = (B * B - D) // (4 * A)
    return (A, B, C)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with g = gcd(a, b) >= 0 and a x + b y = g."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def reduced_forms(D: int) -> list[Form]:
    """All reduced primitive forms of discriminant D (positive a when D < 0)."""
    out = []
    if D < 0:
        amax = math.isqrt(-D // 3)
        for a in range(1, amax + 1):
            for b in range(-a + 1, a + 1):
                if (b - D) % 2 or (b * b - D) % (4 * a):
                    continue
                c = (b * b - D) // (4 * a)
                if c < a or (a == c and b < 0) or math.gcd(a, b, c) != 1:
                    continue
                out.append((a, b, c))
        return out
    r = math.isqrt(D)
    for b in range(1, r + 1):
        if (b - D) % 2:
            continue
        n = (D - b * b) // 4
        for a in range(1, n + 1):
            if n % a:
                continue
            for sa in (a, -a):
                f = (sa, b, -n // sa)
                if math.gcd(*f) == 1 and is_reduced(f):
                    out.append(f)
    return out


def class_number_by_enumeration(D: int) -> int:
    """Number of proper classes, counted from reduced forms (and cycles)."""
    forms = reduced_forms(D)
    if D < 0:
        return len(forms)
    seen: set[Form] = set()
    h = 0
    for f in forms:
        if f in seen:
            continue
        h += 1
        seen.update(g for g, _ in cycle(f))
    return h


# ---------------------------------------------------------------- discriminants


def fundamental_part(D: int) -> tuple[int, int]:
    """(D_K, conductor) with D = conductor^2 * D_K and D_K fundamental."""
    if D == 0 or (D % 4) not in (0, 1):
        raise ValueError(f"{D} is not a discriminant")
    s = -1 if D < 0 else 1
    sq = 1
    for p, e in factorint(abs(D)).items():
        if e % 2:
            s *= p
        sq *= p ** (e // 2)
    if s == 1:
        raise ValueError("square discriminant")
    dk = s if s % 4 == 1 else 4 * s
    return dk, math.isqrt(D // dk)


def is_fundamental(D: int) -> bool:
    try:
        return fundamental_part(D)[0] == D
    except ValueError:
        return False


# ---------------------------------------------------------------- units


def fundamental_unit(D: int) -> QElt:
    """Fundamental unit eps > 1 of the order of discriminant D > 0, from the
    continued fraction of (r + sqrt(D))/2 with r = D mod 2."""
    if D <= 0 or math.isqrt(D) ** 2 == D or D % 4 not in (0, 1):
        raise ValueError("need a positive non-square discriminant")
    r = D % 2
    s = math.isqrt(D)
    P, Q = r, 2
    p_prev, p_cur = 0, 1
    q_prev, q_cur = 1, 0
    for _ in range(1_000_000):
        if Q > 0:
            a = (P + s) // Q
        else:
            a = -((P + s) // -Q) - 1
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        t = 2 * p_cur - q_cur * r
        if t * t - D * q_cur * q_cur in (4, -4) and t > 0:
            return QElt(D, Fraction(t, 2), Fraction(q_cur, 2))
        if p_cur >= CF_LIMIT:
            reg = math.log(p_cur)
            raise OverflowError(f"convergents exceed 128 bits; partial regulator {reg:.3f}")
        P = a * Q - P
        Q = (D - P * P) // Q
    raise RuntimeError("continued fraction did not close")


def totally_positive_unit(D: int) -> QElt:
    """Fundamental unit of norm +1 (eps or eps^2)."""
    e = fundamental_unit(D)
    return e if e.norm() == 1 else e * e


def roots_of_unity(D: int) -> list[QElt]:
    if D > 0:
        return [QElt.of(D, 1), QElt.of(D, -1)]
    if D == -4:
        i = QElt(D, Fraction(0), Fraction(1, 2))
        return [QElt.of(D, 1), i, QElt.of(D, -1), -i]
    if D == -3:
        z = QElt(D, Fraction(1, 2), Fraction(1, 2))
        out = [QElt.of(D, 1)]
        for _ in range(5):
            out.append(out[-1] * z)
        return out
    return [QElt.of(D, 1), QElt.of(D, -1)]


def _in_first_sector(g: QElt, w: int) -> bool:
    """arg(g) in [0, 2 pi / w) for D < 0, decided exactly."""
    p, q = g.p, g.q
    if w == 2:
        return q > 0 or (q == 0 and p > 0)
    if w == 4:
        return p > 0 and q >= 0
    # w == 6: Im = q sqrt(3), Re = p, need 0 <= Im < sqrt(3) Re
    return q >= 0 and q < p


def normalize_element(g: QElt) -> QElt:
    """Canonical associate: arg in [0, 2 pi/w) for D < 0; g > 0 with
    log(g/sqrt(N))/log(eps_plus) in (-1/2, 1/2] for D > 0."""
    if g.is_zero():
        raise ValueError("zero element")
    D = g.D
    if D < 0:
        units = roots_of_unity(D)
        for u in units:
            h = g * u
            if _in_first_sector(h, len(units)):
                return h
        raise AssertionError("no associate in the first sector")
    n = g.norm()
    if n <= 0:
        raise ValueError("normalization needs a positive-norm element")
    if g.real() < 0:
        g = -g
    eps = totally_positive_unit(D)
    le = math.log(eps.real())
    z = math.log(g.real() / math.sqrt(float(n))) / le
    k = math.floor(0.5 - z)
    g = g * _unit_power(eps, k)
    # exact decision near the boundary z = +-1/2 (g / g' = eps^(+-1))
    ratio = g / g.conj()
    if ratio == eps.inverse():
        g = g * eps
    return g


def _unit_power(eps: QElt, k: int) -> QElt:
    base = eps if k >= 0 else eps.inverse()
    out = QElt.of(eps.D, 1)
    for _ in range(abs(k)):
        out = out * base
    return out


# ---------------------------------------------------------------- lattices


def _hnf(vecs: list[tuple[int, int]]) -> tuple[tuple[int, int], tuple[int, int]]:
    """Hermite basis ((n, 0), (b, d)) with 0 <= b < n, d > 0 of a full-rank
    lattice in Z^2 given by generators (s, t)."""
    pivot = None
    zs = 0
    for v in vecs:
        if v == (0, 0):
            continue
        if pivot is None:
            if v[1] == 0:
                zs = math.gcd(zs, v[0])
            else:
                pivot = v
            continue
        while v[1] != 0:
            q = pivot[1] // v[1]
            pivot, v = v, (pivot[0] - q * v[0], pivot[1] - q * v[1])
        zs = math.gcd(zs, v[0])
    if pivot is None or zs == 0:
        raise ValueError("lattice is not of full rank")
    if pivot[1] < 0:
        pivot = (-pivot[0], -pivot[1])
    return (zs, 0), (pivot[0] % zs, pivot[1])


@dataclass(frozen=True)
class Lattice:
    """A rank-two Z-module inside the order, kept in Hermite form."""

    D: int
    basis: tuple[QElt, QElt]

    @classmethod
    def span(cls, D: int, gens: list[QElt]) -> Lattice:
        vecs = []
        for g in gens:
            s, t = g.coords()
            if s.denominator != 1 or t.denominator != 1:
                raise ValueError("generator is not integral")
            vecs.append((int(s), int(t)))
        (n, _), (b, d) = _hnf(vecs)
        om = _omega(D)
        return cls(D, (QElt.of(D, n), om * d + QElt.of(D, b)))

    def key(self) -> tuple:
        return tuple(c for g in self.basis for c in g.coords())

    def index(self) -> int:
        """[O : L], the norm of the ideal."""
        (n, _), (_, d) = (self.basis[0].coords(), self.basis[1].coords())
        return int(n * d)

    def __mul__(self, o: Lattice) -> Lattice:
        return Lattice.span(self.D, [x * y for x in self.basis for y in o.basis])

    def conj(self) -> Lattice:
        return Lattice.span(self.D, [g.conj() for g in self.basis])

    def norm_form(self) -> Form:
        """N(x b1 + y b2)/[O : L] as an integer form."""
        b1, b2 = self.basis
        n = self.index()
        f = (b1.norm() / n, (b1 * b2.conj()).trace() / n, b2.norm() / n)
        if any(c.denominator != 1 for c in f):
            raise ArithmeticError("norm form is not integral")
        return tuple(int(c) for c in f)  # type: ignore[return-value]


def ideal_of_form(f: Form) -> tuple[QElt, QElt]:
    """Basis (a, (b + sqrt(D))/2) whose norm form over a is f; needs a > 0."""
    a, b, _ = f
    if a <= 0:
        raise ValueError("representative forms need a > 0")
    D = _disc(f)
    return QElt.of(D, a), QElt(D, Fraction(b, 2), Fraction(1, 2))


def _solve_basis(w1: QElt, w2: QElt, g: QElt) -> tuple[Fraction, Fraction]:
    """(x, y) with x w1 + y w2 = g."""
    det = w1.p * w2.q - w1.q * w2.p
    if det == 0:
        raise ValueError("degenerate basis")
    x = (g.p * w2.q - g.q * w2.p) / det
    y = (w1.p * g.q - w1.q * g.p) / det
    return x, y


def principal_generator(L: Lattice) -> QElt:
    """A generator of positive norm of the (narrowly principal) ideal L,
    normalized; raises if none exists."""
    g_form = L.norm_form()
    red, M = reduce_form(g_form)
    vec = None
    if _disc(red) < 0:
        if red[0] == 1:
            vec = (M[0][0], M[1][0])
    else:
        for h, N in cycle(red):
            if h[0] == 1:
                MN = _mul(M, N)
                vec = (MN[0][0], MN[1][0])
                break
    if vec is None:
        raise ValueError("ideal is not narrowly principal")
    b1, b2 = L.basis
    g = b1 * vec[0] + b2 * vec[1]
    return normalize_element(g)


# ---------------------------------------------------------------- class group


@dataclass(frozen=True)
class IdealClassRep:
    index: int
    form: Form
    basis: tuple[QElt, QElt]
    order: int

    @property
    def norm(self) -> int:
        return self.form[0]

    def element(self, x: tuple[int, int]) -> QElt:
        return self.basis[0] * x[0] + self.basis[1] * x[1]

    def norm_value(self, x: tuple[int, int]) -> int:
        a, b, c = self.form
        return a * x[0] * x[0] + b * x[0] * x[1] + c * x[1] * x[1]

    def coords_of(self, g: QElt) -> tuple[int, int]:
        x, y = _solve_basis(*self.basis, g)
        if x.denominator != 1 or y.denominator != 1:
            raise ValueError("element is not in the class lattice")
        return int(x), int(y)


@dataclass(frozen=True)
class CompositionEntry:
    target: int
    mu: QElt
    # R[i][j], Q[i][j]: coefficient of x_i y_j
    R: tuple[tuple[int, int], tuple[int, int]]
    Q: tuple[tuple[int, int], tuple[int, int]]

    def apply(self, x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
        R, Q = self.R, self.Q
        r = R[0][0] * x[0] * y[0] + R[0][1] * x[0] * y[1] + R[1][0] * x[1] * y[0] + R[1][1] * x[1] * y[1]
        q = Q[0][0] * x[0] * y[0] + Q[0][1] * x[0] * y[1] + Q[1][0] * x[1] * y[0] + Q[1][1] * x[1] * y[1]
        return r, q


@dataclass(frozen=True)
class FieldData:
    disc_form: int
    disc_fund: int
    conductor: int
    class_number: int
    generators: tuple[int, ...]
    fundamental_unit: QElt | None


def composition_entry(A: IdealClassRep, B: IdealClassRep, C_basis: tuple[QElt, QElt], target: int) -> CompositionEntry:
    """mu with J_A J_B = mu J_C, and the bilinear forms R, Q with
    w_i^A w_j^B = mu (R_ij w_1^C + Q_ij w_2^C)."""
    D = _disc(A.form)
    JA = Lattice.span(D, list(A.basis))
    JB = Lattice.span(D, list(B.basis))
    JC = Lattice.span(D, list(C_basis))
    g = principal_generator(JA * JB * JC.conj())
    mu = g / JC.index()
    R = [[0, 0], [0, 0]]
    Q = [[0, 0], [0, 0]]
    for i in range(2):
        for j in range(2):
            x, y = _solve_basis(*C_basis, A.basis[i] * B.basis[j] / mu)
            if x.denominator != 1 or y.denominator != 1:
                raise ArithmeticError("composition coefficients are not integral")
            R[i][j], Q[i][j] = int(x), int(y)
    return CompositionEntry(target, mu, (tuple(R[0]), tuple(R[1])), (tuple(Q[0]), tuple(Q[1])))  # type: ignore[arg-type]


@dataclass
class ClassGroup:
    field: FieldData
    classes: list[IdealClassRep]
    table: dict[tuple[int, int], CompositionEntry]
    mult: list[list[int]]
    identity: int
    _index: dict[Form, int] = field(default_factory=dict, repr=False)

    def index_of(self, f: Form | QuadForm) -> int:
        if isinstance(f, QuadForm):
            f = f.coeffs
        return self._index[canonical(tuple(f))]  # type: ignore[arg-type]

    def inverse(self, i: int) -> int:
        return next(j for j in range(len(self.classes)) if self.mult[i][j] == self.identity)

    def dump(self) -> str:
        lines = ["index\tform\tbasis\torder"]
        for c in self.classes:
            w1, w2 = c.basis
            lines.append(f"{c.index}\t{c.form}\t({w1.p}, ({w2.p}) + ({w2.q})*sqrt({w1.D}))\t{c.order}")
        return "\n".join(lines) + "\n"


def _group_decomposition(mult: list[list[int]], e: int) -> tuple[int, ...]:
    """Orders h_j of independent cyclic generators with h = prod h_j."""
    h = len(mult)

    def order(i: int) -> int:
        k, x = 1, i
        while x != e:
            x = mult[x][i]
            k += 1
        return k

    def span(gens: list[int]) -> set[int]:
        S = {e}
        frontier = [e]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = mult[x][g]
                    if y not in S:
                        S.add(y)
                        nxt.append(y)
            frontier = nxt
        return S

    orders = {i: order(i) for i in range(h)}
    cand = sorted(range(h), key=lambda i: (-orders[i], i))
    gens: list[int] = []
    size = 1
    while size < h:
        for i in cand:
            s = len(span(gens + [i]))
            if s == size * orders[i] and orders[i] > 1:
                gens.append(i)
                size = s
                break
        else:
            raise RuntimeError("no independent generator found")
    return tuple(orders[g] for g in gens)


def _closure(D: int) -> list[Form]:
    """Classes reached by composing prime forms of small norm (and the form
    of first coefficient -1 when D > 0)."""
    bound = math.isqrt(abs(D) // 3) + 1 if D < 0 else math.isqrt(D) // 2 + 1
    gens = []
    for p in range(2, bound + 1):
        if any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
            continue
        for b in range(0, 2 * p):
            if (b * b - D) % (4 * p) == 0:
                f = (p, b, (b * b - D) // (4 * p))
                if math.gcd(*f) == 1:
                    gens.append(canonical(f))
    b0 = D % 2
    e = canonical((1, b0, (b0 - D) // 4))
    if D > 0:
        gens.append(canonical((-1, b0, (D - b0) // 4)))
    elems = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = canonical(compose(x, g))
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(elems)


@lru_cache(maxsize=64)
def class_group(disc: int) -> ClassGroup:
    """Form class group with ideal bases and the composition table."""
    if not is_fundamental(disc):
        raise ValueError(f"{disc} is not a fundamental discriminant")
    if abs(disc) > 10**6:
        raise ValueError("|disc| exceeds 10^6")
    forms = _closure(disc)
    b0 = disc % 2
    e_form = canonical((1, b0, (b0 - disc) // 4))
    forms.remove(e_form)
    forms = [e_form] + forms
    index = {f: i for i, f in enumerate(forms)}
    h = len(forms)
    mult = [[index[canonical(compose(f, g))] for g in forms] for f in forms]
    orders = []
    for i in range(h):
        k, x = 1, i
        while x != 0:
            x = mult[x][i]
            k += 1
        orders.append(k)
    classes = [IdealClassRep(i, f, ideal_of_form(f), orders[i]) for i, f in enumerate(forms)]
    table = {}
    for A in classes:
        for B in classes:
            C = classes[mult[A.index][B.index]]
            table[(A.index, B.index)] = composition_entry(A, B, C.basis, C.index)
    eps = fundamental_unit(disc) if disc > 0 else None
    fd = FieldData(disc, disc, 1, h, _group_decomposition(mult, 0), eps)
    return ClassGroup(fd, classes, table, mult, 0, index)


def check_composition(G: ClassGroup, radius: int = 3) -> list[tuple[int, int, int, int]]:
    """For each class pair (A, B): (a, b, checked, failures) over coordinate
    pairs in [-radius, radius]^2, testing w_A(x) w_B(y) = mu w_C(R, Q) and
    N_C(R, Q) = N_A(x) N_B(y)."""
    box = [(x, y) for x in range(-radius, radius + 1) for y in range(-radius, radius + 1) if (x, y) != (0, 0)]
    out = []
    for (a, b), T in sorted(G.table.items()):
        A, B, C = G.classes[a], G.classes[b], G.classes[T.target]
        bad = 0
        for x in box:
            ex, nx = A.element(x), A.norm_value(x)
            for y in box:
                r, q = T.apply(x, y)
                ok = ex * B.element(y) == T.mu * C.element((r, q))
                if not ok or C.norm_value((r, q)) != nx * B.norm_value(y):
                    bad += 1
        out.append((a, b, len(box) ** 2, bad))
    return out


# ---------------------------------------------------------------- ideal numbers


@dataclass(frozen=True)
class IdealNumber:
    class_index: int
    coords: tuple[int, int]
    embedding: tuple[float, float] | complex

    @property
    def x1(self) -> int:
        return self.coords[0]

    @property
    def x2(self) -> int:
        return self.coords[1]


def ideal_number(G: ClassGroup, class_index: int, coords: tuple[int, int]) -> IdealNumber:
    g = G.classes[class_index].element(coords)
    if G.field.disc_form < 0:
        emb: tuple[float, float] | complex = g.embeddings()[0]
    else:
        e1, e2 = g.embeddings()
        emb = (e1.real, e2.real)  # type: ignore[union-attr]
    return IdealNumber(class_index, (int(coords[0]), int(coords[1])), emb)


def norm_of(G: ClassGroup, a: IdealNumber) -> int:
    return G.classes[a.class_index].norm_value(a.coords)


def multiply(a: IdealNumber, b: IdealNumber, G: ClassGroup) -> IdealNumber:
    """Product in class A*B via the composition forms (R, Q)."""
    T = G.table[(a.class_index, b.class_index)]
    return ideal_number(G, T.target, T.apply(a.coords, b.coords))


def normalize_L0(g: IdealNumber, G: ClassGroup) -> IdealNumber:
    """Canonical unit associate of an ideal number (idempotent)."""
    if g.coords == (0, 0):
        raise ValueError("zero ideal number")
    rep = G.classes[g.class_index]
    h = normalize_element(rep.element(g.coords))
    return ideal_number(G, g.class_index, rep.coords_of(h))


def is_normalized(rep: IdealClassRep, x: tuple[int, int]) -> bool:
    g = rep.element(x)
    return normalize_element(g) == g


def dual_basis(w1: QElt, w2: QElt) -> tuple[QElt, QElt]:
    """(v1, v2) with Tr(w_i v_j) = [i == j]."""
    D = w1.D
    # Tr((p + q r)(s + t r)) = 2(p s + D q t)
    m = [[2 * w1.p, 2 * D * w1.q], [2 * w2.p, 2 * D * w2.q]]
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    inv = [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]]
    # columns of inv solve m @ (s, t) = e_j
    v1 = QElt(D, inv[0][0], inv[1][0])
    v2 = QElt(D, inv[0][1], inv[1][1])
    return v1, v2


# ---------------------------------------------------------------- representations

REP_BUDGET = 10**7


def _isqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def _solve_first(f: Form, y: int, n: int) -> list[int]:
    """All integers x with f(x, y) = n."""
    a, b, c = f
    disc = (b * y) ** 2 - 4 * a * (c * y * y - n)
    s = _isqrt_exact(disc)
    if s is None:
        return []
    out = set()
    for num in (-b * y + s, -b * y - s):
        if num % (2 * a) == 0:
            out.add(num // (2 * a))
    return sorted(out)


def representations(F: QuadForm, n: int, I: Interval | None = None) -> list[tuple[int, int]]:
    """All (u1, u2) with F(u1, u2) = n and u2 in I = (lo, hi]."""
    if not classify(F).admissible:
        raise ValueError(f"form ({F}) is not admissible")
    return _representations(F, n, I)


def _representations(F: QuadForm, n: int, I: Interval | None) -> list[tuple[int, int]]:
    if n < 1 or n > 10**12:
        raise ValueError("need 1 <= n <= 10^12")
    f = F.coeffs
    D = F.disc
    lo, hi = I if I is not None else (-math.inf, math.inf)
    if D < 0:
        if F.f2 < 0:
            return []
        ymax = math.isqrt(4 * F.f2 * n // -D) + 1
        first = -ymax if lo < -ymax else math.floor(lo) + 1
        last = ymax if hi > ymax else math.floor(hi)
        ys = range(first, last + 1)
    else:
        if math.isinf(lo) or math.isinf(hi):
            raise ValueError("indefinite forms need a bounded interval")
        ys = range(math.floor(lo) + 1, math.floor(hi) + 1)
    if len(ys) > REP_BUDGET:
        raise ValueError("search budget exceeded")
    out = []
    for y in ys:
        for x in _solve_first(f, y, n):
            out.append((x, y))
    return sorted(out)


# ---------------------------------------------------------------- key decomposition


def _elements_of_norm_upto(rep: IdealClassRep, nmax: int, normalized: bool) -> dict[int, list[tuple[int, int]]]:
    """Primitive coordinate pairs x with 1 <= N_rep(x) <= nmax, grouped by
    norm; only unit-normalized ones when asked."""
    D = _disc(rep.form)
    a, b, c = rep.form
    out: dict[int, list[tuple[int, int]]] = {}
    if D < 0:
        ymax = math.isqrt(4 * a * nmax // -D) + 1
        for y in range(-ymax, ymax + 1):
            disc = (b * y) ** 2 - 4 * a * (c * y * y - nmax)
            if disc < 0:
                continue
            s = math.isqrt(disc)
            for x in range((-b * y - s) // (2 * a) - 1, (-b * y + s) // (2 * a) + 2):
                v = a * x * x + b * x * y + c * y * y
                if 1 <= v <= nmax and math.gcd(x, y) == 1:
                    if not normalized or is_normalized(rep, (x, y)):
                        out.setdefault(v, []).append((x, y))
        return out
    # both embeddings of a normalized element are at most sqrt(N eps_plus);
    # element = x w1 + y w2 with real embeddings (e1, f1), (e2, f2)
    (e1, f1), (e2, f2) = [tuple(z.real for z in w.embeddings()) for w in rep.basis]
    det = e1 * f2 - e2 * f1
    ideal_norm = abs(det) / math.sqrt(D)
    eps = totally_positive_unit(D).real()
    B = math.sqrt(nmax * ideal_norm * eps) * 1.0001 + 1
    ymax = int(B * (abs(e1) + abs(f1)) / abs(det)) + 1
    for y in range(-ymax, ymax + 1):
        ends = sorted(((-B - y * e2) / e1, (B - y * e2) / e1))
        ends2 = sorted(((-B - y * f2) / f1, (B - y * f2) / f1))
        lo, hi = max(ends[0], ends2[0]), min(ends[1], ends2[1])
        if lo > hi + 2:
            continue
        for x in range(math.floor(lo) - 1, math.ceil(hi) + 2):
            v = a * x * x + b * x * y + c * y * y
            if 1 <= v <= nmax and math.gcd(x, y) == 1 and is_normalized(rep, (x, y)):
                out.setdefault(v, []).append((x, y))
    return out


def _unit_matrices(rep: IdealClassRep) -> list[Mat]:
    """Coordinate matrices for multiplication by each root of unity (D < 0)
    or by +-1 and eps_plus^(+-1) (D > 0)."""
    D = _disc(rep.form)

    def mat(u: QElt) -> Mat:
        c1 = rep.coords_of(rep.basis[0] * u)
        c2 = rep.coords_of(rep.basis[1] * u)
        return ((c1[0], c2[0]), (c1[1], c2[1]))

    if D < 0:
        return [mat(u) for u in roots_of_unity(D)]
    e = totally_positive_unit(D)
    return [mat(e), mat(e.inverse())]


def _mv(M: Mat, x: tuple[int, int]) -> tuple[int, int]:
    return (M[0][0] * x[0] + M[0][1] * x[1], M[1][0] * x[0] + M[1][1] * x[1])


class KeyDecomposition:
    """Both sides of the factorization identity for representations of m*n
    by F, with caches sized for all m*n <= nmax.

    Only primitive representations are counted on either side. On the
    right, the first factor runs over unit-normalized primitive ideal
    numbers of norm m and the second over all unit associates of norm n,
    so each primitive representation is matched exactly once.
    """

    def __init__(self, F: QuadForm, I: Interval, nmax: int) -> None:
        cls = classify(F)
        if not (cls.irreducible and cls.primitive):
            raise ValueError(f"form ({F}) is not primitive and irreducible")
        if F.f2 <= 0:
            raise ValueError("the target form needs f2 > 0")
        D = F.disc
        if not is_fundamental(D):
            raise ValueError("the target form needs a fundamental discriminant")
        if D > 0 and (math.isinf(I[0]) or math.isinf(I[1])):
            raise ValueError("indefinite forms need a bounded interval")
        self.F, self.I, self.nmax = F, I, nmax
        self.G = class_group(D)
        self.target = self.G.index_of(F)
        f_basis = ideal_of_form(F.coeffs)
        self.entries = {}
        for A in self.G.classes:
            b = self.G.mult[self.G.inverse(A.index)][self.target]
            B = self.G.classes[b]
            self.entries[A.index] = (b, composition_entry(A, B, f_basis, self.target))
        self.normed = {c.index: _elements_of_norm_upto(c, nmax, True) for c in self.G.classes}
        self.units = {c.index: _unit_matrices(c) for c in self.G.classes}
        self.imax = max(abs(I[0]), abs(I[1]))

    def _in_I(self, q: int) -> bool:
        return self.I[0] < q <= self.I[1]

    def lhs(self, N: int, weight: Callable[[int], float]) -> list[float]:
        reps = _representations(self.F, N, self.I)
        return [weight(y) for x, y in reps if math.gcd(x, y) == 1]

    def _associates(self, b: int, y: tuple[int, int], entry: CompositionEntry, x: tuple[int, int]) -> Iterator[int]:
        """Q-values of x times every associate of y that lands in I."""
        mats = self.units[b]
        if self.G.field.disc_form < 0:
            for M in mats:
                r, q = entry.apply(x, _mv(M, y))
                if math.gcd(r, q) == 1 and self._in_I(q):
                    yield q
            return
        up, down = mats
        for sign in (1, -1):
            y0 = (sign * y[0], sign * y[1])
            for M in (up, down):
                yy = y0 if M is up else _mv(M, y0)
                prev = math.inf
                while True:
                    r, q = entry.apply(x, yy)
                    if abs(q) > self.imax and abs(q) > prev:
                        break
                    if math.gcd(r, q) == 1 and self._in_I(q):
                        yield q
                    prev = abs(q)
                    yy = _mv(M, yy)

    def rhs(self, m: int, n: int, weight: Callable[[int], float]) -> list[float]:
        out = []
        for A in self.G.classes:
            b, entry = self.entries[A.index]
            for x in self.normed[A.index].get(m, ()):
                for y in self.normed[b].get(n, ()):
                    out.extend(weight(q) for q in self._associates(b, y, entry, x))
        return out


def verify_key_decomp(
    F: QuadForm,
    m: int,
    n: int,
    I: Interval,
    weight: Callable[[int], float] = lambda _: 1,
    checker: KeyDecomposition | None = None,
) -> tuple[float, float, bool]:
    """(lhs, rhs, equal) for the factorization identity at m*n.

    Equality is exact for integer weights; float weights are compared after
    sorting the individual terms, so the sums agree term by term.
    """
    if m < 1 or n < 1 or m * n > 10**8:
        raise ValueError("need m, n >= 1 and m n <= 10^8")
    if checker is None or checker.nmax < max(m, n):
        checker = KeyDecomposition(F, I, max(m, n))
    left = checker.lhs(m * n, weight)
    right = checker.rhs(m, n, weight)
    equal = sorted(left) == sorted(right)
    return math.fsum(left), math.fsum(right), equal


# ---------------------------------------------------------------- lattice congruence


def delta_congruence(
    z: tuple[int, int], y: tuple[int, int], q1: int, q2: int
) -> tuple[int, bool, tuple[int, int] | None]:
    """Is the solution w of w.y = q1, w.z = q2 integral? Returns
    (y1 z2 - y2 z1, holds, w)."""
    delta = y[0] * z[1] - y[1] * z[0]
    if delta == 0:
        raise ValueError("y and z are proportional")
    n1 = q1 * z[1] - q2 * y[1]
    n2 = q2 * y[0] - q1 * z[0]
    if n1 % delta == 0 and n2 % delta == 0:
        return delta, True, (n1 // delta, n2 // delta)
    return delta, False, None
