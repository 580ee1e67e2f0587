"""Exact arithmetic over F2[t, t^-1] and its fraction field F2(t).

A :class:`LaurentPoly` is stored as ``(bits, shift)``: bit ``k`` of ``bits``
is the coefficient of ``t**(k + shift)``.  The lowest bit of ``bits`` is
always set (or ``bits == 0`` for the zero polynomial), so the representation
is canonical and multiplication is a carry-less product of two ints.

The same type doubles as the polynomial ring F2[Y] used for unrolled
complexes; the variable name only matters for printing.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .f2 import F2Matrix, iter_bits


def binom_mod2(m: int, n: int) -> int:
    """Binomial coefficient ``C(m, n)`` reduced mod 2, for any integer ``m``.

    Uses Lucas' theorem for ``m >= 0`` and ``C(-a, n) = (-1)^n C(a+n-1, n)``
    for negative ``m``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if m < 0:
        m = -m + n - 1
    return 1 if (m & n) == n else 0


def _clmul(a: int, b: int) -> int:
    if a.bit_count() > b.bit_count():
        a, b = b, a
    out = 0
    while a:
        low = a & -a
        out ^= b << (low.bit_length() - 1)
        a ^= low
    return out


def _poly_divmod(a: int, b: int) -> tuple[int, int]:
    """Division with remainder in F2[t], polynomials packed as ints."""
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = b.bit_length()
    q = 0
    while a.bit_length() >= db:
        s = a.bit_length() - db
        q ^= 1 << s
        a ^= b << s
    return q, a


def _poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _poly_divmod(a, b)[1]
    return a


class LaurentPoly:
    """An element of F2[t, t^-1].  Immutable and hashable."""

    __slots__ = ("bits", "shift")
    var = "t"

    def __init__(self, bits: int = 0, shift: int = 0):
        if bits < 0:
            raise ValueError("bits must be nonnegative")
        if bits == 0:
            shift = 0
        else:
            tz = (bits & -bits).bit_length() - 1
            bits >>= tz
            shift += tz
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "shift", shift)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls(0, 0)

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls(1, 0)

    @classmethod
    def monomial(cls, e: int) -> "LaurentPoly":
        return cls(1, e)

    @classmethod
    def from_exponents(cls, exps: Iterable[int]) -> "LaurentPoly":
        """Sum of ``t**e`` over ``exps``; repeated exponents cancel mod 2."""
        exps = list(exps)
        if not exps:
            return cls.zero()
        lo = min(exps)
        bits = 0
        for e in exps:
            bits ^= 1 << (e - lo)
        return cls(bits, lo)

    @classmethod
    def from_dict(cls, coeffs: Mapping[int, int]) -> "LaurentPoly":
        return cls.from_exponents(e for e, c in coeffs.items() if c % 2)

    @classmethod
    def coerce(cls, x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return cls.one() if x % 2 else cls.zero()
        raise TypeError(f"cannot interpret {x!r} as a Laurent polynomial")

    # -- inspection ---------------------------------------------------------
    def exponents(self) -> list[int]:
        return [k + self.shift for k in iter_bits(self.bits)]

    def to_dict(self) -> dict[int, int]:
        return {e: 1 for e in self.exponents()}

    def __bool__(self) -> bool:
        return self.bits != 0

    def is_zero(self) -> bool:
        return self.bits == 0

    def is_unit(self) -> bool:
        """Units of F2[t, t^-1] are exactly the monomials."""
        return self.bits == 1

    @property
    def support_size(self) -> int:
        return self.bits.bit_count()

    @property
    def valuation(self) -> int:
        if not self.bits:
            raise ValueError("the zero polynomial has no valuation")
        return self.shift

    @property
    def degree(self) -> int:
        if not self.bits:
            raise ValueError("the zero polynomial has no degree")
        return self.shift + self.bits.bit_length() - 1

    @property
    def span(self) -> int:
        """Degree minus valuation; the Euclidean norm on F2[t, t^-1]."""
        return self.bits.bit_length() - 1 if self.bits else -1

    def normalized(self) -> "LaurentPoly":
        """The associate with valuation zero (an honest polynomial with c0 = 1)."""
        return LaurentPoly(self.bits, 0)

    def coefficient(self, e: int) -> int:
        k = e - self.shift
        return (self.bits >> k) & 1 if k >= 0 else 0

    def at_one(self) -> int:
        return self.bits.bit_count() & 1

    def __call__(self, x: int) -> int:
        """Evaluate at ``x`` in F2 (``x = 0`` requires nonnegative exponents)."""
        if x % 2:
            return self.at_one()
        if self.bits and self.shift < 0:
            raise ZeroDivisionError("negative power evaluated at 0")
        return self.coefficient(0)

    # -- arithmetic ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.coerce(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.bits == other.bits and self.shift == other.shift

    def __hash__(self) -> int:
        return hash((self.bits, self.shift))

    def __add__(self, other) -> "LaurentPoly":
        other = LaurentPoly.coerce(other)
        if not other.bits:
            return self
        if not self.bits:
            return other
        lo = min(self.shift, other.shift)
        return LaurentPoly((self.bits << (self.shift - lo)) ^ (other.bits << (other.shift - lo)), lo)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return self

    def __mul__(self, other) -> "LaurentPoly":
        other = LaurentPoly.coerce(other)
        if not self.bits or not other.bits:
            return LaurentPoly.zero()
        return LaurentPoly(_clmul(self.bits, other.bits), self.shift + other.shift)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if not self.is_unit():
                raise ZeroDivisionError("only monomials are invertible")
            return LaurentPoly(1, self.shift * n)
        out = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shifted(self, e: int) -> "LaurentPoly":
        """Multiply by the unit ``t**e``."""
        return LaurentPoly(self.bits, self.shift + e)

    def euclid_divmod(self, other: "LaurentPoly") -> tuple["LaurentPoly", "LaurentPoly"]:
        """``self = q*other + r`` with ``r == 0`` or ``r.span < other.span``."""
        if not other.bits:
            raise ZeroDivisionError("division by zero")
        if not self.bits:
            return LaurentPoly.zero(), LaurentPoly.zero()
        q, r = _poly_divmod(self.bits, other.bits)
        return LaurentPoly(q, self.shift - other.shift), LaurentPoly(r, self.shift)

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        q, r = self.euclid_divmod(other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other: "LaurentPoly") -> bool:
        if not self.bits:
            return not other.bits
        return not other.euclid_divmod(self)[1]

    def gcd(self, other: "LaurentPoly") -> "LaurentPoly":
        """Normalized gcd (valuation zero); ``gcd(0, 0) = 0``."""
        return LaurentPoly(_poly_gcd(self.bits, other.bits), 0)

    def hasse(self, n: int) -> "LaurentPoly":
        return hasse_derivative(self, n)

    # -- printing -----------------------------------------------------------
    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        return self.to_string(self.var)

    def to_string(self, var: str = "t") -> str:
        if not self.bits:
            return "0"
        terms = []
        for e in self.exponents():
            if e == 0:
                terms.append("1")
            elif e == 1:
                terms.append(var)
            else:
                terms.append(f"{var}^{e}")
        return " + ".join(terms)


ZERO = LaurentPoly.zero()
ONE = LaurentPoly.one()
T = LaurentPoly.monomial(1)


def hasse_derivative(p: LaurentPoly, n: int) -> LaurentPoly:
    """The ``n``-th Hasse derivative, ``t^m -> C(m, n) t^(m-n)``, mod 2."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return LaurentPoly.from_exponents(m - n for m in p.exponents() if binom_mod2(m, n))


class RationalFn:
    """An element of F2(t), kept in lowest terms with a normalized denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=ONE):
        num = LaurentPoly.coerce(num)
        den = LaurentPoly.coerce(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            num, den = ZERO, ONE
        else:
            g = num.gcd(den)
            num = num.exact_div(g)
            den = den.exact_div(g)
            # move the monomial unit of the denominator into the numerator
            num = num.shifted(-den.shift)
            den = den.normalized()
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFn is immutable")

    @classmethod
    def coerce(cls, x) -> "RationalFn":
        return x if isinstance(x, RationalFn) else cls(x)

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFn):
            try:
                other = RationalFn.coerce(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other) -> "RationalFn":
        other = RationalFn.coerce(other)
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __mul__(self, other) -> "RationalFn":
        other = RationalFn.coerce(other)
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFn":
        if not self.num:
            raise ZeroDivisionError("zero is not invertible")
        return RationalFn(self.den, self.num)

    def __truediv__(self, other) -> "RationalFn":
        return self * RationalFn.coerce(other).inverse()

    def __repr__(self) -> str:
        if self.den == ONE:
            return f"RationalFn({self.num})"
        return f"RationalFn(({self.num}) / ({self.den}))"


class PolyMatrix:
    """A matrix with entries in F2[t, t^-1].  Immutable."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, entries: Sequence[Sequence], nrows: int | None = None,
                 ncols: int | None = None):
        rows = tuple(tuple(LaurentPoly.coerce(x) for x in row) for row in entries)
        if nrows is None:
            nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise ValueError("inconsistent matrix dimensions")
        object.__setattr__(self, "nrows", nrows)
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, name, value):
        raise AttributeError("PolyMatrix is immutable")

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> "PolyMatrix":
        ncols = nrows if ncols is None else ncols
        return cls([[ZERO] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_f2(cls, m: F2Matrix) -> "PolyMatrix":
        return cls([[m[i, j] for j in range(m.ncols)] for i in range(m.nrows)],
                   m.nrows, m.ncols)

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[F2Matrix]) -> "PolyMatrix":
        """``sum_j coeffs[j] * Y**j``."""
        if not coeffs:
            raise ValueError("need at least one coefficient matrix")
        n, m = coeffs[0].shape
        grid = [[[] for _ in range(m)] for _ in range(n)]
        for power, c in enumerate(coeffs):
            if c.shape != (n, m):
                raise ValueError("coefficient shapes differ")
            for i, j in c.entries():
                grid[i][j].append(power)
        return cls([[LaurentPoly.from_exponents(e) for e in row] for row in grid], n, m)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, idx: tuple[int, int]) -> LaurentPoly:
        i, j = idx
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(x) for x in row) for row in self.entries)
        return f"PolyMatrix([{body}])"

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return PolyMatrix([[a + b for a, b in zip(r, s)]
                           for r, s in zip(self.entries, other.entries)], *self.shape)

    __sub__ = __add__

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.entries)) if other.nrows else [()] * other.ncols
        out = []
        for row in self.entries:
            new = []
            for col in cols:
                acc = ZERO
                for a, b in zip(row, col):
                    if a.bits and b.bits:
                        acc = acc + a * b
                new.append(acc)
            out.append(new)
        return PolyMatrix(out, self.nrows, other.ncols)

    def scale(self, c) -> "PolyMatrix":
        c = LaurentPoly.coerce(c)
        return PolyMatrix([[c * x for x in row] for row in self.entries], *self.shape)

    @property
    def T(self) -> "PolyMatrix":
        return PolyMatrix([list(col) for col in zip(*self.entries)] if self.nrows
                          else [[] for _ in range(self.ncols)], self.ncols, self.nrows)

    def is_zero(self) -> bool:
        return all(not x for row in self.entries for x in row)

    def is_diagonal(self) -> bool:
        return all(not x for i, row in enumerate(self.entries)
                   for j, x in enumerate(row) if i != j)

    def diagonal(self) -> list[LaurentPoly]:
        return [self.entries[i][i] for i in range(min(self.shape))]

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix([[fn(x) for x in row] for row in self.entries], *self.shape)

    def hasse(self, n: int) -> "PolyMatrix":
        """Entrywise ``n``-th Hasse derivative."""
        return self.map(lambda x: hasse_derivative(x, n))

    def at_one(self) -> F2Matrix:
        rows = []
        for row in self.entries:
            r = 0
            for j, x in enumerate(row):
                if x.at_one():
                    r |= 1 << j
            rows.append(r)
        return F2Matrix(self.nrows, self.ncols, rows)

    def coefficient_matrix(self, e: int) -> F2Matrix:
        """The F2 matrix of coefficients of ``t**e``."""
        rows = []
        for row in self.entries:
            r = 0
            for j, x in enumerate(row):
                if x.coefficient(e):
                    r |= 1 << j
            rows.append(r)
        return F2Matrix(self.nrows, self.ncols, rows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix([[self.entries[i][j] for j in cols] for i in rows],
                          len(rows), len(cols))

    def max_span(self) -> int:
        return max((x.span for row in self.entries for x in row), default=-1)

    def determinant(self) -> LaurentPoly:
        """Determinant via Gaussian elimination over F2(t)."""
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        work = [[RationalFn(x) for x in row] for row in self.entries]
        n = self.nrows
        det = RationalFn(ONE)
        for c in range(n):
            piv = next((r for r in range(c, n) if work[r][c]), None)
            if piv is None:
                return ZERO
            work[c], work[piv] = work[piv], work[c]
            p = work[c][c]
            det = det * p
            inv = p.inverse()
            for r in range(c + 1, n):
                if work[r][c]:
                    f = work[r][c] * inv
                    work[r] = [a + f * b for a, b in zip(work[r], work[c])]
        if det.den != ONE:
            raise ArithmeticError("determinant is not a Laurent polynomial")
        return det.num


def rational_rank(m: PolyMatrix) -> int:
    """Rank of ``m`` over the fraction field F2(t)."""
    work = [[RationalFn(x) for x in row] for row in m.entries]
    rank = 0
    nrows = len(work)
    for c in range(m.ncols):
        piv = next((r for r in range(rank, nrows) if work[r][c]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = work[rank][c].inverse()
        prow = work[rank]
        for r in range(rank + 1, nrows):
            if work[r][c]:
                f = work[r][c] * inv
                work[r] = [a + f * b if b else a for a, b in zip(work[r], prow)]
        rank += 1
        if rank == nrows:
            break
    return rank


class SmithResult(tuple):
    """``(U, D, V)`` with ``U @ M @ V == D``; inverses attached as attributes."""

    U: PolyMatrix
    D: PolyMatrix
    V: PolyMatrix
    U_inv: PolyMatrix
    V_inv: PolyMatrix

    def __new__(cls, U, D, V, U_inv, V_inv):
        self = super().__new__(cls, (U, D, V))
        self.U, self.D, self.V, self.U_inv, self.V_inv = U, D, V, U_inv, V_inv
        return self

    @property
    def invariant_factors(self) -> list[LaurentPoly]:
        return [x for x in self.D.diagonal() if x]


def smith_normal_form(m: PolyMatrix) -> SmithResult:
    """Smith normal form over the PID F2[t, t^-1].

    Returns ``(U, D, V)`` with ``U @ m @ V == D`` diagonal, each diagonal entry
    dividing the next, and nonzero diagonal entries normalized to valuation 0.
    The inverses of ``U`` and ``V`` are available as ``.U_inv`` and ``.V_inv``.
    """
    nr, nc = m.shape
    D = [list(row) for row in m.entries]
    U = [list(row) for row in PolyMatrix.identity(nr).entries]
    Ui = [list(row) for row in PolyMatrix.identity(nr).entries]
    V = [list(row) for row in PolyMatrix.identity(nc).entries]
    Vi = [list(row) for row in PolyMatrix.identity(nc).entries]

    def row_add(dst, src, c):
        # row_dst += c * row_src; inverse op is the same in characteristic 2
        for M_ in (D, U):
            rs, rd = M_[src], M_[dst]
            M_[dst] = [a + c * b if b else a for a, b in zip(rd, rs)]
        for row in Ui:
            if row[dst]:
                row[src] = row[src] + c * row[dst]

    def col_add(dst, src, c):
        for M_ in (D, V):
            for row in M_:
                if row[src]:
                    row[dst] = row[dst] + c * row[src]
        rs, rd = Vi[dst], Vi[src]
        Vi[src] = [a + c * b if b else a for a, b in zip(rd, rs)]

    def row_swap(a, b):
        for M_ in (D, U):
            M_[a], M_[b] = M_[b], M_[a]
        for row in Ui:
            row[a], row[b] = row[b], row[a]

    def col_swap(a, b):
        for M_ in (D, V):
            for row in M_:
                row[a], row[b] = row[b], row[a]
        Vi[a], Vi[b] = Vi[b], Vi[a]

    for k in range(min(nr, nc)):
        best = None
        for i in range(k, nr):
            for j in range(k, nc):
                x = D[i][j]
                if x and (best is None or x.span < best[0]):
                    best = (x.span, i, j)
        if best is None:
            break
        _, i, j = best
        if i != k:
            row_swap(i, k)
        if j != k:
            col_swap(j, k)
        while True:
            changed = False
            for i in range(k + 1, nr):
                if D[i][k]:
                    q, r = D[i][k].euclid_divmod(D[k][k])
                    row_add(i, k, q)
                    if r:
                        row_swap(i, k)
                        changed = True
            for j in range(k + 1, nc):
                if D[k][j]:
                    q, r = D[k][j].euclid_divmod(D[k][k])
                    col_add(j, k, q)
                    if r:
                        col_swap(j, k)
                        changed = True
            if changed:
                continue
            if any(D[i][k] for i in range(k + 1, nr)) or any(D[k][j] for j in range(k + 1, nc)):
                continue
            bad = next(((i, j) for i in range(k + 1, nr) for j in range(k + 1, nc)
                        if D[i][j] and not D[k][k].divides(D[i][j])), None)
            if bad is None:
                break
            row_add(k, bad[0], ONE)
        # scale row k by the unit t^-v so the pivot has valuation 0
        v = D[k][k].valuation
        if v:
            unit = LaurentPoly.monomial(-v)
            D[k] = [unit * x for x in D[k]]
            U[k] = [unit * x for x in U[k]]
            inv = LaurentPoly.monomial(v)
            for row in Ui:
                row[k] = inv * row[k]

    return SmithResult(PolyMatrix(U, nr, nr), PolyMatrix(D, nr, nc), PolyMatrix(V, nc, nc),
                       PolyMatrix(Ui, nr, nr), PolyMatrix(Vi, nc, nc))


def solve_rational(A: PolyMatrix, B: PolyMatrix) -> tuple[PolyMatrix, LaurentPoly]:
    """Solve ``A X = B`` over F2(t); returns ``(N, den)`` with ``X = N / den``.

    ``den`` is normalized (nonzero constant term) and is the least common
    denominator of the entries of ``X``.
    """
    n = A.nrows
    if A.ncols != n or B.nrows != n:
        raise ValueError("shape mismatch")
    k = B.ncols
    work = [[RationalFn(x) for x in A.entries[r]] + [RationalFn(x) for x in B.entries[r]]
            for r in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if work[r][c]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular over F2(t)")
        work[c], work[piv] = work[piv], work[c]
        inv = work[c][c].inverse()
        work[c] = [x * inv if x else x for x in work[c]]
        prow = work[c]
        for r in range(n):
            if r != c and work[r][c]:
                f = work[r][c]
                work[r] = [a + f * b if b else a for a, b in zip(work[r], prow)]
    sol = [row[n:] for row in work]
    den = ONE
    for row in sol:
        for x in row:
            if x:
                den = (den * x.den).exact_div(den.gcd(x.den))
    entries = [[x.num * den.exact_div(x.den) if x else ZERO for x in row] for row in sol]
    return PolyMatrix(entries, n, k), den
