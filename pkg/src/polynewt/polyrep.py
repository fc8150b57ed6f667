"""Sparse distributed polynomial systems and monomial decomposition.

A monomial x^d is split into the product of its distinct variables times a
common factor x^(d-1), the part shared by all partial derivatives.  Power
tables defer high-degree evaluation to per-variable tables of pure powers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .xprec import PrecisionLevel, is_zero


class SystemParseError(ValueError):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Monomial:
    """coeff * prod x_i^d_i with sorted variable indices and d_i >= 1."""

    coeff: object
    exponents: tuple  # ((var_index, d), ...) with strictly increasing indices

    def __post_init__(self):
        if is_zero(self.coeff):
            raise ValueError("monomials must carry a nonzero coefficient")
        prev = -1
        for var, d in self.exponents:
            if var <= prev:
                raise ValueError("variable indices must be strictly increasing")
            if d < 1:
                raise ValueError("listed exponents must be >= 1")
            prev = var

    def degree(self) -> int:
        return sum(d for _, d in self.exponents)

    def exponent_key(self, n_vars: int) -> tuple:
        dense = [0] * n_vars
        for var, d in self.exponents:
            dense[var] = d
        return tuple(dense)


@dataclass(frozen=True)
class MonomialDecomposition:
    """Split of an exponent vector into distinct variables x common factor."""

    distinct_vars: tuple   # variable indices with d >= 1
    common_factor: tuple   # ((var_index, d-1), ...) for variables with d >= 2


def decompose(mon: Monomial) -> MonomialDecomposition:
    distinct = tuple(var for var, _ in mon.exponents)
    common = tuple((var, d - 1) for var, d in mon.exponents if d >= 2)
    return MonomialDecomposition(distinct, common)


def recompose(dec: MonomialDecomposition) -> tuple:
    """Exponent list ((var, d), ...) reproduced from a decomposition."""
    extra = dict(dec.common_factor)
    return tuple((var, 1 + extra.get(var, 0)) for var in dec.distinct_vars)


@dataclass
class PolySystem:
    """m polynomials in n_vars variables, each a list of monomials."""

    n_vars: int
    polys: list  # list[list[Monomial]]

    def __post_init__(self):
        for poly in self.polys:
            for mon in poly:
                for var, _ in mon.exponents:
                    if not 0 <= var < self.n_vars:
                        raise ValueError(
                            f"variable index {var} out of range for n_vars={self.n_vars}")

    @property
    def n_eqs(self) -> int:
        return len(self.polys)

    def monomial_count(self) -> int:
        return sum(len(p) for p in self.polys)

    def max_exponent(self) -> dict:
        """Largest exponent per variable appearing anywhere in the system."""
        out = {}
        for poly in self.polys:
            for mon in poly:
                for var, d in mon.exponents:
                    if d > out.get(var, 0):
                        out[var] = d
        return out

    def canonicalized(self) -> "PolySystem":
        """Monomials of each polynomial in lexicographic exponent order."""
        polys = [sorted(p, key=lambda m: m.exponent_key(self.n_vars))
                 for p in self.polys]
        return PolySystem(self.n_vars, polys)


@dataclass
class PowerTable:
    """Per evaluation point: powers[var][d] = x_var^d for d = 1..maxdeg."""

    powers: dict = field(default_factory=dict)

    def get(self, var: int, d: int):
        return self.powers[var][d]


def build_power_table(x, system: PolySystem) -> PowerTable:
    """Pure-power tables for one point, maxdeg_i - 1 multiplications each."""
    if len(x) != system.n_vars:
        raise ValueError(f"point dimension {len(x)} != n_vars {system.n_vars}")
    table = PowerTable()
    for var, maxdeg in system.max_exponent().items():
        row = {1: x[var]}
        for d in range(2, maxdeg + 1):
            row[d] = row[d - 1] * x[var]
        table.powers[var] = row
    return table


def eval_common_factor(dec: MonomialDecomposition, table: PowerTable):
    """Product of table entries for the common factor; 1 for an empty factor."""
    acc = None
    for var, e in dec.common_factor:
        p = table.get(var, e)
        acc = p if acc is None else acc * p
    return acc  # None encodes the empty product; callers skip the multiply


# ---------------------------------------------------------------------------
# text format: first line "m n"; polynomials are "+"/"-"-joined terms ending
# in ";"; a term is "c" or "c*x<i>^<d>*..." with "^1" omitted and complex
# coefficients written "(re,im)"

_TOKEN = re.compile(r"\s*(?:(?P<var>x(?P<idx>\d+)(?:\^(?P<exp>\d+))?)"
                    r"|(?P<cplx>\([^()]*\))"
                    r"|(?P<num>[0-9][0-9_.eE+-]*|\.[0-9][0-9_.eE+-]*))")


def serialize_system(system: PolySystem, level: PrecisionLevel) -> str:
    lines = [f"{system.n_eqs} {system.n_vars}"]
    for poly in system.canonicalized().polys:
        parts = []
        for i, mon in enumerate(poly):
            coeff = mon.coeff
            sep = ""
            if i > 0:
                if not level.cplx and coeff < 0:
                    sep, coeff = " - ", -coeff
                else:
                    sep = " + "
            body = level.render(coeff)
            for var, d in mon.exponents:
                body += f"*x{var}" + (f"^{d}" if d > 1 else "")
            parts.append(sep + body)
        lines.append("".join(parts) + ";")
    return "\n".join(lines) + "\n"


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def location(self, pos: int | None = None) -> tuple[int, int]:
        p = self.pos if pos is None else pos
        line = self.text.count("\n", 0, p) + 1
        col = p - (self.text.rfind("\n", 0, p) + 1) + 1
        return line, col

    def error(self, message: str, pos: int | None = None):
        line, col = self.location(pos)
        raise SystemParseError(line, col, message)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""


def parse_system(text: str, level: PrecisionLevel) -> PolySystem:
    sc = _Scanner(text)
    header = text.split("\n", 1)[0].split()
    if len(header) != 2:
        sc.error("expected header line 'm n'")
    try:
        m, n_vars = int(header[0]), int(header[1])
    except ValueError:
        sc.error("expected integer equation and variable counts")
    sc.pos = text.index("\n") + 1 if "\n" in text else len(text)

    polys = []
    for _ in range(m):
        polys.append(_parse_poly(sc, level, n_vars))
    sc.skip_ws()
    if sc.pos < len(sc.text):
        sc.error("trailing input after the last polynomial")
    return PolySystem(n_vars, polys)


def _parse_poly(sc: _Scanner, level: PrecisionLevel, n_vars: int) -> list:
    terms = []
    negate = False
    pending_sign = False
    first = True
    while True:
        ch = sc.peek()
        if ch == "":
            sc.error("unexpected end of input, expected ';'")
        if ch == ";":
            if pending_sign:
                sc.error("expected a term after the sign")
            sc.pos += 1
            if first:
                sc.error("empty polynomial")
            return terms
        if ch in "+-−":
            if pending_sign:
                sc.error("expected a term after the sign")
            sc.pos += 1
            negate = ch != "+"
            pending_sign = True
            first = False
            continue
        if terms and not pending_sign:
            sc.error("expected '+', '-' or ';' between terms")
        mon = _parse_term(sc, level, n_vars, negate)
        if mon is not None:
            terms.append(mon)
        negate = False
        pending_sign = False
        first = False


def _parse_term(sc: _Scanner, level: PrecisionLevel, n_vars: int, negate: bool):
    coeff = None
    exps: dict[int, int] = {}
    saw_factor = False
    while True:
        sc.skip_ws()
        mobj = _TOKEN.match(sc.text, sc.pos)
        if mobj is None or mobj.end() == mobj.start():
            sc.error("expected a coefficient or variable factor")
        if mobj.group("var"):
            idx = int(mobj.group("idx"))
            if not 0 <= idx < n_vars:
                sc.error(f"variable index {idx} out of range (n={n_vars})",
                         mobj.start())
            raw_exp = mobj.group("exp")
            if raw_exp is None and "^" in mobj.group("var"):
                sc.error("malformed exponent", mobj.start())
            d = int(raw_exp) if raw_exp else 1
            if d < 1:
                sc.error("exponents must be >= 1", mobj.start())
            exps[idx] = exps.get(idx, 0) + d
        elif mobj.group("cplx"):
            if coeff is not None:
                sc.error("duplicate coefficient", mobj.start())
            try:
                coeff = level.parse(mobj.group("cplx"))
            except Exception:
                sc.error("malformed complex coefficient", mobj.start())
        else:
            if coeff is not None:
                sc.error("duplicate coefficient", mobj.start())
            try:
                coeff = level.parse(mobj.group("num"))
            except Exception:
                sc.error("malformed numeric coefficient", mobj.start())
        sc.pos = mobj.end()
        saw_factor = True
        if sc.peek() == "*":
            sc.pos += 1
            continue
        break
    # a '^' left dangling (e.g. "x0^") surfaces as a stray character here
    if sc.peek() == "^":
        sc.error("malformed exponent")
    if not saw_factor:
        sc.error("empty term")
    if coeff is None:
        coeff = level.one()
    if negate:
        coeff = -coeff
    exponents = tuple(sorted(exps.items()))
    try:
        return Monomial(coeff, exponents)
    except ValueError as exc:
        sc.error(str(exc))
