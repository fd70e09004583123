"""Charts ``Q -> P^gp ⊃ P`` for log schemes with boundary.

Q is always free (``N^q_rank``); ``rho`` sends its generators into the group
of P and need not land in P itself.  Also: standard semistable charts and the
binomial equations of closures taken inside ``W[Q ⊕ P]``.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import MalformedInput, UnsupportedMonoid
from .intlat import IntMatrix, Vector, solve_integral
from .monoid import AffineMonoid, contains, generated_with, groupification


@dataclass(frozen=True)
class BoundaryChart:
    q_rank: int
    P: AffineMonoid
    rho: IntMatrix  # columns: images of the generators of Q in P^gp
    residue_char: int = 0
    names: Optional[Tuple[str, ...]] = None
    # X̄ = W[P] itself; otherwise condition (ii) must be asserted by the caller
    monomial: bool = True
    # coordinates cut out in X̄ (the semistable "t_1 = ... = t_i1 = 0" block)
    vanishing: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.q_rank < 0:
            raise MalformedInput("q_rank must be nonnegative")
        if self.residue_char < 0:
            raise MalformedInput("residue_char must be nonnegative")
        if self.names is not None:
            object.__setattr__(self, "names", tuple(str(s) for s in self.names))
            if len(self.names) != self.P.ambient_rank:
                raise MalformedInput(
                    f"{len(self.names)} names for an ambient lattice of rank {self.P.ambient_rank}"
                )

    @property
    def n(self) -> int:
        return self.P.ambient_rank

    @property
    def variable_names(self) -> Tuple[str, ...]:
        if self.names is not None:
            return self.names
        return tuple(f"U{i + 1}" for i in range(self.n))

    @property
    def base_names(self) -> Tuple[str, ...]:
        return ("q",) if self.q_rank == 1 else tuple(f"q{j + 1}" for j in range(self.q_rank))

    def rho_columns(self) -> List[Vector]:
        return self.rho.columns()

    def with_residue_char(self, p: int) -> "BoundaryChart":
        return BoundaryChart(self.q_rank, self.P, self.rho, p, self.names, self.monomial, self.vanishing)

    def to_json(self):
        out = {
            "base": {"q_rank": self.q_rank, "residue_char": self.residue_char},
            "P": self.P.to_json(),
            "rho": [list(c) for c in self.rho_columns()],
        }
        if self.names is not None:
            out["names"] = list(self.names)
        if not self.monomial:
            out["monomial"] = False
        if self.vanishing is not None:
            out["vanishing"] = list(self.vanishing)
        return out

    @classmethod
    def from_json(cls, data) -> "BoundaryChart":
        try:
            base = data["base"]
            q_rank = _int(base["q_rank"], "base.q_rank")
            residue_char = _int(base.get("residue_char", 0), "base.residue_char")
            pdata = data["P"]
            n = _int(pdata["ambient_rank"], "P.ambient_rank")
            gens = [_int_list(g, f"P.generators[{i}]") for i, g in enumerate(pdata["generators"])]
            rho_cols = [_int_list(c, f"rho[{j}]") for j, c in enumerate(data["rho"])]
        except (KeyError, TypeError, AttributeError) as exc:
            raise MalformedInput(f"chart JSON is missing or mistypes a field: {exc}") from exc
        if len(rho_cols) != q_rank:
            raise MalformedInput(f"rho has {len(rho_cols)} columns but q_rank is {q_rank}")
        for g in gens:
            if len(g) != n:
                raise MalformedInput(f"generator {g} does not have length {n}")
        for c in rho_cols:
            if len(c) != n:
                raise MalformedInput(f"rho column {c} does not have length {n}")
        names = data.get("names")
        if names is not None and (not isinstance(names, list) or not all(isinstance(s, str) for s in names)):
            raise MalformedInput("names must be a list of strings")
        vanishing = data.get("vanishing")
        if vanishing is not None:
            vanishing = tuple(_int_list(vanishing, "vanishing"))
        monomial = data.get("monomial", True)
        if not isinstance(monomial, bool):
            raise MalformedInput("monomial must be a boolean")
        return cls(
            q_rank,
            AffineMonoid(n, tuple(tuple(g) for g in gens)),
            IntMatrix.from_columns(rho_cols, rows=n),
            residue_char,
            tuple(names) if names is not None else None,
            monomial,
            vanishing,
        )


def _int(x, what) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise MalformedInput(f"{what} must be an integer, got {x!r}")
    return x


def _int_list(xs, what) -> List[int]:
    if not isinstance(xs, list):
        raise MalformedInput(f"{what} must be a list of integers")
    return [_int(x, what) for x in xs]


def chart(P_generators, rho, names=None, residue_char=0, ambient_rank=None) -> BoundaryChart:
    """Convenience constructor: ``rho`` is a list of columns (one per generator of Q)."""
    if ambient_rank is None:
        ambient_rank = len(rho[0]) if rho else len(P_generators[0])
    return BoundaryChart(
        len(rho),
        AffineMonoid(ambient_rank, tuple(tuple(g) for g in P_generators)),
        IntMatrix.from_columns(rho, rows=ambient_rank),
        residue_char,
        tuple(names) if names else None,
    )


def free_chart(rho: Sequence[int], names=None, residue_char=0) -> BoundaryChart:
    """Chart with P = N^n and a single base generator sent to ``rho``."""
    n = len(rho)
    return BoundaryChart(
        1, AffineMonoid.free(n), IntMatrix.from_columns([rho], rows=n), residue_char,
        tuple(names) if names else None,
    )


def is_standard_free(P: AffineMonoid) -> bool:
    return P.generators == AffineMonoid.free(P.ambient_rank).generators


def rho_in_lattice_coordinates(c: BoundaryChart) -> Tuple[IntMatrix, IntMatrix]:
    """``(basis, rho')``: a Hermite basis of P^gp and rho written in it.

    Raises ``MalformedInput`` if some rho(q_j) is outside P^gp.
    """
    basis = groupification(c.P)
    cols = []
    for j, col in enumerate(c.rho_columns()):
        x = solve_integral(basis, col)
        if x is None:
            raise MalformedInput(f"rho(q{j + 1}) = {list(col)} does not lie in P^gp")
        cols.append(x)
    return basis, IntMatrix.from_columns(cols, rows=basis.cols)


@dataclass(frozen=True)
class ChartDiagnostics:
    valid: bool
    rho_shape_ok: bool
    rho_in_gp: bool
    rho_in_P: Tuple[bool, ...]
    extends_to_bar: bool
    messages: Tuple[str, ...] = ()

    def to_json(self):
        return {
            "valid": self.valid,
            "fine": True,
            "rho_shape_ok": self.rho_shape_ok,
            "rho_in_gp": self.rho_in_gp,
            "rho_in_P": list(self.rho_in_P),
            "extends_to_bar": self.extends_to_bar,
            "messages": list(self.messages),
        }


def validate_chart(c: BoundaryChart) -> ChartDiagnostics:
    """Structural checks.  P is fine by construction (a submonoid of a lattice)."""
    msgs = []
    shape_ok = c.rho.rows == c.n and c.rho.cols == c.q_rank
    if not shape_ok:
        msgs.append(f"rho is {c.rho.rows}x{c.rho.cols}, expected {c.n}x{c.q_rank}")
        return ChartDiagnostics(False, False, False, (), False, tuple(msgs))
    basis = groupification(c.P)
    in_gp = True
    for j, col in enumerate(c.rho_columns()):
        if solve_integral(basis, col) is None:
            in_gp = False
            msgs.append(f"rho(q{j + 1}) is not in P^gp")
    in_P = tuple(contains(c.P, col) for col in c.rho_columns())
    if c.vanishing is not None and any(not 0 <= i < c.n for i in c.vanishing):
        msgs.append("vanishing coordinates out of range")
        return ChartDiagnostics(False, True, in_gp, in_P, all(in_P), tuple(msgs))
    return ChartDiagnostics(in_gp, True, in_gp, in_P, all(in_P), tuple(msgs))


def boundary_monoid(c: BoundaryChart) -> AffineMonoid:
    """P' = the submonoid of P^gp generated by P and the image of rho."""
    return generated_with(c.P, c.rho_columns())


# --- binomial presentations ----------------------------------------------------


def _pos(v):
    return tuple(max(x, 0) for x in v)


def _neg(v):
    return tuple(max(-x, 0) for x in v)


def _monomial(exps, names) -> str:
    parts = []
    for e, s in zip(exps, names):
        if e == 1:
            parts.append(s)
        elif e:
            parts.append(f"{s}^{e}")
    return "*".join(parts) if parts else "1"


@dataclass(frozen=True, order=True)
class BinomialRelation:
    """``q^q_exponents * u^minus = u^plus``."""

    q_exponents: Vector
    minus: Vector
    plus: Vector

    def __post_init__(self):
        if any(a and b for a, b in zip(self.minus, self.plus)):
            raise ValueError("minus and plus must have disjoint support")

    def to_json(self):
        return {"q_exponents": list(self.q_exponents), "minus": list(self.minus), "plus": list(self.plus)}


@dataclass(frozen=True)
class BinomialPresentation:
    base_names: Tuple[str, ...]
    names: Tuple[str, ...]
    relations: Tuple[BinomialRelation, ...] = ()
    monomial_relations: Tuple[Vector, ...] = ()
    eliminated: Tuple[str, ...] = ()

    @property
    def ambient_names(self) -> Tuple[str, ...]:
        return self.base_names + self.names

    @property
    def is_empty(self) -> bool:
        return any(not any(m) for m in self.monomial_relations)

    def relation_strings(self) -> List[str]:
        out = []
        for r in self.relations:
            left = _monomial(r.q_exponents + r.minus, self.ambient_names)
            out.append(f"{left} = {_monomial(r.plus, self.names)}")
        for m in self.monomial_relations:
            out.append(f"{_monomial(m, self.names)} = 0")
        return out

    def describe(self) -> str:
        ring = f"W[{','.join(self.ambient_names)}]"
        rels = self.relation_strings()
        return ring if not rels else f"{ring}/({', '.join(rels)})"

    def to_json(self):
        return {
            "variables": list(self.ambient_names),
            "relations": [r.to_json() for r in self.relations],
            "monomial_relations": [list(m) for m in self.monomial_relations],
            "eliminated": list(self.eliminated),
            "text": self.describe(),
        }


@dataclass(frozen=True)
class BoundaryClosure:
    presentation: BinomialPresentation
    iso_to_ambient: bool
    degenerate: bool

    @property
    def relation(self) -> BinomialRelation:
        return self.presentation.relations[0]

    def to_json(self):
        out = self.presentation.to_json()
        out["iso_to_ambient"] = self.iso_to_ambient
        out["degenerate"] = self.degenerate
        return out


def closure_binomial(c: BoundaryChart) -> BoundaryClosure:
    """Equation of ``X̄ ×̄_T (T, T)`` inside ``W[Q ⊕ P]`` for P = N^n, Q = N.

    ``rho(q) = plus - minus`` with disjoint supports gives ``q u^minus = u^plus``;
    the closure maps isomorphically to ``W[P]`` exactly when ``minus`` is zero.
    """
    if c.q_rank != 1:
        raise UnsupportedMonoid("closure equations are implemented for a single base generator")
    if not is_standard_free(c.P):
        raise UnsupportedMonoid("minimal clearing is only defined here for P = N^n")
    r = c.rho.column(0)
    rel = BinomialRelation((1,), _neg(r), _pos(r))
    pres = BinomialPresentation(c.base_names, c.variable_names, (rel,))
    return BoundaryClosure(pres, iso_to_ambient=not any(rel.minus), degenerate=not any(r))


def specialize_base(pres: BinomialPresentation) -> BinomialPresentation:
    """Set the base variable to zero: ``q^a u^m = u^p`` with ``a > 0`` becomes ``u^p = 0``."""
    if len(pres.base_names) > 1:
        raise MalformedInput("specialization expects a single base variable")
    rels, monos = set(), set(pres.monomial_relations)
    for r in pres.relations:
        if any(r.q_exponents):
            monos.add(r.plus)
        else:
            rels.add(BinomialRelation((), r.minus, r.plus))
    return BinomialPresentation((), pres.names, tuple(sorted(rels)), tuple(sorted(monos)), pres.eliminated)


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _minimal_monomials(monos) -> List[Vector]:
    monos = sorted(set(monos))
    return [m for m in monos if not any(o != m and _divides(o, m) for o in monos)]


def normalize_presentation(pres: BinomialPresentation) -> BinomialPresentation:
    """Canonical form for presentations with binomials and monomials only.

    Binomials whose terms fall in the monomial ideal turn into monomials,
    monomials are made minimal, and a variable that is itself a relation is
    eliminated.  Nothing beyond this pattern is attempted.
    """
    if pres.base_names:
        raise UnsupportedMonoid("normalize after specializing the base")
    names = list(pres.names)
    eliminated = list(pres.eliminated)
    binos = [(r.minus, r.plus) for r in pres.relations]
    monos = list(pres.monomial_relations)
    while True:
        monos = _minimal_monomials(monos)
        if any(not any(m) for m in monos):
            return BinomialPresentation((), (), (), ((),), tuple(sorted(eliminated + names)))
        changed = False
        kept = []
        for a, b in binos:
            ia = any(_divides(m, a) for m in monos)
            ib = any(_divides(m, b) for m in monos)
            if ia and ib:
                changed = True
            elif ia or ib:
                monos.append(b if ia else a)
                changed = True
            else:
                kept.append((a, b))
        binos = kept
        single = next((m for m in monos if sum(m) == 1), None)
        if single is not None:
            k = single.index(1)
            eliminated.append(names.pop(k))
            # x_k = 0: monomials through x_k hold trivially, binomial terms through x_k vanish
            monos = [m for m in monos if not m[k]]
            nb = []
            for a, b in binos:
                if a[k] and b[k]:
                    continue
                if a[k] or b[k]:
                    monos.append(b if a[k] else a)
                else:
                    nb.append((a, b))
            binos = nb
            drop = lambda v: v[:k] + v[k + 1:]
            monos = [drop(m) for m in monos]
            binos = [(drop(a), drop(b)) for a, b in binos]
            changed = True
        if not changed:
            break
    rels = sorted(BinomialRelation((), *sorted((a, b))) for a, b in set(binos) if a != b)
    return BinomialPresentation((), tuple(names), tuple(rels), tuple(_minimal_monomials(monos)),
                                tuple(sorted(eliminated)))


# --- standard semistable charts -------------------------------------------------


@dataclass(frozen=True)
class SemistableRecognition:
    i1: int
    i2: int
    r: Tuple[int, ...]
    permutation: Tuple[int, ...]  # new coordinate k is old coordinate permutation[k]

    def to_json(self):
        return {"i1": self.i1, "i2": self.i2, "r": list(self.r), "permutation": list(self.permutation)}


def standard_semistable(i1: int, i2: int, r: Sequence[int] = (), residue_char: int = 0) -> BoundaryChart:
    """P = N^i2, q -> (1, ..., 1, r_{i1+1}, ..., r_{i2}), with t_1..t_i1 vanishing on X̄."""
    r = tuple(int(x) for x in r)
    if not 1 <= i1 <= i2:
        raise MalformedInput(f"need 1 <= i1 <= i2, got i1={i1}, i2={i2}")
    if len(r) != i2 - i1:
        raise MalformedInput(f"r must have length i2 - i1 = {i2 - i1}")
    rho = (1,) * i1 + r
    return BoundaryChart(
        1, AffineMonoid.free(i2), IntMatrix.from_columns([rho], rows=i2), residue_char,
        tuple(f"t{k + 1}" for k in range(i2)), True, tuple(range(i1)),
    )


def is_standard_semistable(c: BoundaryChart) -> Optional[SemistableRecognition]:
    """Recognize a standard semistable chart up to a permutation of coordinates.

    Without recorded vanishing coordinates the 1-block is taken maximal (every
    coordinate where rho(q) = 1).  The permutation is stable within blocks.
    """
    if c.q_rank != 1 or not is_standard_free(c.P) or c.n == 0:
        return None
    rho = c.rho.column(0)
    if c.vanishing is not None:
        block = sorted(set(c.vanishing))
        if not block or any(rho[i] != 1 for i in block):
            return None
    else:
        block = [i for i, x in enumerate(rho) if x == 1]
        if not block:
            return None
    rest = [i for i in range(c.n) if i not in block]
    perm = tuple(block + rest)
    return SemistableRecognition(len(block), c.n, tuple(rho[i] for i in rest), perm)


def trivial_base_chart(name: str = "q") -> BoundaryChart:
    """The chart of (T, T) itself: P = Q = N, rho = identity."""
    return free_chart((1,), names=(name,))


def second_copy_names(names: Sequence[str], taken: Sequence[str]) -> Tuple[str, ...]:
    """Names for the second factor of a product: U-variables become V-variables."""
    if not set(names) & set(taken):
        return tuple(names)
    out = []
    for s in names:
        cand = "V" + s[1:] if s.startswith("U") else s + "'"
        while cand in taken or cand in out:
            cand += "'"
        out.append(cand)
    return tuple(out)
