"""LDLf formulas and the regular path expressions they quantify over.

The modal operators are written ``<rho>phi`` (some path through the trace
matching rho ends where phi holds) and ``[rho]phi`` (every such path ends
where phi holds).  ``tt`` and ``ff`` are the logical constants; they are
distinct from the propositional constants ``true``/``false`` that appear
inside path guards.

Two derived forms are used throughout: ``end`` is ``[true]ff`` (no step
can be taken, i.e. the trace has been fully consumed) and ``last`` is
``<true>end`` (exactly one step remains).
"""
from __future__ import annotations

from .base import node
from .props import (
    Prop,
    PropTrue,
    TRUE,
    is_atomic_prop,
    print_prop,
    prop_atoms,
)


class Path:
    """Base class for regular path expressions."""

    __slots__ = ()


class Ldlf:
    """Base class for LDLf formulas."""

    __slots__ = ()


@node
class Step(Path):
    guard: Prop


@node
class Test(Path):
    cond: Ldlf


@node
class Alt(Path):
    left: Path
    right: Path


@node
class Seq(Path):
    left: Path
    right: Path


@node
class Star(Path):
    body: Path


@node
class Tt(Ldlf):
    pass


@node
class Ff(Ldlf):
    pass


@node
class Not(Ldlf):
    arg: Ldlf


@node
class And(Ldlf):
    left: Ldlf
    right: Ldlf


@node
class Or(Ldlf):
    left: Ldlf
    right: Ldlf


@node
class Diamond(Ldlf):
    path: Path
    arg: Ldlf


@node
class Box(Ldlf):
    path: Path
    arg: Ldlf


@node
class TrueMark(Ldlf):
    """Bookkeeping atom standing in for a box-star formula during one
    transition-function evaluation.  Never part of a user-facing formula."""

    loop: Ldlf


@node
class FalseMark(Ldlf):
    """Bookkeeping atom standing in for a diamond-star formula during one
    transition-function evaluation.  Never part of a user-facing formula."""

    loop: Ldlf


TT = Tt()
FF = Ff()
END = Box(Step(TRUE), FF)
LAST = Diamond(Step(TRUE), END)
EPSILON_PATH = Test(TT)


def prop_formula(phi: Prop) -> Ldlf:
    """Desugar a bare propositional formula into modal form."""
    return Diamond(Step(phi), TT)


def formula_atoms(f: Ldlf) -> frozenset[str]:
    """Proposition names occurring anywhere in f."""
    if isinstance(f, (Tt, Ff)):
        return frozenset()
    if isinstance(f, Not):
        return formula_atoms(f.arg)
    if isinstance(f, (And, Or)):
        return formula_atoms(f.left) | formula_atoms(f.right)
    if isinstance(f, (Diamond, Box)):
        return path_atoms(f.path) | formula_atoms(f.arg)
    if isinstance(f, (TrueMark, FalseMark)):
        return formula_atoms(f.loop)
    inner = getattr(f, "formula", None)
    if isinstance(inner, Ldlf):
        return formula_atoms(inner)
    msg = f"not an LDLf formula: {f!r}"
    raise TypeError(msg)


def path_atoms(p: Path) -> frozenset[str]:
    if isinstance(p, Step):
        return prop_atoms(p.guard)
    if isinstance(p, Test):
        return formula_atoms(p.cond)
    if isinstance(p, (Alt, Seq)):
        return path_atoms(p.left) | path_atoms(p.right)
    if isinstance(p, Star):
        return path_atoms(p.body)
    inner = getattr(p, "formula", None)
    if isinstance(inner, Ldlf):
        return formula_atoms(inner)
    msg = f"not a path expression: {p!r}"
    raise TypeError(msg)


_PREC_OR = 1
_PREC_AND = 2
_PREC_UNARY = 3


def print_ldlf(f: Ldlf) -> str:
    """Render f in concrete syntax, with minimal parentheses.

    The derived forms ``end`` and ``last`` are printed by name; the
    result reparses to a structurally equal formula either way.
    """
    return _pf(f, 0)


def _pf(f: Ldlf, parent: int) -> str:
    if f == END:
        return "end"
    if f == LAST:
        return "last"
    if isinstance(f, Tt):
        return "tt"
    if isinstance(f, Ff):
        return "ff"
    if isinstance(f, Not):
        return "!" + _pf(f.arg, _PREC_UNARY)
    if isinstance(f, And):
        text = _pf(f.left, _PREC_AND) + " && " + _pf(f.right, _PREC_AND + 1)
        return f"({text})" if parent > _PREC_AND else text
    if isinstance(f, Or):
        text = _pf(f.left, _PREC_OR) + " || " + _pf(f.right, _PREC_OR + 1)
        return f"({text})" if parent > _PREC_OR else text
    if isinstance(f, Diamond):
        return "<" + print_path(f.path) + ">" + _pf(f.arg, _PREC_UNARY)
    if isinstance(f, Box):
        return "[" + print_path(f.path) + "]" + _pf(f.arg, _PREC_UNARY)
    if isinstance(f, TrueMark):
        return "T{" + print_ldlf(f.loop) + "}"
    if isinstance(f, FalseMark):
        return "F{" + print_ldlf(f.loop) + "}"
    pretty = getattr(f, "pretty", None)
    if pretty is not None:
        return pretty()
    msg = f"not an LDLf formula: {f!r}"
    raise TypeError(msg)


_PREC_ALT = 1
_PREC_SEQ = 2
_PREC_STAR = 3


def print_path(p: Path) -> str:
    return _ppath(p, 0)


def _ppath(p: Path, parent: int) -> str:
    if isinstance(p, Step):
        if is_atomic_prop(p.guard):
            return print_prop(p.guard)
        return "(" + print_prop(p.guard) + ")"
    if isinstance(p, Test):
        if isinstance(p.cond, (Tt, Ff)) or p.cond in (END, LAST):
            return _pf(p.cond, _PREC_UNARY) + "?"
        return "(" + print_ldlf(p.cond) + ")?"
    if isinstance(p, Alt):
        text = _ppath(p.left, _PREC_ALT) + " + " + _ppath(p.right, _PREC_ALT + 1)
        return f"({text})" if parent > _PREC_ALT else text
    if isinstance(p, Seq):
        text = _ppath(p.left, _PREC_SEQ) + ";" + _ppath(p.right, _PREC_SEQ + 1)
        return f"({text})" if parent > _PREC_SEQ else text
    if isinstance(p, Star):
        return _ppath(p.body, _PREC_STAR + 1) + "*"
    pretty = getattr(p, "pretty", None)
    if pretty is not None:
        return pretty()
    msg = f"not a path expression: {p!r}"
    raise TypeError(msg)
