"""Syntax-level transformations: negation normal form and translations.

``to_nnf`` pushes negation inward until it only survives inside
propositional guards, dualizing diamond/box and and/or on the way.

``ltlf_to_ldlf`` is the standard embedding of LTLf: each temporal
operator becomes a modality over a path built from ``true`` steps, with
``!end`` guarding against the truncated-trace edge cases and until
expressed through a test-star path.  The output is not necessarily in
NNF; run ``to_nnf`` before building automata.
"""
from __future__ import annotations

from . import ldl, ltl
from .props import TRUE


def to_nnf(f: ldl.Ldlf) -> ldl.Ldlf:
    """Negation normal form of f.  Pre: f contains no marker atoms."""
    if isinstance(f, (ldl.Tt, ldl.Ff)):
        return f
    if isinstance(f, ldl.And):
        return ldl.And(to_nnf(f.left), to_nnf(f.right))
    if isinstance(f, ldl.Or):
        return ldl.Or(to_nnf(f.left), to_nnf(f.right))
    if isinstance(f, ldl.Diamond):
        return ldl.Diamond(_nnf_path(f.path), to_nnf(f.arg))
    if isinstance(f, ldl.Box):
        return ldl.Box(_nnf_path(f.path), to_nnf(f.arg))
    if isinstance(f, ldl.Not):
        return _nnf_neg(f.arg)
    if isinstance(f, (ldl.TrueMark, ldl.FalseMark)):
        msg = "marker atoms have no negation normal form"
        raise ValueError(msg)
    msg = f"not an LDLf formula: {f!r}"
    raise TypeError(msg)


def _nnf_neg(f: ldl.Ldlf) -> ldl.Ldlf:
    """NNF of the negation of f."""
    if isinstance(f, ldl.Tt):
        return ldl.FF
    if isinstance(f, ldl.Ff):
        return ldl.TT
    if isinstance(f, ldl.Not):
        return to_nnf(f.arg)
    if isinstance(f, ldl.And):
        return ldl.Or(_nnf_neg(f.left), _nnf_neg(f.right))
    if isinstance(f, ldl.Or):
        return ldl.And(_nnf_neg(f.left), _nnf_neg(f.right))
    if isinstance(f, ldl.Diamond):
        return ldl.Box(_nnf_path(f.path), _nnf_neg(f.arg))
    if isinstance(f, ldl.Box):
        return ldl.Diamond(_nnf_path(f.path), _nnf_neg(f.arg))
    if isinstance(f, (ldl.TrueMark, ldl.FalseMark)):
        msg = "marker atoms have no negation normal form"
        raise ValueError(msg)
    msg = f"not an LDLf formula: {f!r}"
    raise TypeError(msg)


def _nnf_path(p: ldl.Path) -> ldl.Path:
    if isinstance(p, ldl.Step):
        return p
    if isinstance(p, ldl.Test):
        return ldl.Test(to_nnf(p.cond))
    if isinstance(p, ldl.Alt):
        return ldl.Alt(_nnf_path(p.left), _nnf_path(p.right))
    if isinstance(p, ldl.Seq):
        return ldl.Seq(_nnf_path(p.left), _nnf_path(p.right))
    if isinstance(p, ldl.Star):
        return ldl.Star(_nnf_path(p.body))
    msg = f"not a path expression: {p!r}"
    raise TypeError(msg)


def is_nnf(f: ldl.Ldlf) -> bool:
    """True when negation survives only inside propositional guards."""
    if isinstance(f, (ldl.Tt, ldl.Ff, ldl.TrueMark, ldl.FalseMark)):
        return True
    if isinstance(f, (ldl.And, ldl.Or)):
        return is_nnf(f.left) and is_nnf(f.right)
    if isinstance(f, (ldl.Diamond, ldl.Box)):
        return _is_nnf_path(f.path) and is_nnf(f.arg)
    return False


def _is_nnf_path(p: ldl.Path) -> bool:
    if isinstance(p, ldl.Step):
        return True
    if isinstance(p, ldl.Test):
        return is_nnf(p.cond)
    if isinstance(p, (ldl.Alt, ldl.Seq)):
        return _is_nnf_path(p.left) and _is_nnf_path(p.right)
    if isinstance(p, ldl.Star):
        return _is_nnf_path(p.body)
    return False


_TRUE_STEP = ldl.Step(TRUE)
_NOT_END = ldl.Not(ldl.END)


def ltlf_to_ldlf(f: ltl.Ltlf) -> ldl.Ldlf:
    """Translate an LTLf formula into an equivalent LDLf formula."""
    if isinstance(f, ltl.LtlfProp):
        return ldl.prop_formula(f.prop)
    if isinstance(f, ltl.LtlfNot):
        return ldl.Not(ltlf_to_ldlf(f.arg))
    if isinstance(f, ltl.LtlfAnd):
        return ldl.And(ltlf_to_ldlf(f.left), ltlf_to_ldlf(f.right))
    if isinstance(f, ltl.LtlfOr):
        return ldl.Or(ltlf_to_ldlf(f.left), ltlf_to_ldlf(f.right))
    if isinstance(f, ltl.LtlfImplies):
        return ldl.Or(ldl.Not(ltlf_to_ldlf(f.left)), ltlf_to_ldlf(f.right))
    if isinstance(f, ltl.LtlfIff):
        left = ltlf_to_ldlf(f.left)
        right = ltlf_to_ldlf(f.right)
        return ldl.And(
            ldl.Or(ldl.Not(left), right), ldl.Or(ldl.Not(right), left)
        )
    if isinstance(f, ltl.Next):
        return ldl.Diamond(_TRUE_STEP, ldl.And(ltlf_to_ldlf(f.arg), _NOT_END))
    if isinstance(f, ltl.WeakNext):
        # WX phi == !X !phi
        return ldl.Not(
            ldl.Diamond(
                _TRUE_STEP, ldl.And(ldl.Not(ltlf_to_ldlf(f.arg)), _NOT_END)
            )
        )
    if isinstance(f, ltl.Eventually):
        return ldl.Diamond(
            ldl.Star(_TRUE_STEP), ldl.And(ltlf_to_ldlf(f.arg), _NOT_END)
        )
    if isinstance(f, ltl.Always):
        # G phi == !F !phi
        return ldl.Not(
            ldl.Diamond(
                ldl.Star(_TRUE_STEP),
                ldl.And(ldl.Not(ltlf_to_ldlf(f.arg)), _NOT_END),
            )
        )
    if isinstance(f, ltl.Until):
        return ldl.Diamond(
            ldl.Star(ldl.Seq(ldl.Test(ltlf_to_ldlf(f.left)), _TRUE_STEP)),
            ldl.And(ltlf_to_ldlf(f.right), _NOT_END),
        )
    if isinstance(f, ltl.Release):
        # phi R psi == !(!phi U !psi)
        return ldl.Not(
            ldl.Diamond(
                ldl.Star(
                    ldl.Seq(ldl.Test(ldl.Not(ltlf_to_ldlf(f.left))), _TRUE_STEP)
                ),
                ldl.And(ldl.Not(ltlf_to_ldlf(f.right)), _NOT_END),
            )
        )
    msg = f"not an LTLf formula: {f!r}"
    raise TypeError(msg)


def re_to_ldlf(path: ldl.Path) -> ldl.Ldlf:
    """Encode a regular expression as the LDLf formula ``<path>end``.

    The resulting formula is satisfied by exactly the traces the
    expression matches in full.  Only the trivial test ``tt?`` (the
    empty-word expression) may appear; real formula tests are rejected.
    """
    _check_pure(path)
    return ldl.Diamond(path, ldl.END)


def _check_pure(p: ldl.Path):
    if isinstance(p, ldl.Step):
        return
    if isinstance(p, ldl.Test):
        if p.cond != ldl.TT:
            msg = "regular expressions cannot contain formula tests"
            raise ValueError(msg)
        return
    if isinstance(p, (ldl.Alt, ldl.Seq)):
        _check_pure(p.left)
        _check_pure(p.right)
        return
    if isinstance(p, ldl.Star):
        _check_pure(p.body)
        return
    msg = f"not a path expression: {p!r}"
    raise TypeError(msg)
