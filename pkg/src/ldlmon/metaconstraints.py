"""Constraints about the monitoring states of other constraints.

Two extension nodes make this expressible inside LDLf:

* ``RvAtom(f, s)``: the trace so far puts property f in RV state s;
* ``RvPath(f, s)``: a path expression matching exactly those prefixes.

``expand`` lowers both into plain LDLf: the atom via the RV-state
characterization formula, the path via the regex folded out of that
formula's automaton.  Expansion is bottom-up, so nested references
(a metaconstraint about a metaconstraint) work, and results are cached
per formula, state and alphabet.

The builders cover the recurring shapes: forbidding a task while
another constraint is temporarily violated, compensating a permanent
violation (optionally only after the violation point), detecting
conflicts between individually satisfiable constraints, and preferring
one constraint when a pair becomes jointly unsatisfiable.
"""
from __future__ import annotations

from .rv import RVState
from .syntax import ldl
from .syntax.alphabet import Alphabet
from .syntax.base import node
from .syntax.props import Atom, PropNot


@node
class RvAtom(ldl.Ldlf):
    """Holds when the trace so far puts ``formula`` in RV state ``state``."""

    formula: ldl.Ldlf
    state: RVState

    def pretty(self) -> str:
        return "{" + ldl.print_ldlf(self.formula) + "}=" + self.state.code

    def __str__(self) -> str:
        return self.pretty()


@node
class RvPath(ldl.Path):
    """Matches the prefixes that put ``formula`` in RV state ``state``."""

    formula: ldl.Ldlf
    state: RVState

    def pretty(self) -> str:
        return "re{" + ldl.print_ldlf(self.formula) + "}=" + self.state.code

    def __str__(self) -> str:
        return self.pretty()


_expansion_cache: dict = {}


def expand(f: ldl.Ldlf, alphabet: Alphabet) -> ldl.Ldlf:
    """Replace every RV atom and RV path by its plain-LDLf encoding."""
    if isinstance(f, RvAtom):
        return _expand_rv(f.formula, f.state, alphabet, as_path=False)
    if isinstance(f, (ldl.Tt, ldl.Ff)):
        return f
    if isinstance(f, ldl.Not):
        return ldl.Not(expand(f.arg, alphabet))
    if isinstance(f, ldl.And):
        return ldl.And(expand(f.left, alphabet), expand(f.right, alphabet))
    if isinstance(f, ldl.Or):
        return ldl.Or(expand(f.left, alphabet), expand(f.right, alphabet))
    if isinstance(f, ldl.Diamond):
        return ldl.Diamond(_expand_path(f.path, alphabet), expand(f.arg, alphabet))
    if isinstance(f, ldl.Box):
        return ldl.Box(_expand_path(f.path, alphabet), expand(f.arg, alphabet))
    msg = f"cannot expand {f!r}"
    raise TypeError(msg)


def _expand_path(p: ldl.Path, alphabet: Alphabet) -> ldl.Path:
    if isinstance(p, RvPath):
        return _expand_rv(p.formula, p.state, alphabet, as_path=True)
    if isinstance(p, ldl.Step):
        return p
    if isinstance(p, ldl.Test):
        return ldl.Test(expand(p.cond, alphabet))
    if isinstance(p, ldl.Alt):
        return ldl.Alt(_expand_path(p.left, alphabet), _expand_path(p.right, alphabet))
    if isinstance(p, ldl.Seq):
        return ldl.Seq(_expand_path(p.left, alphabet), _expand_path(p.right, alphabet))
    if isinstance(p, ldl.Star):
        return ldl.Star(_expand_path(p.body, alphabet))
    msg = f"not a path expression: {p!r}"
    raise TypeError(msg)


def _expand_rv(formula: ldl.Ldlf, state: RVState, alphabet: Alphabet, *, as_path: bool):
    from .monitor import rv_formula
    from .regexfold import regex_for_rv

    inner = expand(formula, alphabet)
    key = (inner, state, alphabet, as_path)
    hit = _expansion_cache.get(key)
    if hit is None:
        if as_path:
            hit = regex_for_rv(inner, state, alphabet)
        else:
            hit = rv_formula(inner, state, alphabet)
        _expansion_cache[key] = hit
    return hit


def _implies(antecedent: ldl.Ldlf, consequent: ldl.Ldlf) -> ldl.Ldlf:
    return ldl.Or(ldl.Not(antecedent), consequent)


def _task_free(task: str) -> ldl.Ldlf:
    """Either the trace has ended here or the current step is not the
    given task."""
    return ldl.Or(ldl.prop_formula(PropNot(Atom(task))), ldl.END)


def contextual_absence(context: ldl.Ldlf, state: RVState, task: str) -> ldl.Ldlf:
    """Forbid a task whenever the context property sits in the given RV
    state: after every prefix in that state, the next step (if any) is
    not the task."""
    return ldl.Box(RvPath(context, state), _task_free(task))


def compensation(violated: ldl.Ldlf, comp: ldl.Ldlf) -> ldl.Ldlf:
    """If the property ends up permanently violated, the compensation
    must hold over the whole trace."""
    return _implies(RvAtom(violated, RVState.PERM_FALSE), comp)


def reactive_compensation(violated: ldl.Ldlf, comp: ldl.Ldlf) -> ldl.Ldlf:
    """If the property ends up permanently violated, the compensation
    must hold from some point where the violation had already become
    permanent."""
    return _implies(
        RvAtom(violated, RVState.PERM_FALSE),
        ldl.Diamond(RvPath(violated, RVState.PERM_FALSE), comp),
    )


def conflict(f: ldl.Ldlf, g: ldl.Ldlf) -> ldl.Ldlf:
    """The pair is jointly doomed while neither property alone is: the
    signature of a conflict between constraints."""
    return ldl.And(
        RvAtom(ldl.And(f, g), RVState.PERM_FALSE),
        ldl.And(
            ldl.Not(RvAtom(f, RVState.PERM_FALSE)),
            ldl.Not(RvAtom(g, RVState.PERM_FALSE)),
        ),
    )


def preference(preferred: ldl.Ldlf, other: ldl.Ldlf) -> ldl.Ldlf:
    """Once the conjunction of the two properties has become doomed at
    some point of the trace, require the preferred one."""
    doomed_prefix = ldl.Diamond(
        RvPath(ldl.And(preferred, other), RVState.PERM_FALSE), ldl.TT
    )
    return _implies(doomed_prefix, preferred)
