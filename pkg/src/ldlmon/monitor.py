"""Coloring automata with RV states and monitoring traces online.

A property's monitor is its automaton, determinized, kept total (the
rejecting sink is not trimmed away) and colored: each state gets the RV
state shared by every trace that reaches it.  The color follows from
acceptance of the state itself and of the states reachable from it
(reachability includes the state, via the zero-length path):

* final, with a non-final state reachable: temporarily satisfied;
* non-final, with a final state reachable: temporarily violated;
* final, with only final states reachable: permanently satisfied;
* non-final, with no final state reachable: permanently violated.

``rv_formula`` builds, for each RV state, an LDLf formula satisfied by
exactly the traces the property maps to that state, by combining the
property with prefix-language regexes folded out of its automaton.
"""
from __future__ import annotations

from dataclasses import dataclass

from .automata import (
    Dfa,
    Nfa,
    complement,
    determinize,
    ldlf_to_nfa,
    minimize,
    prefix_closure,
    reachable_from,
)
from .rv import RVState
from .syntax import ldl
from .syntax.alphabet import Alphabet
from .syntax.transforms import to_nnf


@dataclass(frozen=True)
class ColoredDfa:
    """A total DFA with one RV state per automaton state."""

    dfa: Dfa
    colors: tuple

    def color_of(self, state: int) -> RVState:
        return self.colors[state]


def color(dfa: Dfa) -> ColoredDfa:
    """Color every state of a total DFA with its RV state."""
    if not dfa.is_total():
        msg = "coloring needs a total automaton; call complete() first"
        raise ValueError(msg)
    finals = dfa.finals
    colors = []
    for state in range(dfa.n_states):
        reach = reachable_from(dfa, state)
        accepting = state in finals
        reach_all_final = reach <= finals
        reach_some_final = bool(reach & finals)
        if accepting and not reach_all_final:
            verdict = RVState.TEMP_TRUE
        elif not accepting and reach_some_final:
            verdict = RVState.TEMP_FALSE
        elif accepting:
            verdict = RVState.PERM_TRUE
        else:
            verdict = RVState.PERM_FALSE
        colors.append(verdict)
    return ColoredDfa(dfa=dfa, colors=tuple(colors))


class LazyColors:
    """Color states on demand instead of up front.

    Same answers as eager coloring; useful when only the states a trace
    actually visits matter.
    """

    def __init__(self, dfa: Dfa):
        if not dfa.is_total():
            msg = "coloring needs a total automaton; call complete() first"
            raise ValueError(msg)
        self.dfa = dfa
        self._cache: dict = {}

    def color_of(self, state: int) -> RVState:
        verdict = self._cache.get(state)
        if verdict is None:
            reach = reachable_from(self.dfa, state)
            finals = self.dfa.finals
            accepting = state in finals
            if accepting:
                verdict = (
                    RVState.PERM_TRUE if reach <= finals else RVState.TEMP_TRUE
                )
            else:
                verdict = (
                    RVState.TEMP_FALSE if reach & finals else RVState.PERM_FALSE
                )
            self._cache[state] = verdict
        return verdict


def monitor_automaton(
    formula: ldl.Ldlf, alphabet: Alphabet, *, minimized: bool = True
) -> ColoredDfa:
    """Compile a formula into its colored monitor automaton.

    Minimization merges only language-equal states, and colors are
    determined by the state's language, so it cannot change any answer;
    it just keeps monitors small.
    """
    dfa = determinize(ldlf_to_nfa(formula, alphabet))
    if minimized:
        dfa = minimize(dfa)
    return color(dfa)


class Monitor:
    """Online monitor: feed events one at a time, read off the RV state.

    ``lazy`` defers reachability analysis until a state's color is first
    requested.
    """

    def __init__(self, automaton, *, lazy: bool = False):
        if isinstance(automaton, ColoredDfa) and not lazy:
            self._colors = automaton
            dfa = automaton.dfa
        else:
            dfa = automaton.dfa if isinstance(automaton, ColoredDfa) else automaton
            self._colors = LazyColors(dfa) if lazy else color(dfa)
        self.dfa = dfa
        self.current = dfa.initial
        self.history: list = []

    @classmethod
    def for_formula(
        cls, formula: ldl.Ldlf, alphabet: Alphabet, *, lazy: bool = False
    ) -> "Monitor":
        dfa = determinize(ldlf_to_nfa(formula, alphabet))
        dfa = minimize(dfa)
        if lazy:
            return cls(dfa, lazy=True)
        return cls(color(dfa))

    def reset(self):
        self.current = self.dfa.initial
        self.history.clear()

    def step(self, event) -> RVState:
        """Consume one event and return the RV state after it."""
        letter = frozenset(event)
        self.dfa.alphabet.check_letter(letter)
        self.current = self.dfa.step(self.current, letter)
        self.history.append(letter)
        return self.current_rv()

    def current_rv(self) -> RVState:
        return self._colors.color_of(self.current)

    def forbidden_symbols(self) -> list:
        """Letters whose next step would make the verdict permanently
        violated.  Naturally empty once permanently satisfied and the
        full letter set once permanently violated."""
        out = []
        for letter in self.dfa.alphabet.letters():
            target = self.dfa.step(self.current, letter)
            if self._colors.color_of(target) is RVState.PERM_FALSE:
                out.append(letter)
        return out


def rv_formula(formula: ldl.Ldlf, state: RVState, alphabet: Alphabet) -> ldl.Ldlf:
    """An LDLf formula satisfied by exactly the traces whose RV state
    for the given property is ``state``.

    Writing pref(f) for the regex of prefixes extendable to a model of
    f, the four characterizations are:

    * temp_true:  f holds and some continuation violates it, i.e.
      ``f && <pref(!f)>end``;
    * temp_false: ``!f && <pref(f)>end``;
    * perm_true:  ``<pref(f)>end && !<pref(!f)>end``;
    * perm_false: ``<pref(!f)>end && !<pref(f)>end``.
    """
    from .regexfold import pref_regex

    pos = ldl.Diamond(pref_regex(formula, alphabet), ldl.END)
    neg = ldl.Diamond(pref_regex(ldl.Not(formula), alphabet), ldl.END)
    if state is RVState.TEMP_TRUE:
        return ldl.And(formula, neg)
    if state is RVState.TEMP_FALSE:
        return ldl.And(ldl.Not(formula), pos)
    if state is RVState.PERM_TRUE:
        return ldl.And(pos, ldl.Not(neg))
    if state is RVState.PERM_FALSE:
        return ldl.And(neg, ldl.Not(pos))
    msg = f"not an RV state: {state!r}"
    raise ValueError(msg)


def rv_family(formula: ldl.Ldlf, alphabet: Alphabet) -> dict:
    """The four same-shaped automata behind the RV characterization:
    the property, its negation, and their prefix closures.

    Built by flipping finals on one automaton, so the transition
    structure is literally shared and the identity is a shape bijection.
    """
    base = determinize(ldlf_to_nfa(to_nnf(formula), alphabet))
    negated = complement(base)
    return {
        "formula": base,
        "negation": negated,
        "pref_formula": prefix_closure(base),
        "pref_negation": prefix_closure(negated),
    }


def shape_equivalent(a, b):
    """A bijection between states preserving the initial state and the
    transition relation in both directions (acceptance is ignored), or
    None when there is none.

    Deterministic automata admit at most one candidate, found by
    propagation from the initial states; nondeterministic ones fall
    back to a backtracking search.
    """
    if a.alphabet != b.alphabet:
        return None
    if a.n_states != b.n_states:
        return None
    letters = a.alphabet.letters()
    if isinstance(a, Dfa) and isinstance(b, Dfa):
        mapping = {a.initial: b.initial}
        queue = [a.initial]
        while queue:
            sa = queue.pop()
            sb = mapping[sa]
            row_a = a.transitions.get(sa, {})
            row_b = b.transitions.get(sb, {})
            if set(row_a) != set(row_b):
                return None
            for letter in row_a:
                ta, tb = row_a[letter], row_b[letter]
                known = mapping.get(ta)
                if known is None:
                    mapping[ta] = tb
                    queue.append(ta)
                elif known != tb:
                    return None
        if len(mapping) != a.n_states or len(set(mapping.values())) != a.n_states:
            # Unreachable states exist; require both sides to have the
            # same number of them and no way to tell them apart beyond
            # the reachable part, then extend by the nondeterministic
            # search below.
            return _shape_search(a, b, letters, mapping)
        return mapping if _check_shape(a, b, mapping) else None
    return _shape_search(a, b, letters, {a.initial: b.initial})


def _edges_by_state(aut):
    out: dict = {}
    rev: dict = {}
    for state in range(aut.n_states):
        row = aut.transitions.get(state, {})
        for letter, targets in row.items():
            if isinstance(targets, int):
                targets = (targets,)
            for target in targets:
                out.setdefault(state, {}).setdefault(letter, set()).add(target)
                rev.setdefault(target, {}).setdefault(letter, set()).add(state)
    return out, rev


def _signature(edges_out, edges_in, state, letters):
    return (
        tuple(len(edges_out.get(state, {}).get(l, ())) for l in letters),
        tuple(len(edges_in.get(state, {}).get(l, ())) for l in letters),
    )


def _shape_search(a, b, letters, seed):
    out_a, in_a = _edges_by_state(a)
    out_b, in_b = _edges_by_state(b)
    sig_b: dict = {}
    for state in range(b.n_states):
        sig_b.setdefault(_signature(out_b, in_b, state, letters), []).append(state)

    order = sorted(set(range(a.n_states)) - set(seed))
    mapping = dict(seed)
    used = set(mapping.values())

    def consistent(sa, sb):
        for letter, targets in out_a.get(sa, {}).items():
            imaged = out_b.get(sb, {}).get(letter, set())
            for t in targets:
                if t in mapping and mapping[t] not in imaged:
                    return False
        for letter, sources in in_a.get(sa, {}).items():
            imaged = in_b.get(sb, {}).get(letter, set())
            for s in sources:
                if s in mapping and mapping[s] not in imaged:
                    return False
        return True

    def backtrack(k):
        if k == len(order):
            return _check_shape(a, b, mapping)
        sa = order[k]
        for sb in sig_b.get(_signature(out_a, in_a, sa, letters), ()):
            if sb in used:
                continue
            if not consistent(sa, sb):
                continue
            mapping[sa] = sb
            used.add(sb)
            if backtrack(k + 1):
                return True
            del mapping[sa]
            used.discard(sb)
        return False

    if not consistent(a.initial, seed[a.initial]):
        return None
    return dict(mapping) if backtrack(0) else None


def _check_shape(a, b, mapping) -> bool:
    """Full verification of the three bijection conditions."""
    if mapping.get(a.initial) != b.initial:
        return False
    if len(mapping) != a.n_states or len(set(mapping.values())) != b.n_states:
        return False
    edges_a = set()
    for state in range(a.n_states):
        for letter, targets in a.transitions.get(state, {}).items():
            if isinstance(targets, int):
                targets = (targets,)
            for target in targets:
                edges_a.add((mapping[state], letter, mapping[target]))
    edges_b = set()
    for state in range(b.n_states):
        for letter, targets in b.transitions.get(state, {}).items():
            if isinstance(targets, int):
                targets = (targets,)
            for target in targets:
                edges_b.add((state, letter, target))
    return edges_a == edges_b


def colored_isomorphic(a: ColoredDfa, b: ColoredDfa) -> bool:
    """Shape equivalence that additionally preserves acceptance and
    colors (the golden-automaton comparison)."""
    mapping = shape_equivalent(a.dfa, b.dfa)
    if mapping is None:
        return False
    for state, image in mapping.items():
        if (state in a.dfa.finals) != (image in b.dfa.finals):
            return False
        color_a = a.colors[state]
        color_b = b.colors[image]
        value_a = getattr(color_a, "value", color_a)
        value_b = getattr(color_b, "value", color_b)
        if value_a != value_b:
            return False
    return True
