"""Compiling LDLf formulas into finite automata, plus the automata algebra.

The construction works on formulas in negation normal form.  For a
formula and a letter, ``delta`` produces a positive boolean formula whose
atoms are (quoted) subformulas: the obligations that must hold over the
rest of the trace.  States of the NFA are sets of such obligations
(macro-states); the successors of a state under a letter are the minimal
models of the conjoined delta results.  The empty macro-state carries no
obligation, accepts everything, and is absorbing.

Star formulas unfold through marker atoms: a diamond-star unfolds into a
marker that evaluates to false if the loop is re-entered without
consuming a letter (a least fixpoint), a box-star into one that
evaluates to true (a greatest fixpoint).  Markers never leak into
states: emitted atoms have them substituted away first.

Acceptance of a macro-state asks whether every obligation in it is
satisfied by the empty remainder, via the same recursion with the
step base cases flipped to their out-of-trace values.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

from .syntax import ldl
from .syntax.alphabet import Alphabet
from .syntax.base import node
from .syntax.ldl import print_ldlf
from .syntax.props import (
    FALSE,
    TRUE,
    Atom,
    Prop,
    PropAnd,
    PropNot,
    PropOr,
    eval_prop,
    print_prop,
)
from .syntax.transforms import is_nnf, to_nnf

EPSILON = None


class PosBool:
    """Positive boolean formulas over quoted LDLf subformulas."""

    __slots__ = ()


@node
class PBTrue(PosBool):
    pass


@node
class PBFalse(PosBool):
    pass


@node
class PBAtom(PosBool):
    formula: ldl.Ldlf


@node
class PBAnd(PosBool):
    left: PosBool
    right: PosBool


@node
class PBOr(PosBool):
    left: PosBool
    right: PosBool


PB_TRUE = PBTrue()
PB_FALSE = PBFalse()


def pb_and(a: PosBool, b: PosBool) -> PosBool:
    if isinstance(a, PBFalse) or isinstance(b, PBFalse):
        return PB_FALSE
    if isinstance(a, PBTrue):
        return b
    if isinstance(b, PBTrue):
        return a
    return PBAnd(a, b)


def pb_or(a: PosBool, b: PosBool) -> PosBool:
    if isinstance(a, PBTrue) or isinstance(b, PBTrue):
        return PB_TRUE
    if isinstance(a, PBFalse):
        return b
    if isinstance(b, PBFalse):
        return a
    return PBOr(a, b)


def expand_markers(f: ldl.Ldlf) -> ldl.Ldlf:
    """Substitute every marker atom by the star formula it stands for."""
    if isinstance(f, (ldl.TrueMark, ldl.FalseMark)):
        return expand_markers(f.loop)
    if isinstance(f, (ldl.Tt, ldl.Ff)):
        return f
    if isinstance(f, ldl.Not):
        return ldl.Not(expand_markers(f.arg))
    if isinstance(f, ldl.And):
        return ldl.And(expand_markers(f.left), expand_markers(f.right))
    if isinstance(f, ldl.Or):
        return ldl.Or(expand_markers(f.left), expand_markers(f.right))
    if isinstance(f, ldl.Diamond):
        return ldl.Diamond(_expand_path(f.path), expand_markers(f.arg))
    if isinstance(f, ldl.Box):
        return ldl.Box(_expand_path(f.path), expand_markers(f.arg))
    msg = f"not an LDLf formula: {f!r}"
    raise TypeError(msg)


def _expand_path(p: ldl.Path) -> ldl.Path:
    if isinstance(p, ldl.Step):
        return p
    if isinstance(p, ldl.Test):
        return ldl.Test(expand_markers(p.cond))
    if isinstance(p, ldl.Alt):
        return ldl.Alt(_expand_path(p.left), _expand_path(p.right))
    if isinstance(p, ldl.Seq):
        return ldl.Seq(_expand_path(p.left), _expand_path(p.right))
    if isinstance(p, ldl.Star):
        return ldl.Star(_expand_path(p.body))
    msg = f"not a path expression: {p!r}"
    raise TypeError(msg)


def _emit(f: ldl.Ldlf) -> PosBool:
    """Quote a continuation obligation as a positive boolean atom."""
    resolved = expand_markers(f)
    if isinstance(resolved, ldl.Tt):
        return PB_TRUE
    if isinstance(resolved, ldl.Ff):
        return PB_FALSE
    return PBAtom(resolved)


def delta(f: ldl.Ldlf, letter) -> PosBool:
    """One-step obligations of f under a letter (or EPSILON).

    Pre: f is in negation normal form, marker atoms aside.
    """
    if isinstance(f, ldl.Tt):
        return PB_TRUE
    if isinstance(f, ldl.Ff):
        return PB_FALSE
    if isinstance(f, ldl.TrueMark):
        return PB_TRUE
    if isinstance(f, ldl.FalseMark):
        return PB_FALSE
    if isinstance(f, ldl.And):
        return pb_and(delta(f.left, letter), delta(f.right, letter))
    if isinstance(f, ldl.Or):
        return pb_or(delta(f.left, letter), delta(f.right, letter))
    if isinstance(f, ldl.Diamond):
        path = f.path
        if isinstance(path, ldl.Step):
            if letter is EPSILON or not eval_prop(path.guard, letter):
                return PB_FALSE
            return _emit(f.arg)
        if isinstance(path, ldl.Test):
            return pb_and(delta(path.cond, letter), delta(f.arg, letter))
        if isinstance(path, ldl.Alt):
            return pb_or(
                delta(ldl.Diamond(path.left, f.arg), letter),
                delta(ldl.Diamond(path.right, f.arg), letter),
            )
        if isinstance(path, ldl.Seq):
            return delta(
                ldl.Diamond(path.left, ldl.Diamond(path.right, f.arg)), letter
            )
        if isinstance(path, ldl.Star):
            return pb_or(
                delta(f.arg, letter),
                delta(ldl.Diamond(path.body, ldl.FalseMark(f)), letter),
            )
    if isinstance(f, ldl.Box):
        path = f.path
        if isinstance(path, ldl.Step):
            if letter is EPSILON or not eval_prop(path.guard, letter):
                return PB_TRUE
            return _emit(f.arg)
        if isinstance(path, ldl.Test):
            return pb_or(delta(to_nnf(ldl.Not(path.cond)), letter), delta(f.arg, letter))
        if isinstance(path, ldl.Alt):
            return pb_and(
                delta(ldl.Box(path.left, f.arg), letter),
                delta(ldl.Box(path.right, f.arg), letter),
            )
        if isinstance(path, ldl.Seq):
            return delta(ldl.Box(path.left, ldl.Box(path.right, f.arg)), letter)
        if isinstance(path, ldl.Star):
            return pb_and(
                delta(f.arg, letter),
                delta(ldl.Box(path.body, ldl.TrueMark(f)), letter),
            )
    if isinstance(f, ldl.Not):
        msg = "delta needs a formula in negation normal form"
        raise ValueError(msg)
    msg = f"not an LDLf formula: {f!r}"
    raise TypeError(msg)


def delta_epsilon(f: ldl.Ldlf) -> bool:
    """Whether the obligation f is discharged by the empty remainder."""
    result = delta(f, EPSILON)
    if isinstance(result, PBTrue):
        return True
    if isinstance(result, PBFalse):
        return False
    msg = f"empty-remainder evaluation did not reach a constant: {f!r}"
    raise AssertionError(msg)


def minimal_models(pb: PosBool) -> list[frozenset]:
    """Minimal satisfying atom sets of a positive boolean formula.

    Positive formulas are monotone, so the minimal models of a
    conjunction are found among pairwise unions of the operands'
    minimal models, and those of a disjunction among the operands'.
    """
    if isinstance(pb, PBTrue):
        return [frozenset()]
    if isinstance(pb, PBFalse):
        return []
    if isinstance(pb, PBAtom):
        return [frozenset((pb.formula,))]
    if isinstance(pb, PBAnd):
        left = minimal_models(pb.left)
        right = minimal_models(pb.right)
        return _prune([a | b for a in left for b in right])
    if isinstance(pb, PBOr):
        return _prune(minimal_models(pb.left) + minimal_models(pb.right))
    msg = f"not a positive boolean formula: {pb!r}"
    raise TypeError(msg)


def _prune(candidates: list[frozenset]) -> list[frozenset]:
    kept: list[frozenset] = []
    for cand in sorted(set(candidates), key=len):
        if not any(prev <= cand for prev in kept):
            kept.append(cand)
    return kept


@dataclass(frozen=True)
class Nfa:
    """A nondeterministic finite automaton over an alphabet's letters.

    Transitions map state -> letter -> successor states.  States are
    dense integers; ``labels`` optionally carries a debugging name per
    state (the macro-state content for compiled formulas).
    """

    alphabet: Alphabet
    n_states: int
    initial: int
    transitions: dict
    finals: frozenset
    labels: tuple = ()

    def successors(self, state: int, letter: frozenset) -> frozenset:
        return self.transitions.get(state, {}).get(letter, frozenset())

    def triples(self):
        for state in sorted(self.transitions):
            by_letter = self.transitions[state]
            for letter in self.alphabet.letters():
                for target in sorted(by_letter.get(letter, ())):
                    yield state, letter, target


@dataclass(frozen=True)
class Dfa:
    """A deterministic, total automaton over an alphabet's letters."""

    alphabet: Alphabet
    n_states: int
    initial: int
    transitions: dict
    finals: frozenset
    labels: tuple = ()

    def step(self, state: int, letter: frozenset) -> int:
        row = self.transitions[state]
        target = row.get(letter)
        if target is None:
            self.alphabet.check_letter(letter)
            target = row[letter]
        return target

    def is_total(self) -> bool:
        letters = self.alphabet.letters()
        return all(
            len(self.transitions.get(s, {})) == len(letters)
            for s in range(self.n_states)
        )

    def triples(self):
        for state in range(self.n_states):
            row = self.transitions.get(state, {})
            for letter in self.alphabet.letters():
                if letter in row:
                    yield state, letter, row[letter]


def ldlf_to_nfa(formula: ldl.Ldlf, alphabet: Alphabet) -> Nfa:
    """Compile an LDLf formula into an NFA accepting exactly its traces.

    The formula is normalized first.  Successor states under each letter
    are the minimal obligation sets; keeping only minimal models keeps
    the automaton small without changing its language.
    """
    normalized = to_nnf(formula)
    letters = alphabet.letters()

    key_cache: dict = {}

    def key(f: ldl.Ldlf) -> str:
        k = key_cache.get(f)
        if k is None:
            k = print_ldlf(f)
            key_cache[f] = k
        return k

    delta_cache: dict = {}

    def delta_of(f: ldl.Ldlf, letter) -> PosBool:
        probe = (f, letter)
        hit = delta_cache.get(probe)
        if hit is None:
            hit = delta(f, letter)
            delta_cache[probe] = hit
        return hit

    empty = frozenset()
    initial_macro = frozenset((normalized,))
    ids: dict = {initial_macro: 0}
    order = [initial_macro]
    transitions: dict = {}
    queue = deque((initial_macro,))
    while queue:
        macro = queue.popleft()
        row: dict = {}
        members = sorted(macro, key=key)
        for letter in letters:
            obligation = PB_TRUE
            for member in members:
                obligation = pb_and(obligation, delta_of(member, letter))
                if isinstance(obligation, PBFalse):
                    break
            models = minimal_models(obligation)
            models.sort(key=lambda m: (len(m), sorted(key(g) for g in m)))
            targets = []
            for model in models:
                if model not in ids:
                    ids[model] = len(order)
                    order.append(model)
                    queue.append(model)
                targets.append(ids[model])
            if targets:
                row[letter] = frozenset(targets)
        transitions[ids[macro]] = row
    if empty not in ids:
        ids[empty] = len(order)
        order.append(empty)
        transitions[ids[empty]] = {letter: frozenset((ids[empty],)) for letter in letters}
    finals = frozenset(
        ids[macro]
        for macro in order
        if all(delta_epsilon(member) for member in macro)
    )
    labels = tuple(
        " & ".join(sorted(key(member) for member in macro)) if macro else "{}"
        for macro in order
    )
    return Nfa(
        alphabet=alphabet,
        n_states=len(order),
        initial=0,
        transitions=transitions,
        finals=finals,
        labels=labels,
    )


def determinize(nfa: Nfa) -> Dfa:
    """Subset construction.  The result is total: letters with no
    successor lead to the empty subset, a rejecting sink."""
    letters = nfa.alphabet.letters()
    initial = frozenset((nfa.initial,))
    ids = {initial: 0}
    order = [initial]
    transitions: dict = {}
    queue = deque((initial,))
    while queue:
        subset = queue.popleft()
        row = {}
        for letter in letters:
            successor = frozenset(
                target
                for state in subset
                for target in nfa.successors(state, letter)
            )
            if successor not in ids:
                ids[successor] = len(order)
                order.append(successor)
                queue.append(successor)
            row[letter] = ids[successor]
        transitions[ids[subset]] = row
    finals = frozenset(
        ids[subset] for subset in order if subset & nfa.finals
    )
    labels = tuple(
        "{" + ",".join(str(s) for s in sorted(subset)) + "}" for subset in order
    )
    return Dfa(
        alphabet=nfa.alphabet,
        n_states=len(order),
        initial=0,
        transitions=transitions,
        finals=finals,
        labels=labels,
    )


def complete(aut):
    """Make the transition relation total by adding a rejecting sink
    where letters are missing.  Already-total automata come back as is."""
    letters = aut.alphabet.letters()
    if isinstance(aut, Dfa):
        if aut.is_total():
            return aut
        sink = aut.n_states
        transitions = {}
        for state in range(aut.n_states):
            row = dict(aut.transitions.get(state, {}))
            for letter in letters:
                row.setdefault(letter, sink)
            transitions[state] = row
        transitions[sink] = {letter: sink for letter in letters}
        return Dfa(
            alphabet=aut.alphabet,
            n_states=aut.n_states + 1,
            initial=aut.initial,
            transitions=transitions,
            finals=aut.finals,
            labels=aut.labels + ("sink",) if aut.labels else (),
        )
    if isinstance(aut, Nfa):
        needs_sink = any(
            not aut.successors(state, letter)
            for state in range(aut.n_states)
            for letter in letters
        )
        if not needs_sink:
            return aut
        sink = aut.n_states
        transitions = {}
        for state in range(aut.n_states):
            row = {
                letter: set(targets)
                for letter, targets in aut.transitions.get(state, {}).items()
            }
            for letter in letters:
                if not row.get(letter):
                    row[letter] = {sink}
            transitions[state] = {
                letter: frozenset(targets) for letter, targets in row.items()
            }
        transitions[sink] = {letter: frozenset((sink,)) for letter in letters}
        return Nfa(
            alphabet=aut.alphabet,
            n_states=aut.n_states + 1,
            initial=aut.initial,
            transitions=transitions,
            finals=aut.finals,
            labels=aut.labels + ("sink",) if aut.labels else (),
        )
    msg = f"not an automaton: {aut!r}"
    raise TypeError(msg)


def complement(dfa: Dfa) -> Dfa:
    """Flip acceptance.  Pre: the automaton is total (ours always are)."""
    if not dfa.is_total():
        msg = "complement needs a total automaton; call complete() first"
        raise ValueError(msg)
    return Dfa(
        alphabet=dfa.alphabet,
        n_states=dfa.n_states,
        initial=dfa.initial,
        transitions=dfa.transitions,
        finals=frozenset(range(dfa.n_states)) - dfa.finals,
        labels=dfa.labels,
    )


def product_pairs(a: Dfa, b: Dfa, accept=None):
    """Synchronized product of two total DFAs over the same alphabet.

    Returns the product automaton together with the (state -> pair)
    table, which shape-equivalence arguments rely on.  ``accept``
    combines the components' acceptance (intersection by default).
    """
    if a.alphabet != b.alphabet:
        msg = "product needs automata over the same alphabet"
        raise ValueError(msg)
    if accept is None:
        accept = lambda fa, fb: fa and fb
    letters = a.alphabet.letters()
    start = (a.initial, b.initial)
    ids = {start: 0}
    order = [start]
    transitions: dict = {}
    queue = deque((start,))
    while queue:
        pair = queue.popleft()
        sa, sb = pair
        row = {}
        for letter in letters:
            successor = (a.transitions[sa][letter], b.transitions[sb][letter])
            if successor not in ids:
                ids[successor] = len(order)
                order.append(successor)
                queue.append(successor)
            row[letter] = ids[successor]
        transitions[ids[pair]] = row
    finals = frozenset(
        ids[pair]
        for pair in order
        if accept(pair[0] in a.finals, pair[1] in b.finals)
    )
    labels = tuple(f"({sa},{sb})" for sa, sb in order)
    dfa = Dfa(
        alphabet=a.alphabet,
        n_states=len(order),
        initial=0,
        transitions=transitions,
        finals=finals,
        labels=labels,
    )
    return dfa, tuple(order)


def product(a: Dfa, b: Dfa, accept=None) -> Dfa:
    return product_pairs(a, b, accept)[0]


def minimize(dfa: Dfa) -> Dfa:
    """Language-minimal equivalent DFA (partition refinement), with
    states renumbered in breadth-first order from the initial state."""
    if not dfa.is_total():
        msg = "minimize needs a total automaton; call complete() first"
        raise ValueError(msg)
    letters = dfa.alphabet.letters()
    reachable = _forward_reachable(dfa)
    states = sorted(reachable)
    block = {s: (1 if s in dfa.finals else 0) for s in states}
    while True:
        signatures = {
            s: (block[s], tuple(block[dfa.transitions[s][letter]] for letter in letters))
            for s in states
        }
        renumber: dict = {}
        for s in states:
            sig = signatures[s]
            if sig not in renumber:
                renumber[sig] = len(renumber)
        next_block = {s: renumber[signatures[s]] for s in states}
        if next_block == block:
            break
        block = next_block
    # Rebuild over blocks, numbering them by breadth-first discovery.
    start = block[dfa.initial]
    ids = {start: 0}
    order = [start]
    representative = {}
    for s in states:
        representative.setdefault(block[s], s)
    transitions: dict = {}
    queue = deque((start,))
    while queue:
        blk = queue.popleft()
        rep = representative[blk]
        row = {}
        for letter in letters:
            target = block[dfa.transitions[rep][letter]]
            if target not in ids:
                ids[target] = len(order)
                order.append(target)
                queue.append(target)
            row[letter] = ids[target]
        transitions[ids[blk]] = row
    finals = frozenset(
        ids[blk] for blk in order if representative[blk] in dfa.finals
    )
    labels = tuple(
        dfa.labels[representative[blk]] if dfa.labels else "" for blk in order
    )
    return Dfa(
        alphabet=dfa.alphabet,
        n_states=len(order),
        initial=0,
        transitions=transitions,
        finals=finals,
        labels=labels if dfa.labels else (),
    )


def _forward_reachable(aut) -> set:
    seen = {aut.initial}
    queue = deque((aut.initial,))
    while queue:
        state = queue.popleft()
        row = aut.transitions.get(state, {})
        for targets in row.values():
            if isinstance(targets, int):
                targets = (targets,)
            for target in targets:
                if target not in seen:
                    seen.add(target)
                    queue.append(target)
    return seen


def reachable_from(aut, state: int) -> frozenset:
    """States reachable from the given state, itself included."""
    seen = {state}
    queue = deque((state,))
    while queue:
        current = queue.popleft()
        row = aut.transitions.get(current, {})
        for targets in row.values():
            if isinstance(targets, int):
                targets = (targets,)
            for target in targets:
                if target not in seen:
                    seen.add(target)
                    queue.append(target)
    return frozenset(seen)


def prefix_closure(aut):
    """Accept every prefix of an accepted trace: make final all states
    from which a final state is reachable (trivially including finals).

    The transition structure is untouched, so the result has the same
    shape as the input.
    """
    backward: dict = {}
    for state, row in aut.transitions.items():
        for targets in row.values():
            if isinstance(targets, int):
                targets = (targets,)
            for target in targets:
                backward.setdefault(target, set()).add(state)
    closed = set(aut.finals)
    queue = deque(aut.finals)
    while queue:
        state = queue.popleft()
        for pred in backward.get(state, ()):
            if pred not in closed:
                closed.add(pred)
                queue.append(pred)
    kwargs = dict(
        alphabet=aut.alphabet,
        n_states=aut.n_states,
        initial=aut.initial,
        transitions=aut.transitions,
        finals=frozenset(closed),
        labels=aut.labels,
    )
    return type(aut)(**kwargs)


def trim(nfa: Nfa) -> Nfa:
    """Keep only states that lie on some accepting run (reachable and
    able to reach a final state).  The initial state is always kept so
    an empty language still has a well-formed automaton."""
    forward = _forward_reachable(nfa)
    productive = set(prefix_closure(nfa).finals)
    kept = sorted(s for s in forward if s in productive or s == nfa.initial)
    ids = {s: i for i, s in enumerate(kept)}
    transitions = {}
    for state in kept:
        row = {}
        for letter, targets in nfa.transitions.get(state, {}).items():
            if isinstance(targets, int):
                targets = (targets,)
            filtered = frozenset(ids[t] for t in targets if t in ids)
            if filtered:
                row[letter] = filtered
        transitions[ids[state]] = row
    return Nfa(
        alphabet=nfa.alphabet,
        n_states=len(kept),
        initial=ids[nfa.initial],
        transitions=transitions,
        finals=frozenset(ids[s] for s in nfa.finals if s in ids),
        labels=tuple(nfa.labels[s] for s in kept) if nfa.labels else (),
    )


def is_empty(aut) -> bool:
    """Whether the automaton accepts no trace at all."""
    return not (_forward_reachable(aut) & set(aut.finals))


def accepts(aut, trace) -> bool:
    """Run the automaton over a trace (DFA walk or NFA subset walk)."""
    if isinstance(aut, Dfa):
        state = aut.initial
        for letter in trace:
            state = aut.step(state, frozenset(letter))
        return state in aut.finals
    current = {aut.initial}
    for letter in trace:
        letter = frozenset(letter)
        aut.alphabet.check_letter(letter)
        current = {
            target for state in current for target in aut.successors(state, letter)
        }
        if not current:
            return False
    return bool(current & set(aut.finals))


def language_equal(a: Dfa, b: Dfa) -> bool:
    """Exact language equality via symmetric-difference emptiness."""
    return is_empty(product(a, complement(b))) and is_empty(
        product(complement(a), b)
    )


def guard_for_letters(alphabet: Alphabet, letters) -> Prop:
    """A propositional guard matched by exactly the given letters.

    Tries the readable shapes first (true, a single literal, a
    disjunction of task names) and falls back to a disjunction of
    letter descriptions.  Exactness is always verified against the
    alphabet's full letter set.
    """
    universe = alphabet.letters()
    wanted = frozenset(letters)

    def exact(guard: Prop) -> bool:
        return all((eval_prop(guard, l) == (l in wanted)) for l in universe)

    if wanted == frozenset(universe):
        return TRUE
    if not wanted:
        return FALSE
    candidates = []
    for name in alphabet.props:
        candidates.append(Atom(name))
        candidates.append(PropNot(Atom(name)))
    for guard in candidates:
        if exact(guard):
            return guard
    if alphabet.singleton_letters:
        names = sorted(next(iter(l)) for l in wanted)
        guard = Atom(names[0])
        for name in names[1:]:
            guard = PropOr(guard, Atom(name))
        if exact(guard):
            return guard
    ordered = [l for l in universe if l in wanted]
    guard = None
    for letter in ordered:
        term = None
        for name in alphabet.props:
            literal = Atom(name) if name in letter else PropNot(Atom(name))
            term = literal if term is None else PropAnd(term, literal)
        guard = term if guard is None else PropOr(guard, term)
    if not exact(guard):
        msg = "guard synthesis failed"
        raise AssertionError(msg)
    return guard


_DOT_COLORS = {
    "temp_true": "#fdb863",
    "temp_false": "#80b1d3",
    "perm_true": "#7fbc41",
    "perm_false": "#d73027",
}


def to_dot(aut, colors=None, name: str = "automaton") -> str:
    """Graphviz rendering.  Parallel letters between two states are
    compressed into one guard-labelled edge; this is display only, the
    automaton itself stays letter-level."""
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  hidden [shape=none label=""];']
    for state in range(aut.n_states):
        shape = "doublecircle" if state in aut.finals else "circle"
        attrs = [f"shape={shape}"]
        if colors is not None:
            value = colors[state]
            value = getattr(value, "value", value)
            attrs.append(f'style=filled fillcolor="{_DOT_COLORS[value]}"')
            attrs.append(f'tooltip="{value}"')
        elif aut.labels:
            attrs.append(f'tooltip="{_dot_escape(aut.labels[state])}"')
        lines.append(f"  s{state} [{' '.join(attrs)}];")
    lines.append(f"  hidden -> s{aut.initial};")
    for state in range(aut.n_states):
        grouped: dict = {}
        row = aut.transitions.get(state, {})
        for letter, targets in row.items():
            if isinstance(targets, int):
                targets = (targets,)
            for target in targets:
                grouped.setdefault(target, []).append(letter)
        for target in sorted(grouped):
            guard = guard_for_letters(aut.alphabet, grouped[target])
            label = _dot_escape(print_prop(guard))
            lines.append(f'  s{state} -> s{target} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def aut_to_json(aut, colors=None) -> str:
    """Stable JSON rendering used for golden files and the CLI."""
    letters = aut.alphabet.letters()
    triples = []
    for state in range(aut.n_states):
        row = aut.transitions.get(state, {})
        for letter in letters:
            targets = row.get(letter)
            if targets is None:
                continue
            if isinstance(targets, int):
                targets = (targets,)
            for target in sorted(targets):
                triples.append([state, sorted(letter), target])
    payload = {
        "kind": "dfa" if isinstance(aut, Dfa) else "nfa",
        "props": list(aut.alphabet.props),
        "singleton_letters": aut.alphabet.singleton_letters,
        "n_states": aut.n_states,
        "initial": aut.initial,
        "finals": sorted(aut.finals),
        "transitions": triples,
    }
    if colors is not None:
        payload["colors"] = [
            getattr(colors[s], "value", colors[s]) for s in range(aut.n_states)
        ]
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def aut_from_json(text: str):
    """Inverse of aut_to_json (colors, if present, are returned too)."""
    payload = json.loads(text)
    alphabet = Alphabet(
        tuple(payload["props"]), singleton_letters=payload["singleton_letters"]
    )
    deterministic = payload["kind"] == "dfa"
    transitions: dict = {}
    for source, letter_names, target in payload["transitions"]:
        letter = frozenset(letter_names)
        row = transitions.setdefault(source, {})
        if deterministic:
            if letter in row and row[letter] != target:
                msg = "duplicate transition in dfa payload"
                raise ValueError(msg)
            row[letter] = target
        else:
            row.setdefault(letter, set()).add(target)
    if not deterministic:
        transitions = {
            s: {l: frozenset(ts) for l, ts in row.items()}
            for s, row in transitions.items()
        }
    cls = Dfa if deterministic else Nfa
    aut = cls(
        alphabet=alphabet,
        n_states=payload["n_states"],
        initial=payload["initial"],
        transitions=transitions,
        finals=frozenset(payload["finals"]),
    )
    colors = payload.get("colors")
    return aut, colors
