"""Constraints over monitoring states and their expansion to plain LDLf."""
import dataclasses

import pytest

from ldlmon.automata import determinize, language_equal, ldlf_to_nfa, minimize
from ldlmon.declare import existence, not_coexistence, responded_existence, response
from ldlmon.metaconstraints import (
    RvAtom,
    RvPath,
    compensation,
    conflict,
    contextual_absence,
    expand,
    preference,
    reactive_compensation,
)
from ldlmon.monitor import Monitor, monitor_automaton
from ldlmon.regexfold import regex_for_rv
from ldlmon.rv import RVState
from ldlmon.semantics import eval_ldlf, trace_from_tasks
from ldlmon.syntax import (
    Alphabet,
    And,
    Box,
    Diamond,
    END,
    Not,
    Or,
    TT,
    formula_atoms,
    ldl,
    ltlf_to_ldlf,
    parse_re,
    print_ldlf,
)

TF_ = RVState.TEMP_FALSE
PF_ = RVState.PERM_FALSE

BOOKING = Alphabet.tasks(["pay", "acc", "get", "cancel", "return"])

RE1 = ltlf_to_ldlf(responded_existence("pay", "acc"))
NCX = ltlf_to_ldlf(not_coexistence("get", "cancel"))
RESP = ltlf_to_ldlf(response("pay", "get"))
RET = ltlf_to_ldlf(existence("return"))


def compile_ldlf(formula, alphabet=BOOKING):
    return minimize(determinize(ldlf_to_nfa(formula, alphabet)))


def regex_dfa(text, alphabet=BOOKING):
    return compile_ldlf(Diamond(parse_re(text, alphabet), END), alphabet)


def contains_rv_nodes(value) -> bool:
    if isinstance(value, (RvAtom, RvPath)):
        return True
    if dataclasses.is_dataclass(value):
        return any(
            contains_rv_nodes(getattr(value, f.name))
            for f in dataclasses.fields(value)
        )
    return False


# Node basics ------------------------------------------------------------


def test_rv_nodes_print_with_state_codes():
    atom = RvAtom(RE1, TF_)
    assert str(atom).endswith("=TF")
    assert str(atom).startswith("{")
    path = RvPath(NCX, PF_)
    assert str(path).startswith("re{")
    assert str(path).endswith("=PF")
    # Formulas containing the extension nodes still print.
    assert "=PF" in print_ldlf(compensation(NCX, RET))


def test_formula_atoms_see_through_rv_nodes():
    formula = conflict(RESP, NCX)
    assert formula_atoms(formula) == frozenset({"pay", "get", "cancel"})
    absence_formula = contextual_absence(RE1, TF_, "get")
    assert "pay" in formula_atoms(absence_formula)
    assert "get" in formula_atoms(absence_formula)


# Builder shapes ---------------------------------------------------------


def test_builder_structure():
    plain = compensation(NCX, RET)
    assert plain == Or(Not(RvAtom(NCX, PF_)), RET)
    reactive = reactive_compensation(NCX, RET)
    assert reactive == Or(
        Not(RvAtom(NCX, PF_)), Diamond(RvPath(NCX, PF_), RET)
    )
    absent = contextual_absence(RE1, TF_, "get")
    assert isinstance(absent, Box)
    assert absent.path == RvPath(RE1, TF_)
    clash = conflict(RESP, NCX)
    assert clash.left == RvAtom(And(RESP, NCX), PF_)
    prefer = preference(NCX, RESP)
    assert prefer == Or(
        Not(Diamond(RvPath(And(NCX, RESP), PF_), TT)), NCX
    )


# Expansion --------------------------------------------------------------


def test_expand_eliminates_every_rv_node():
    for formula in [
        contextual_absence(RE1, TF_, "get"),
        compensation(NCX, RET),
        reactive_compensation(NCX, RET),
        conflict(RESP, NCX),
        preference(NCX, RESP),
    ]:
        assert contains_rv_nodes(formula)
        lowered = expand(formula, BOOKING)
        assert not contains_rv_nodes(lowered)


def test_expand_is_cached_and_leaves_plain_formulas_alone():
    assert expand(TT, BOOKING) is TT
    first = expand(RvAtom(NCX, PF_), BOOKING)
    second = expand(RvAtom(NCX, PF_), BOOKING)
    assert first is second


def test_expand_handles_nested_meta_levels():
    inner = compensation(RESP, RET)
    outer = contextual_absence(inner, TF_, "pay")
    lowered = expand(outer, BOOKING)
    assert not contains_rv_nodes(lowered)
    compile_ldlf(lowered)


def test_expand_rejects_paths_posing_as_formulas():
    with pytest.raises(TypeError):
        expand(RvPath(NCX, PF_), BOOKING)


def test_expanded_rv_atom_recognizes_the_monitor_state():
    lowered = expand(RvAtom(NCX, PF_), BOOKING)
    for tasks, expected in [
        ([], False),
        (["get"], False),
        (["get", "cancel"], True),
        (["cancel", "pay", "get"], True),
        (["cancel", "acc"], False),
    ]:
        assert eval_ldlf(trace_from_tasks(tasks), 0, lowered) is expected, tasks


# Exact trace languages of the lowered constraints ----------------------


def test_temporary_violation_language_of_responded_existence():
    got = compile_ldlf(expand(RvAtom(RE1, TF_), BOOKING))
    # Violated but fixable: pay has happened, acc has not.
    hand = regex_dfa("(!acc && !pay)*; pay; (!acc)*")
    assert language_equal(got, hand)
    assert language_equal(
        compile_ldlf(Diamond(regex_for_rv(RE1, TF_, BOOKING), END)), hand
    )


def test_dropping_the_acc_guard_overapproximates():
    # Requiring only no-pay before the first pay admits traces where acc
    # already happened, which are permanently satisfied, not violated.
    loose = regex_dfa("(!pay)*; pay; (!acc)*")
    exact = regex_dfa("(!acc && !pay)*; pay; (!acc)*")
    assert not language_equal(loose, exact)
    witness = trace_from_tasks(["acc", "pay"])
    monitor = Monitor(monitor_automaton(RE1, BOOKING))
    for letter in witness:
        monitor.step(letter)
    assert monitor.current_rv() is RVState.PERM_TRUE
    from ldlmon.automata import accepts

    assert accepts(loose, witness)
    assert not accepts(exact, witness)


def test_permanent_violation_language_of_not_coexistence():
    got = compile_ldlf(Diamond(regex_for_rv(NCX, PF_, BOOKING), END))
    hand = regex_dfa(
        "(!get && !cancel)*; get; (!cancel)*; cancel; true*"
        " + (!get && !cancel)*; cancel; (!get)*; get; true*"
    )
    assert language_equal(got, hand)


def test_conflict_trace_language():
    lowered = expand(conflict(RESP, NCX), BOOKING)
    got = compile_ldlf(lowered)
    # A conflict holds exactly when cancel and pay have happened and get
    # has not: the response obligation is then still open, but closing
    # it would break not-coexistence.
    hand = regex_dfa(
        "(!pay && !get && !cancel)*; pay; (!get && !cancel)*; cancel; (!get)*"
        " + (!pay && !get && !cancel)*; cancel; (!pay && !get)*; pay; (!get)*"
    )
    assert language_equal(got, hand)


def test_joint_doom_language_of_the_pair():
    pair = And(NCX, RESP)
    got = compile_ldlf(Diamond(regex_for_rv(pair, PF_, BOOKING), END))
    hand = regex_dfa(
        "(!pay && !get && !cancel)*; pay; (!cancel)*; cancel; true*"
        " + (!pay && !get && !cancel)*; get; (!cancel)*; cancel; true*"
        " + (!pay && !get && !cancel)*; cancel; (!pay && !get)*; (get || pay); true*"
    )
    assert language_equal(got, hand)
    # Same language, stated over occurrence formulas.
    occurrence = And(
        ltlf_to_ldlf(existence("cancel")),
        Or(ltlf_to_ldlf(existence("get")), ltlf_to_ldlf(existence("pay"))),
    )
    assert language_equal(got, compile_ldlf(occurrence))


# Behavioral differences between the builders ---------------------------


def test_reactive_compensation_requires_compensation_after_the_doom_point():
    plain = expand(compensation(NCX, RET), BOOKING)
    reactive = expand(reactive_compensation(NCX, RET), BOOKING)
    early = trace_from_tasks(["return", "get", "cancel"])
    late = trace_from_tasks(["get", "cancel", "return"])
    clean = trace_from_tasks(["get", "return"])
    assert eval_ldlf(early, 0, plain)
    assert not eval_ldlf(early, 0, reactive)
    assert eval_ldlf(late, 0, plain)
    assert eval_ldlf(late, 0, reactive)
    assert eval_ldlf(clean, 0, plain)
    assert eval_ldlf(clean, 0, reactive)


def test_preference_constrains_only_after_joint_doom():
    lowered = expand(preference(NCX, RESP), BOOKING)
    # No doom: anything goes.
    assert eval_ldlf(trace_from_tasks(["pay", "get"]), 0, lowered)
    # Doomed at cancel; the preferred constraint (not-coexistence) holds.
    assert eval_ldlf(trace_from_tasks(["pay", "cancel"]), 0, lowered)
    # Doomed, and the dispreferred side was saved instead.
    assert not eval_ldlf(trace_from_tasks(["pay", "cancel", "get"]), 0, lowered)
    flipped = expand(preference(RESP, NCX), BOOKING)
    assert not eval_ldlf(trace_from_tasks(["pay", "cancel"]), 0, flipped)
    assert eval_ldlf(trace_from_tasks(["pay", "cancel", "get"]), 0, flipped)


def test_conflict_monitor_has_no_permanently_true_state():
    lowered = expand(conflict(RESP, NCX), BOOKING)
    colored = monitor_automaton(lowered, BOOKING)
    assert RVState.PERM_TRUE not in colored.colors
    assert RVState.TEMP_TRUE in colored.colors


def test_conflict_is_symmetric():
    left = compile_ldlf(expand(conflict(RESP, NCX), BOOKING))
    right = compile_ldlf(expand(conflict(NCX, RESP), BOOKING))
    assert language_equal(left, right)
