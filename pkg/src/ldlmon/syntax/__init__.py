"""Formula syntax: ASTs, parsers, printers and transformations."""
from .alphabet import Alphabet, RESERVED_NAMES
from .ldl import (
    Alt,
    And,
    Box,
    Diamond,
    END,
    EPSILON_PATH,
    FF,
    FalseMark,
    Ff,
    LAST,
    Ldlf,
    Not,
    Or,
    Path,
    Seq,
    Star,
    Step,
    TT,
    Test,
    TrueMark,
    Tt,
    formula_atoms,
    path_atoms,
    print_ldlf,
    print_path,
    prop_formula,
)
from .ltl import (
    Always,
    Eventually,
    LtlfAnd,
    LtlfIff,
    LtlfImplies,
    LtlfNot,
    LtlfOr,
    LtlfProp,
    Ltlf,
    Next,
    Release,
    Until,
    WeakNext,
    ltlf_atoms,
    print_ltlf,
)
from .parser import (
    FormulaSyntaxError,
    parse_ldlf,
    parse_ltlf,
    parse_prop,
    parse_re,
    scan_names,
)
from .props import (
    Atom,
    FALSE,
    Interp,
    Prop,
    PropAnd,
    PropFalse,
    PropNot,
    PropOr,
    PropTrue,
    TRUE,
    eval_prop,
    print_prop,
    prop_atoms,
)
from .transforms import is_nnf, ltlf_to_ldlf, re_to_ldlf, to_nnf

__all__ = [name for name in dir() if not name.startswith("_")]
