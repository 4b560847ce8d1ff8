"""The four runtime-verification truth values.

For a property and a finite trace seen so far, exactly one holds:

* ``TEMP_TRUE``: satisfied now, some continuation violates it;
* ``TEMP_FALSE``: violated now, some continuation satisfies it;
* ``PERM_TRUE``: satisfied now and under every continuation;
* ``PERM_FALSE``: violated now and under every continuation.
"""
from __future__ import annotations

from enum import Enum


class RVState(Enum):
    TEMP_TRUE = "temp_true"
    TEMP_FALSE = "temp_false"
    PERM_TRUE = "perm_true"
    PERM_FALSE = "perm_false"

    def __str__(self) -> str:
        return self.value

    @property
    def code(self) -> str:
        """Two-letter display code: TT, TF, PT or PF."""
        return "".join(word[0] for word in self.value.split("_")).upper()

    @property
    def satisfied(self) -> bool:
        """Whether the trace seen so far satisfies the property."""
        return self in (RVState.TEMP_TRUE, RVState.PERM_TRUE)

    @property
    def permanent(self) -> bool:
        """Whether no continuation can change the truth value."""
        return self in (RVState.PERM_TRUE, RVState.PERM_FALSE)

    @classmethod
    def classify(cls, satisfied: bool, changeable: bool) -> "RVState":
        if satisfied:
            return cls.TEMP_TRUE if changeable else cls.PERM_TRUE
        return cls.TEMP_FALSE if changeable else cls.PERM_FALSE

    @classmethod
    def parse(cls, text: str) -> "RVState":
        """Accept either the full name (``perm_false``) or the code (``PF``)."""
        for member in cls:
            if text in (member.value, member.code, member.code.lower()):
                return member
        msg = f"not an RV state: {text!r}"
        raise ValueError(msg)
