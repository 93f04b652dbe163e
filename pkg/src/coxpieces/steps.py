"""Reduction steps and chains shared by the pieces and minlen modules."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class ReductionStep:
    """One move of a reduction.

    side is "conj" for w -> s_j w delta(s_j), "left" for a pair move
    (s_i, delta'(s_i)) * w and "right" for w * (s_j, delta(s_j)).  gen is 0-based.
    before/after are element indices (or encoded pairs).
    """
    side: str
    gen: int
    before: int
    after: int
    len_before: int
    len_after: int

    @property
    def signed_label(self) -> int:
        """1-based label, negative for left moves of the pair setting."""
        return -(self.gen + 1) if self.side == "left" else self.gen + 1


@dataclass
class ReductionChain:
    start: int
    steps: list[ReductionStep] = field(default_factory=list)

    @property
    def end(self) -> int:
        return self.steps[-1].after if self.steps else self.start

    def __len__(self) -> int:
        return len(self.steps)

    def is_nonincreasing(self) -> bool:
        cur = self.start
        for st in self.steps:
            if st.before != cur or st.len_after > st.len_before:
                return False
            cur = st.after
        return True
