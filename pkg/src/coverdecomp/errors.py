"""Shared exception types.

Algorithms in this package never paper over a failed internal guarantee:
anything that the theory promises is checked at runtime and raises loudly.
"""


class SearchCapExceeded(Exception):
    """An exhaustive search was asked to run beyond its configured cap.

    ``lower_bound``, when set, is the best certified value found before
    the cap was hit.
    """

    def __init__(self, message, lower_bound=None):
        super().__init__(message)
        self.lower_bound = lower_bound


class FormatError(ValueError):
    """Malformed input text for one of the file formats (.hg, .tp, .sg)."""


class ResampleCapExceeded(Exception):
    """A resampling loop hit its cap before finding a good state.

    Usually means the target number of colours is too aggressive for the
    instance (the local-lemma condition does not hold).
    """


class InfeasibleLP(Exception):
    """The linear program has no feasible point.

    ``witness_tag`` names one constraint that could not be satisfied
    together with the rest, when the solver can identify one.
    """

    def __init__(self, message, witness_tag=None):
        super().__init__(message)
        self.witness_tag = witness_tag


class StructureTheoremViolation(Exception):
    """No discardable constraint qualified while fractional variables remain.

    For the LP families used here this is impossible by theory, so seeing
    it means a bug (or an LP outside the supported family).  It is never
    swallowed.
    """


class FlowInfeasible(Exception):
    """Max flow fell short of the shrinking requirement.

    Carries the cut witness: ``vertex_side`` / ``edge_side`` are the
    vertex and edge ids on the source side of a minimum cut, and
    ``cut_capacity`` equals the achieved flow ``value``.
    """

    def __init__(self, message, value, vertex_side, edge_side, cut_capacity):
        super().__init__(message)
        self.value = value
        self.vertex_side = vertex_side
        self.edge_side = edge_side
        self.cut_capacity = cut_capacity


class ClaimViolation(RuntimeError):
    """A runtime check of a proof-backed guarantee failed; always a bug."""
