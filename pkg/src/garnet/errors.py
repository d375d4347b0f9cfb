"""Exception hierarchy.

Each error family carries a distinct process exit code so CLI failures are
machine-distinguishable (see ``garnet.cli.main``).
"""


class GarnetError(Exception):
    exit_code = 1


class ConfigError(GarnetError):
    """Invalid parameters, missing files, inconsistent shapes or masks."""

    exit_code = 2


class FormatError(GarnetError):
    """Malformed content in an input file."""

    exit_code = 3


class SolverError(GarnetError):
    """A numerical routine failed to converge or diverged."""

    exit_code = 4


class InfeasibleError(GarnetError):
    """The requested operation has no legal continuation on this input."""

    exit_code = 5


class LimitError(GarnetError):
    """A resource guard refused to materialize something too large."""

    exit_code = 6


class IoError(GarnetError):
    """Failed to write an output artifact."""

    exit_code = 7


# -- graph I/O ---------------------------------------------------------------

class MalformedLine(FormatError):
    def __init__(self, path, line_no, line):
        super().__init__(f"{path}:{line_no}: cannot parse edge line {line!r}")
        self.line_no = line_no


class NegativeWeight(FormatError):
    def __init__(self, path, line_no, weight):
        super().__init__(f"{path}:{line_no}: edge weight must be positive, got {weight}")
        self.line_no = line_no


class IdOutOfRange(FormatError):
    def __init__(self, path, line_no, node_id, n_hint):
        super().__init__(f"{path}:{line_no}: node id {node_id} exceeds declared count {n_hint}")
        self.line_no = line_no


class EmptyGraph(ConfigError):
    pass


# -- spectral ----------------------------------------------------------------

class RankTooLarge(ConfigError):
    pass


class NoConvergence(SolverError):
    def __init__(self, msg, residual_norms=None):
        super().__init__(msg)
        self.residual_norms = residual_norms


class DenseLimitExceeded(LimitError):
    pass


class DimensionMismatch(ConfigError):
    pass


# -- kNN ---------------------------------------------------------------------

class KTooLarge(ConfigError):
    pass


class DegenerateEmbedding(InfeasibleError):
    pass


class SizeMismatch(ConfigError):
    pass


# -- refinement --------------------------------------------------------------

class NotPositiveDefinite(SolverError):
    pass


class EmptyResultWarning(UserWarning):
    """All edges were pruned; the refined graph is empty."""


# -- attack simulation -------------------------------------------------------

class BudgetInfeasible(InfeasibleError):
    def __init__(self, msg, moves_completed=0):
        super().__init__(f"{msg} ({moves_completed} moves completed)")
        self.moves_completed = moves_completed


class InvalidProbability(ConfigError):
    pass


# -- GCN evaluation ----------------------------------------------------------

class NonFiniteLoss(SolverError):
    pass


class MaskEmpty(ConfigError):
    pass


class ProbeOutOfRange(ConfigError):
    pass
