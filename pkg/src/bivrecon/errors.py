"""Exception types shared across the reconstruction pipeline."""


class ReconstructionError(Exception):
    """Base class for all recoverable data errors raised by this package."""


class InvalidDataset(ReconstructionError):
    """A dataset violates its invariants (ragged rows, dimension < 2, ...)."""


class InvalidProjections(ReconstructionError):
    """A projection set failed validation; carries the violation list."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class CandidateExplosion(ReconstructionError):
    """Candidate enumeration exceeded the configured cap."""

    def __init__(self, cap, partial_count):
        self.cap = cap
        self.partial_count = partial_count
        super().__init__(
            f"candidate enumeration exceeded cap {cap} (found {partial_count} so far)"
        )


class InconsistentInstance(ReconstructionError):
    """An edge requires more undeduced carriers than exist; the projections
    cannot be satisfied by any set of distinct rows."""


class OracleTooLarge(ReconstructionError):
    """The exhaustive cover enumeration would exceed its subset cap."""


class InfeasibleStatements(ReconstructionError):
    """No size-s subset satisfies every edge statement."""


class InvalidSelection(ReconstructionError):
    """A selection overlaps the deduced set or references bad indices."""


class ContradictoryDistinctCount(ReconstructionError):
    """More rows were deduced than the caller-supplied distinct-row count."""


class ParseError(ReconstructionError):
    """A CSV or JSON input file could not be parsed; names the location."""


class InvalidOptions(ReconstructionError):
    """Caller-supplied options are unusable (empty column subset, ...)."""
