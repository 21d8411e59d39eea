"""Exception hierarchy.

Every domain failure raised by the library derives from :class:`GValuesError`
and carries a stable machine-readable ``code`` that the CLI reports verbatim.
"""


class GValuesError(Exception):
    code = "domain_error"


class PrecisionExhausted(GValuesError):
    code = "precision_exhausted"


class DivisionByNonUnit(GValuesError):
    code = "division_by_non_unit"


class TailUnbounded(GValuesError):
    code = "tail_unbounded"


class AllZeroTail(GValuesError):
    code = "all_zero_tail"


class DegenerateWitness(GValuesError):
    code = "degenerate_witness"


class NoWitnessFound(GValuesError):
    code = "no_witness_found"


class InadmissibleWitness(GValuesError):
    code = "inadmissible_witness"


class BranchCut(GValuesError):
    code = "branch_cut"


class SingularCenter(GValuesError):
    code = "singular_center"


class StepTooClose(GValuesError):
    code = "step_too_close"


class WronskianVanishes(GValuesError):
    code = "wronskian_vanishes"


class AbelViolation(GValuesError):
    code = "abel_violation"


class FitInconsistent(GValuesError):
    code = "fit_inconsistent"


class TruncationInconclusive(GValuesError):
    code = "truncation_inconclusive"


class FitDiverged(GValuesError):
    code = "fit_diverged"


class DegenerateGamma(GValuesError):
    code = "degenerate_gamma"


class OscillationUnresolved(GValuesError):
    code = "oscillation_unresolved"


class NearSingular(GValuesError):
    code = "near_singular"


class RadiusTooSmall(GValuesError):
    code = "radius_too_small"


class SchemaError(GValuesError):
    """Malformed JSON input; ``path`` names the offending field."""

    code = "schema_error"

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class ParseError(GValuesError):
    """Syntax error in an expression, with the half-open source span."""

    code = "syntax_error"

    def __init__(self, message, span=(0, 0), text=""):
        self.span = tuple(span)
        self.text = text
        start, end = self.span
        super().__init__(f"{message} at [{start}:{end}]")


class NonPolynomial(ParseError):
    code = "non_polynomial"


class ConsistencyViolation(UserWarning):
    """Inputs that no genuine approximation triple can satisfy."""
