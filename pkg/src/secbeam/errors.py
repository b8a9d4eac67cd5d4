"""Exception hierarchy shared by all modules."""


class SecbeamError(Exception):
    """Base class for package errors."""


class InvalidInput(SecbeamError, ValueError):
    pass


class InvalidGeometry(InvalidInput):
    pass


class InvalidParameters(InvalidInput):
    pass


class FieldTooSmall(InvalidParameters):
    pass


class IncompleteReception(SecbeamError):
    """Decoding was attempted on a block with erased symbols."""


class OracleInfeasible(SecbeamError):
    """Brute-force enumeration would exceed its budget."""


class PhaseInfeasible(SecbeamError):
    def __init__(self, phase, status=None):
        self.phase = phase
        self.status = status
        super().__init__(f"phase {phase} problem is {status or 'infeasible'}")


class RelaxationNotExact(SecbeamError):
    def __init__(self, ratio, phase=None):
        self.ratio = ratio
        self.phase = phase
        where = f" (phase {phase})" if phase is not None else ""
        super().__init__(f"relaxation not rank one{where}: lambda2/lambda1 = {ratio:.3e}")
