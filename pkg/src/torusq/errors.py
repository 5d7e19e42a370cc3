"""Exception hierarchy shared across the package.

Errors are split into three groups that the CLI maps to distinct exit
codes: input errors (bad files / malformed data), math preconditions
(the requested computation is not defined for this input), and invariant
violations (an identity that must hold numerically failed).
"""


class TorusQError(Exception):
    """Base class for all package errors."""


class InputError(TorusQError):
    """Malformed user input (files, vectors, config).  CLI exit code 2."""


class PreconditionError(TorusQError):
    """A mathematical precondition is not met.  CLI exit code 3."""


class InvariantViolation(TorusQError):
    """A numerical identity that must hold failed.  CLI exit code 4."""


# --- field / group level ---

class NotInSubgroup(PreconditionError):
    """Discrete log requested for an element outside the cyclic group."""


class NotInSubfield(InvariantViolation):
    """An element expected to be Frobenius-fixed was not."""


# --- rational structure ---

class RepeatedEigenvalues(PreconditionError):
    """gcd(P, P') != 1: the pipeline requires distinct eigenvalues."""


class NonSymmetricOrbitPresent(PreconditionError):
    """Operation defined only when every Galois orbit is symmetric."""


class NotAQUE(NonSymmetricOrbitPresent):
    """Alias used by the experiment layer."""


class ZeroVector(PreconditionError):
    pass


class NotIsotropic(PreconditionError):
    pass


class NotInvariant(PreconditionError):
    pass


# --- quantizer ---

class EvenN(PreconditionError):
    """Averaging formula requires odd N."""


class NotSymplecticModN(PreconditionError):
    pass


class NonSymmetricF(PreconditionError):
    pass


class NonInvertibleE(PreconditionError):
    pass


# --- prime Hecke theory ---

class BadPrime(PreconditionError):
    """Prime divides the discriminant (or another excluded norm)."""


class EvenPrime(PreconditionError):
    pass


class RationalityFailure(InvariantViolation):
    """Constructed centralizer matrix failed its defining relations."""


class EigenvalueClusterAmbiguity(InvariantViolation):
    """Numerical eigenvalues could not be matched to roots of unity."""


class QuadFlagPresent(PreconditionError):
    """Matrix-element product formula does not apply to quad-flagged vectors."""


class EmptyJointEigenspace(PreconditionError):
    """Scar construction found no joint eigenvalue-1 vector."""


class MultiOrbitPrime(PreconditionError):
    """Moment computation restricted to single-orbit primes."""


class EmptySample(InputError):
    pass
