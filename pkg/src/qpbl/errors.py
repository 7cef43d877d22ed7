"""Exception hierarchy. Every error carries a stable machine-readable ``code``."""

from __future__ import annotations


class QpblError(Exception):
    code = "error"

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.code)
        self.details = details


class PointOutsideDomain(QpblError):
    code = "point-outside-domain"


class InvalidCoefficient(QpblError):
    code = "invalid-coefficient"


class AxiomPrereqFailed(QpblError):
    code = "axiom-prereq-failed"


class UnknownId(QpblError):
    code = "unknown-id"


class BadParams(QpblError):
    code = "bad-params"


class NonpositiveRadius(QpblError):
    code = "nonpositive-radius"


class NotInBall(QpblError):
    code = "not-in-ball"


class ContainmentFailed(QpblError):
    code = "containment-failed"


class InfiniteDomain(QpblError):
    code = "infinite-domain"


class HypothesisNotMet(QpblError):
    code = "hypothesis-not-met"


class HypothesisFailed(QpblError):
    code = "hypothesis-failed"


class MaxIterExceeded(QpblError):
    code = "max-iter-exceeded"


class DomainEscape(QpblError):
    code = "domain-escape"


class SeriesDiverging(QpblError):
    code = "series-diverging"


class NoInverse(QpblError):
    code = "no-inverse"


class LambdaOutOfRange(QpblError):
    code = "lambda-out-of-range"


class UnknownExample(QpblError):
    code = "unknown-example"


class SpaceFileError(QpblError):
    code = "space-file-error"
