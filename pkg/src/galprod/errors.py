"""Exception types. Every domain error carries a stable machine-readable code."""


class GalprodError(Exception):
    code = "Error"

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details

    def to_json(self):
        return {"error": self.code, "message": str(self), "details": self.details}


class BadShape(GalprodError):
    code = "BadShape"


class NotPrime(GalprodError):
    code = "NotPrime"


class NotSymplectic(GalprodError):
    code = "NotSymplectic"


class DegreeMismatch(GalprodError):
    code = "DegreeMismatch"


class BadEll(GalprodError):
    code = "BadEll"


class BadExponent(GalprodError):
    code = "BadExponent"


class BudgetExceeded(GalprodError):
    code = "BudgetExceeded"


class NotSurjectiveProjection(GalprodError):
    code = "NotSurjectiveProjection"

    def __init__(self, factor, message=""):
        super().__init__(message or f"projection to factor {factor} is not surjective", factor=factor)
        self.factor = factor


class ClassificationContradiction(GalprodError):
    code = "ClassificationContradiction"


class FactorizationBudget(GalprodError):
    code = "FactorizationBudget"


class SingularCurve(GalprodError):
    code = "SingularCurve"


class BadPrime(GalprodError):
    code = "BadPrime"


class InternalInconsistency(GalprodError):
    code = "InternalInconsistency"


class NoGoodPrimes(GalprodError):
    code = "NoGoodPrimes"


class PrecisionFailure(GalprodError):
    code = "PrecisionFailure"


class CacheMiss(GalprodError):
    code = "CacheMiss"


class NetworkError(GalprodError):
    code = "NetworkError"


class SchemaError(GalprodError):
    code = "SchemaError"


class NotFound(GalprodError):
    code = "NotFound"
