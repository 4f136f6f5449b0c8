"""Exception hierarchy shared by every proxyforge module

Library code raises these; only the CLI turns them into exit codes.
"""


class ProxyForgeError(Exception):
    """Base class for all proxyforge errors"""


class BudgetExhausted(ProxyForgeError):
    """Raised when an evaluator is called past its budget"""


class DimensionMismatch(ProxyForgeError, ValueError):
    """Raised when a candidate vector does not match the problem dimension"""


class InvalidClipRange(ProxyForgeError, ValueError):
    """Raised when AOCC clip bounds are not 0 < lo < hi"""


class NonPhysical(ProxyForgeError, ValueError):
    """Raised for layer stacks with negative thickness or index below 1"""


class UnknownProblem(ProxyForgeError, KeyError):
    """Raised when a problem name is not in the registry"""


class UnknownFunctionId(UnknownProblem):
    """Raised when a synthetic function id is not known"""


class DegenerateSample(ProxyForgeError, ValueError):
    """Raised when a design sample cannot support landscape features"""


class EmptyRetention(ProxyForgeError):
    """Raised when correlation pruning keeps no feature at all"""


class FeatureMismatch(ProxyForgeError, ValueError):
    """Raised when two feature distributions retain different features"""


class TreeTypeError(ProxyForgeError, TypeError):
    """Raised when an expression tree violates the scalar/vector typing rules"""


class TreeParseError(ProxyForgeError, ValueError):
    """Raised when the prefix text form of a tree cannot be parsed"""


class NoValidCandidate(ProxyForgeError):
    """Raised when every GP individual of a run was penalized"""


class InvalidConfig(ProxyForgeError, ValueError):
    """Raised when an algorithm or pipeline configuration is invalid"""


class ProposerUnavailable(ProxyForgeError):
    """Raised when the LLM proposer cannot be reached or authenticated"""


class MalformedResponse(ProxyForgeError):
    """Raised when a proposer reply holds no schema-valid configuration"""


class ArtifactMissing(ProxyForgeError, FileNotFoundError):
    """Raised when a pipeline stage needs an artifact that was not produced"""
