"""Exception hierarchy shared by every module of the package."""


class RazzaboniError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateFrame(RazzaboniError):
    """A frame vector fell too close to the light cone (or the frame drifted too far) to normalize."""


class ShapeMismatch(RazzaboniError, ValueError):
    pass


class DivisionByZeroConstant(RazzaboniError, ZeroDivisionError):
    pass


class NonpositiveTau(RazzaboniError, ValueError):
    pass


class NonpositiveLambda(RazzaboniError, ValueError):
    pass


class SingularElimination(RazzaboniError, ValueError):
    """Curvature vanished on a slice where gamma must be recovered by dividing by it."""


class SingularTheta(RazzaboniError, ValueError):
    pass


class StepTooLarge(RazzaboniError, ValueError):
    pass


class ResidualTooLarge(RazzaboniError, ValueError):
    pass


class DegenerateTangentPlane(RazzaboniError, ValueError):
    pass


class KappaNearZero(RazzaboniError, ValueError):
    pass


class CausalObstruction(RazzaboniError, ValueError):
    """The requested dual tangent would not have the causal character of the case."""


class NonpositiveReparam(RazzaboniError, ValueError):
    pass


class ConfigError(RazzaboniError, ValueError):
    pass
