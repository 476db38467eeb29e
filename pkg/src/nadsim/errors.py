"""Exception types shared across the toolkit."""


class EvaluationError(RuntimeError):
    """A field or dressed-state quantity could not be evaluated at a time point."""

    def __init__(self, message, t=None):
        if t is not None:
            message = f"{message} (at t={t!r})"
        super().__init__(message)
        self.t = t


class DegeneratePointError(EvaluationError):
    """The dressed-state pair is numerically degenerate at a time point."""


class ScenarioError(ValueError):
    """A scenario file failed to parse or validate."""

    def __init__(self, message, key=None, line=None):
        context = []
        if key is not None:
            context.append(f"key '{key}'")
        if line is not None:
            context.append(f"line {line}")
        if context:
            message = f"{message} ({', '.join(context)})"
        super().__init__(message)
        self.key = key
        self.line = line
