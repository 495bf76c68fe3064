class NonConvergenceError(RuntimeError):
    def __init__(self, message, partial_value=None, terms_used=None):
        """
        Raised when an iterative computation (a truncated series, a root solve, an optimiser run) fails to reach
        its tolerance within its limits.

        :param message: Description of what failed to converge.
        :type message: str
        :param partial_value: Best value reached before giving up, if there is one.
        :type partial_value: float | None
        :param terms_used: Number of terms/iterations spent.
        :type terms_used: int | None
        """
        super().__init__(message)
        self.partial_value = partial_value
        self.terms_used = terms_used


class SingularInformationError(ArithmeticError):
    """Raised when an observed information matrix is not positive definite."""
    pass


class NestingError(ValueError):
    """Raised when a likelihood-ratio test is requested for two families that are not strictly nested."""
    pass


class InitError(ValueError):
    """Raised when the starting point of a fit is not a valid parameter point for the family being fitted."""
    pass


class DatasetError(ValueError):
    def __init__(self, message, path=None, line_number=None):
        """
        Raised when a dataset file cannot be parsed into a vector of positive lifetimes.

        :param message: What is wrong with the file.
        :type message: str
        :param path: Path to the offending file.
        :type path: str | None
        :param line_number: 1-based line number of the offending line, if the error is tied to one line.
        :type line_number: int | None
        """
        location = ""
        if path is not None:
            location = f"{path}"
            if line_number is not None:
                location += f":{line_number}"
            location += ": "
        super().__init__(f"{location}{message}")
        self.path = path
        self.line_number = line_number
