class HypothesisError(ValueError):
    """Input violates a stated precondition; carries the failing inequality."""


class CertificateError(RuntimeError):
    """A constructed part failed its independent re-check."""
