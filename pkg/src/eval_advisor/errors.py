"""Error taxonomy shared by the engine, the HTTP API, and the CLI.

Every failure surfaced to a caller carries one of five machine-readable
codes so that interface layers can map errors uniformly (HTTP status,
CLI exit code) without inspecting message text.
"""


class AdvisorError(Exception):
    """Base class; `code` is one of the five wire-level error codes."""

    code = "invalid-input"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def to_wire(self) -> dict:
        return {"code": self.code, "message": self.message}


class InvalidInputError(AdvisorError):
    code = "invalid-input"


class NotFoundError(AdvisorError):
    code = "not-found"


class ConflictError(AdvisorError):
    code = "conflict"


class EmptyKnowledgeError(AdvisorError):
    """Raised when a consultation has neither rules nor records to draw on."""

    code = "empty-knowledge"


class FormatError(AdvisorError):
    """A document (vocabulary, corpus, knowledge base) failed to parse."""

    code = "format-error"


# HTTP status per error code; interface layers share this single mapping.
HTTP_STATUS = {
    "invalid-input": 400,
    "format-error": 400,
    "not-found": 404,
    "conflict": 409,
    "empty-knowledge": 422,
}

# CLI exit code per error code (0 is success).
EXIT_CODE = {
    "invalid-input": 1,
    "format-error": 1,
    "conflict": 1,
    "empty-knowledge": 1,
    "not-found": 2,
}
