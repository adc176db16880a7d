class AdapterError(Exception):
    """Base class for all adapter errors."""


class ModelLoadError(AdapterError):
    def __init__(self, model_id, reason):
        self.model_id = model_id
        self.reason = reason
        super().__init__(f"cannot load model {model_id!r}: {reason}")


class BadSpec(AdapterError):
    """A spec field is outside its legal domain (not merely off-grid)."""


class ContextWindowExceeded(AdapterError):
    def __init__(self, doc_id, length, window):
        self.doc_id = doc_id
        self.length = length
        self.window = window
        super().__init__(
            f"document {doc_id!r}: {length} tokens exceed the {window}-token context window"
        )


class EmptyText(AdapterError):
    def __init__(self, doc_id):
        self.doc_id = doc_id
        super().__init__(f"document {doc_id!r} tokenizes to zero tokens")


class TaggerUnavailable(AdapterError):
    def __init__(self, backend, reason):
        self.backend = backend
        super().__init__(f"POS tagger backend {backend!r} unavailable: {reason}")


class UnsupportedStrategy(AdapterError):
    pass
