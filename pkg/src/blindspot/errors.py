"""Exception hierarchy shared across the toolkit.

Data-level problems raise subclasses of BlindspotError so the CLI can map
them all to exit code 2.
"""


class BlindspotError(Exception):
    pass


# --- event log / corpus ---

class MalformedLine(BlindspotError):
    def __init__(self, line_no, reason):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class InvariantViolation(BlindspotError):
    def __init__(self, doc_id, position, rule, line_no=None):
        loc = f" (line {line_no})" if line_no is not None else ""
        super().__init__(f"doc {doc_id!r} position {position}: {rule}{loc}")
        self.doc_id = doc_id
        self.position = position
        self.rule = rule
        self.line_no = line_no


class DuplicateDocId(BlindspotError):
    def __init__(self, doc_id, line_no=None):
        super().__init__(f"duplicate doc_id {doc_id!r}")
        self.doc_id = doc_id
        self.line_no = line_no


# --- selection / estimation ---

class EmptySelection(BlindspotError):
    pass


class TooFewDocs(BlindspotError):
    pass


class UnsupportedPolicy(BlindspotError):
    pass


class DimensionMismatch(BlindspotError):
    pass


# --- overlap ---

class TokenizerMismatch(BlindspotError):
    pass


class MissingTopN(BlindspotError):
    pass


class NoAlignedDocs(BlindspotError):
    pass


# --- metrics ---

class EmptyDoc(BlindspotError):
    pass


class MissingSurface(BlindspotError):
    def __init__(self, doc_id):
        super().__init__(f"doc {doc_id!r} has no surface text")
        self.doc_id = doc_id


# --- stats ---

class SingleClass(BlindspotError):
    pass


class ConstantInput(BlindspotError):
    pass


class TooFew(BlindspotError):
    pass


class RankDeficient(BlindspotError):
    pass


class Underdetermined(BlindspotError):
    pass


# --- detection ---

class ClassTooSmall(BlindspotError):
    pass


class UnfittedModel(BlindspotError):
    pass


# --- POS analysis ---

class NoPosTags(BlindspotError):
    pass


class TooFewTags(BlindspotError):
    pass
