"""Exception types shared across the package."""


class OrgAtlasError(Exception):
    """Base class for all domain errors."""


class InvalidEntity(OrgAtlasError):
    def __init__(self, entity_id, problems):
        self.entity_id = entity_id
        self.problems = list(problems)
        super().__init__(f"{entity_id}: " + "; ".join(self.problems))


class UnknownEntity(OrgAtlasError):
    pass


class DanglingEndpoint(OrgAtlasError):
    pass


class KindMismatch(OrgAtlasError):
    pass


class SelfLoop(OrgAtlasError):
    pass


class CycleCreated(OrgAtlasError):
    pass


class ParseError(OrgAtlasError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class UnknownSource(OrgAtlasError):
    pass


class MixedKindCluster(OrgAtlasError):
    pass


class ConfigError(OrgAtlasError):
    pass


class QuerySyntaxError(OrgAtlasError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class EmptyQuery(OrgAtlasError):
    pass


class UnknownTheme(OrgAtlasError):
    pass


class SnapshotInvalid(OrgAtlasError):
    def __init__(self, message, violations=()):
        self.violations = list(violations)
        super().__init__(message)
