"""Exception hierarchy.

Everything a caller can trigger with bad input derives from ``UserError``;
``InternalConsistencyError`` signals a broken engine invariant.
"""


class SimshapError(Exception):
    pass


class UserError(SimshapError):
    pass


class DomainViolationError(UserError):
    """A point component lies outside its feature domain."""


class ModelIntegrityError(UserError):
    """Malformed tree, table or ranking model."""


class StructuralError(ModelIntegrityError):
    """Circuit is not a DAG with a single output gate."""


class ConstantModelError(ModelIntegrityError):
    pass


class CapacityError(UserError):
    """An enumeration would exceed the configured cap."""


class NumericalNeutralityError(UserError):
    """A numeric-only operation was applied to categorical outputs."""


class NormError(UserError):
    pass


class ArgumentError(UserError):
    pass


class SchemaError(UserError):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class InternalConsistencyError(SimshapError):
    pass
