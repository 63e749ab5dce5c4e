"""Exception hierarchy shared by all modules."""


class QLocalError(Exception):
    """Base class for errors raised by this package."""


class InputError(QLocalError, ValueError):
    """Malformed or out-of-range arguments, files or graphs."""


class ConsistencyError(QLocalError, ValueError):
    """A probability distribution fails its normalization invariant."""


class ProtocolError(QLocalError, RuntimeError):
    """A node program violated the execution model (ports, ownership, qubits)."""


class CapacityError(QLocalError, RuntimeError):
    """Exact enumeration or simulation would exceed the configured limits."""
