"""Exception hierarchy shared by every stage of the codec."""


class LutzError(Exception):
    """Base class for all codec errors."""


class InvalidCodeChar(LutzError, ValueError):
    def __init__(self, byte: int):
        super().__init__(f"byte {byte} is not a look-up table code character")
        self.byte = byte


class UnknownSymbol(LutzError, ValueError):
    def __init__(self, byte: int, offset: int):
        super().__init__(f"unknown symbol {bytes([byte])!r} (byte {byte}) at offset {offset}")
        self.byte = byte
        self.offset = offset


class CorruptPrecoded(LutzError, ValueError):
    def __init__(self, offset: int, byte: int | None = None):
        detail = f" (byte {byte})" if byte is not None else ""
        super().__init__(f"corrupt pre-coded stream at offset {offset}{detail}")
        self.offset = offset
        self.byte = byte


class MalformedNRun(LutzError, ValueError):
    def __init__(self, offset: int):
        super().__init__(f"malformed N-run escape at offset {offset}")
        self.offset = offset


class NRunOverflow(LutzError, OverflowError):
    def __init__(self, offset: int):
        super().__init__(f"N-run count at offset {offset} does not fit in 64 bits")
        self.offset = offset


class CorruptTokenStream(LutzError, ValueError):
    pass


class EmptyAlphabet(LutzError, ValueError):
    pass


class UncodableSymbol(LutzError, ValueError):
    def __init__(self, symbol: int):
        super().__init__(f"symbol {symbol} has no codeword")
        self.symbol = symbol


class TruncatedStream(LutzError, ValueError):
    pass


class InvalidCodeword(LutzError, ValueError):
    pass


class ContainerError(LutzError, ValueError):
    pass


class BadMagic(ContainerError):
    pass


class UnsupportedVersion(ContainerError):
    pass


class ChecksumMismatch(ContainerError):
    pass


class TruncatedContainer(ContainerError):
    pass


class EntryUnreadable(LutzError, OSError):
    pass


class RoundTripFailure(LutzError):
    pass
