"""Exact coefficient systems.

Four coefficient systems are supported:

* ``Z``    -- the integers (Python ints, arbitrary precision),
* ``Q``    -- the rationals (``fractions.Fraction``),
* ``Zmod`` -- integers modulo n, canonical representatives in [0, n),
* ``U1``   -- the circle group, modeled additively as Q/Z; a value x
  stands for exp(2 pi i x) and is stored as a reduced Fraction in [0, 1).

The first three are rings; U1 is only a group, so multiplication there
raises :class:`~relcone.errors.MulOnAngleQ`.  All arithmetic is exact;
no value is ever a float.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import MulOnAngleQ, ParseError, RingMismatch, UnsupportedRing

_KINDS = ("Z", "Q", "Zmod", "U1")


@dataclass(frozen=True)
class CoeffRing:
    """A coefficient ring (or, for U1, a coefficient group)."""

    kind: str
    modulus: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise UnsupportedRing(f"unknown ring kind {self.kind!r}")
        if self.kind == "Zmod":
            if not isinstance(self.modulus, int) or self.modulus < 2:
                raise UnsupportedRing("Zmod modulus must be an integer >= 2")
        elif self.modulus is not None:
            raise UnsupportedRing(f"{self.kind} takes no modulus")

    # -- value normalization ------------------------------------------------

    def normalize(self, v):
        """Coerce v into the canonical internal representation."""
        if self.kind == "Z":
            if isinstance(v, Fraction):
                if v.denominator != 1:
                    raise RingMismatch(f"{v} is not an integer")
                return int(v)
            if isinstance(v, bool) or not isinstance(v, int):
                raise RingMismatch(f"{v!r} is not an integer")
            return v
        if self.kind == "Q":
            if isinstance(v, (int, Fraction)):
                return Fraction(v)
            raise RingMismatch(f"{v!r} is not rational")
        if self.kind == "Zmod":
            if isinstance(v, Fraction):
                if v.denominator != 1:
                    raise RingMismatch(f"{v} is not an integer")
                v = int(v)
            if isinstance(v, bool) or not isinstance(v, int):
                raise RingMismatch(f"{v!r} is not an integer")
            return v % self.modulus
        # U1: value is a rational angle taken mod 1
        if isinstance(v, (int, Fraction)):
            return Fraction(v) % 1
        raise RingMismatch(f"{v!r} is not a rational angle")

    # -- arithmetic on normalized values ------------------------------------

    def add(self, a, b):
        if self.kind == "Zmod":
            return (a + b) % self.modulus
        if self.kind == "U1":
            return (a + b) % 1
        return a + b

    def neg(self, a):
        if self.kind == "Zmod":
            return (-a) % self.modulus
        if self.kind == "U1":
            return (-a) % 1
        return -a

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.kind == "U1":
            raise MulOnAngleQ("the circle group has no ring multiplication")
        if self.kind == "Zmod":
            return (a * b) % self.modulus
        return a * b

    def zmul(self, n: int, a):
        """Z-module action n . a; defined for every coefficient system."""
        if self.kind == "Zmod":
            return (n * a) % self.modulus
        if self.kind == "U1":
            return (n * a) % 1
        return n * a

    def zero(self):
        return self.normalize(0)

    def one(self):
        if self.kind == "U1":
            raise MulOnAngleQ("the circle group has no multiplicative unit")
        return self.normalize(1)

    @property
    def is_field(self) -> bool:
        if self.kind == "Q":
            return True
        if self.kind == "Zmod":
            return _is_prime(self.modulus)
        return False

    def inv(self, a):
        """Multiplicative inverse; only over a field."""
        if self.kind == "Q":
            if a == 0:
                raise ZeroDivisionError("division by zero in Q")
            return 1 / Fraction(a)
        if self.kind == "Zmod" and self.is_field:
            if a % self.modulus == 0:
                raise ZeroDivisionError(f"division by zero mod {self.modulus}")
            return pow(a, -1, self.modulus)
        raise UnsupportedRing(f"no division in {self}")

    def __str__(self):
        if self.kind == "Zmod":
            return f"Zmod:{self.modulus}"
        return self.kind


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


INT = CoeffRing("Z")
RAT = CoeffRing("Q")
U1 = CoeffRing("U1")


def ZMOD(n: int) -> CoeffRing:
    return CoeffRing("Zmod", n)


def parse_ring(text: str) -> CoeffRing:
    """Parse the CLI/JSON spelling: Z | Q | Zmod:n | U1."""
    if text == "Z":
        return INT
    if text == "Q":
        return RAT
    if text == "U1":
        return U1
    if text.startswith("Zmod:"):
        try:
            n = int(text.split(":", 1)[1])
        except ValueError:
            raise ParseError(f"bad modulus in ring {text!r}") from None
        if n < 2:
            raise ParseError(f"bad modulus in ring {text!r}: need an integer >= 2")
        return ZMOD(n)
    raise ParseError(f"unknown ring {text!r}")


# ---------------------------------------------------------------------------
# Boxed scalars.  Matrices and cochains hold raw values internally; Scalar is
# the checked public face used at API boundaries and in serialized form.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Scalar:
    ring: CoeffRing
    value: object

    def __post_init__(self):
        object.__setattr__(self, "value", self.ring.normalize(self.value))


def _same_ring(a: Scalar, b: Scalar) -> CoeffRing:
    if a.ring != b.ring:
        raise RingMismatch(f"cannot combine {a.ring} with {b.ring}")
    return a.ring


def add(a: Scalar, b: Scalar) -> Scalar:
    r = _same_ring(a, b)
    return Scalar(r, r.add(a.value, b.value))


def neg(a: Scalar) -> Scalar:
    return Scalar(a.ring, a.ring.neg(a.value))


def mul(a: Scalar, b: Scalar) -> Scalar:
    r = _same_ring(a, b)
    return Scalar(r, r.mul(a.value, b.value))


def angle_lift(a: Scalar) -> Scalar:
    """The canonical rational lift of an angle.

    Returns the representative q in [0, 1) as a rational scalar, so that
    lifting then reducing mod 1 is the identity on U1.  The defect of
    additivity, angle_lift(a+b) - angle_lift(a) - angle_lift(b), is always
    0 or -1; the integer cone differential applied to lifts is what the
    exponential-sequence encoder consumes.
    """
    if a.ring != U1:
        raise RingMismatch("angle_lift is defined on U1 scalars only")
    return Scalar(RAT, a.value)


# ---------------------------------------------------------------------------
# JSON forms.  Integers as numbers (decimal strings once past 2**53 so that
# nothing downstream is tempted to round), rationals and angles as "p/q",
# residues as {"mod": n, "val": v}.
# ---------------------------------------------------------------------------

_SAFE_INT = 2**53


def value_to_json(ring: CoeffRing, v):
    if ring.kind == "Z":
        return v if abs(v) < _SAFE_INT else str(v)
    if ring.kind in ("Q", "U1"):
        return f"{v.numerator}/{v.denominator}"
    return {"mod": ring.modulus, "val": v}


def value_from_json(ring: CoeffRing, obj):
    try:
        if ring.kind == "Z":
            if isinstance(obj, str):
                return int(obj)
            if isinstance(obj, bool) or not isinstance(obj, int):
                raise ParseError(f"expected integer, got {obj!r}")
            return obj
        if ring.kind in ("Q", "U1"):
            if isinstance(obj, str):
                return ring.normalize(Fraction(obj))
            if isinstance(obj, bool) or not isinstance(obj, int):
                raise ParseError(f"expected rational, got {obj!r}")
            return ring.normalize(obj)
        if isinstance(obj, dict):
            if obj.get("mod") != ring.modulus:
                raise ParseError(f"residue {obj!r} has wrong modulus for {ring}")
            return ring.normalize(obj["val"])
        if isinstance(obj, bool) or not isinstance(obj, int):
            raise ParseError(f"expected residue, got {obj!r}")
        return ring.normalize(obj)
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"bad scalar {obj!r}: {exc}") from None


def scalar_to_json(s: Scalar):
    return value_to_json(s.ring, s.value)


def scalar_from_json(ring: CoeffRing, obj) -> Scalar:
    return Scalar(ring, value_from_json(ring, obj))
